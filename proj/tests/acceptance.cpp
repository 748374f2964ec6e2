// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. RADSOB_CLI is the path of the built tool.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "radsob/io.hpp"
#include "radsob/transform.hpp"
#include "radsob/variational.hpp"

using namespace radsob;

namespace {

// Collects failed sub-checks; the worst value of each tracked quantity goes
// into the summary line.
class Criterion {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 6) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void at_most(double value, double tol, const std::string& what) {
    worst_[what] = std::max(worst_[what], value);
    require(value <= tol, what + " = " + format(value) + " > " + format(tol));
  }
  [[nodiscard]] bool passed() const { return failed_ == 0; }
  [[nodiscard]] std::string summary() const {
    std::string out;
    for (const auto& [k, v] : worst_) out += (out.empty() ? "" : ", ") + k + " " + format(v);
    for (const auto& f : failures_) out += "; FAILED " + f;
    return out;
  }
  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
  }

 private:
  std::map<std::string, double> worst_;
  std::vector<std::string> failures_;
  int failed_ = 0;
};

double rel(double a, double b) { return std::abs(a / b - 1.0); }

std::vector<RadialProfile> suite_profiles(int n) {
  return {truncated_at_profile(n, 1.0, 2.0), truncated_at_profile(n, 10.0, 0.5), truncated_at_profile(n, 0.2, 5.0),
          gaussian_profile(1.0), gaussian_profile(4.0)};
}

void ac1(Criterion& c) {
  for (int n : {3, 4, 5}) {
    const ModelManifold E = euclidean_space(n);
    const TransformTable T = build_transform(E, {1e-6, 20.0, 400});
    const std::vector<double> grid = make_grid(1e-3, 10.0, 50, true);
    std::vector<double> v;
    for (double r : grid) {
      c.at_most(rel(T.s_of_r(r), r), 1e-10, "|s/r-1|");
      c.at_most(std::abs(T.rho(r) - 1.0), 1e-10, "|rho-1|");
      c.at_most(rel(T.varrho(r), r), 1e-10, "|varrho/r-1|");
      c.at_most(rel(distance_laplacian(E, r), (n - 1) / r), 1e-10, "|m r/(n-1)-1|");
      v.push_back(T.volume(r));
    }
    const IsoperimetricPair iso = isoperimetric_profiles(T, v);
    for (std::size_t i = 0; i < v.size(); ++i) c.at_most(rel(iso.sigma[i], iso.sigma_e[i]), 1e-10, "|Sigma/Sigma_E-1|");
  }
}

void ac2(Criterion& c) {
  for (int n = 3; n <= 6; ++n) {
    c.at_most(rel(euclidean_best_constant(n), oracle::talenti(n)), 1e-6, "C_E vs Talenti");
    const ModelManifold E = euclidean_space(n);
    const double q1 = sobolev_quotient(E, aubin_talenti(n, 1.0)).value;
    for (double b : {1e-2, 1e2}) c.at_most(rel(sobolev_quotient(E, aubin_talenti(n, b)).value, q1), 1e-8, "b-dependence");
  }
}

void ac3(Criterion& c) {
  std::vector<std::pair<double, double>> sinh_samples, cubic_samples;
  for (int i = 0; i <= 120; ++i) {
    const double r = 0.05 * i;
    sinh_samples.emplace_back(r, std::sinh(r));
    cubic_samples.emplace_back(r, r + r * r * r / 6);
  }
  const std::vector<ModelManifold> models = {hyperbolic_space(3), hyperbolic_space(4, 4.0),
                                             {3, WarpFunction::grid(sinh_samples), "grid sinh"},
                                             {4, WarpFunction::grid(cubic_samples), "grid cubic"}};
  for (const ModelManifold& M : models) {
    for (double r : make_grid(1e-3, 6.0, 200, true)) {
      const ComparisonMargins m = comparison_margins(M, r);
      const double lo = std::min({m.warp, m.derivative, m.laplacian, m.area});
      c.require(lo >= 0.0, M.label + " margin negative at r=" + Criterion::format(r));
      if (r >= 0.01) c.require(lo > 0.0, M.label + " margin not strict at r=" + Criterion::format(r));
    }
  }
}

void ac4(Criterion& c) {
  for (int n : {3, 4}) {
    const ModelManifold H = hyperbolic_space(n);
    const ModelManifold E = euclidean_space(n);
    const TransformTable T = build_transform(H, {1e-6, 30.0, 600});
    for (double s : T.s_values()) c.require(T.rho(s) < 1.0, "rho >= 1 at s=" + Criterion::format(s));
    const double p = critical_exponent(n);
    const double inv_ce = 1.0 / euclidean_best_constant(n);
    for (const RadialProfile& f : suite_profiles(n)) {
      const RadialProfile g = pushforward(T, f);
      c.at_most(rel(grad_l2_norm(E, g).value, grad_l2_norm(H, f).value), 1e-6, "gradient transfer");
      c.at_most(rel(weighted_lp_norm(g, T, p).value, lp_norm(H, f, p).value), 1e-6, "L^2* transfer");
      c.require(sobolev_quotient(H, f).value >= inv_ce - 1e-7, "quotient below 1/C_E for " + f.description);
    }
  }
}

void ac5(Criterion& c) {
  OdeConfig tight;
  tight.rel_tol = 1e-12;
  for (int n : {3, 4}) {
    const ModelManifold E = euclidean_space(n);
    for (double height : {0.5, 1.0, 2.0}) {
      const ShootingResult res = shoot(E, height, 10.0);
      c.require(res.status == ShootingStatus::decayed, "shot did not decay");
      for (int i = 0; i <= 100; ++i) {
        const double r = 0.1 * i;
        c.at_most(rel(res.solution(r), oracle::bubble(n, height, r)), 1e-5, "bubble mismatch");
      }
      c.at_most(energy_identity_check(res), 1e-5, "energy identity");
      const ShootingResult fine = shoot(E, height, 10.0, tight);
      for (int i = 1; i <= 20; ++i) c.at_most(std::abs(el_residual(E, fine.solution, 0.5 * i)), 1e-9, "el residual");
    }
  }
}

void ac6(Criterion& c) {
  const ModelManifold H = hyperbolic_space(3);
  const ModelManifold E = euclidean_space(3);
  const TransformTable T = build_transform(H, {1e-6, 30.0, 800});
  for (const RadialProfile& f : {truncated_at_profile(3, 1.0, 2.0), truncated_at_profile(3, 10.0, 0.5),
                                 truncated_at_profile(3, 100.0, 0.5)}) {
    const RadialProfile g = schwarz_symmetrize(T, f);
    for (double p : {2.0, 4.0, 6.0}) c.at_most(rel(lp_norm(E, g, p).value, lp_norm(H, f, p).value), 1e-6, "L^p change");
    const double direct_h = std::pow(grad_l2_norm(H, f).value, 2);
    const double direct_e = std::pow(grad_l2_norm(E, g).value, 2);
    c.require(direct_e < direct_h, "symmetrization did not lower gradient energy for " + f.description);
    const CoareaEnergy level = coarea_gradient_energy(T, f);
    c.at_most(rel(level.manifold_energy, direct_h), 1e-5, "co-area vs direct");
    c.at_most(rel(level.euclidean_energy, direct_e), 1e-5, "co-area vs direct");
  }
  std::vector<double> v;
  for (double x : make_grid(1e-4, 10.0, 40, true)) v.push_back(4 * oracle::pi / 3 * x * x * x);
  const IsoperimetricPair iso = isoperimetric_profiles(T, v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    c.require(iso.sigma[i] >= iso.sigma_e[i], "Sigma < Sigma_E");
    if (i > 0) c.require(iso.sigma[i] / iso.sigma_e[i] >= iso.sigma[i - 1] / iso.sigma_e[i - 1], "ratio not monotone");
  }
  c.at_most(rel(iso.sigma.front(), iso.sigma_e.front()), 1e-6, "Sigma/Sigma_E-1 at smallest v");
}

void ac7(Criterion& c) {
  const std::vector<double> sweep = {1.0, 10.0, 100.0, 1000.0, 10000.0};
  const RigidityReport h = rigidity_experiment(hyperbolic_space(3), sweep);
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    c.require(h.truncated_quotient[i] * h.c_e > 1.0, "quotient not above 1/C_E at b=" + Criterion::format(sweep[i]));
    if (i > 0) c.require(h.truncated_quotient[i] <= h.truncated_quotient[i - 1], "quotient increased in b");
  }
  c.at_most(h.truncated_quotient.back() * h.c_e - 1.0, 0.01, "Q*C_E-1 at b=1e4");
  c.require(h.verdict == Verdict::strictly_non_euclidean, "H3 verdict " + to_string(h.verdict));
  const RigidityReport e = rigidity_experiment(euclidean_space(3), {1.0, 10.0});
  c.require(e.verdict == Verdict::euclidean_within_tol, "flat verdict " + to_string(e.verdict));
}

void ac8(Criterion& c) {
  const ModelManifold H = hyperbolic_space(3);
  const ModelManifold E = euclidean_space(3);
  std::vector<std::pair<double, double>> grid;
  for (double r : make_grid(0.1, 5.0, 30, false)) {
    for (double t : make_grid(0.1, 2.0, 30, false)) grid.emplace_back(r, t);
  }
  c.require(heat_supersolution_residual(H, grid) >= -1e-12, "heat residual negative on H3");
  for (const auto& [r, t] : grid) c.at_most(std::abs(heat_supersolution_residual(E, r, t)), 1e-14, "|flat residual|");
  for (const RadialProfile& f : {truncated_at_profile(3, 1.0, 2.0), truncated_at_profile(3, 0.1, 6.0),
                                 truncated_at_profile(3, 10.0, 0.5)}) {
    c.require(mckean_poincare_margin(H, f, 1.0) >= -1e-8, "McKean margin for " + f.description);
  }
}

int run_cli(const std::string& args, const std::filesystem::path& dir) {
  const std::string cmd =
      std::string(RADSOB_CLI) + " " + args + " > " + (dir / "out.txt").string() + " 2> " + (dir / "err.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void ac9(Criterion& c) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "radsob_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto put = [&](const std::string& name, const std::string& text) { std::ofstream(dir / name) << text; };
  put("h.json", R"({"n": 3, "label": "H3", "warp": {"kind": "hyperbolic"}})");
  put("bad.json", R"({"n": 3})");
  put("s.json", R"j({"n": 3, "label": "sphere", "warp": {"kind": "expression", "formula": "sin(r)"}})j");
  const auto p = [&](const std::string& name) { return (dir / name).string(); };

  const std::string rig = "rigidity --manifold " + p("h.json") + " --b-sweep 1,10,100 --format csv --out ";
  c.require(run_cli(rig + p("a"), dir) == 0, "exit 0");
  c.require(run_cli(rig + p("b"), dir) == 0, "exit 0 on rerun");
  for (const char* curve : {"quotient", "rho", "isoperimetric"}) {
    const std::string a = read_text(p(std::string("a.") + curve + ".csv"));
    c.require(a == read_text(p(std::string("b.") + curve + ".csv")), std::string("rerun differs in ") + curve);
    const CsvTable t = parse_csv(a);
    c.require(to_csv(t) == a, std::string("CSV re-serialization differs for ") + curve);
  }
  const CsvTable q = parse_csv(read_text(p("a.quotient.csv")));
  const RigidityReport direct = rigidity_experiment(hyperbolic_space(3), {1.0, 10.0, 100.0});
  for (std::size_t i = 0; i < 3; ++i) {
    c.require(q.column("truncated_quotient")[i] == direct.truncated_quotient[i], "CSV value not bit-exact");
  }
  c.require(run_cli("validate --manifold " + p("s.json") + " --grid 0.01:3:50", dir) == 1, "exit 1");
  c.require(run_cli("validate --manifold " + p("bad.json"), dir) == 2, "exit 2");
  c.require(run_cli("transform --manifold " + p("s.json"), dir) == 3, "exit 3");
  c.require(run_cli("rigidity --manifold " + p("h.json"), dir) == 64, "exit 64");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Criterion&)> body;
  };
  const std::vector<Item> items = {
      {1, "Euclidean identity suite", 1.0, ac1},   {2, "best-constant dual oracle", 2.0, ac2},
      {3, "comparison suite", 1.0, ac3},           {4, "s-transform suite", 5.0, ac4},
      {5, "shooting suite", 5.0, ac5},             {6, "symmetrization suite", 5.0, ac6},
      {7, "rigidity witness", 10.0, ac7},          {8, "auxiliary inequalities", 2.0, ac8},
      {9, "CLI contract", 2.0, ac9},
  };
  int failed = 0;
  for (const Item& item : items) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      item.body(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(elapsed <= item.budget_s, "runtime " + Criterion::format(elapsed) + " s over budget");
    if (!c.passed()) ++failed;
    std::printf("AC%d %s %s (%.2f s) %s\n", item.id, c.passed() ? "PASS" : "FAIL", item.name, elapsed,
                c.summary().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

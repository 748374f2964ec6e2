#include "radsob/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "radsob/error.hpp"

namespace radsob {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::parse, key + ": " + msg);
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, what + ": malformed JSON (" + e.what() + ")");
  }
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(path + "." + key, "missing");
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_number()) bad(path + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  return obj.contains(key) ? number(obj, key, path) : fallback;
}

std::vector<std::pair<double, double>> samples(const json& obj, const std::string& path) {
  const json& s = member(obj, "samples", path);
  if (!s.is_array()) bad(path + ".samples", "expected an array of [r, value] pairs");
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const json& p = s[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      bad(path + ".samples[" + std::to_string(i) + "]", "expected [r, value]");
    }
    out.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return out;
}

// Constructor domain errors become parse errors tied to the key.
template <class F>
auto as_parse(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::domain || e.kind() == ErrorKind::parse) bad(key, e.what());
    throw;
  }
}

}  // namespace

ModelManifold parse_manifold(const std::string& json_text) {
  const json j = parse_json(json_text, "manifold");
  if (!j.is_object()) bad("manifold", "expected an object");
  const json& nj = member(j, "n", "manifold");
  if (!nj.is_number_integer()) bad("manifold.n", "expected an integer");
  ModelManifold M;
  M.n = nj.get<int>();
  as_parse("manifold.n", [&] {
    M.validate_dimension();
    return 0;
  });
  const json& w = member(j, "warp", "manifold");
  const json& kind = member(w, "kind", "manifold.warp");
  if (!kind.is_string()) bad("manifold.warp.kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "euclidean") {
    M.psi = WarpFunction::euclidean();
  } else if (k == "hyperbolic") {
    const double kk = number_or(w, "k", 1.0, "manifold.warp");
    M.psi = as_parse("manifold.warp.k", [&] { return WarpFunction::hyperbolic(kk); });
  } else if (k == "expression") {
    const json& f = member(w, "formula", "manifold.warp");
    if (!f.is_string()) bad("manifold.warp.formula", "expected a string");
    M.psi = as_parse("manifold.warp.formula", [&] { return WarpFunction::expression(f.get<std::string>()); });
  } else if (k == "grid") {
    auto s = samples(w, "manifold.warp");
    M.psi = as_parse("manifold.warp.samples", [&] { return WarpFunction::grid(s); });
  } else {
    bad("manifold.warp.kind", "unknown kind '" + k + "'");
  }
  if (j.contains("label")) {
    if (!j["label"].is_string()) bad("manifold.label", "expected a string");
    M.label = j["label"].get<std::string>();
  } else {
    M.label = k;
  }
  return M;
}

RadialProfile parse_profile(const std::string& json_text, int n) {
  const json j = parse_json(json_text, "profile");
  const json& kind = member(j, "kind", "profile");
  if (!kind.is_string()) bad("profile.kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "aubin_talenti") {
    const double b = number(j, "b", "profile");
    return as_parse("profile.b", [&] { return aubin_talenti(n, b); });
  }
  if (k == "truncated") {
    const double b = number(j, "b", "profile");
    const double eps = number(j, "eps", "profile");
    as_parse("profile.b", [&] { return aubin_talenti(n, b); });
    return as_parse("profile.eps", [&] { return truncated_at_profile(n, b, eps); });
  }
  if (k == "gaussian") {
    const double a = number(j, "a", "profile");
    return as_parse("profile.a", [&] { return gaussian_profile(a); });
  }
  if (k == "grid") {
    auto s = samples(j, "profile");
    return as_parse("profile.samples", [&] { return grid_profile(s); });
  }
  bad("profile.kind", "unknown kind '" + k + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& row : rows) out.push_back(row.at(c));
      return out;
    }
  }
  throw Error(ErrorKind::range, "no column named '" + name + "'");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (const auto& m : table.metadata) out += "# " + m + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_double(row[c]);
    out += "\n";
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.metadata.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!header) {
      t.columns = cells;
      header = true;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw Error(ErrorKind::parse, "csv line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(t.columns.size()) + " fields");
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') {
        throw Error(ErrorKind::parse, "csv line " + std::to_string(lineno) + ": bad number '" + c + "'");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (!header) throw Error(ErrorKind::parse, "csv: missing header line");
  return t;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::domain, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::domain, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::domain, "cannot rename onto '" + path + "'");
  }
}

namespace {

// JSON has no infinities; non-finite values are written as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json nums(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

}  // namespace

std::string to_json(const ValidationReport& report) {
  json j;
  j["passed"] = report.passed();
  j["ch_tol"] = report.ch_tol;
  j["second_derivative_low_accuracy"] = report.second_derivative_low_accuracy;
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"margin", num(c.margin)},
                      {"worst_r", num(c.worst_r)}, {"note", c.note}});
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

std::string to_json(const RigidityReport& report) {
  json j;
  j["label"] = report.label;
  j["c_e_reference"] = num(report.c_e);
  j["quotient_reference"] = num(report.quotient_reference);
  j["verdict"] = to_string(report.verdict);
  j["quotient"] = {{"b", nums(report.b)},
                   {"quotient", nums(report.quotient)},
                   {"truncated_quotient", nums(report.truncated_quotient)}};
  j["rho"] = {{"s", nums(report.s)}, {"rho", nums(report.rho)}};
  j["isoperimetric"] = {{"v", nums(report.v)}, {"sigma", nums(report.sigma)}, {"sigma_e", nums(report.sigma_e)}};
  j["deficits"] = {{"quotient", num(report.quotient_deficit)},
                   {"rho", num(report.rho_deficit)},
                   {"isoperimetric", num(report.iso_deficit)}};
  json errors = json::object();
  for (const auto& [k, v] : report.curve_errors) errors[k] = v;
  j["curve_errors"] = errors;
  return j.dump(2) + "\n";
}

std::map<std::string, CsvTable> to_csv_tables(const RigidityReport& report) {
  std::map<std::string, CsvTable> out;
  const std::vector<std::string> meta = {"manifold " + report.label, "verdict " + to_string(report.verdict),
                                         "c_e_reference " + format_double(report.c_e)};
  CsvTable q{meta, {"b", "quotient", "truncated_quotient"}, {}};
  for (std::size_t i = 0; i < report.b.size(); ++i) {
    q.rows.push_back({report.b[i], report.quotient[i], report.truncated_quotient[i]});
  }
  CsvTable r{meta, {"s", "rho"}, {}};
  for (std::size_t i = 0; i < report.s.size(); ++i) r.rows.push_back({report.s[i], report.rho[i]});
  CsvTable iso{meta, {"v", "sigma", "sigma_e"}, {}};
  for (std::size_t i = 0; i < report.v.size(); ++i) {
    iso.rows.push_back({report.v[i], report.sigma[i], report.sigma_e[i]});
  }
  out.emplace("quotient", std::move(q));
  out.emplace("rho", std::move(r));
  out.emplace("isoperimetric", std::move(iso));
  return out;
}

}  // namespace radsob

// Dormand-Prince 8(5,3) with the 7th-order continuous extension
// (Hairer, Norsett & Wanner, "Solving ODEs I", code DOP853).

#include <algorithm>
#include <cmath>
#include <string>

#include "radsob/error.hpp"
#include "radsob/numerics.hpp"

namespace radsob {
namespace {

constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double e31 = 0.244094488188976377952755905512e+00;
constexpr double e32 = 0.733846688281611857341361741547e+00;
constexpr double e33 = 0.220588235294117647058823529412e-01;

constexpr double e51 = 0.1312004499419488073250102996e-01;
constexpr double e56 = -0.1225156446376204440720569753e+01;
constexpr double e57 = -0.4957589496572501915214079952e+00;
constexpr double e58 = 0.1664377182454986536961530415e+01;
constexpr double e59 = -0.3503288487499736816886487290e+00;
constexpr double e510 = 0.3341791187130174790297318841e+00;
constexpr double e511 = 0.8192320648511571246570742613e-01;
constexpr double e512 = -0.2235530786388629525884427845e-01;

constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Vec = std::vector<double>;

struct Stages {
  explicit Stages(std::size_t n) : k(17, Vec(n)), tmp(n), sum(n) {}
  std::vector<Vec> k;  // k[1] .. k[16]; k[13] is f at the step end
  Vec tmp, sum;
};

bool all_finite(std::span<const double> y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

double initial_step(const OdeRhs& f, double r, const Vec& y, const Vec& f0, double span_len,
                    const OdeConfig& cfg) {
  const std::size_t n = y.size();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y[i] / sk) * (y[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
  h = std::min(h, span_len);
  Vec y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h * f0[i];
  f(r + h, y1, f1);
  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
    der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
  h = std::min({100.0 * h, h1, span_len});
  return std::isfinite(h) && h > 0.0 ? h : 1e-6 * span_len;
}

// One DOP853 step from (r, y) with slope k[1]; fills ynew and returns the
// scaled error norm.
double attempt(const OdeRhs& f, double r, double h, const Vec& y, Stages& s, Vec& ynew,
               const OdeConfig& cfg) {
  const std::size_t n = y.size();
  auto& k = s.k;
  auto& t = s.tmp;
  auto stage = [&](int idx, double c, auto combo) {
    for (std::size_t i = 0; i < n; ++i) t[i] = y[i] + h * combo(i);
    f(r + c * h, t, k[idx]);
  };
  stage(2, c2, [&](std::size_t i) { return a21 * k[1][i]; });
  stage(3, c3, [&](std::size_t i) { return a31 * k[1][i] + a32 * k[2][i]; });
  stage(4, c4, [&](std::size_t i) { return a41 * k[1][i] + a43 * k[3][i]; });
  stage(5, c5, [&](std::size_t i) { return a51 * k[1][i] + a53 * k[3][i] + a54 * k[4][i]; });
  stage(6, c6, [&](std::size_t i) { return a61 * k[1][i] + a64 * k[4][i] + a65 * k[5][i]; });
  stage(7, c7, [&](std::size_t i) {
    return a71 * k[1][i] + a74 * k[4][i] + a75 * k[5][i] + a76 * k[6][i];
  });
  stage(8, c8, [&](std::size_t i) {
    return a81 * k[1][i] + a84 * k[4][i] + a85 * k[5][i] + a86 * k[6][i] + a87 * k[7][i];
  });
  stage(9, c9, [&](std::size_t i) {
    return a91 * k[1][i] + a94 * k[4][i] + a95 * k[5][i] + a96 * k[6][i] + a97 * k[7][i] +
           a98 * k[8][i];
  });
  stage(10, c10, [&](std::size_t i) {
    return a101 * k[1][i] + a104 * k[4][i] + a105 * k[5][i] + a106 * k[6][i] + a107 * k[7][i] +
           a108 * k[8][i] + a109 * k[9][i];
  });
  stage(11, c11, [&](std::size_t i) {
    return a111 * k[1][i] + a114 * k[4][i] + a115 * k[5][i] + a116 * k[6][i] + a117 * k[7][i] +
           a118 * k[8][i] + a119 * k[9][i] + a1110 * k[10][i];
  });
  stage(12, 1.0, [&](std::size_t i) {
    return a121 * k[1][i] + a124 * k[4][i] + a125 * k[5][i] + a126 * k[6][i] + a127 * k[7][i] +
           a128 * k[8][i] + a129 * k[9][i] + a1210 * k[10][i] + a1211 * k[11][i];
  });

  double err3 = 0.0, err5 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s.sum[i] = b1 * k[1][i] + b6 * k[6][i] + b7 * k[7][i] + b8 * k[8][i] + b9 * k[9][i] +
               b10 * k[10][i] + b11 * k[11][i] + b12 * k[12][i];
    ynew[i] = y[i] + h * s.sum[i];
    const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
    const double e3 = s.sum[i] - e31 * k[1][i] - e32 * k[9][i] - e33 * k[12][i];
    const double e5 = e51 * k[1][i] + e56 * k[6][i] + e57 * k[7][i] + e58 * k[8][i] +
                      e59 * k[9][i] + e510 * k[10][i] + e511 * k[11][i] + e512 * k[12][i];
    err3 += (e3 / sk) * (e3 / sk);
    err5 += (e5 / sk) * (e5 / sk);
  }
  double deno = err5 + 0.01 * err3;
  if (deno <= 0.0) deno = 1.0;
  const double err = std::abs(h) * err5 * std::sqrt(1.0 / (static_cast<double>(n) * deno));
  return std::isfinite(err) && all_finite(ynew) ? err : kInf;
}

// Continuous extension coefficients; k[13] must hold f(r + h, ynew).
void dense_coefficients(const OdeRhs& f, double r, double h, const Vec& y, const Vec& ynew,
                        Stages& s, Vec& coeff) {
  const std::size_t n = y.size();
  auto& k = s.k;
  auto& t = s.tmp;
  auto block = [&](int j, std::size_t i) -> double& { return coeff[static_cast<std::size_t>(j) * n + i]; };
  for (std::size_t i = 0; i < n; ++i) {
    const double dy = ynew[i] - y[i];
    const double bspl = h * k[1][i] - dy;
    block(0, i) = y[i];
    block(1, i) = dy;
    block(2, i) = bspl;
    block(3, i) = dy - h * k[13][i] - bspl;
    block(4, i) = d41 * k[1][i] + d46 * k[6][i] + d47 * k[7][i] + d48 * k[8][i] + d49 * k[9][i] +
                  d410 * k[10][i] + d411 * k[11][i] + d412 * k[12][i];
    block(5, i) = d51 * k[1][i] + d56 * k[6][i] + d57 * k[7][i] + d58 * k[8][i] + d59 * k[9][i] +
                  d510 * k[10][i] + d511 * k[11][i] + d512 * k[12][i];
    block(6, i) = d61 * k[1][i] + d66 * k[6][i] + d67 * k[7][i] + d68 * k[8][i] + d69 * k[9][i] +
                  d610 * k[10][i] + d611 * k[11][i] + d612 * k[12][i];
    block(7, i) = d71 * k[1][i] + d76 * k[6][i] + d77 * k[7][i] + d78 * k[8][i] + d79 * k[9][i] +
                  d710 * k[10][i] + d711 * k[11][i] + d712 * k[12][i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = y[i] + h * (a141 * k[1][i] + a147 * k[7][i] + a148 * k[8][i] + a149 * k[9][i] +
                       a1410 * k[10][i] + a1411 * k[11][i] + a1412 * k[12][i] + a1413 * k[13][i]);
  }
  f(r + c14 * h, t, k[14]);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = y[i] + h * (a151 * k[1][i] + a156 * k[6][i] + a157 * k[7][i] + a158 * k[8][i] +
                       a1511 * k[11][i] + a1512 * k[12][i] + a1513 * k[13][i] + a1514 * k[14][i]);
  }
  f(r + c15 * h, t, k[15]);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = y[i] + h * (a161 * k[1][i] + a166 * k[6][i] + a167 * k[7][i] + a168 * k[8][i] +
                       a169 * k[9][i] + a1613 * k[13][i] + a1614 * k[14][i] + a1615 * k[15][i]);
  }
  f(r + c16 * h, t, k[16]);
  for (std::size_t i = 0; i < n; ++i) {
    block(4, i) = h * (block(4, i) + d413 * k[13][i] + d414 * k[14][i] + d415 * k[15][i] + d416 * k[16][i]);
    block(5, i) = h * (block(5, i) + d513 * k[13][i] + d514 * k[14][i] + d515 * k[15][i] + d516 * k[16][i]);
    block(6, i) = h * (block(6, i) + d613 * k[13][i] + d614 * k[14][i] + d615 * k[15][i] + d616 * k[16][i]);
    block(7, i) = h * (block(7, i) + d713 * k[13][i] + d714 * k[14][i] + d715 * k[15][i] + d716 * k[16][i]);
  }
}

}  // namespace

void OdeConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || initial_step < 0.0 || max_steps < 1 || !(r_start > 0.0)) {
    throw Error(ErrorKind::domain, "OdeConfig requires rel_tol > 0, abs_tol > 0, initial_step >= 0, "
                                   "max_steps >= 1 and r_start > 0");
  }
}

DenseSolution solve_ivp(const OdeRhs& rhs, double r0, std::vector<double> y0, double r_end,
                        const OdeConfig& cfg, const OdeRegion& admissible) {
  cfg.validate();
  if (y0.empty()) throw Error(ErrorKind::domain, "solve_ivp: empty state");
  if (!std::isfinite(r0) || !std::isfinite(r_end) || !(r_end > r0)) {
    throw Error(ErrorKind::domain, "solve_ivp integrates forward: need finite r0 < r_end");
  }
  if (!all_finite(y0)) throw Error(ErrorKind::domain, "solve_ivp: non-finite initial state");

  const std::size_t n = y0.size();
  DenseSolution sol;
  sol.r_begin_ = r0;
  sol.r_end_ = r0;
  sol.dim_ = n;

  Stages s(n);
  Vec y = std::move(y0), ynew(n);
  rhs(r0, y, s.k[1]);
  const double span_len = r_end - r0;
  double h = cfg.initial_step > 0.0 ? std::min(cfg.initial_step, span_len)
                                    : initial_step(rhs, r0, y, s.k[1], span_len, cfg);
  double r = r0;
  bool last_rejected = false;
  long attempts = 0;

  while (r < r_end) {
    if (++attempts > cfg.max_steps) {
      throw Error(ErrorKind::max_steps, "step budget " + std::to_string(cfg.max_steps) +
                                            " exhausted at r = " + std::to_string(r));
    }
    if (h <= 10.0 * kEps * std::max(1.0, std::abs(r))) {
      throw Error(ErrorKind::step_failure, "step size underflow at r = " + std::to_string(r));
    }
    bool final_step = false;
    if (r + 1.01 * h >= r_end) {
      h = r_end - r;
      final_step = true;
    }
    const double err = attempt(rhs, r, h, y, s, ynew, cfg);
    const double fac11 = std::pow(err, 1.0 / 8.0);
    if (err <= 1.0) {
      const double rnew = final_step ? r_end : r + h;
      rhs(rnew, ynew, s.k[13]);
      DenseSolution::Step step{r, rnew - r, Vec(8 * n)};
      dense_coefficients(rhs, r, step.h, y, ynew, s, step.coeff);
      sol.steps_.push_back(std::move(step));
      r = rnew;
      y.swap(ynew);
      s.k[1] = s.k[13];
      sol.r_end_ = r;
      double fac = std::clamp(fac11 / 0.9, 1.0 / 6.0, 1.0 / 0.333);
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
      h = hnew;
      if (admissible && !admissible(r, y)) {
        sol.status_ = OdeStatus::left_region;
        return sol;
      }
    } else {
      ++sol.rejected_;
      last_rejected = true;
      h /= std::isfinite(fac11) ? std::min(1.0 / 0.333, fac11 / 0.9) : 1.0 / 0.333;
    }
  }
  sol.status_ = OdeStatus::completed;
  return sol;
}

std::vector<double> DenseSolution::step_points() const {
  std::vector<double> pts;
  pts.reserve(steps_.size() + 1);
  pts.push_back(r_begin_);
  for (const auto& s : steps_) pts.push_back(s.r0 + s.h);
  if (!steps_.empty()) pts.back() = r_end_;
  return pts;
}

const DenseSolution::Step& DenseSolution::locate(double r) const {
  const double slack = 1e-13 * std::max(1.0, std::abs(r_end_));
  if (steps_.empty() || !(r >= r_begin_ - slack && r <= r_end_ + slack)) {
    throw Error(ErrorKind::range, "r = " + std::to_string(r) + " outside the solved range [" +
                                      std::to_string(r_begin_) + ", " + std::to_string(r_end_) + "]");
  }
  auto it = std::upper_bound(steps_.begin(), steps_.end(), r,
                             [](double v, const Step& s) { return v < s.r0; });
  if (it != steps_.begin()) --it;
  return *it;
}

void DenseSolution::eval(const Step& st, double r, std::span<double> y, std::span<double> dy) const {
  const std::size_t n = dim_;
  const double s = (r - st.r0) / st.h;
  const double s1 = 1.0 - s;
  for (std::size_t i = 0; i < n; ++i) {
    auto c = [&](int j) { return st.coeff[static_cast<std::size_t>(j) * n + i]; };
    const double q6 = c(6) + s * c(7);
    const double q5 = c(5) + q6 * s1;
    const double q4 = c(4) + q5 * s;
    const double q3 = c(3) + q4 * s1;
    const double q2 = c(2) + q3 * s;
    const double q1 = c(1) + q2 * s1;
    if (!y.empty()) y[i] = c(0) + s * q1;
    if (!dy.empty()) {
      const double e6 = c(7);
      const double e5 = e6 * s1 - q6;
      const double e4 = q5 + e5 * s;
      const double e3 = e4 * s1 - q4;
      const double e2 = q3 + e3 * s;
      const double e1 = e2 * s1 - q2;
      dy[i] = (q1 + s * e1) / st.h;
    }
  }
}

std::vector<double> DenseSolution::state(double r) const {
  std::vector<double> y(dim_);
  eval(locate(r), r, y, {});
  return y;
}

std::vector<double> DenseSolution::state_derivative(double r) const {
  std::vector<double> dy(dim_);
  eval(locate(r), r, {}, dy);
  return dy;
}

double DenseSolution::component(double r, std::size_t i) const {
  if (i >= dim_) throw Error(ErrorKind::range, "component index out of range");
  return state(r)[i];
}

double DenseSolution::component_derivative(double r, std::size_t i) const {
  if (i >= dim_) throw Error(ErrorKind::range, "component index out of range");
  return state_derivative(r)[i];
}

}  // namespace radsob

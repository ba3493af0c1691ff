// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qecsense/bosonic.hpp"
#include "qecsense/dephasing.hpp"
#include "qecsense/lp.hpp"
#include "qecsense/model.hpp"
#include "qecsense/simulator.hpp"

using namespace qecsense;
using linalg::Complex;
using linalg::DenseMatrix;
using linalg::RealMatrix;

namespace {

// Pinned tolerances.
constexpr double kLpMatch = 1e-9;
constexpr double kLpGap = 1e-8;
constexpr double kKl = 1e-9;
constexpr double kQfiDual = 1e-7;
constexpr double kDephasingDuality = 1e-8;
constexpr double kKlIdentity = 1e-10;
constexpr double kEffRelTol = 0.05;
constexpr double kEffRatioLo = 5.0, kEffRatioHi = 20.0;
constexpr double kSensIdentity = 1e-12;
constexpr double kSensRing = 1e-10;
constexpr double kLemma = 1e-12;
constexpr double kExactRatio = 1e-10;
constexpr double kNoiseFloor = 1e-12;
constexpr double kMinR2 = 0.95;
constexpr double kBinomialRel = 0.01;
constexpr double kCoherence = 1e-6;
constexpr double kRk4Lo = 3.5, kRk4Hi = 4.5;
constexpr double kQfiFraction = 0.95;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

RealMatrix to_real(const oracle::Mat& m) {
  RealMatrix r(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = m[i][j];
  return r;
}

// Diagonal of Σ v_j Z_j with qubit 1 as the most significant bit.
std::vector<double> z_sum(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> d(std::size_t{1} << n, 0.0);
  for (std::size_t x = 0; x < d.size(); ++x)
    for (std::size_t j = 0; j < n; ++j) d[x] += ((x >> (n - 1 - j)) & 1) ? -v[j] : v[j];
  return d;
}

// 2×2 block ⟨a|D|b⟩ of a diagonal operator on the code.
std::array<Complex, 4> code_block(const model::CodePair& code, const std::vector<double>& diag) {
  std::array<Complex, 4> g{};
  const std::vector<Complex>* k[2] = {&code.ket0, &code.ket1};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (std::size_t x = 0; x < diag.size(); ++x) g[2 * a + b] += std::conj((*k[a])[x]) * diag[x] * (*k[b])[x];
  return g;
}

std::vector<Complex> logical_plus(const model::CodePair& code) {
  std::vector<Complex> v(code.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (code.ket0[i] + code.ket1[i]) / std::sqrt(2.0);
  return v;
}

// ---- 1 ----
void lp_correctness(Outcome& o) {
  std::mt19937_64 rng(1001);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> dim(2, 8), rows(0, 4);
  double worst_match = 0.0, worst_gap = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int d = dim(rng);
    const int k = std::min(rows(rng), d - 1);
    std::vector<double> h(d);
    for (auto& x : h) x = g(rng);
    std::vector<std::vector<double>> span(k, std::vector<double>(d));
    for (auto& r : span)
      for (auto& x : r) x = g(rng);
    lp::LPSolution sol;
    double bf;
    if (t % 2 == 0) {
      const lp::L1BallProgram p{h, span, 2.0};
      sol = lp::solve_l1(p);
      bf = lp::brute_force_lp(p);
    } else {
      const lp::LInfBallProgram p{h, span};
      sol = lp::solve_linf(p);
      bf = lp::brute_force_lp(p);
    }
    worst_match = std::max(worst_match, std::abs(sol.objective_value - bf));
    worst_gap = std::max(worst_gap, std::abs(sol.dual_value - sol.objective_value));
  }
  o.require(worst_match <= kLpMatch, "objective vs brute force");
  o.require(worst_gap <= kLpGap, "duality gap");
  o.detail << "200 programs, max |solver - brute| = " << worst_match << ", max duality gap = " << worst_gap;
}

// ---- 2 ----
void theorem1_optimality(Outcome& o) {
  std::mt19937_64 rng(2002);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> dim(2, 16), njumps(1, 2);
  int built = 0, brute_checked = 0, attempts = 0;
  double worst_kl = 0.0, worst_dual = 0.0, worst_brute = 0.0, worst_var = 0.0;
  while (built < 50 && attempts < 1000) {
    ++attempts;
    const int d = dim(rng);
    model::LindbladModel lm;
    lm.dim = d;
    lm.hamiltonian = DenseMatrix(d, d);
    for (int i = 0; i < d; ++i) lm.hamiltonian(i, i) = g(rng);
    const int nj = njumps(rng);
    for (int j = 0; j < nj; ++j) {
      DenseMatrix l(d, d);
      for (int i = 0; i < d; ++i) l(i, i) = Complex(g(rng), j == 0 ? 0.0 : g(rng));
      lm.jumps.push_back(l);
    }
    if (!model::hnls_check(lm).holds) continue;
    ++built;
    const auto diag = model::diagonalize_commuting(lm);
    const auto r = model::design_code_theorem1(diag);
    const auto kl = model::verify_kl(r.code, lm);
    worst_kl = std::max({worst_kl, kl.linear_deviation, kl.quadratic_deviation});
    o.require(kl.pass, "verify_kl");
    worst_dual = std::max(worst_dual, std::abs(r.qfi_coeff - r.dual_value * r.dual_value) / std::max(1.0, r.qfi_coeff));
    if (d <= 10) {
      const double bf = lp::brute_force_lp({diag.h, diag.span_diagonal, 2.0});
      worst_brute = std::max(worst_brute, std::abs(r.qfi_coeff - bf * bf) / std::max(1.0, r.qfi_coeff));
      ++brute_checked;
    }
    Complex e0 = 0.0, e1 = 0.0;
    for (int i = 0; i < d; ++i) {
      e0 += std::norm(r.code.ket0[i]) * lm.hamiltonian(i, i);
      e1 += std::norm(r.code.ket1[i]) * lm.hamiltonian(i, i);
    }
    const double gap = std::abs(e0 - e1);
    worst_var = std::max(worst_var, std::abs(gap * gap - r.qfi_coeff) / std::max(1.0, r.qfi_coeff));
  }
  o.require(built == 50, "could not draw 50 HNLS models");
  o.require(worst_kl <= kKl, "KL deviation");
  o.require(worst_dual <= kQfiDual, "QFI vs dual");
  o.require(worst_brute <= kQfiDual, "QFI vs brute-force LP");
  o.require(worst_var <= kQfiDual, "QFI vs logical gap");
  o.detail << built << " models, max KL dev = " << worst_kl << ", max |F - dual^2| rel = " << worst_dual
           << ", brute-force checked " << brute_checked << " (max rel " << worst_brute << "), max |F - gap_L^2| rel = "
           << worst_var;
}

// ---- 3 ----
void dephasing_duality(Outcome& o) {
  std::mt19937_64 rng(3003);
  std::normal_distribution<double> g;
  double worst_oracle = 0.0, worst_approx = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + t % 4;
    const auto c = oracle::random_correlation(n, n - 1, rng);
    std::vector<double> h(n);
    for (auto& x : h) x = g(rng);
    const dephasing::CorrelationModel cm{h, to_real(c), 1.0};
    const auto ker = oracle::null_space(c);
    o.require(ker.size() == 1, "nullity differs from 1");
    if (ker.size() != 1) continue;
    const auto exact = dephasing::design_exact(cm);
    const double dist = oracle::nullity_one_l1_distance(h, ker[0]);
    worst_oracle = std::max(worst_oracle, std::abs(oracle::dot(h, exact.b) - dist));
    const auto approx = dephasing::design_approx_max(cm);
    worst_approx = std::max(worst_approx, std::abs(approx.qfi_coeff - exact.qfi_coeff) / std::max(1.0, exact.qfi_coeff));
  }
  o.require(worst_oracle <= kDephasingDuality, "exact objective vs oracle");
  o.require(worst_approx <= kDephasingDuality, "approx(gamma_max) vs exact QFI");
  o.detail << "50 nullity-1 models, max |h.b - oracle| = " << worst_oracle << ", max QFI mismatch (rel) = " << worst_approx;
}

// ---- 4 ----
void kl_identities(Outcome& o) {
  std::mt19937_64 rng(4004);
  std::normal_distribution<double> g;
  double worst_lin = 0.0, worst_zz = 0.0;
  int designs = 0;
  for (std::size_t n = 3; n <= 6; ++n) {
    std::vector<double> h(n);
    for (auto& x : h) x = g(rng);
    std::vector<dephasing::QubitDesign> ds;
    ds.push_back(dephasing::design_exact({h, to_real(oracle::random_correlation(n, n - 1, rng)), 1.0}));
    ds.push_back(dephasing::design_approx_max({h, to_real(oracle::random_correlation(n, n - 2, rng)), 1.0}));
    ds.push_back(dephasing::design_beyond_hnls({h, to_real(oracle::random_correlation(n, n, rng)), 1.0}));
    for (const auto& d : ds) {
      ++designs;
      for (int t = 0; t < 100; ++t) {
        std::vector<double> v(n);
        for (auto& x : v) x = g(rng);
        const auto blk = code_block(d.code, z_sum(v));
        const double vb = oracle::dot(v, d.b);
        const double dev = std::sqrt(std::norm(blk[0] - vb) + std::norm(blk[1]) + std::norm(blk[2]) + std::norm(blk[3] + vb));
        worst_lin = std::max(worst_lin, dev);
      }
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          std::vector<double> zz(std::size_t{1} << n);
          for (std::size_t x = 0; x < zz.size(); ++x) {
            const int bj = (x >> (n - 1 - j)) & 1, bk = (x >> (n - 1 - k)) & 1;
            zz[x] = (bj ^ bk) ? -1.0 : 1.0;
          }
          const auto blk = code_block(d.code, zz);
          worst_zz = std::max({worst_zz, std::abs(blk[1]), std::abs(blk[2]), std::abs(blk[0] - blk[3])});
        }
    }
  }
  o.require(worst_lin <= kKlIdentity, "P(v.Z)P identity");
  o.require(worst_zz <= kKlIdentity, "P ZjZk P proportional to P");
  o.detail << designs << " designs (exact/approx/beyond, N=3..6), max |P(v.Z)P - (v.b)Z_L| = " << worst_lin
           << ", max ZZ deviation = " << worst_zz;
}

// ---- 5 ----
void effective_dynamics(Outcome& o) {
  const double ang[3] = {0.0, 1.0, 2.5};
  RealMatrix c(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = 0.98 * std::cos(ang[i] - ang[j]) + (i == j ? 0.02 : 0.0);
  const dephasing::CorrelationModel cm{{1.0, 1.0, 1.0}, c, 1.0};

  // The 0.02 mode is orthogonal to both (cos a_i) and (sin a_i).
  const std::vector<double> cs{std::cos(ang[0]), std::cos(ang[1]), std::cos(ang[2])};
  const std::vector<double> sn{std::sin(ang[0]), std::sin(ang[1]), std::sin(ang[2])};
  std::vector<double> vu{cs[1] * sn[2] - cs[2] * sn[1], cs[2] * sn[0] - cs[0] * sn[2], cs[0] * sn[1] - cs[1] * sn[0]};
  const double nv = std::sqrt(oracle::dot(vu, vu));
  for (auto& x : vu) x /= nv;
  const double gamma = 1.0 / oracle::norm_inf(vu);
  const double a_pred = gamma * std::abs(oracle::dot(vu, cm.h));
  const double b_pred = gamma * gamma * 0.02;

  const auto modes = dephasing::decompose_modes(cm);
  std::size_t u = 0;
  for (std::size_t j = 0; j < modes.count(); ++j)
    if (std::abs(modes.eigenvalues[j] - 0.02) < 1e-9) u = j;
  const auto design = dephasing::design_beyond_hnls(cm, std::nullopt, u, &modes);
  const auto rec = dephasing::build_recovery(design, modes);
  const auto lm = dephasing::to_lindblad(cm, modes);
  const auto rho0 = simulator::pure_density(logical_plus(design.code));

  double err_a[2], err_b[2];
  const double dts[2] = {1e-2, 1e-3};
  for (int i = 0; i < 2; ++i) {
    std::vector<DenseMatrix> traj;
    std::vector<double> times;
    simulator::evolve(lm, rho0, simulator::Schedule::with_default_step(cm.t2, dts[i] * cm.t2, 1.0), &rec,
                      [&](double t, const DenseMatrix& r) {
                        traj.push_back(r);
                        times.push_back(t);
                      });
    const auto f = simulator::logical_qubit_fit(traj, times, design.code, 1.0, cm.t2);
    err_a[i] = std::abs(f.a_fit - a_pred) / a_pred;
    err_b[i] = std::abs(f.b_fit - b_pred) / b_pred;
    if (i == 1) o.detail << "A_fit = " << f.a_fit << " (pred " << a_pred << "), B_fit = " << f.b_fit << " (pred " << b_pred << ")";
  }
  o.require(err_a[1] <= kEffRelTol && err_b[1] <= kEffRelTol, "fit outside 5% at dt = 1e-3");
  const double ra = err_a[0] / err_a[1], rb = err_b[0] / err_b[1];
  o.require(ra >= kEffRatioLo && ra <= kEffRatioHi, "A error ratio not first order");
  o.require(rb >= kEffRatioLo && rb <= kEffRatioHi, "B error ratio not first order");
  o.detail << "; rel err A " << err_a[0] << " -> " << err_a[1] << " (x" << ra << "), B " << err_b[0] << " -> "
           << err_b[1] << " (x" << rb << ")";
}

// ---- 6 ----
void sensitivities(Outcome& o) {
  double worst_id = 0.0, worst_ring = 0.0, worst_ghz = 0.0, worst_gamma = 0.0;
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto r = dephasing::sensitivity_report({std::vector<double>(n, 1.0), RealMatrix::identity(n), 1.0});
    worst_id = std::max({worst_id, std::abs(r.eta_ghz - r.eta_par), std::abs(r.eta_qec - r.eta1)});
  }
  std::mt19937_64 rng(6006);
  std::uniform_real_distribution<double> lam(0.1, 2.0);
  int rings = 0;
  for (std::size_t n = 3; n <= 8; ++n) {
    for (int t = 0; t < 20; ++t) {
      // Symmetric nonnegative circulant spectrum with mean 1 gives a PSD unit-diagonal ring.
      std::vector<double> l(n);
      for (std::size_t k = 0; k <= n / 2; ++k) l[k] = l[(n - k) % n] = lam(rng);
      double mean = 0.0;
      for (double x : l) mean += x / n;
      for (double& x : l) x /= mean;
      std::vector<double> alpha(n / 2);
      for (std::size_t d = 1; d <= n / 2; ++d) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += l[k] * std::cos(2 * std::numbers::pi * k * d / n);
        alpha[d - 1] = s / n;
      }
      const double t2 = t % 2 ? 0.5 : 1.0;
      const auto cm = dephasing::ring_model(n, alpha, t2);
      double row = 0.0;
      for (std::size_t k = 0; k < n; ++k) row += cm.c(0, k);
      const double expected = std::sqrt(row) * std::sqrt(2 * std::numbers::e / (n * t2));
      const auto r = dephasing::sensitivity_report(cm);
      worst_ring = std::max(worst_ring, std::abs(r.eta_qec - expected));
      worst_ghz = std::max(worst_ghz, std::abs(r.eta_qec - r.eta_ghz));
      ++rings;
      if (t == 0 && n <= 6) {
        const auto modes = dephasing::decompose_modes(cm);
        const double gmax = dephasing::design_beyond_hnls(cm, std::nullopt, std::nullopt, &modes).gamma_max;
        double first = 0.0;
        for (double frac : {0.25, 0.5, 1.0}) {
          const auto d = dephasing::design_beyond_hnls(cm, frac * gmax, std::nullopt, &modes);
          const auto eff = dephasing::effective_dynamics(cm, d, modes, dephasing::build_recovery(d, modes));
          const double eta = dephasing::qubit_sensitivity(eff.a, eff.b, cm.t2);
          if (frac == 0.25) first = eta;
          worst_gamma = std::max(worst_gamma, std::abs(eta - first));
        }
      }
    }
  }
  o.require(worst_id <= kSensIdentity, "C = I identities");
  o.require(worst_ring <= kSensRing, "ring closed form");
  o.require(worst_ghz <= kSensRing, "ring eta_QEC = eta_GHZ");
  o.require(worst_gamma <= kSensRing, "gamma independence");
  o.detail << "C=I max dev " << worst_id << "; " << rings << " rings: closed-form dev " << worst_ring
           << ", |QEC - GHZ| " << worst_ghz << ", gamma spread " << worst_gamma;
}

// ---- 7 ----
void lemma1(Outcome& o) {
  double worst = 0.0;
  for (int s = 2; s <= 12; ++s) {
    const auto r = bosonic::lemma1_check(s);
    double low = 0.0;
    for (int i = 1; i < s; ++i) low = std::max(low, double(std::fabs(oracle::lemma_sum(s, i))));
    const double top = double(std::fabs(oracle::lemma_sum(s, s) - (s % 2 ? -1.0L : 1.0L) / std::ldexp(1.0L, 2 * s - 2)));
    worst = std::max({worst, low, top, r.max_low_order, std::abs(r.top_order - r.top_expected)});
    o.require(r.pass, "library check failed at s = " + std::to_string(s));
  }
  o.require(worst <= kLemma, "identity residual");
  o.detail << "s = 2..12, max residual " << worst;
}

// Fits log y = a + p log M over points with y above the noise floor.
struct PowerFit {
  std::size_t points = 0;
  double slope = 0.0;
  double r2 = 0.0;
  double c = 0.0;  // max M^(-p_nominal) scaled constant
};

PowerFit power_fit(const std::vector<int>& ms, const std::vector<double>& ys, double nominal) {
  PowerFit f;
  oracle::Vec x, y;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    f.c = std::max(f.c, ys[i] * std::pow(double(ms[i]), -nominal));
    if (ys[i] <= kNoiseFloor) continue;
    x.push_back(std::log(double(ms[i])));
    y.push_back(std::log(ys[i]));
  }
  f.points = x.size();
  if (f.points >= 3) {
    const auto l = oracle::fit_line(x, y);
    f.slope = l.slope;
    f.r2 = l.r2;
  }
  return f;
}

// ---- 8 ----
void chebyshev_near_optimality(Outcome& o) {
  {
    const bosonic::FockModel fm{100, 2, 1.0, {}};
    const double r = bosonic::chebyshev_qfi(bosonic::chebyshev_code(fm), fm).ratio;
    o.require(std::abs(r - 1.0) <= kExactRatio, "s=2, M=100 ratio");
    o.detail << "s=2,M=100 ratio-1 = " << r - 1.0 << ";";
  }
  const std::vector<int> grid{50, 100, 200, 400};
  const std::vector<int> odd{51, 101, 201, 401};
  for (int s : {2, 3, 4}) {
    auto eval = [&](const std::vector<int>& ms, std::vector<double>& gap, std::vector<double>& wdev) {
      for (int m : ms) {
        const bosonic::FockModel fm{m, s, 1.0, {}};
        const auto code = bosonic::chebyshev_code(fm);
        const double r = bosonic::chebyshev_qfi(code, fm).ratio;
        o.require(r <= 1.0 + 1e-9, "ratio above 1");
        gap.push_back(1.0 - r);
        double w = 0.0;
        for (int k = 0; k <= s; ++k) w = std::max(w, std::abs(code.weights[k] - double(oracle::lemma_weight(s, k))));
        wdev.push_back(w);
      }
    };
    std::vector<double> gap, wdev;
    eval(grid, gap, wdev);
    auto fg = power_fit(grid, gap, -2.0);
    auto fw = power_fit(grid, wdev, -1.0);
    std::string used = "grid";
    if (fg.points < 3 || fw.points < 3) {
      // Exact-support points sit at the noise floor; fit on M+1 where supports are inexact.
      std::vector<double> g2, w2;
      eval(odd, g2, w2);
      if (fg.points < 3) fg = power_fit(odd, g2, -2.0), fg.c = std::max(fg.c, power_fit(grid, gap, -2.0).c);
      if (fw.points < 3) fw = power_fit(odd, w2, -1.0), fw.c = std::max(fw.c, power_fit(grid, wdev, -1.0).c);
      used = "M+1 grid";
    }
    o.require(fg.points >= 3 && fg.r2 >= kMinR2 && fg.slope <= -1.5 && fg.slope >= -2.5,
              "1-ratio not O(1/M^2) at s=" + std::to_string(s));
    o.require(fw.points >= 3 && fw.r2 >= kMinR2 && fw.slope <= -0.5 && fw.slope >= -1.5,
              "weights not O(1/M) at s=" + std::to_string(s));
    o.detail << " s=" << s << " (" << used << "): 1-ratio slope " << fg.slope << " R2 " << fg.r2 << " c'=" << fg.c
             << ", weight slope " << fw.slope << " R2 " << fw.r2 << ";";
  }
}

// ---- 9 ----
void binomial_comparison(Outcome& o) {
  for (int s : {2, 3, 4}) {
    for (int mult : {60, 120}) {
      const int m = mult * s;
      const bosonic::FockModel fm{m, s, 1.0, {}};
      const auto c = bosonic::chebyshev_code(fm);
      const auto b = bosonic::binomial_code(fm);
      const double r = std::pow(bosonic::signal(b.supports, b.weights, s) / bosonic::signal(c.supports, c.weights, s), 2);
      const double expect = oracle::binomial_ratio(s);
      o.require(std::abs(r / expect - 1.0) <= kBinomialRel, "ratio off at s=" + std::to_string(s));
      if (mult == 60) o.detail << "s=" << s << " M=" << m << ": " << r << " vs " << expect << "; ";
    }
  }
  o.require(std::abs(oracle::binomial_ratio(3) - 0.790) < 5e-4 && std::abs(oracle::binomial_ratio(4) - 0.5625) < 1e-12,
            "closed-form constants");
}

// ---- 10 ----
void bosonic_kl(Outcome& o) {
  int checked = 0;
  double worst = 0.0;
  auto check = [&](const model::CodePair& code, const std::vector<int>& sup, const std::vector<double>& w,
                   const bosonic::FockModel& fm) {
    const auto kl = bosonic::verify_bosonic(code, fm);
    o.require(kl.pass, "verify_bosonic failed at s=" + std::to_string(fm.s) + " M=" + std::to_string(fm.m));
    worst = std::max({worst, kl.linear_deviation, kl.quadratic_deviation});
    // Independent check: alternating moments vanish and no support pair is adjacent.
    for (int i = 1; i < fm.s; ++i) {
      long double mom = 0.0L;
      for (std::size_t k = 0; k < sup.size(); ++k)
        mom += (k % 2 ? -1.0L : 1.0L) * w[k] * std::pow((long double)sup[k] / fm.m, i);
      worst = std::max(worst, double(std::fabs(mom)));
    }
    for (std::size_t k = 1; k < sup.size(); ++k) o.require(sup[k] - sup[k - 1] >= 2, "adjacent supports");
    ++checked;
  };
  for (int s : {2, 3, 4}) {
    for (int m : {50, 100, 200, 400, 51, 101, 201, 401}) {
      const bosonic::FockModel fm{m, s, 1.0, {}};
      const auto c = bosonic::chebyshev_code(fm);
      check(c.code, c.supports, c.weights, fm);
    }
    for (int mult : {60, 120}) {
      const bosonic::FockModel fm{mult * s, s, 1.0, {}};
      const auto b = bosonic::binomial_code(fm);
      check(b.code, b.supports, b.weights, fm);
    }
  }
  o.require(worst <= kKl, "deviation");
  o.detail << checked << " codes, max deviation " << worst;
}

// ---- 11 ----
void simulator_baselines(Outcome& o) {
  const DenseMatrix z = DenseMatrix::from_rows({{1, 0}, {0, -1}});
  const DenseMatrix x = DenseMatrix::from_rows({{0, 1}, {1, 0}});
  const std::vector<Complex> plus{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
  {
    const double t2 = 1.0;
    const model::LindbladModel lm{2, z * Complex(0.5), {z * Complex(1 / std::sqrt(2 * t2))}, {}};
    double worst = 0.0;
    simulator::evolve(lm, simulator::pure_density(plus), simulator::Schedule::with_default_step(2.0, 0.02, 1.0), nullptr,
                      [&](double t, const DenseMatrix& r) {
                        worst = std::max(worst, std::abs(std::abs(r(0, 1)) - 0.5 * std::exp(-t / t2)));
                      });
    o.require(worst <= kCoherence, "coherence");
    o.detail << "coherence max dev " << worst;
  }
  {
    const model::LindbladModel lm{2, x * Complex(0.8) + z * Complex(0.3),
                                  {z * Complex(0.6), DenseMatrix::from_rows({{0, 0.4}, {0, 0}})}, {}};
    const auto rho0 = simulator::pure_density(std::vector<Complex>{1, 0});
    auto run = [&](double h) { return simulator::evolve(lm, rho0, simulator::Schedule{2.0, 2.0, h, 1.0}); };
    const auto r1 = run(0.1), r2 = run(0.05), r3 = run(0.025);
    const double order = std::log2(linalg::frobenius_norm(r1 - r2) / linalg::frobenius_norm(r2 - r3));
    o.require(order >= kRk4Lo && order <= kRk4Hi, "RK4 order");
    o.detail << "; RK4 order " << order;
  }
  {
    RealMatrix c(3, 3, -0.5);
    for (int i = 0; i < 3; ++i) c(i, i) = 1.0;
    const dephasing::CorrelationModel cm{{1.0, 1.0, 1.0}, c, 1.0};
    const auto modes = dephasing::decompose_modes(cm);
    const auto design = dephasing::design_exact(cm);
    const auto rec = dephasing::build_recovery(design, modes);
    const double t = cm.t2 / 10;
    const auto q = simulator::trajectory_qfi(dephasing::to_lindblad(cm, modes), simulator::pure_density(logical_plus(design.code)),
                                             simulator::Schedule::with_default_step(t, 1e-3 * cm.t2, 0.0), &rec, design.code);
    // Independent optimum: with ker C = span(1,1,1), max h.b over |b| <= 1 is |h.k|/||k||inf.
    const double dist = oracle::nullity_one_l1_distance(cm.h, {1.0, 1.0, 1.0});
    const double frac = q.qfi / (t * t * dist * dist);
    o.require(frac >= kQfiFraction, "HNLS sensor QFI fraction");
    o.detail << "; HNLS QFI fraction " << frac;
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "LP correctness", lp_correctness},
      {2, "Commuting design optimality", theorem1_optimality},
      {3, "Dephasing duality", dephasing_duality},
      {4, "KL identities", kl_identities},
      {5, "Effective dynamics", effective_dynamics},
      {6, "Sensitivities", sensitivities},
      {7, "Chebyshev moment identity", lemma1},
      {8, "Chebyshev near-optimality", chebyshev_near_optimality},
      {9, "Binomial comparison", binomial_comparison},
      {10, "Bosonic KL", bosonic_kl},
      {11, "Simulator baselines", simulator_baselines},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

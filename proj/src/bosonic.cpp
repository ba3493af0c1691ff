#include "qecsense/bosonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "qecsense/lp.hpp"

namespace qecsense::bosonic {

using linalg::Complex;

void FockModel::validate() const {
  if (m < 1) throw Error(ErrorKind::InvariantError, "truncation M must be at least 1");
  if (s < 2) throw Error(ErrorKind::InvariantError, "signal order s must be at least 2");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw Error(ErrorKind::InvariantError, "loss rate must be finite and nonnegative");
  if (!zeta.empty() && zeta.size() != static_cast<std::size_t>(s))
    throw Error(ErrorKind::DimensionMismatch,
                "zeta has " + std::to_string(zeta.size()) + " entries, expected " + std::to_string(s));
  for (double z : zeta)
    if (!std::isfinite(z)) throw Error(ErrorKind::InvariantError, "zeta has non-finite entries");
}

DenseMatrix annihilation(int m) {
  DenseMatrix a(m + 1, m + 1);
  for (int k = 1; k <= m; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

DenseMatrix number_power(int m, int power) {
  DenseMatrix n(m + 1, m + 1);
  for (int k = 0; k <= m; ++k) n(k, k) = std::pow(static_cast<double>(k), power);
  return n;
}

std::vector<DenseMatrix> modified_span_generators(const FockModel& model) {
  model.validate();
  std::vector<DenseMatrix> gens{annihilation(model.m)};
  for (int i = 1; i < model.s; ++i) gens.push_back(number_power(model.m, i));
  return gens;
}

model::LindbladSpan bosonic_span(const FockModel& model) {
  return model::span_of(modified_span_generators(model), model.dim());
}

model::LindbladModel to_lindblad(const FockModel& model) {
  model.validate();
  model::LindbladModel lm;
  lm.dim = model.dim();
  lm.hamiltonian = DenseMatrix(lm.dim, lm.dim);
  for (int i = 1; i <= model.s; ++i) {
    const double z = model.zeta.empty() ? (i == model.s ? 1.0 : 0.0) : model.zeta[i - 1];
    if (z != 0.0) lm.hamiltonian += number_power(model.m, i) * Complex(z);
  }
  lm.jumps.push_back(annihilation(model.m) * Complex(std::sqrt(model.kappa)));
  return lm;
}

namespace {

model::CodePair split_code(int m, const std::vector<int>& supports,
                           const std::vector<double>& weights) {
  std::vector<Complex> k0(m + 1), k1(m + 1);
  for (std::size_t k = 0; k < supports.size(); ++k)
    (k % 2 == 0 ? k0 : k1)[supports[k]] = std::sqrt(weights[k]);
  return model::CodePair::from_kets(std::move(k0), std::move(k1));
}

void require_distance(const std::vector<int>& supports) {
  for (std::size_t k = 1; k < supports.size(); ++k)
    if (supports[k] - supports[k - 1] < 3)
      throw Error(ErrorKind::TruncationTooSmall,
                  "supports " + std::to_string(supports[k - 1]) + " and " +
                      std::to_string(supports[k]) + " are closer than 3");
}

}  // namespace

std::vector<int> chebyshev_supports(int m, int s) {
  std::vector<int> out;
  for (int k = 0; k <= s; ++k) {
    const double sn = std::sin(k * std::numbers::pi / (2.0 * s));
    out.push_back(static_cast<int>(std::floor(m * sn * sn + 1e-9)));
  }
  return out;
}

ChebyshevCode chebyshev_code(const FockModel& model) {
  model.validate();
  const int m = model.m, s = model.s;
  const double sn = std::sin(std::numbers::pi / s);
  if (m * sn * sn < 4.0 - 1e-9)
    throw Error(ErrorKind::TruncationTooSmall,
                "M sin^2(pi/s) = " + std::to_string(m * sn * sn) + " is below 4");

  ChebyshevCode out;
  out.supports = chebyshev_supports(m, s);
  require_distance(out.supports);

  const std::size_t n = s + 1;
  linalg::RealMatrix a(n, n);
  for (int i = 0; i < s; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double x = static_cast<double>(out.supports[k]) / m;
      a(i, k) = (k % 2 == 0 ? 1.0 : -1.0) * (i == 0 ? 1.0 : std::pow(x, i));
    }
  for (std::size_t k = 0; k < n; ++k) a(s, k) = 1.0;
  std::vector<double> e(n, 0.0);
  e[s] = 2.0;
  out.weights = linalg::solve_linear<double>(a, e);
  for (std::size_t k = 0; k < n; ++k)
    if (!(out.weights[k] > 0.0))
      throw Error(ErrorKind::TruncationTooSmall,
                  "weight " + std::to_string(k) + " is not positive at this truncation");
  out.code = split_code(m, out.supports, out.weights);
  return out;
}

double signal(const std::vector<int>& supports, const std::vector<double>& weights, int s) {
  double total = 0.0;
  for (std::size_t k = 0; k < supports.size(); ++k)
    total += (k % 2 == 0 ? 1.0 : -1.0) * weights[k] * std::pow(static_cast<double>(supports[k]), s);
  return total;
}

QfiReport chebyshev_qfi(const ChebyshevCode& code, const FockModel& model) {
  const double sig = signal(code.supports, code.weights, model.s);
  QfiReport r;
  r.f_coeff = sig * sig;
  r.f_opt_bound = 16.0 * std::pow(model.m / 4.0, 2 * model.s);
  r.ratio = r.f_coeff / r.f_opt_bound;
  return r;
}

Lemma1Report lemma1_check(int s) {
  if (s < 2 || s > 12) throw Error(ErrorKind::InvariantError, "lemma check requires 2 <= s <= 12");
  const long double pi = std::numbers::pi_v<long double>;
  auto sum = [&](int i) {
    long double total = 0.0L;
    for (int k = 0; k <= s; ++k) {
      const long double w = (2.0L - (k == 0) - (k == s)) / s;
      const long double sn = std::sin(k * pi / (2.0L * s));
      total += (k % 2 == 0 ? w : -w) * std::pow(sn * sn, static_cast<long double>(i));
    }
    return total;
  };
  Lemma1Report r;
  r.s = s;
  for (int i = 1; i < s; ++i)
    r.max_low_order = std::max(r.max_low_order, static_cast<double>(std::fabs(sum(i))));
  r.top_order = static_cast<double>(sum(s));
  r.top_expected = (s % 2 == 0 ? 1.0 : -1.0) / std::ldexp(1.0, 2 * s - 2);
  r.pass = r.max_low_order <= 1e-12 && std::abs(r.top_order - r.top_expected) <= 1e-12;
  return r;
}

BinomialCode binomial_code(const FockModel& model) {
  model.validate();
  const int m = model.m, s = model.s;
  if (m % s != 0)
    throw Error(ErrorKind::NotDivisible,
                "M = " + std::to_string(m) + " is not divisible by s = " + std::to_string(s));
  if (m / s < 2) throw Error(ErrorKind::TruncationTooSmall, "binomial spacing M/s is below 2");
  BinomialCode out;
  double binom = 1.0;
  for (int k = 0; k <= s; ++k) {
    out.supports.push_back(k * (m / s));
    out.weights.push_back(binom / std::ldexp(1.0, s - 1));
    binom = binom * (s - k) / (k + 1);
  }
  out.code = split_code(m, out.supports, out.weights);
  return out;
}

BosonicLpResult lp_code_bosonic(const FockModel& model) {
  model.validate();
  const int m = model.m, s = model.s;
  if (m > 200) throw Error(ErrorKind::TooLarge, "bosonic LP supports M <= 200");

  std::vector<int> allowed(m + 1);
  for (int k = 0; k <= m; ++k) allowed[k] = k;

  BosonicLpResult out;
  const double scale = std::pow(static_cast<double>(m), s);
  for (bool first = true;; first = false) {
    if (allowed.empty()) throw Error(ErrorKind::Infeasible, "every Fock level was pruned");
    const std::size_t d = allowed.size();
    std::vector<double> h(d);
    std::vector<std::vector<double>> rows(s, std::vector<double>(d));
    for (std::size_t k = 0; k < d; ++k) {
      const double x = static_cast<double>(allowed[k]) / m;
      h[k] = std::pow(x, s);
      for (int i = 0; i < s; ++i) rows[i][k] = i == 0 ? 1.0 : std::pow(x, i);
    }
    const auto sol = lp::solve_l1({h, rows, 2.0});
    if (sol.objective_value <= 1e-12)
      throw Error(ErrorKind::Infeasible, "no diagonal code has a nonzero signal on the allowed levels");
    if (first) out.unrestricted_signal = scale * sol.objective_value;

    const double cut = 1e-9 * linalg::norm_inf(sol.argmax);
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < d; ++k)
      if (std::abs(sol.argmax[k]) > cut) support.push_back(k);
    if (support.empty()) throw Error(ErrorKind::Infeasible, "LP returned an empty support");

    std::optional<std::size_t> drop;
    for (std::size_t j = 1; j < support.size() && !drop; ++j) {
      const std::size_t p = support[j - 1], q = support[j];
      if (allowed[q] - allowed[p] < 3)
        drop = std::abs(sol.argmax[p]) < std::abs(sol.argmax[q]) ? p : q;
    }
    if (drop) {
      out.excluded.push_back(allowed[*drop]);
      allowed.erase(allowed.begin() + static_cast<std::ptrdiff_t>(*drop));
      continue;
    }

    double sp = 0.0, sm = 0.0;
    for (std::size_t k : support) (sol.argmax[k] > 0 ? sp : sm) += std::abs(sol.argmax[k]);
    if (sp <= 0.0 || sm <= 0.0) throw Error(ErrorKind::Infeasible, "LP optimum lacks one logical branch");
    std::vector<Complex> k0(m + 1), k1(m + 1);
    std::vector<double> beta(m + 1, 0.0);
    double gap = 0.0;
    for (std::size_t k : support) {
      const double b = sol.argmax[k];
      beta[allowed[k]] = b;
      if (b > 0) {
        k0[allowed[k]] = std::sqrt(b / sp);
        gap += b / sp * h[k];
      } else {
        k1[allowed[k]] = std::sqrt(-b / sm);
        gap -= -b / sm * h[k];
      }
    }
    out.design.code = model::CodePair::from_kets(std::move(k0), std::move(k1));
    out.design.design_vector = std::move(beta);
    out.design.lp_value = sol.objective_value;
    out.design.dual_value = sol.dual_value;
    out.design.qfi_coeff = gap * scale * gap * scale;
    out.signal = scale * sol.objective_value;
    std::sort(out.excluded.begin(), out.excluded.end());
    return out;
  }
}

model::KlReport verify_bosonic(const model::CodePair& code, const FockModel& model,
                               const model::KlTolerances& tol) {
  model.validate();
  const DenseMatrix a = annihilation(model.m);
  std::vector<DenseMatrix> linear{a, a.adjoint()};
  for (int i = 1; i < model.s; ++i) linear.push_back(number_power(model.m, i));
  const std::vector<DenseMatrix> quadratic{number_power(model.m, 1) * Complex(model.kappa)};
  return model::verify_kl(code, linear, quadratic, to_lindblad(model).hamiltonian, tol);
}

}  // namespace qecsense::bosonic

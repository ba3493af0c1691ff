#include "qecsense/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "qecsense/lp.hpp"

namespace qecsense::dephasing {

using linalg::Complex;
using linalg::frobenius_norm;
using model::CodePair;

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kOverlapTol = 1e-9;

void require_n(const CorrelationModel& cm) {
  if (cm.n() < 3)
    throw Error(ErrorKind::NTooSmall,
                "code needs N >= 3 qubits, got " + std::to_string(cm.n()));
}

double h_norm(const CorrelationModel& cm) { return std::max(linalg::norm2<double>(cm.h), 1e-300); }

}  // namespace

void CorrelationModel::validate() const {
  const std::size_t N = h.size();
  if (N == 0) throw Error(ErrorKind::DimensionMismatch, "empty gap vector");
  if (c.rows() != N || c.cols() != N)
    throw Error(ErrorKind::DimensionMismatch, "C must be " + std::to_string(N) + "x" + std::to_string(N));
  if (!(t2 > 0.0) || !std::isfinite(t2)) throw Error(ErrorKind::InvariantError, "T2 must be positive");
  for (double x : h)
    if (!std::isfinite(x)) throw Error(ErrorKind::InvariantError, "h has non-finite entries");
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const double v = c(i, j);
      if (!std::isfinite(v)) throw Error(ErrorKind::InvariantError, "C has non-finite entries");
      if (v < -1.0 - 1e-12 || v > 1.0 + 1e-12)
        throw Error(ErrorKind::InvariantError, "C entries must lie in [-1,1]");
      if (std::abs(v - c(j, i)) > 1e-12) throw Error(ErrorKind::InvariantError, "C must be symmetric");
    }
    if (std::abs(c(i, i) - 1.0) > 1e-12)
      throw Error(ErrorKind::NotUnitDiagonal, "C(" + std::to_string(i) + "," + std::to_string(i) + ") != 1");
  }
  const auto eig = linalg::eigh(c);
  if (eig.eigenvalues.front() < -1e-10) {
    std::ostringstream msg;
    msg << "C has eigenvalue " << eig.eigenvalues.front();
    throw Error(ErrorKind::NotPSD, msg.str());
  }
}

std::vector<double> z_diagonal(const std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> d(dim, 0.0);
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t j = 0; j < n; ++j) d[x] += ((x >> (n - 1 - j)) & 1u) ? -v[j] : v[j];
  return d;
}

DenseMatrix z_operator(const std::vector<double>& v) {
  const auto d = z_diagonal(v);
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix zz_operator(std::size_t n, std::size_t j, std::size_t k) {
  const std::size_t dim = std::size_t{1} << n;
  DenseMatrix m(dim, dim);
  for (std::size_t x = 0; x < dim; ++x) {
    const unsigned bj = (x >> (n - 1 - j)) & 1u;
    const unsigned bk = (x >> (n - 1 - k)) & 1u;
    m(x, x) = ((bj ^ bk) != 0u) ? -1.0 : 1.0;
  }
  return m;
}

DenseMatrix NoiseModes::jump(std::size_t j) const {
  return z_operator(mode(j)) * Complex(std::sqrt(eigenvalues.at(j)));
}

NoiseModes decompose_modes(const CorrelationModel& cm, bool align_degenerate) {
  cm.validate();
  const std::size_t n = cm.n();
  auto eig = linalg::eigh(cm.c);
  NoiseModes out;
  const double lmax = std::max(eig.eigenvalues.back(), 1.0);
  out.eigenvalues = eig.eigenvalues;
  for (double& l : out.eigenvalues)
    if (l <= kRankTol * lmax) l = 0.0;
  out.modes = eig.eigenvectors;

  if (align_degenerate) {
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = start + 1;
      while (end < n && out.eigenvalues[end] - out.eigenvalues[start] <= kRankTol * lmax) ++end;
      if (end - start > 1) {
        std::vector<std::vector<double>> block;
        std::vector<double> proj(n, 0.0);
        for (std::size_t j = start; j < end; ++j) {
          const auto v = out.modes.column(j);
          const double o = linalg::dot(v, cm.h);
          for (std::size_t i = 0; i < n; ++i) proj[i] += o * v[i];
        }
        if (linalg::norm2<double>(proj) > kOverlapTol * h_norm(cm)) block.push_back(proj);
        for (std::size_t j = start; j < end; ++j) block.push_back(out.modes.column(j));
        auto ortho = linalg::orthonormalize<double>(block);
        for (std::size_t j = start; j < end; ++j) out.modes.set_column(j, ortho[j - start]);
      }
      start = end;
    }
  }

  const double tol = kOverlapTol * h_norm(cm);
  out.overlaps.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto v = out.modes.column(j);
    double o = linalg::dot(v, cm.h);
    bool flip = false;
    if (std::abs(o) > tol) {
      flip = o < 0.0;
    } else {
      for (double x : v) {
        if (std::abs(x) > 1e-12) {
          flip = x < 0.0;
          break;
        }
      }
    }
    if (flip) {
      for (double& x : v) x = -x;
      o = -o;
      out.modes.set_column(j, v);
    }
    out.overlaps[j] = std::abs(o) > tol ? o : 0.0;
    if (out.eigenvalues[j] == 0.0 && out.overlaps[j] != 0.0) out.hnls = true;
  }
  return out;
}

CodePair phase_code(const std::vector<double>& b) {
  const std::size_t n = b.size();
  const std::size_t dim = std::size_t{1} << n;
  std::vector<Complex> k0(dim), k1(dim);
  std::vector<Complex> up(n), down(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 0.5 * std::acos(std::clamp(b[j], -1.0, 1.0));
    up[j] = std::cos(th);
    down[j] = Complex(0.0, std::sin(th));
  }
  for (std::size_t x = 0; x < dim; ++x) {
    Complex a = 1.0;
    for (std::size_t j = 0; j < n; ++j) a *= ((x >> (n - 1 - j)) & 1u) ? down[j] : up[j];
    k0[x] = a;
    k1[(dim - 1) ^ x] = a;
  }
  return CodePair::from_kets(std::move(k0), std::move(k1));
}

namespace {

QubitDesign finish(const CorrelationModel& cm, DesignKind kind, std::vector<double> b, double gamma,
                   double gamma_max, std::optional<std::size_t> u) {
  QubitDesign d;
  d.kind = kind;
  // arccos is ill-conditioned at ±1, so rounding noise there would tilt θ by ~1e-7.
  for (double& x : b) {
    x = std::clamp(x, -1.0, 1.0);
    if (1.0 - std::abs(x) <= 1e-12) x = x > 0.0 ? 1.0 : -1.0;
  }
  d.theta.resize(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) d.theta[j] = 0.5 * std::acos(b[j]);
  d.code = phase_code(b);
  const double gain = linalg::dot(cm.h, b);
  d.qfi_coeff = gain * gain;
  d.b = std::move(b);
  d.gamma = gamma;
  d.gamma_max = gamma_max;
  d.u = u;
  return d;
}

std::vector<double> kernel_projection(const CorrelationModel& cm, const NoiseModes& m) {
  std::vector<double> p(cm.n(), 0.0);
  for (std::size_t j = 0; j < m.count(); ++j) {
    if (m.eigenvalues[j] != 0.0) continue;
    const auto v = m.mode(j);
    const double o = linalg::dot(v, cm.h);
    for (std::size_t i = 0; i < cm.n(); ++i) p[i] += o * v[i];
  }
  return p;
}

}  // namespace

QubitDesign design_exact(const CorrelationModel& cm) {
  require_n(cm);
  const auto m = decompose_modes(cm);
  if (!m.hnls) throw Error(ErrorKind::HnlsViolated, "h lies in the column space of C");
  lp::LInfBallProgram prog;
  prog.objective = cm.h;
  for (std::size_t j = 0; j < m.count(); ++j)
    if (m.eigenvalues[j] != 0.0) prog.orthogonality_space.push_back(m.mode(j));
  const auto sol = lp::solve_linf(prog);
  if (sol.objective_value <= 1e-9)
    throw Error(ErrorKind::HnlsViolated, "design program has zero optimum");
  return finish(cm, DesignKind::Exact, sol.argmax, 1.0, 1.0, std::nullopt);
}

QubitDesign design_approx(const CorrelationModel& cm, double gamma) {
  require_n(cm);
  const auto m = decompose_modes(cm);
  if (!m.hnls) throw Error(ErrorKind::HnlsViolated, "h lies in the column space of C");
  auto p = kernel_projection(cm, m);
  const double gmax = 1.0 / linalg::norm_inf(p);
  if (!(gamma != 0.0) || std::abs(gamma) > gmax * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "gamma " << gamma << " outside (0, " << gmax << "]";
    throw Error(ErrorKind::GammaOutOfRange, msg.str());
  }
  for (double& x : p) x *= gamma;
  return finish(cm, DesignKind::Approximate, std::move(p), gamma, gmax, std::nullopt);
}

QubitDesign design_approx_max(const CorrelationModel& cm) {
  require_n(cm);
  const auto m = decompose_modes(cm);
  if (!m.hnls) throw Error(ErrorKind::HnlsViolated, "h lies in the column space of C");
  return design_approx(cm, 1.0 / linalg::norm_inf(kernel_projection(cm, m)));
}

std::size_t best_mode(const NoiseModes& m, double hn) {
  std::size_t best = m.count();
  double best_score = 0.0;
  for (std::size_t j = 0; j < m.count(); ++j) {
    const double o = std::abs(m.overlaps[j]);
    if (o <= kOverlapTol * hn) continue;
    const double score = std::sqrt(m.eigenvalues[j]) / o;
    if (best == m.count()) {
      best = j;
      best_score = score;
      continue;
    }
    const double scale = std::max(score, best_score);
    if (score < best_score - 1e-12 * scale) {
      best = j;
      best_score = score;
    } else if (std::abs(score - best_score) <= 1e-12 * scale &&
               m.eigenvalues[j] < m.eigenvalues[best]) {
      best = j;
      best_score = score;
    }
  }
  if (best == m.count())
    throw Error(ErrorKind::AllModesOrthogonal, "every noise mode is orthogonal to h");
  return best;
}

QubitDesign design_beyond_hnls(const CorrelationModel& cm, std::optional<double> gamma,
                               std::optional<std::size_t> u, const NoiseModes* modes) {
  require_n(cm);
  NoiseModes local;
  if (modes == nullptr) {
    local = decompose_modes(cm);
    modes = &local;
  }
  const std::size_t uu = u ? *u : best_mode(*modes, h_norm(cm));
  if (uu >= modes->count())
    throw Error(ErrorKind::DimensionMismatch, "mode index " + std::to_string(uu) + " out of range");
  auto v = modes->mode(uu);
  if (modes->overlaps[uu] < 0.0)
    for (double& x : v) x = -x;
  const double gmax = 1.0 / linalg::norm_inf(v);
  const double g = gamma.value_or(gmax);
  if (!(g > 0.0) || g > gmax * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "gamma " << g << " outside (0, " << gmax << "]";
    throw Error(ErrorKind::GammaOutOfRange, msg.str());
  }
  for (double& x : v) x *= g;
  return finish(cm, DesignKind::BeyondHnls, std::move(v), g, gmax, uu);
}

model::RecoveryChannel build_recovery(const QubitDesign& design, const NoiseModes& modes) {
  const CodePair& code = design.code;
  const DenseMatrix& p = code.projector;
  const std::size_t dim = p.rows();
  const std::size_t n = modes.count();
  if (dim != (std::size_t{1} << n))
    throw Error(ErrorKind::DimensionMismatch, "design and noise modes disagree on N");

  std::vector<std::size_t> correctable;
  for (std::size_t j = 0; j < n; ++j)
    if ((!design.u || j != *design.u) && modes.eigenvalues[j] != 0.0) correctable.push_back(j);

  std::vector<DenseMatrix> ls(n);
  for (std::size_t j = 0; j < n; ++j) ls[j] = modes.jump(j);

  // Knill-Laflamme matrix restricted to the correctable modes.
  const std::size_t k = correctable.size();
  RealMatrix mt(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      mt(a, b) = 0.5 * linalg::trace(p * ls[correctable[a]] * ls[correctable[b]] * p).real();

  model::RecoveryChannel rc;
  rc.kraus_ops.push_back(p);
  rc.projectors.push_back(p);
  DenseMatrix used = p;

  if (k > 0) {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) {
        const double s = 0.5 * (mt(a, b) + mt(b, a));
        mt(a, b) = mt(b, a) = s;
      }
    const auto eig = linalg::eigh(mt);
    double dmax = 0.0;
    for (double d : eig.eigenvalues) dmax = std::max(dmax, std::abs(d));
    for (std::size_t col = 0; col < k; ++col) {
      if (std::abs(eig.eigenvalues[col]) <= kRankTol * std::max(dmax, 1.0)) continue;
      DenseMatrix f(dim, dim);
      for (std::size_t a = 0; a < k; ++a) f += ls[correctable[a]] * Complex(eig.eigenvectors(a, col));
      const auto u = linalg::polar_unitary(DenseMatrix(f * p), 1e-12);
      if (!u) continue;
      rc.kraus_ops.push_back(u->adjoint());
      rc.projectors.push_back(*u * u->adjoint());
      used += rc.projectors.back();
    }
  }

  if (design.u && modes.eigenvalues[*design.u] != 0.0) {
    const DenseMatrix& lu = ls[*design.u];
    const DenseMatrix rem = DenseMatrix::identity(dim) - used;
    const DenseMatrix lup = lu * p;
    const auto u = linalg::polar_unitary(DenseMatrix(rem * lup), 1e-10 * std::max(1.0, frobenius_norm(lup)));
    if (u) {
      rc.kraus_ops.push_back(u->adjoint());
      rc.projectors.push_back(*u * u->adjoint());
    }
  }

  for (std::size_t a = 0; a < rc.projectors.size(); ++a)
    for (std::size_t b = a + 1; b < rc.projectors.size(); ++b) {
      const double ov = frobenius_norm(rc.projectors[a] * rc.projectors[b]);
      if (ov > 1e-9) {
        std::ostringstream msg;
        msg << "recovery projectors " << a << " and " << b << " overlap by " << ov;
        throw Error(ErrorKind::DegenerateCode, msg.str());
      }
    }

  rc.completeness = DenseMatrix(dim, dim);
  for (const auto& kop : rc.kraus_ops) rc.completeness += kop.adjoint() * kop;
  if (frobenius_norm(rc.completeness * rc.completeness - rc.completeness) > 1e-9)
    throw Error(ErrorKind::DegenerateCode, "recovery completeness is not a projector");
  return rc;
}

EffectiveQubit effective_dynamics(const CorrelationModel& cm, const QubitDesign& design,
                                  const NoiseModes& modes, const model::RecoveryChannel& recovery) {
  const auto lm = to_lindblad(cm, modes);
  const CodePair& code = design.code;
  const auto jumps = lm.effective_jumps();

  auto hamiltonian_part = [&](const DenseMatrix& e) {
    return recovery.apply(linalg::commutator(lm.hamiltonian, e) * Complex(0.0, -1.0));
  };
  auto dissipative_part = [&](const DenseMatrix& e) {
    DenseMatrix out(e.rows(), e.cols());
    for (const auto& l : jumps) {
      const DenseMatrix ll = l.adjoint() * l;
      out += l * e * l.adjoint() - (ll * e + e * ll) * Complex(0.5);
    }
    return recovery.apply(out);
  };

  // Coefficients of X in the logical basis plus the norm of what lies outside.
  auto logical = [&](const DenseMatrix& x, Complex c[2][2]) {
    DenseMatrix back(x.rows(), x.cols());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const auto& ka = a == 0 ? code.ket0 : code.ket1;
        const auto& kb = b == 0 ? code.ket0 : code.ket1;
        c[a][b] = linalg::inner<Complex>(ka, x * std::span<const Complex>(kb));
        back += code.logical_operator(a, b) * c[a][b];
      }
    return frobenius_norm(x - back);
  };

  Complex gh[2][2][2][2], gd[2][2][2][2];
  double leak = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const DenseMatrix e = code.logical_operator(a, b);
      leak = std::max(leak, logical(hamiltonian_part(e), gh[a][b]));
      leak = std::max(leak, logical(dissipative_part(e), gd[a][b]));
    }

  // Dephasing qubit: G_H(E_01) = -i A' E_01, G_D(E_01) = -(B/T2) E_01, and
  // diagonal logical operators are fixed points.
  const double a_signed = -gh[0][1][0][1].imag();
  const double rate = -gd[0][1][0][1].real();
  double resid = leak;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          Complex ph = 0.0, pd = 0.0;
          if (a == c && b == d && a != b) {
            ph = Complex(0.0, a == 0 ? -a_signed : a_signed);
            pd = -rate;
          }
          resid = std::max(resid, std::abs(gh[a][b][c][d] - ph));
          resid = std::max(resid, std::abs(gd[a][b][c][d] - pd));
        }
  const double scale = std::max({1.0, std::abs(a_signed), std::abs(rate)});
  if (resid > 1e-8 * scale) {
    std::ostringstream msg;
    msg << "effective generator deviates from dephasing form by " << resid;
    throw Error(ErrorKind::NotDephasingForm, msg.str());
  }

  EffectiveQubit eq;
  eq.a = std::abs(a_signed);
  eq.b = rate * cm.t2;
  eq.h_eff_coeff = 0.5 * a_signed;
  eq.l_eff_coeff = std::sqrt(std::max(0.0, eq.b) / (2.0 * cm.t2));
  eq.residual = resid;

  const double a_pred = std::abs(linalg::dot(cm.h, design.b));
  double b_pred = 0.0;
  for (std::size_t j = 0; j < modes.count(); ++j) {
    const double o = linalg::dot(modes.mode(j), design.b);
    b_pred += modes.eigenvalues[j] * o * o;
  }
  if (std::abs(eq.a - a_pred) > 1e-8 * std::max(1.0, a_pred) ||
      std::abs(eq.b - b_pred) > 1e-8 * std::max(1.0, b_pred)) {
    std::ostringstream msg;
    msg << "composed (A, B) = (" << eq.a << ", " << eq.b << ") but design predicts (" << a_pred
        << ", " << b_pred << ")";
    throw Error(ErrorKind::NotDephasingForm, msg.str());
  }
  return eq;
}

double qubit_sensitivity(double a, double b, double t2) {
  if (b <= 0.0) return 0.0;
  return std::sqrt(b) / a * std::sqrt(2.0 * std::numbers::e / t2);
}

SensitivityReport sensitivity_report(const CorrelationModel& cm) {
  const auto m = decompose_modes(cm);
  SensitivityReport r;
  r.n = cm.n();
  r.hnls = m.hnls;
  r.eta1 = std::sqrt(2.0 * std::numbers::e / cm.t2);
  r.eta_par = r.eta1 / std::sqrt(static_cast<double>(r.n));
  double ghz = 0.0;
  for (std::size_t j = 0; j < m.count(); ++j) ghz += m.eigenvalues[j] * m.overlaps[j] * m.overlaps[j];
  r.eta_ghz = std::sqrt(ghz) / static_cast<double>(r.n) * r.eta1;
  r.unit_gaps = std::all_of(cm.h.begin(), cm.h.end(), [](double x) { return x == 1.0; });

  r.best_u = best_mode(m, h_norm(cm));
  if (m.eigenvalues[r.best_u] == 0.0) {
    r.heisenberg = true;
    r.eta_qec = 0.0;
  } else {
    r.eta_qec = r.eta1 * std::sqrt(m.eigenvalues[r.best_u]) / std::abs(m.overlaps[r.best_u]);
  }
  return r;
}

CorrelationModel ring_model(std::size_t n, const std::vector<double>& alpha, double t2) {
  if (n < 3) throw Error(ErrorKind::NTooSmall, "ring needs N >= 3");
  if (alpha.size() != n / 2)
    throw Error(ErrorKind::DimensionMismatch,
                "ring of " + std::to_string(n) + " needs " + std::to_string(n / 2) + " alpha values");
  CorrelationModel cm;
  cm.h.assign(n, 1.0);
  cm.t2 = t2;
  cm.c = RealMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t diff = j > k ? j - k : k - j;
      const std::size_t dist = std::min(diff, n - diff);
      cm.c(j, k) = dist == 0 ? 1.0 : alpha[dist - 1];
    }
  cm.validate();
  return cm;
}

model::LindbladModel to_lindblad(const CorrelationModel& cm, const NoiseModes& modes) {
  model::LindbladModel lm;
  lm.dim = std::size_t{1} << cm.n();
  lm.hamiltonian = z_operator(cm.h) * Complex(0.5);
  for (std::size_t j = 0; j < modes.count(); ++j) {
    if (modes.eigenvalues[j] == 0.0) continue;
    lm.jumps.push_back(z_operator(modes.mode(j)) *
                       Complex(std::sqrt(modes.eigenvalues[j] / (2.0 * cm.t2))));
  }
  return lm;
}

}  // namespace qecsense::dephasing

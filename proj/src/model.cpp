#include "qecsense/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace qecsense::model {

using linalg::frobenius_norm;
using linalg::max_abs;

void LindbladModel::validate() const {
  if (dim == 0) throw Error(ErrorKind::InvariantError, "dimension must be at least 1");
  auto check = [this](const DenseMatrix& m, const std::string& name) {
    if (m.rows() != dim || m.cols() != dim)
      throw Error(ErrorKind::DimensionMismatch, name + " is not " + std::to_string(dim) + "x" +
                                                    std::to_string(dim));
    for (const Complex& z : m.data())
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorKind::InvariantError, name + " has non-finite entries");
  };
  check(hamiltonian, "hamiltonian");
  if (linalg::hermiticity_defect(hamiltonian) > 1e-12 * std::max(1.0, frobenius_norm(hamiltonian)))
    throw Error(ErrorKind::NotHermitian, "hamiltonian is not Hermitian");
  for (std::size_t i = 0; i < jumps.size(); ++i) check(jumps[i], "jumps[" + std::to_string(i) + "]");
  if (!rates.empty()) {
    if (rates.size() != jumps.size())
      throw Error(ErrorKind::DimensionMismatch, "rates and jumps differ in length");
    for (double r : rates)
      if (!(r >= 0.0) || !std::isfinite(r))
        throw Error(ErrorKind::InvariantError, "rates must be finite and nonnegative");
  }
}

DenseMatrix LindbladModel::effective_jump(std::size_t i) const {
  if (rates.empty()) return jumps.at(i);
  return jumps.at(i) * Complex(std::sqrt(rates.at(i)));
}

std::vector<DenseMatrix> LindbladModel::effective_jumps() const {
  std::vector<DenseMatrix> out;
  out.reserve(jumps.size());
  for (std::size_t i = 0; i < jumps.size(); ++i) out.push_back(effective_jump(i));
  return out;
}

namespace {

std::vector<double> flatten(const DenseMatrix& m) {
  std::vector<double> v;
  v.reserve(2 * m.data().size());
  for (const Complex& z : m.data()) {
    v.push_back(z.real());
    v.push_back(z.imag());
  }
  return v;
}

DenseMatrix unflatten(const std::vector<double>& v, std::size_t dim) {
  DenseMatrix m(dim, dim);
  auto data = m.data();
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = Complex(v[2 * k], v[2 * k + 1]);
  return m;
}

DenseMatrix hermitian_part(const DenseMatrix& a) { return (a + a.adjoint()) * Complex(0.5); }
DenseMatrix antihermitian_part(const DenseMatrix& a) {
  return (a - a.adjoint()) * Complex(0.0, -0.5);
}

}  // namespace

DenseMatrix LindbladSpan::project(const DenseMatrix& a) const {
  DenseMatrix out(dim, dim);
  for (const auto& b : basis) out += b * Complex(linalg::hs_inner(b, a).real());
  return out;
}

LindbladSpan span_of(const std::vector<DenseMatrix>& generators, std::size_t dim,
                     double rank_tol) {
  // Real Gram-Schmidt on (re, im)-flattened Hermitian matrices keeps the
  // combination coefficients real, which is what the real span requires.
  std::vector<std::vector<double>> flat;
  flat.push_back(flatten(DenseMatrix::identity(dim)));
  for (const auto& g : generators) {
    flat.push_back(flatten(hermitian_part(g)));
    flat.push_back(flatten(antihermitian_part(g)));
  }
  LindbladSpan span;
  span.dim = dim;
  for (const auto& v : linalg::orthonormalize<double>(flat, rank_tol))
    span.basis.push_back(unflatten(v, dim));
  return span;
}

LindbladSpan build_span(const LindbladModel& model, double rank_tol) {
  model.validate();
  const auto ls = model.effective_jumps();
  std::vector<DenseMatrix> gens = ls;
  for (const auto& li : ls) {
    const auto lid = li.adjoint();
    for (const auto& lj : ls) gens.push_back(lid * lj);
  }
  return span_of(gens, model.dim, rank_tol);
}

HnlsReport hnls_check(const DenseMatrix& hamiltonian, const LindbladSpan& span, double rank_tol) {
  HnlsReport r;
  r.residual_norm = frobenius_norm(hamiltonian - span.project(hamiltonian));
  r.holds = r.residual_norm > rank_tol * std::max(1.0, frobenius_norm(hamiltonian));
  return r;
}

HnlsReport hnls_check(const LindbladModel& model, double rank_tol) {
  return hnls_check(model.hamiltonian, build_span(model, rank_tol), rank_tol);
}

CodePair CodePair::from_kets(std::vector<Complex> k0, std::vector<Complex> k1) {
  if (k0.size() != k1.size() || k0.empty())
    throw Error(ErrorKind::DimensionMismatch, "logical states differ in dimension");
  const double n0 = linalg::norm2<Complex>(k0);
  const double n1 = linalg::norm2<Complex>(k1);
  const double ov = std::abs(linalg::inner<Complex>(k0, k1));
  if (std::abs(n0 - 1.0) > 1e-10 || std::abs(n1 - 1.0) > 1e-10 || ov > 1e-10)
    throw Error(ErrorKind::InvariantError, "logical states are not orthonormal");
  CodePair c;
  c.projector = linalg::outer<Complex>(k0, k0) + linalg::outer<Complex>(k1, k1);
  c.ket0 = std::move(k0);
  c.ket1 = std::move(k1);
  return c;
}

DenseMatrix CodePair::logical_z() const {
  return linalg::outer<Complex>(ket0, ket0) - linalg::outer<Complex>(ket1, ket1);
}

DenseMatrix CodePair::logical_operator(int a, int b) const {
  return linalg::outer<Complex>(a == 0 ? ket0 : ket1, b == 0 ? ket0 : ket1);
}

DenseMatrix RecoveryChannel::apply(const DenseMatrix& rho) const {
  DenseMatrix out(rho.rows(), rho.cols());
  for (const auto& k : kraus_ops) out += k * rho * k.adjoint();
  return out;
}

DiagonalModel diagonalize_commuting(const LindbladModel& model, std::uint64_t seed) {
  model.validate();
  const std::size_t d = model.dim;
  const auto ls = model.effective_jumps();

  std::vector<const DenseMatrix*> ops{&model.hamiltonian};
  for (const auto& l : ls) ops.push_back(&l);
  for (std::size_t a = 0; a < ops.size(); ++a) {
    for (std::size_t b = a + 1; b < ops.size(); ++b) {
      const double scale = std::max(1.0, frobenius_norm(*ops[a]) * frobenius_norm(*ops[b]));
      const double c = frobenius_norm(linalg::commutator(*ops[a], *ops[b]));
      if (c > 1e-10 * scale) {
        auto name = [](std::size_t k) { return k == 0 ? std::string("H") : "L" + std::to_string(k - 1); };
        std::ostringstream msg;
        msg << "[" << name(a) << ", " << name(b) << "] has Frobenius norm " << c;
        throw Error(ErrorKind::NotCommuting, msg.str());
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.1, 1.0);
  for (int attempt = 0; attempt < 5; ++attempt) {
    DenseMatrix mix = model.hamiltonian;
    for (const auto& l : ls) {
      mix += hermitian_part(l) * Complex(coef(rng) * M_SQRT2);
      mix += antihermitian_part(l) * Complex(coef(rng) * M_PI / 3.0);
    }
    const auto eig = linalg::eigh(mix);
    const DenseMatrix& u = eig.eigenvectors;
    const DenseMatrix ud = u.adjoint();

    bool diagonal = true;
    auto diag_of = [&](const DenseMatrix& a) {
      const DenseMatrix t = ud * a * u;
      double off = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (i != j) off = std::max(off, std::abs(t(i, j)));
      if (off > 1e-8 * std::max(1.0, max_abs(a))) diagonal = false;
      return t.diag();
    };

    DiagonalModel out;
    out.basis = u;
    for (const Complex& z : diag_of(model.hamiltonian)) out.h.push_back(z.real());
    for (const auto& l : ls) out.jump_diagonals.push_back(diag_of(l));
    if (!diagonal) continue;

    const std::size_t n = ls.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Complex> p(d);
        for (std::size_t k = 0; k < d; ++k)
          p[k] = std::conj(out.jump_diagonals[i][k]) * out.jump_diagonals[j][k];
        out.product_diagonals.push_back(std::move(p));
      }

    std::vector<std::vector<double>> gens{std::vector<double>(d, 1.0)};
    auto push_parts = [&](const std::vector<Complex>& v) {
      std::vector<double> re(d), im(d);
      for (std::size_t k = 0; k < d; ++k) {
        re[k] = v[k].real();
        im[k] = v[k].imag();
      }
      gens.push_back(std::move(re));
      gens.push_back(std::move(im));
    };
    for (const auto& v : out.jump_diagonals) push_parts(v);
    for (const auto& v : out.product_diagonals) push_parts(v);
    out.span_diagonal = linalg::orthonormalize<double>(gens);
    return out;
  }
  throw Error(ErrorKind::NotCommuting, "no common eigenbasis found after 5 attempts");
}

DesignResult design_code_theorem1(const DiagonalModel& diag) {
  const std::size_t d = diag.h.size();
  const auto sol = lp::solve_l1({diag.h, diag.span_diagonal, 2.0});
  if (sol.objective_value <= 1e-9)
    throw Error(ErrorKind::HnlsViolated, "h lies in the diagonal Lindblad span (LP value " +
                                             std::to_string(sol.objective_value) + ")");

  std::vector<double> plus(d), minus(d);
  double sp = 0.0, sm = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    plus[i] = std::max(0.0, sol.argmax[i]);
    minus[i] = std::max(0.0, -sol.argmax[i]);
    sp += plus[i];
    sm += minus[i];
  }
  std::vector<Complex> a0(d), a1(d);
  for (std::size_t i = 0; i < d; ++i) {
    a0[i] = std::sqrt(plus[i] / sp);
    a1[i] = std::sqrt(minus[i] / sm);
  }
  auto to_lab = [&](const std::vector<Complex>& a) { return diag.basis * std::span<const Complex>(a); };

  DesignResult out;
  out.code = CodePair::from_kets(to_lab(a0), to_lab(a1));
  out.design_vector = sol.argmax;
  out.lp_value = sol.objective_value;
  out.dual_value = sol.dual_value;
  double gap = 0.0;
  for (std::size_t i = 0; i < d; ++i) gap += (plus[i] / sp - minus[i] / sm) * diag.h[i];
  out.qfi_coeff = gap * gap;
  return out;
}

namespace {

// Logical block G_xy = ⟨x_L|A|y_L⟩. Since the kets are orthonormal,
// ||PAP − tr(PAP)P/2||_F equals ||G − tr(G)I/2||_F.
double block_deviation(const CodePair& code, const DenseMatrix& a) {
  const auto a0 = a * std::span<const Complex>(code.ket0);
  const auto a1 = a * std::span<const Complex>(code.ket1);
  const Complex g00 = linalg::inner<Complex>(code.ket0, a0);
  const Complex g01 = linalg::inner<Complex>(code.ket0, a1);
  const Complex g10 = linalg::inner<Complex>(code.ket1, a0);
  const Complex g11 = linalg::inner<Complex>(code.ket1, a1);
  const Complex half = 0.5 * (g00 - g11);
  return std::sqrt(2.0 * std::norm(half) + std::norm(g01) + std::norm(g10));
}

}  // namespace

double kl_deviation(const CodePair& code, const DenseMatrix& a) {
  return block_deviation(code, a) / std::max(1.0, max_abs(a));
}

double logical_gap(const CodePair& code, const DenseMatrix& hamiltonian) {
  const auto h0 = hamiltonian * std::span<const Complex>(code.ket0);
  const auto h1 = hamiltonian * std::span<const Complex>(code.ket1);
  return (linalg::inner<Complex>(code.ket0, h0) - linalg::inner<Complex>(code.ket1, h1)).real();
}

KlReport verify_kl(const CodePair& code, const std::vector<DenseMatrix>& linear_ops,
                   const std::vector<DenseMatrix>& quadratic_ops, const DenseMatrix& hamiltonian,
                   const KlTolerances& tol) {
  const std::size_t d = code.dim();
  auto check_dim = [d](const DenseMatrix& m) {
    if (m.rows() != d || m.cols() != d)
      throw Error(ErrorKind::DimensionMismatch, "operator dimension differs from code dimension");
  };
  KlReport r;
  for (const auto& a : linear_ops) {
    check_dim(a);
    r.linear_deviation = std::max(r.linear_deviation, kl_deviation(code, a));
  }
  for (const auto& a : quadratic_ops) {
    check_dim(a);
    r.quadratic_deviation = std::max(r.quadratic_deviation, kl_deviation(code, a));
  }
  check_dim(hamiltonian);
  r.signal = block_deviation(code, hamiltonian);
  r.pass = r.linear_deviation <= tol.deviation && r.quadratic_deviation <= tol.deviation &&
           r.signal > tol.signal;
  return r;
}

KlReport verify_kl(const CodePair& code, const LindbladModel& model, const KlTolerances& tol) {
  const auto ls = model.effective_jumps();
  std::vector<DenseMatrix> quad;
  for (const auto& li : ls) {
    const auto lid = li.adjoint();
    for (const auto& lj : ls) quad.push_back(lid * lj);
  }
  return verify_kl(code, ls, quad, model.hamiltonian, tol);
}

}  // namespace qecsense::model

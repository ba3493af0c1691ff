#pragma once

#include <cstdint>
#include <vector>

#include "qecsense/linalg.hpp"
#include "qecsense/lp.hpp"

namespace qecsense::model {

using linalg::Complex;
using linalg::DenseMatrix;

// dρ/dt = -i[ωH, ρ] + Σ_i r_i (L_i ρ L_i† - ½{L_i†L_i, ρ})
struct LindbladModel {
  std::size_t dim = 0;
  DenseMatrix hamiltonian;
  std::vector<DenseMatrix> jumps;
  std::vector<double> rates;  // empty means every rate is 1

  // Throws DimensionMismatch / NotHermitian / InvariantError.
  void validate() const;
  // sqrt(r_i) L_i
  DenseMatrix effective_jump(std::size_t i) const;
  std::vector<DenseMatrix> effective_jumps() const;
};

// Frobenius-orthonormal Hermitian basis.
struct LindbladSpan {
  std::size_t dim = 0;
  std::vector<DenseMatrix> basis;

  DenseMatrix project(const DenseMatrix& a) const;
};

// Real span of I together with the Hermitian and anti-Hermitian parts of
// every generator.
LindbladSpan span_of(const std::vector<DenseMatrix>& generators, std::size_t dim,
                     double rank_tol = 1e-10);

LindbladSpan build_span(const LindbladModel& model, double rank_tol = 1e-10);

struct HnlsReport {
  bool holds = false;
  double residual_norm = 0.0;
};

HnlsReport hnls_check(const DenseMatrix& hamiltonian, const LindbladSpan& span,
                      double rank_tol = 1e-10);
HnlsReport hnls_check(const LindbladModel& model, double rank_tol = 1e-10);

struct CodePair {
  std::vector<Complex> ket0;
  std::vector<Complex> ket1;
  DenseMatrix projector;

  // Builds P and checks orthonormality to 1e-10 (throws InvariantError).
  static CodePair from_kets(std::vector<Complex> ket0, std::vector<Complex> ket1);

  std::size_t dim() const { return ket0.size(); }
  DenseMatrix logical_z() const;
  // |a_L><b_L| for a, b in {0, 1}
  DenseMatrix logical_operator(int a, int b) const;
};

// Measure-and-correct channel R(ρ) = Σ K ρ K†. Σ K†K is a projector onto the
// codespace plus its error spaces; the simulator completes it on the rest.
struct RecoveryChannel {
  std::vector<DenseMatrix> kraus_ops;
  std::vector<DenseMatrix> projectors;  // P first, then the error-space projectors
  DenseMatrix completeness;             // Σ K†K

  DenseMatrix apply(const DenseMatrix& rho) const;
};

struct DiagonalModel {
  DenseMatrix basis;  // columns are the common eigenvectors
  std::vector<double> h;
  std::vector<std::vector<Complex>> jump_diagonals;     // l_i
  std::vector<std::vector<Complex>> product_diagonals;  // l_ij, index i * n + j
  std::vector<std::vector<double>> span_diagonal;       // orthonormal basis of the diagonal span
};

DiagonalModel diagonalize_commuting(const LindbladModel& model, std::uint64_t seed = 0x5eed);

struct DesignResult {
  CodePair code;
  std::vector<double> design_vector;
  double qfi_coeff = 0.0;  // F(t) / t²
  double lp_value = 0.0;
  double dual_value = 0.0;
};

// Throws HnlsViolated when the LP value is at most 1e-9.
DesignResult design_code_theorem1(const DiagonalModel& diag);

struct KlTolerances {
  double deviation = 1e-9;
  double signal = 1e-9;
};

struct KlReport {
  double linear_deviation = 0.0;     // max over P A P for A in the first-order set
  double quadratic_deviation = 0.0;  // max over P A P for A in the second-order set
  double signal = 0.0;               // ||P H P - tr(P H P) P / 2||_F
  bool pass = false;
};

// Deviation of P A P from a multiple of P, normalized by max(1, max|A_ij|).
double kl_deviation(const CodePair& code, const DenseMatrix& a);

KlReport verify_kl(const CodePair& code, const std::vector<DenseMatrix>& linear_ops,
                   const std::vector<DenseMatrix>& quadratic_ops, const DenseMatrix& hamiltonian,
                   const KlTolerances& tol = {});

// Uses L_i for the first-order set and L_i† L_j for the second-order set.
KlReport verify_kl(const CodePair& code, const LindbladModel& model, const KlTolerances& tol = {});

// Extracts PHP as (⟨0|H|0⟩ − ⟨1|H|1⟩), the logical-Z coefficient times two.
double logical_gap(const CodePair& code, const DenseMatrix& hamiltonian);

}  // namespace qecsense::model

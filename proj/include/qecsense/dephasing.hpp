#pragma once

#include <optional>
#include <vector>

#include "qecsense/linalg.hpp"
#include "qecsense/model.hpp"

namespace qecsense::dephasing {

using linalg::DenseMatrix;
using linalg::RealMatrix;

// H = ½ h·Z with pairwise dephasing correlations C and a common T2.
struct CorrelationModel {
  std::vector<double> h;
  RealMatrix c;
  double t2 = 1.0;

  std::size_t n() const { return h.size(); }
  // Throws DimensionMismatch, NotUnitDiagonal, NotPSD or InvariantError.
  void validate() const;
};

struct NoiseModes {
  std::vector<double> eigenvalues;  // ascending, rank-truncated values are exactly 0
  RealMatrix modes;                 // orthonormal columns v_j
  std::vector<double> overlaps;     // v_j · h
  bool hnls = false;                // h has a component in ker(C)

  std::size_t count() const { return eigenvalues.size(); }
  std::vector<double> mode(std::size_t j) const { return modes.column(j); }
  // sqrt(λ_j) v_j·Z on the 2^N-dimensional register.
  DenseMatrix jump(std::size_t j) const;
};

// Eigenmodes of C. The Jacobi basis is kept as is unless align_degenerate is
// set, in which case each degenerate block is rotated so only its first vector
// overlaps h.
NoiseModes decompose_modes(const CorrelationModel& cm, bool align_degenerate = false);

enum class DesignKind { Exact, Approximate, BeyondHnls };

struct QubitDesign {
  DesignKind kind = DesignKind::Exact;
  std::vector<double> b;
  std::vector<double> theta;  // ½ arccos b
  double gamma = 1.0;
  double gamma_max = 1.0;
  std::optional<std::size_t> u;
  model::CodePair code;
  double qfi_coeff = 0.0;  // (h·b)², F/t² under the recovered unitary dynamics
};

// Diagonal of Σ_j v_j Z_j; qubit 1 is the most significant bit.
std::vector<double> z_diagonal(const std::vector<double>& v);
DenseMatrix z_operator(const std::vector<double>& v);
DenseMatrix zz_operator(std::size_t n, std::size_t j, std::size_t k);

// ⊗(cosθ_j|0⟩ + i sinθ_j|1⟩) and its global bit flip.
model::CodePair phase_code(const std::vector<double>& b);

QubitDesign design_exact(const CorrelationModel& cm);
QubitDesign design_approx(const CorrelationModel& cm, double gamma);
QubitDesign design_approx_max(const CorrelationModel& cm);
QubitDesign design_beyond_hnls(const CorrelationModel& cm, std::optional<double> gamma = std::nullopt,
                               std::optional<std::size_t> u = std::nullopt,
                               const NoiseModes* modes = nullptr);

// Index minimizing sqrt(λ)/|v·h|; ties go to smaller λ, then lower index.
std::size_t best_mode(const NoiseModes& modes, double h_norm);

model::RecoveryChannel build_recovery(const QubitDesign& design, const NoiseModes& modes);

struct EffectiveQubit {
  double a = 0.0;            // phase gain: logical gap is A ω
  double b = 0.0;            // dephasing multiplier: logical T2 is T2 / B
  double h_eff_coeff = 0.0;  // H_eff = h_eff_coeff Z_L
  double l_eff_coeff = 0.0;  // L_eff = l_eff_coeff Z_L
  double residual = 0.0;     // largest deviation from the dephasing-qubit form
};

// Composes R∘L∘P on the logical operator basis and reduces it to a dephasing
// qubit. Throws NotDephasingForm if the composition leaks or disagrees with
// A = |h·b|, B = bᵀCb.
EffectiveQubit effective_dynamics(const CorrelationModel& cm, const QubitDesign& design,
                                  const NoiseModes& modes, const model::RecoveryChannel& recovery);

// (√B / A) √(2e/T2); zero when B vanishes.
double qubit_sensitivity(double a, double b, double t2);

struct SensitivityReport {
  std::size_t n = 0;
  double eta1 = 0.0;
  double eta_par = 0.0;
  double eta_ghz = 0.0;
  double eta_qec = 0.0;
  std::size_t best_u = 0;
  bool hnls = false;
  bool heisenberg = false;  // η_QEC vanishes: a zero-λ mode overlaps h
  bool unit_gaps = false;   // every h_j equals 1
};

SensitivityReport sensitivity_report(const CorrelationModel& cm);

// Circulant C_jk = α_dist(j,k), α_0 = 1, h = 1.
CorrelationModel ring_model(std::size_t n, const std::vector<double>& alpha, double t2 = 1.0);

// H = ½ h·Z, jumps sqrt(λ_j / 2T2) v_j·Z for nonzero λ_j.
model::LindbladModel to_lindblad(const CorrelationModel& cm, const NoiseModes& modes);

}  // namespace qecsense::dephasing

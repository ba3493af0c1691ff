#pragma once

#include <vector>

#include "qecsense/linalg.hpp"
#include "qecsense/model.hpp"

namespace qecsense::bosonic {

using linalg::DenseMatrix;

// Single mode truncated at M bosons; the estimand multiplies (a†a)^s.
struct FockModel {
  int m = 0;
  int s = 2;
  double kappa = 1.0;
  std::vector<double> zeta;  // coefficients of (a†a)^i, i = 1..s

  std::size_t dim() const { return static_cast<std::size_t>(m) + 1; }
  void validate() const;
};

DenseMatrix annihilation(int m);
DenseMatrix number_power(int m, int power);

// Generators whose span must be corrected: a and (a†a)^i for 1 <= i < s.
std::vector<DenseMatrix> modified_span_generators(const FockModel& model);
model::LindbladSpan bosonic_span(const FockModel& model);

// Lindblad model with H = Σ ζ_i (a†a)^i (ζ_s defaulting to 1) and loss sqrt(κ) a.
model::LindbladModel to_lindblad(const FockModel& model);

struct ChebyshevCode {
  std::vector<int> supports;   // ⌊M sin²(kπ/2s)⌋, k = 0..s
  std::vector<double> weights; // |c̃_k|², even k in |0_L⟩, odd k in |1_L⟩
  model::CodePair code;
};

// Supports ⌊M sin²(kπ/2s)⌋ with a guard against sin² landing just below an integer.
std::vector<int> chebyshev_supports(int m, int s);

// Throws TruncationTooSmall when M sin²(π/s) < 4, supports collide or sit
// closer than 3, or a weight is not positive.
ChebyshevCode chebyshev_code(const FockModel& model);

// Σ (−1)^k w_k m_k^s = ⟨0_L|(a†a)^s|0_L⟩ − ⟨1_L|(a†a)^s|1_L⟩
double signal(const std::vector<int>& supports, const std::vector<double>& weights, int s);

struct QfiReport {
  double f_coeff = 0.0;      // F / t²
  double f_opt_bound = 0.0;  // 16 (M/4)^{2s}
  double ratio = 0.0;
};

QfiReport chebyshev_qfi(const ChebyshevCode& code, const FockModel& model);

struct Lemma1Report {
  int s = 0;
  double max_low_order = 0.0;  // max |sum| over 1 <= i <= s−1
  double top_order = 0.0;      // sum at i = s
  double top_expected = 0.0;   // (−1)^s / 2^{2s−2}
  bool pass = false;
};

Lemma1Report lemma1_check(int s);

struct BinomialCode {
  std::vector<int> supports;  // kM/s
  std::vector<double> weights;
  model::CodePair code;
};

// Throws NotDivisible unless s divides M, TruncationTooSmall when M/s < 2.
BinomialCode binomial_code(const FockModel& model);

struct BosonicLpResult {
  model::DesignResult design;
  double signal = 0.0;                // M^s times the LP objective
  double unrestricted_signal = 0.0;   // before distance pruning
  std::vector<int> excluded;          // levels removed by the distance rule
};

// Diagonal LP over Fock populations. Supports closer than 3 are pruned and
// the program re-solved. Throws Infeasible when nothing remains.
BosonicLpResult lp_code_bosonic(const FockModel& model);

model::KlReport verify_bosonic(const model::CodePair& code, const FockModel& model,
                               const model::KlTolerances& tol = {});

}  // namespace qecsense::bosonic

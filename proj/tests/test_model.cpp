#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "qecsense/dephasing.hpp"
#include "qecsense/model.hpp"

using namespace qecsense;
using namespace qecsense::model;
using linalg::Complex;

namespace {

DenseMatrix pauli_z() { return DenseMatrix::from_rows({{1, 0}, {0, -1}}); }
DenseMatrix pauli_x() { return DenseMatrix::from_rows({{0, 1}, {1, 0}}); }

DenseMatrix diag(const std::vector<double>& d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix annihilation(std::size_t m) {
  DenseMatrix a(m + 1, m + 1);
  for (std::size_t k = 1; k <= m; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

// Gell-Mann fixture embedded in four dimensions.
LindbladModel gell_mann() {
  const Complex i(0, 1);
  auto embed = [](std::vector<std::vector<Complex>> rows) {
    DenseMatrix m(4, 4);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) m(r, c) = rows[r][c];
    return m;
  };
  LindbladModel lm;
  lm.dim = 4;
  lm.hamiltonian = embed({{0, 0, -i}, {0, 0, 0}, {i, 0, 0}});
  lm.jumps.push_back(embed({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}));
  lm.jumps.push_back(embed({{0, -i, 0}, {i, 0, 0}, {0, 0, 0}}));
  lm.jumps.push_back(embed({{0, 0, 1}, {0, 0, 0}, {1, 0, 0}}));
  return lm;
}

LindbladModel diagonal_model(const std::vector<double>& h, const std::vector<std::vector<double>>& ls) {
  LindbladModel lm;
  lm.dim = h.size();
  lm.hamiltonian = diag(h);
  for (const auto& l : ls) lm.jumps.push_back(diag(l));
  return lm;
}

}  // namespace

TEST(BuildSpan, QubitDephasing) {
  const auto span = build_span({2, DenseMatrix(2, 2), {pauli_z()}, {}});
  EXPECT_EQ(span.basis.size(), 2u);
  EXPECT_LE(frobenius_norm(span.project(pauli_z()) - pauli_z()), 1e-12);
}

TEST(BuildSpan, NoJumpsIsIdentityOnly) {
  const auto span = build_span({3, DenseMatrix(3, 3), {}, {}});
  ASSERT_EQ(span.basis.size(), 1u);
  EXPECT_LE(frobenius_norm(span.project(DenseMatrix::identity(3)) - DenseMatrix::identity(3)), 1e-12);
}

TEST(BuildSpan, LossContainsNumberOperator) {
  const std::size_t m = 5;
  const auto a = annihilation(m);
  const auto span = build_span({m + 1, DenseMatrix(m + 1, m + 1), {a}, {}});
  const DenseMatrix n = a.adjoint() * a;
  const DenseMatrix x = a + a.adjoint();
  EXPECT_LE(frobenius_norm(span.project(n) - n), 1e-10);
  EXPECT_LE(frobenius_norm(span.project(x) - x), 1e-10);
  EXPECT_EQ(span.basis.size(), 4u);
  for (std::size_t i = 0; i < span.basis.size(); ++i) {
    EXPECT_LE(hermiticity_defect(span.basis[i]), 1e-12);
    for (std::size_t j = 0; j < span.basis.size(); ++j)
      EXPECT_NEAR(linalg::hs_inner(span.basis[i], span.basis[j]).real(), i == j ? 1.0 : 0.0, 1e-10);
  }
}

TEST(HnlsCheck, GellMannFixtureHolds) {
  const auto r = hnls_check(gell_mann());
  EXPECT_TRUE(r.holds);
  EXPECT_GT(r.residual_norm, 0.1);
}

TEST(HnlsCheck, HamiltonianEqualToJumpFails) {
  const auto r = hnls_check({2, pauli_z(), {pauli_z()}, {}});
  EXPECT_FALSE(r.holds);
  EXPECT_LE(r.residual_norm, 1e-12);
}

TEST(HnlsCheck, FullRankDephasingViolates) {
  dephasing::CorrelationModel cm{{1, 0.5, -0.3}, linalg::RealMatrix::identity(3), 1.0};
  cm.c(0, 1) = cm.c(1, 0) = 0.2;
  const auto modes = dephasing::decompose_modes(cm);
  EXPECT_FALSE(modes.hnls);
  EXPECT_FALSE(hnls_check(dephasing::to_lindblad(cm, modes)).holds);
}

TEST(Diagonalize, AlreadyDiagonal) {
  const auto d = diagonalize_commuting(diagonal_model({3, 1, -1}, {{1, 0, 0}}));
  auto h = d.h;
  std::sort(h.begin(), h.end());
  EXPECT_NEAR(h[0], -1, 1e-12);
  EXPECT_NEAR(h[2], 3, 1e-12);
}

TEST(Diagonalize, RotatedCommutingPair) {
  // H and L share the eigenbasis of X.
  LindbladModel lm{2, pauli_x() * Complex(0.7), {pauli_x() + DenseMatrix::identity(2)}, {}};
  const auto d = diagonalize_commuting(lm);
  const DenseMatrix back = d.basis * diag(d.h) * d.basis.adjoint();
  EXPECT_LE(frobenius_norm(back - lm.hamiltonian), 1e-8);
}

TEST(Diagonalize, NonCommutingThrows) {
  try {
    diagonalize_commuting({2, pauli_x(), {pauli_z()}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotCommuting);
    EXPECT_NE(std::string(e.what()).find("[H, L0]"), std::string::npos);
  }
}

TEST(CommutingDesign, TwoLevelNoNoise) {
  const auto d = diagonalize_commuting(diagonal_model({1, -1}, {}));
  const auto r = design_code_theorem1(d);
  EXPECT_NEAR(r.qfi_coeff, 4.0, 1e-12);
  EXPECT_TRUE(verify_kl(r.code, diagonal_model({1, -1}, {})).pass);
}

TEST(CommutingDesign, FourLevelAgainstBruteForce) {
  const auto lm = diagonal_model({3, 1, -1, -3}, {{1, 1, -1, -1}});
  const auto d = diagonalize_commuting(lm);
  const auto r = design_code_theorem1(d);
  const double bf = lp::brute_force_lp({d.h, d.span_diagonal, 2.0});
  EXPECT_NEAR(r.lp_value, bf, 1e-9);
  EXPECT_NEAR(r.qfi_coeff, r.dual_value * r.dual_value, 1e-7);
  const auto kl = verify_kl(r.code, lm);
  EXPECT_TRUE(kl.pass);
  EXPECT_LE(kl.linear_deviation, 1e-9);
}

TEST(CommutingDesign, HamiltonianInSpanThrows) {
  try {
    design_code_theorem1(diagonalize_commuting(diagonal_model({1, 2, 3}, {{1, 2, 3}})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HnlsViolated);
  }
}

TEST(CommutingDesign, PermutationInvariant) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  std::vector<double> h(6), l(6);
  for (auto& x : h) x = g(rng);
  for (auto& x : l) x = g(rng);
  const double base = design_code_theorem1(diagonalize_commuting(diagonal_model(h, {l}))).qfi_coeff;
  std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
  std::vector<double> hp(6), lp_(6);
  for (std::size_t i = 0; i < 6; ++i) {
    hp[i] = h[perm[i]];
    lp_[i] = l[perm[i]];
  }
  EXPECT_NEAR(design_code_theorem1(diagonalize_commuting(diagonal_model(hp, {lp_}))).qfi_coeff, base, 1e-9);
}

TEST(CommutingDesign, PureStateQfiMatchesVariance) {
  const auto lm = diagonal_model({3, 1, -1, -3}, {{1, 1, -1, -1}});
  const auto r = design_code_theorem1(diagonalize_commuting(lm));
  std::vector<Complex> plus(4);
  for (std::size_t i = 0; i < 4; ++i) plus[i] = (r.code.ket0[i] + r.code.ket1[i]) / std::sqrt(2.0);
  const auto hp = lm.hamiltonian * std::span<const Complex>(plus);
  const double mean = linalg::inner<Complex>(plus, hp).real();
  const double sq = linalg::inner<Complex>(hp, hp).real();
  EXPECT_NEAR(4 * (sq - mean * mean), r.qfi_coeff, 1e-10);
}

TEST(VerifyKl, GhzFailsUnderSingleQubitZ) {
  std::vector<Complex> k0(8), k1(8);
  k0[0] = 1;
  k1[7] = 1;
  const auto code = CodePair::from_kets(k0, k1);
  const auto r = verify_kl(code, {8, dephasing::z_operator({1, 1, 1}), {dephasing::z_operator({1, 0, 0})}, {}});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.linear_deviation, 0.5);
}

TEST(VerifyKl, DecoherenceFreeSubspacePasses) {
  // L annihilates levels 0 and 1; H separates them.
  const auto lm = diagonal_model({1, -1, 0}, {{0, 0, 1}});
  std::vector<Complex> k0(3), k1(3);
  k0[0] = 1;
  k1[1] = 1;
  const auto r = verify_kl(CodePair::from_kets(k0, k1), lm);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.linear_deviation, 0.0);
  EXPECT_EQ(r.quadratic_deviation, 0.0);
}

TEST(CodePair, RejectsNonOrthogonal) {
  try {
    CodePair::from_kets({1, 0}, {1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvariantError);
  }
}

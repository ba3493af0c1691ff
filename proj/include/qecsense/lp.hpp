#pragma once

#include <cstddef>
#include <vector>

#include "qecsense/linalg.hpp"

namespace qecsense::lp {

// maximize <beta, h>  s.t.  ||beta||_1 <= radius,  <beta, l> = 0 for every row l.
struct L1BallProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> equality_rows;
  double radius = 2.0;
};

// maximize <b, h>  s.t.  ||b||_inf <= 1,  b orthogonal to every vector listed.
struct LInfBallProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> orthogonality_space;
};

struct LPSolution {
  std::vector<double> argmax;
  double objective_value = 0.0;
  // Objective of the feasible dual point reconstructed from the simplex
  // multipliers; an upper bound that meets objective_value at optimality.
  double dual_value = 0.0;
};

// maximize c.x  s.t.  A x = b,  x >= 0.
struct StandardForm {
  linalg::RealMatrix a;
  std::vector<double> b;
  std::vector<double> c;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> duals;  // y with A^T y >= c at optimality
};

// Two-phase tableau simplex with Bland's rule. Rows of A should be linearly
// independent; redundant rows keep a zero artificial in the basis.
SimplexResult simplex_maximize(const StandardForm& problem);

LPSolution solve_l1(const L1BallProgram& program);
LPSolution solve_linf(const LInfBallProgram& program);

// Exhaustive oracle: enumerates every basis of the standard-form problem.
// Throws TooLarge when the dimension or the number of equality rows exceeds 10.
double brute_force_lp(const L1BallProgram& program);
double brute_force_lp(const LInfBallProgram& program);

}  // namespace qecsense::lp

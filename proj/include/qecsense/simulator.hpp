#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qecsense/linalg.hpp"
#include "qecsense/model.hpp"

namespace qecsense::simulator {

using linalg::Complex;
using linalg::DenseMatrix;

struct Schedule {
  double total_time = 1.0;
  double recovery_interval = 1.0;  // Δt; also the sampling interval
  double step = 0.02;              // RK4 step, at most Δt/20
  double omega = 1.0;

  static Schedule with_default_step(double total_time, double interval, double omega);
  std::size_t intervals() const;
  std::size_t steps_per_interval() const;
  void validate() const;
};

// Called at t = 0 and after every recovery interval.
using Observer = std::function<void(double time, const DenseMatrix& rho)>;

// Hermitian to 1e-10, unit trace to 1e-9, eigenvalues ≥ −1e-8.
void validate_density(const DenseMatrix& rho);

DenseMatrix pure_density(std::span<const Complex> psi);

// dρ/dt for the model with the Hamiltonian scaled by ω.
DenseMatrix lindblad_rhs(const model::LindbladModel& model, double omega, const DenseMatrix& rho);

// RK4 between recoveries. With a recovery channel the state is mapped by
// ΣKρK† + P_rem ρ P_rem every Δt, where P_rem = I − ΣK†K. Throws StepTooLarge
// when the trace or positivity drifts by more than 1e-6.
DenseMatrix evolve(const model::LindbladModel& model, const DenseMatrix& rho0, const Schedule& sched,
                   const model::RecoveryChannel* recovery = nullptr, const Observer& observer = {});

// 4t²(⟨H²⟩ − ⟨H⟩²)
double pure_qfi(const DenseMatrix& hamiltonian, std::span<const Complex> psi, double t);

using Bloch = std::array<double, 3>;

// |∂r|² + (r·∂r)²/(1 − |r|²); the second term is dropped when 1 − |r|² ≤ 1e-10.
double mixed_qubit_qfi(const Bloch& r, const Bloch& dr);

struct LogicalState {
  double population = 0.0;  // tr(Pρ)
  Complex rho01;            // ⟨0_L|ρ|1_L⟩ / population
  Bloch bloch{};
};

LogicalState logical_state(const DenseMatrix& rho, const model::CodePair& code);

struct QubitFit {
  double a_fit = 0.0;
  double b_fit = 0.0;
  double phase_rms = 0.0;      // residual of the phase line
  double log_coh_rms = 0.0;    // residual of the log-coherence line
  double min_population = 1.0;
};

// Fits arg ρ01 = −A ω t + c and log|ρ01| = −B t / T2 + c. Throws LeakageTooLarge
// when any state has codespace population below 0.99.
QubitFit logical_qubit_fit(const std::vector<DenseMatrix>& trajectory, const std::vector<double>& times,
                           const model::CodePair& code, double omega, double t2);

struct TrajectoryQfi {
  double qfi = 0.0;
  Bloch bloch{};
  Bloch dbloch{};
  double min_population = 1.0;
};

// Logical-qubit QFI at the final time by a central difference in ω with
// δω = 1e-3 / t. The three trajectories run concurrently.
TrajectoryQfi trajectory_qfi(const model::LindbladModel& model, const DenseMatrix& rho0, const Schedule& sched,
                             const model::RecoveryChannel* recovery, const model::CodePair& code);

}  // namespace qecsense::simulator

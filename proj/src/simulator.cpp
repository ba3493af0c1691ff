#include "qecsense/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <string>

namespace qecsense::simulator {

using linalg::frobenius_norm;

Schedule Schedule::with_default_step(double total_time, double interval, double omega) {
  return {total_time, interval, interval / 50.0, omega};
}

std::size_t Schedule::intervals() const {
  return static_cast<std::size_t>(std::llround(total_time / recovery_interval));
}

std::size_t Schedule::steps_per_interval() const {
  return static_cast<std::size_t>(std::ceil(recovery_interval / step - 1e-9));
}

void Schedule::validate() const {
  if (!(total_time > 0) || !(recovery_interval > 0) || !(step > 0) || !std::isfinite(total_time) ||
      !std::isfinite(omega))
    throw Error(ErrorKind::InvariantError, "schedule times must be positive and finite");
  if (step > recovery_interval / 20.0 * (1 + 1e-12))
    throw Error(ErrorKind::InvariantError, "integrator step exceeds recovery_interval / 20");
  const double ratio = total_time / recovery_interval;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || std::round(ratio) < 1)
    throw Error(ErrorKind::InvariantError, "recovery_interval does not divide total_time");
}

void validate_density(const DenseMatrix& rho) {
  if (!rho.is_square()) throw Error(ErrorKind::NotSquare, "density matrix is not square");
  if (linalg::hermiticity_defect(rho) > 1e-10)
    throw Error(ErrorKind::NotHermitian, "density matrix is not Hermitian");
  if (std::abs(linalg::trace(rho) - Complex(1.0)) > 1e-9)
    throw Error(ErrorKind::InvariantError, "density matrix trace differs from 1");
  if (linalg::eigh(rho).eigenvalues.front() < -1e-8)
    throw Error(ErrorKind::NotPSD, "density matrix has a negative eigenvalue");
}

DenseMatrix pure_density(std::span<const Complex> psi) { return linalg::outer<Complex>(psi, psi); }

namespace {

struct Generator {
  DenseMatrix g;  // ωH − (i/2) Σ L†L
  std::vector<DenseMatrix> ls;
  std::vector<DenseMatrix> lds;
};

Generator make_generator(const model::LindbladModel& model, double omega) {
  Generator gen;
  gen.ls = model.effective_jumps();
  gen.g = model.hamiltonian * Complex(omega);
  for (const auto& l : gen.ls) {
    gen.lds.push_back(l.adjoint());
    gen.g -= (gen.lds.back() * l) * Complex(0.0, 0.5);
  }
  return gen;
}

DenseMatrix apply_generator(const Generator& gen, const DenseMatrix& rho) {
  const Complex mi(0.0, -1.0);
  const DenseMatrix gr = gen.g * rho;
  DenseMatrix out = gr * mi;
  out += gr.adjoint() * Complex(0.0, 1.0);
  for (std::size_t k = 0; k < gen.ls.size(); ++k) out += gen.ls[k] * rho * gen.lds[k];
  return out;
}

bool is_diagonal(const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != Complex(0.0)) return false;
  return true;
}

// RK4 on dρ_ij/dt = g_ij ρ_ij is multiplication by the degree-4 Taylor
// polynomial of h g_ij, so a whole interval collapses to one factor.
DenseMatrix diagonal_interval_factor(const model::LindbladModel& model, double omega, double h,
                                     std::size_t steps) {
  const std::size_t d = model.dim;
  const auto ls = model.effective_jumps();
  std::vector<Complex> e(d);
  std::vector<double> decay(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) e[i] = omega * model.hamiltonian(i, i);
  for (const auto& l : ls)
    for (std::size_t i = 0; i < d; ++i) decay[i] += std::norm(l(i, i));
  DenseMatrix f(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex g = Complex(0.0, -1.0) * (e[i] - std::conj(e[j])) - 0.5 * (decay[i] + decay[j]);
      for (const auto& l : ls) g += l(i, i) * std::conj(l(j, j));
      const Complex z = h * g;
      const Complex step = 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
      f(i, j) = std::pow(step, static_cast<double>(steps));
    }
  return f;
}

}  // namespace

DenseMatrix lindblad_rhs(const model::LindbladModel& model, double omega, const DenseMatrix& rho) {
  return apply_generator(make_generator(model, omega), rho);
}

DenseMatrix evolve(const model::LindbladModel& model, const DenseMatrix& rho0, const Schedule& sched,
                   const model::RecoveryChannel* recovery, const Observer& observer) {
  model.validate();
  sched.validate();
  if (rho0.rows() != model.dim || rho0.cols() != model.dim)
    throw Error(ErrorKind::DimensionMismatch, "initial state dimension differs from model");
  validate_density(rho0);

  const std::size_t d = model.dim;
  const std::size_t intervals = sched.intervals();
  const std::size_t steps = sched.steps_per_interval();
  const double h = sched.recovery_interval / static_cast<double>(steps);

  bool diagonal = is_diagonal(model.hamiltonian);
  for (const auto& l : model.jumps) diagonal = diagonal && is_diagonal(l);
  DenseMatrix factor;
  Generator gen;
  if (diagonal)
    factor = diagonal_interval_factor(model, sched.omega, h, steps);
  else
    gen = make_generator(model, sched.omega);

  DenseMatrix remainder;
  if (recovery) {
    for (const auto& k : recovery->kraus_ops)
      if (k.rows() != d || k.cols() != d)
        throw Error(ErrorKind::DimensionMismatch, "Kraus operator dimension differs from model");
    remainder = DenseMatrix::identity(d);
    for (const auto& k : recovery->kraus_ops) remainder -= k.adjoint() * k;
  }

  DenseMatrix rho = rho0;
  if (observer) observer(0.0, rho);
  for (std::size_t n = 0; n < intervals; ++n) {
    if (diagonal) {
      auto r = rho.data();
      const auto f = factor.data();
      for (std::size_t k = 0; k < r.size(); ++k) r[k] *= f[k];
    } else {
      for (std::size_t s = 0; s < steps; ++s) {
        const DenseMatrix k1 = apply_generator(gen, rho);
        const DenseMatrix k2 = apply_generator(gen, rho + k1 * Complex(h / 2));
        const DenseMatrix k3 = apply_generator(gen, rho + k2 * Complex(h / 2));
        const DenseMatrix k4 = apply_generator(gen, rho + k3 * Complex(h));
        rho += (k1 + k2 * Complex(2.0) + k3 * Complex(2.0) + k4) * Complex(h / 6);
      }
    }
    if (recovery) rho = recovery->apply(rho) + remainder * rho * remainder;
    rho = (rho + rho.adjoint()) * Complex(0.5);

    const double tr = linalg::trace(rho).real();
    const double drift = std::abs(tr - 1.0);
    if (drift > 1e-6 || !std::isfinite(tr))
      throw Error(ErrorKind::StepTooLarge, "trace drifted by " + std::to_string(drift) + " at interval " +
                                               std::to_string(n + 1));
    if (drift <= 1e-8) rho *= Complex(1.0 / tr);
    if (observer) observer(static_cast<double>(n + 1) * sched.recovery_interval, rho);
  }
  const double min_eig = linalg::eigh(rho).eigenvalues.front();
  if (min_eig < -1e-6)
    throw Error(ErrorKind::StepTooLarge, "final state has eigenvalue " + std::to_string(min_eig));
  return rho;
}

double pure_qfi(const DenseMatrix& hamiltonian, std::span<const Complex> psi, double t) {
  if (std::abs(linalg::norm2<Complex>(psi) - 1.0) > 1e-10)
    throw Error(ErrorKind::InvariantError, "state is not normalized");
  const auto hp = hamiltonian * psi;
  const double mean = linalg::inner<Complex>(psi, hp).real();
  const double sq = linalg::inner<Complex>(hp, hp).real();
  return std::max(0.0, 4.0 * t * t * (sq - mean * mean));
}

double mixed_qubit_qfi(const Bloch& r, const Bloch& dr) {
  double dd = 0.0, rd = 0.0, rr = 0.0;
  for (int k = 0; k < 3; ++k) {
    dd += dr[k] * dr[k];
    rd += r[k] * dr[k];
    rr += r[k] * r[k];
  }
  const double purity_gap = 1.0 - rr;
  return purity_gap <= 1e-10 ? dd : dd + rd * rd / purity_gap;
}

LogicalState logical_state(const DenseMatrix& rho, const model::CodePair& code) {
  const auto r0 = rho * std::span<const Complex>(code.ket0);
  const auto r1 = rho * std::span<const Complex>(code.ket1);
  const double g00 = linalg::inner<Complex>(code.ket0, r0).real();
  const double g11 = linalg::inner<Complex>(code.ket1, r1).real();
  const Complex g01 = linalg::inner<Complex>(code.ket0, r1);
  LogicalState s;
  s.population = g00 + g11;
  if (s.population <= 0.0) return s;
  s.rho01 = g01 / s.population;
  s.bloch = {2.0 * s.rho01.real(), -2.0 * s.rho01.imag(), (g00 - g11) / s.population};
  return s;
}

namespace {

struct Line {
  double slope = 0.0;
  double rms = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  Line l;
  l.slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + l.slope * (x[i] - mx));
    ss += r * r;
  }
  l.rms = std::sqrt(ss / n);
  return l;
}

}  // namespace

QubitFit logical_qubit_fit(const std::vector<DenseMatrix>& trajectory, const std::vector<double>& times,
                           const model::CodePair& code, double omega, double t2) {
  if (trajectory.size() != times.size() || trajectory.size() < 3)
    throw Error(ErrorKind::DimensionMismatch, "fit needs at least 3 states with matching times");
  if (omega == 0.0 || !(t2 > 0.0)) throw Error(ErrorKind::InvariantError, "fit needs omega != 0 and T2 > 0");
  QubitFit fit;
  std::vector<double> phase, logc;
  double prev = 0.0;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const auto s = logical_state(trajectory[i], code);
    fit.min_population = std::min(fit.min_population, s.population);
    if (s.population < 0.99)
      throw Error(ErrorKind::LeakageTooLarge, "codespace population " + std::to_string(s.population) +
                                                  " at t = " + std::to_string(times[i]));
    double ph = std::arg(s.rho01);
    if (i > 0) ph += 2 * std::numbers::pi * std::round((prev - ph) / (2 * std::numbers::pi));
    prev = ph;
    phase.push_back(ph);
    logc.push_back(std::log(std::abs(s.rho01)));
  }
  const Line p = least_squares(times, phase);
  const Line c = least_squares(times, logc);
  fit.a_fit = -p.slope / omega;
  fit.b_fit = -c.slope * t2;
  fit.phase_rms = p.rms;
  fit.log_coh_rms = c.rms;
  return fit;
}

TrajectoryQfi trajectory_qfi(const model::LindbladModel& model, const DenseMatrix& rho0, const Schedule& sched,
                             const model::RecoveryChannel* recovery, const model::CodePair& code) {
  const double dw = 1e-3 / sched.total_time;
  auto run = [&](double omega) {
    Schedule s = sched;
    s.omega = omega;
    return logical_state(evolve(model, rho0, s, recovery), code);
  };
  auto plus = std::async(std::launch::async, run, sched.omega + dw);
  auto minus = std::async(std::launch::async, run, sched.omega - dw);
  const LogicalState center = run(sched.omega);
  const LogicalState sp = plus.get();
  const LogicalState sm = minus.get();

  TrajectoryQfi out;
  out.bloch = center.bloch;
  for (int k = 0; k < 3; ++k) out.dbloch[k] = (sp.bloch[k] - sm.bloch[k]) / (2 * dw);
  out.qfi = mixed_qubit_qfi(out.bloch, out.dbloch);
  out.min_population = std::min({center.population, sp.population, sm.population});
  return out;
}

}  // namespace qecsense::simulator

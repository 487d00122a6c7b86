#pragma once

// Imaginary-time propagation of d|psi>/dt = -H(t)|psi>, tracked as a
// normalized state plus log ||psi||. Time-independent Hamiltonians use the
// exact spectral propagator; schedules integrate the normalized equation
// d|phi>/dt = (-H + <H>)|phi> with classical RK4.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "itqsl/algebra.hpp"
#include "itqsl/geometry.hpp"
#include "itqsl/quadrature.hpp"
#include "itqsl/trajectory.hpp"

namespace itqsl {

inline constexpr double kRenormalizationLimit = 1e-2;

// e^{-Ht} evaluated through the spectral decomposition, with the spectrum
// shifted by the ground energy so decay factors never overflow. The shift is
// pure gauge for the normalized state; log_norm gets -lambda_min * t back.
class ExactPropagator {
 public:
  ExactPropagator(const HermitianOperator& h, const StateVector& psi0)
      : hamiltonian_(h), psi0_(psi0.normalized()), spectrum_(eig(h)) {
    if (h.dimension() != psi0.dimension()) {
      fail(ErrorKind::dimension_mismatch, "propagator: operator and state dimensions differ");
    }
    coefficients_ = spectrum_.eigenvectors.adjoint() * psi0_.amplitudes();
    ground_energy_ = spectrum_.eigenvalues(0);
  }

  // (normalized state, log_norm) at time t.
  std::pair<StateVector, double> evaluate(double t) const {
    if (t == 0.0) return {psi0_, 0.0};
    Vector decayed(coefficients_.size());
    for (Eigen::Index m = 0; m < coefficients_.size(); ++m) {
      decayed(m) = coefficients_(m) * std::exp(-(spectrum_.eigenvalues(m) - ground_energy_) * t);
    }
    Vector psi = spectrum_.eigenvectors * decayed;
    const double norm = psi.stableNorm();
    if (norm == 0.0) {
      fail(ErrorKind::vanishing_state,
           "state norm underflowed at t = " + std::to_string(t) +
               "; the initial state has no resolvable overlap with the surviving eigenspace");
    }
    return {StateVector(Vector(psi / norm)), std::log(norm) - ground_energy_ * t};
  }

  StateVector phi_at(double t) const { return evaluate(t).first; }

  const HermitianOperator& hamiltonian() const { return hamiltonian_; }
  const StateVector& initial_state() const { return psi0_; }

 private:
  HermitianOperator hamiltonian_;
  StateVector psi0_;
  SpectralDecomposition spectrum_;
  Vector coefficients_;
  double ground_energy_;
};

inline Trajectory propagate_exact(const ExactPropagator& prop, const TimeGrid& grid) {
  const StateVector& psi0 = prop.initial_state();
  std::vector<TrajectorySample> samples;
  samples.reserve(grid.num_samples());
  for (int k = 0; k < grid.num_samples(); ++k) {
    const double t = grid.time_at(k);
    auto [phi, log_norm] = prop.evaluate(t);
    const double theta = k == 0 ? 0.0 : angle(psi0, phi);
    const double delta_h = dispersion(prop.hamiltonian(), phi);
    samples.push_back({t, std::move(phi), log_norm, theta, delta_h});
  }
  return Trajectory{std::move(samples), psi0, grid};
}

inline Trajectory propagate_exact(const HermitianOperator& h, const StateVector& psi0,
                                  const TimeGrid& grid) {
  return propagate_exact(ExactPropagator(h, psi0), grid);
}

// Classical RK4 on the normalized equation with renormalization after every
// step. The per-step renormalization correction doubles as an error sentinel:
// beyond kRenormalizationLimit the grid under-resolves the dynamics.
// log_norm is recovered by cumulative Simpson integration of -<H>_t.
inline Trajectory propagate_rk4(const HamiltonianSchedule& sched, const StateVector& psi0,
                                const TimeGrid& grid) {
  if (sched.dimension() != psi0.dimension()) {
    fail(ErrorKind::dimension_mismatch, "propagate_rk4: schedule and state dimensions differ");
  }
  const StateVector start = psi0.normalized();
  const double h = grid.dt();

  // RHS is scale-invariant so RK4 stage vectors need no renormalization.
  const auto rhs = [](const HermitianOperator& op, const Vector& v) -> Vector {
    const Vector hv = op.matrix() * v;
    const double mean = v.dot(hv).real() / v.squaredNorm();
    return -hv + mean * v;
  };

  std::vector<Vector> states;
  states.reserve(grid.num_samples());
  states.push_back(start.amplitudes());

  Vector phi = start.amplitudes();
  for (int k = 0; k < grid.num_steps; ++k) {
    const double t = grid.time_at(k);
    const HermitianOperator h0 = sched.at(t);
    const HermitianOperator h_mid = sched.is_constant() ? h0 : sched.at(t + 0.5 * h);
    const HermitianOperator h1 = sched.is_constant() ? h0 : sched.at(t + h);

    const Vector k1 = rhs(h0, phi);
    const Vector k2 = rhs(h_mid, Vector(phi + 0.5 * h * k1));
    const Vector k3 = rhs(h_mid, Vector(phi + 0.5 * h * k2));
    const Vector k4 = rhs(h1, Vector(phi + h * k3));
    Vector next = phi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double norm = next.stableNorm();
    if (std::abs(norm - 1.0) > kRenormalizationLimit) {
      fail(ErrorKind::step_size_too_large,
           "renormalization correction " + std::to_string(std::abs(norm - 1.0)) + " at t = " +
               std::to_string(t + h) + " exceeds " + std::to_string(kRenormalizationLimit) +
               "; increase the number of steps");
    }
    phi = next / norm;
    states.push_back(phi);
  }

  const StateVector& ref = start;
  std::vector<double> minus_mean(grid.num_samples());
  std::vector<HermitianOperator> ops;
  std::vector<StateVector> wrapped;
  wrapped.reserve(states.size());
  for (int k = 0; k < grid.num_samples(); ++k) {
    wrapped.emplace_back(std::move(states[k]));
    const HermitianOperator op = sched.at(grid.time_at(k));
    ops.push_back(op);
    minus_mean[k] = -expectation(op, wrapped[k]);
  }
  const std::vector<double> log_norms = simpson_cumulative(minus_mean, h);

  std::vector<TrajectorySample> samples;
  samples.reserve(grid.num_samples());
  for (int k = 0; k < grid.num_samples(); ++k) {
    const double theta = k == 0 ? 0.0 : angle(ref, wrapped[k]);
    const double delta_h = dispersion(ops[k], wrapped[k]);
    samples.push_back({grid.time_at(k), std::move(wrapped[k]), k == 0 ? 0.0 : log_norms[k],
                       theta, delta_h});
  }
  return Trajectory{std::move(samples), start, grid};
}

// Constant schedules route to the exact spectral propagator.
inline Trajectory propagate(const HamiltonianSchedule& sched, const StateVector& psi0,
                            const TimeGrid& grid) {
  if (sched.is_constant()) return propagate_exact(sched.at(0.0), psi0, grid);
  return propagate_rk4(sched, psi0, grid);
}

// F(t_k) = |<target|phi(t_k)>|^2, clamped into [0, 1].
inline std::vector<std::pair<double, double>> fidelity_to(const Trajectory& traj,
                                                          const StateVector& target) {
  const StateVector tn = target.normalized();
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    const double f = std::norm(inner(tn, s.phi));
    out.emplace_back(s.t, std::clamp(f, 0.0, 1.0));
  }
  return out;
}

// First time the tangent ratio to `target` drops to `threshold`, located by
// bisection on the exact propagator. Empty when the ratio stays above the
// threshold over [0, t_max]. The ratio must be decreasing through the
// crossing for the result to be the first crossing.
inline std::optional<double> tangent_crossing_time(const ExactPropagator& prop,
                                                   const StateVector& target, double threshold,
                                                   double t_max, double time_tol = 1e-9) {
  const StateVector tn = target.normalized();
  const auto ratio_at = [&](double t) { return tangent_ratio(prop.phi_at(t), tn); };
  if (ratio_at(0.0) <= threshold) return 0.0;
  if (ratio_at(t_max) > threshold) return std::nullopt;
  double lo = 0.0, hi = t_max;
  while (hi - lo > time_tol) {
    const double mid = 0.5 * (lo + hi);
    (ratio_at(mid) > threshold ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace itqsl

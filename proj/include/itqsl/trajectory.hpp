#pragma once

// Time grids, Hamiltonian schedules and trajectory containers shared by the
// propagators and the geometry diagnostics.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "itqsl/algebra.hpp"
#include "itqsl/errors.hpp"

namespace itqsl {

// Uniform grid t_k = k*T/n for k = 0..n. The interval count n must be even
// so Simpson quadrature lines up with the samples.
struct TimeGrid {
  double horizon;
  int num_steps;

  TimeGrid(double horizon_, int num_steps_) : horizon(horizon_), num_steps(num_steps_) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
      fail(ErrorKind::schema, "time grid horizon must be a positive finite number");
    }
    if (num_steps < 2 || num_steps % 2 != 0) {
      fail(ErrorKind::schema,
           "time grid needs an even number of steps >= 2, got " + std::to_string(num_steps));
    }
  }

  double dt() const { return horizon / num_steps; }
  int num_samples() const { return num_steps + 1; }
  double time_at(int k) const { return (static_cast<double>(k) * horizon) / num_steps; }
};

// Map t -> H(t) with fixed dimension. Constant schedules carry a single
// validated operator; generated ones are re-validated at every evaluation.
class HamiltonianSchedule {
 public:
  static HamiltonianSchedule constant(HermitianOperator h) {
    HamiltonianSchedule s;
    s.constant_ = std::move(h);
    return s;
  }

  HamiltonianSchedule(std::function<Matrix(double)> generator, Eigen::Index dimension,
                      double hermiticity_tol = kHermiticityTolerance)
      : generator_(std::move(generator)), dimension_(dimension), tol_(hermiticity_tol) {}

  bool is_constant() const { return constant_.has_value(); }

  Eigen::Index dimension() const {
    return constant_ ? constant_->dimension() : dimension_;
  }

  HermitianOperator at(double t) const {
    if (constant_) return *constant_;
    HermitianOperator h = HermitianOperator::validated(generator_(t), tol_);
    if (h.dimension() != dimension_) {
      fail(ErrorKind::dimension_mismatch,
           "schedule produced dimension " + std::to_string(h.dimension()) + " at t=" +
               std::to_string(t) + ", expected " + std::to_string(dimension_));
    }
    return h;
  }

 private:
  HamiltonianSchedule() = default;

  std::optional<HermitianOperator> constant_;
  std::function<Matrix(double)> generator_;
  Eigen::Index dimension_ = 0;
  double tol_ = kHermiticityTolerance;
};

// One trajectory sample: normalized state phi(t), log ||psi(t)|| of the
// unnormalized state, angular distance from psi0 and energy dispersion.
struct TrajectorySample {
  double t;
  StateVector phi;
  double log_norm;
  double theta;
  double delta_h;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  StateVector psi0;
  TimeGrid grid;
};

}  // namespace itqsl

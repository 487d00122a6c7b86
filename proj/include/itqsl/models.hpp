#pragma once

// Closed-form models: a two-level system relaxing to its ground state and
// the projector-Hamiltonian (unstructured search) model, both exactly
// solvable under imaginary-time dynamics. These double as oracles for the
// propagation and geometry code.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "itqsl/algebra.hpp"
#include "itqsl/errors.hpp"

namespace itqsl {

struct ModelSystem {
  HermitianOperator hamiltonian;
  StateVector initial_state;
};

// H = E|0><0|, psi0 = cos(theta0)|0> + sin(theta0)|1>, evolved over [0, T].
struct TwoLevelParams {
  double theta0;
  double energy;
  double horizon;

  TwoLevelParams(double theta0_, double energy_, double horizon_)
      : theta0(theta0_), energy(energy_), horizon(horizon_) {
    if (!std::isfinite(theta0) || theta0 <= 0.0 || theta0 >= std::numbers::pi / 2) {
      fail(ErrorKind::schema, "theta0 must lie strictly inside (0, pi/2)");
    }
    if (!std::isfinite(energy) || energy <= 0.0) {
      fail(ErrorKind::schema, "energy must be a positive finite number");
    }
    if (!std::isfinite(horizon) || horizon <= 0.0) {
      fail(ErrorKind::schema, "horizon must be a positive finite number");
    }
  }
};

inline ModelSystem two_level_system(const TwoLevelParams& p) {
  Eigen::VectorXd diag(2);
  diag << p.energy, 0.0;
  return ModelSystem{HermitianOperator::diagonal(diag),
                     StateVector{Complex(std::cos(p.theta0), 0.0),
                                 Complex(std::sin(p.theta0), 0.0)}};
}

// Theta(t) = arccos[(cos^2 e^{-Et} + sin^2) / sqrt(cos^2 e^{-2Et} + sin^2)],
// evaluated through the matching sine, sin cos (1 - e^{-Et}) / sqrt(...), so
// small angles keep full precision (atan2 + expm1 instead of acos near 1).
inline double two_level_theta(const TwoLevelParams& p, double t) {
  const double x = std::exp(-p.energy * t);
  const double c = std::cos(p.theta0);
  const double s = std::sin(p.theta0);
  const double cosine_part = c * c * x + s * s;
  const double sine_part = s * c * (-std::expm1(-p.energy * t));
  return std::atan2(sine_part, cosine_part);
}

// Delta H(t) = E sin cos e^{-Et} / (cos^2 e^{-2Et} + sin^2).
inline double two_level_delta_h(const TwoLevelParams& p, double t) {
  const double x = std::exp(-p.energy * t);
  const double c = std::cos(p.theta0);
  const double s = std::sin(p.theta0);
  return p.energy * s * c * x / (c * c * x * x + s * s);
}

// Closed form of the integral of Delta H over [0, T]:
//   (pi/2 - theta0) - arctan(e^{-ET} cot(theta0)).
inline double two_level_dispersion_integral(const TwoLevelParams& p) {
  const double cot = std::cos(p.theta0) / std::sin(p.theta0);
  return (std::numbers::pi / 2 - p.theta0) -
         std::atan(std::exp(-p.energy * p.horizon) * cot);
}

// Closed-form slack, integral of Delta H minus Theta(T). Zero up to roundoff:
// the trajectory runs along a geodesic, so the bound is saturated.
inline double two_level_saturation_gap(const TwoLevelParams& p) {
  return two_level_dispersion_integral(p) - two_level_theta(p, p.horizon);
}

// H = E_w|w><w| + E_perp(I - |w><w|) with a uniform-superposition start;
// gap g = E_perp - E_w drives exponential convergence to |w>.
struct GroverParams {
  int dimension;
  double e_w;
  double e_perp;
  double horizon;
  double epsilon;

  GroverParams(int dimension_, double e_w_, double e_perp_, double horizon_, double epsilon_)
      : dimension(dimension_), e_w(e_w_), e_perp(e_perp_), horizon(horizon_),
        epsilon(epsilon_) {
    if (dimension < 2) {
      fail(ErrorKind::schema, "dimension must be >= 2, got " + std::to_string(dimension));
    }
    if (!std::isfinite(e_w) || !std::isfinite(e_perp)) {
      fail(ErrorKind::schema, "e_w and e_perp must be finite");
    }
    if (!std::isfinite(horizon) || horizon <= 0.0) {
      fail(ErrorKind::schema, "horizon must be a positive finite number");
    }
    if (!std::isfinite(epsilon) || epsilon <= 0.0 || epsilon >= 1.0) {
      fail(ErrorKind::schema, "epsilon must lie strictly inside (0, 1)");
    }
  }

  double gap() const { return e_perp - e_w; }
};

// Full N-dimensional models exercise the degenerate orthogonal subspace but
// cost O(N^2); beyond this size the reduced 2x2 form is the default.
inline bool grover_embeds_by_default(int dimension) { return dimension <= 256; }

// embed = false: reduced 2x2 model in the {|w>, |w_perp>} basis.
// embed = true: N-dimensional projector Hamiltonian with |w> the first basis
// state and the uniform superposition as the initial state.
inline ModelSystem grover_system(const GroverParams& p, bool embed) {
  if (!embed) {
    Eigen::VectorXd diag(2);
    diag << p.e_w, p.e_perp;
    const double n = static_cast<double>(p.dimension);
    return ModelSystem{HermitianOperator::diagonal(diag),
                       StateVector{Complex(1.0 / std::sqrt(n), 0.0),
                                   Complex(std::sqrt((n - 1.0) / n), 0.0)}};
  }
  Matrix m = Matrix::Identity(p.dimension, p.dimension) * Complex(p.e_perp, 0.0);
  m(0, 0) = Complex(p.e_w, 0.0);
  Vector psi0 = Vector::Constant(p.dimension, Complex(1.0 / std::sqrt(p.dimension), 0.0));
  return ModelSystem{HermitianOperator::validated(m), StateVector(std::move(psi0))};
}

// Mixing angle against |w>: tan(theta(t)) = sqrt(N-1) e^{-gt}.
inline double grover_theta(const GroverParams& p, double t) {
  return std::atan(std::sqrt(p.dimension - 1.0) * std::exp(-p.gap() * t));
}

inline double grover_delta_h(const GroverParams& p, double t) {
  const double theta = grover_theta(p, t);
  return std::abs(p.gap()) * std::sin(theta) * std::cos(theta);
}

// Theta(t) = theta(0) - theta(t): the trajectory is a constant-speed geodesic.
inline double grover_angular_distance(const GroverParams& p, double t) {
  return grover_theta(p, 0.0) - grover_theta(p, t);
}

// Exact first time with tan(theta(t)) = epsilon:
//   T = (1/g) [ (1/2) ln(N-1) + ln(1/epsilon) ].
inline double grover_runtime(const GroverParams& p) {
  if (p.gap() <= 0.0) {
    fail(ErrorKind::non_positive_gap,
         "runtime bound needs e_perp > e_w, got gap = " + std::to_string(p.gap()));
  }
  return (0.5 * std::log(p.dimension - 1.0) + std::log(1.0 / p.epsilon)) / p.gap();
}

// Large-N approximation of the same bound, with ln N in place of ln(N-1).
inline double grover_runtime_large_n(const GroverParams& p) {
  if (p.gap() <= 0.0) {
    fail(ErrorKind::non_positive_gap,
         "runtime bound needs e_perp > e_w, got gap = " + std::to_string(p.gap()));
  }
  return (0.5 * std::log(static_cast<double>(p.dimension)) + std::log(1.0 / p.epsilon)) /
         p.gap();
}

// 1 - F(t) <= (||chi||^2 / |alpha|^2) e^{-2 gap t} for a unique ground state
// |w> with initial overlap alpha != 0 and orthogonal remainder chi.
inline double fidelity_convergence_bound(double alpha_sq, double chi_sq, double gap, double t) {
  if (alpha_sq == 0.0) {
    fail(ErrorKind::zero_overlap,
         "convergence bound is vacuous for zero initial overlap with the target");
  }
  if (!(alpha_sq > 0.0) || alpha_sq > 1.0) {
    fail(ErrorKind::schema, "alpha_sq must lie in (0, 1]");
  }
  if (!(chi_sq >= 0.0) || !(gap > 0.0) || !(t >= 0.0)) {
    fail(ErrorKind::schema, "convergence bound needs chi_sq >= 0, gap > 0, t >= 0");
  }
  return chi_sq / alpha_sq * std::exp(-2.0 * gap * t);
}

}  // namespace itqsl

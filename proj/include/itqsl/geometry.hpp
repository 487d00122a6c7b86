#pragma once

// Fubini-Study geometry of normalized trajectories: angular distance, path
// length, the speed-limit report, the geodesic-alignment (saturation)
// certificate and the Cauchy-Schwarz rate check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "itqsl/algebra.hpp"
#include "itqsl/quadrature.hpp"
#include "itqsl/trajectory.hpp"

namespace itqsl {

inline constexpr double kSaturationTolerance = 1e-6;
inline constexpr double kResidualTolerance = 1e-8;
inline constexpr double kAngleFloor = 1e-6;

// Theta = arccos |<psi0|phi>|, clamped into [0, pi/2]. Invariant under global
// phases of either argument; the clamp guards arccos against |overlap|
// exceeding 1 by roundoff. Near alignment, arccos can only resolve angles
// down to sqrt(eps), so the angle is evaluated there through the chord of the
// gauge-aligned difference, 2 sin(theta/2), which stays accurate to eps.
inline double angle(const StateVector& psi0, const StateVector& phi) {
  const Complex overlap = inner(psi0, phi);
  const double magnitude = std::abs(overlap);
  if (magnitude < 0.99) {
    return std::acos(std::clamp(magnitude, 0.0, 1.0));
  }
  const Vector diff =
      phi.amplitudes() * (std::conj(overlap) / magnitude) - psi0.amplitudes();
  return 2.0 * std::asin(std::clamp(0.5 * diff.stableNorm(), 0.0, 1.0));
}

// tan of the angle between phi and target: ||orthogonal part|| / |overlap|.
// Infinite when phi is orthogonal to target.
inline double tangent_ratio(const StateVector& phi, const StateVector& target) {
  const Complex overlap = inner(target, phi);
  const double parallel = std::abs(overlap);
  const Vector orthogonal = phi.amplitudes() - overlap * target.amplitudes();
  const double transverse = orthogonal.stableNorm();
  if (parallel == 0.0) return std::numeric_limits<double>::infinity();
  return transverse / parallel;
}

// L = integral of Delta H over the grid, by composite Simpson on the samples.
inline double path_length(const Trajectory& traj) {
  std::vector<double> speeds;
  speeds.reserve(traj.samples.size());
  for (const auto& s : traj.samples) speeds.push_back(s.delta_h);
  return simpson_total(speeds, traj.grid.dt());
}

struct QslReport {
  double theta_T;      // angular distance reached at t = T
  double path_length;  // L = integral of Delta H
  double avg_speed;    // L / T
  double bound_time;   // Theta(T) / avg_speed
  double actual_time;  // T
  double slack;        // L - Theta(T)
  bool saturated;      // slack <= tol * (1 + L)
};

inline QslReport qsl_report(const Trajectory& traj,
                            double saturation_tol = kSaturationTolerance) {
  const double T = traj.grid.horizon;
  const double theta_T = traj.samples.back().theta;
  const double length = path_length(traj);
  if (length < 1e-12 && theta_T > 1e-8) {
    fail(ErrorKind::degenerate_trajectory,
         "zero path length with nonzero angular distance; upstream data is inconsistent");
  }
  QslReport report{};
  report.theta_T = theta_T;
  report.path_length = length;
  report.actual_time = T;
  if (length < 1e-12) {
    report.avg_speed = 0.0;
    report.bound_time = 0.0;
  } else {
    report.avg_speed = length / T;
    report.bound_time = theta_T * T / length;
  }
  report.slack = length - theta_T;
  report.saturated = report.slack <= saturation_tol * (1.0 + length);
  return report;
}

enum class SampleStatus { checked, skipped_near_zero_angle };

// Per-sample test of the saturation condition: in the gauge <psi0|phi> >= 0,
// u = P_perp(-H + <H>)phi must equal -lambda * w with w the unit geodesic
// direction P_perp psi0 / ||P_perp psi0|| and lambda >= 0.
struct SaturationRecord {
  double t;
  double residual;   // ||u + lambda w|| / max(||u||, 1e-12); 0 for skipped samples
  double lambda;     // meaningful only when status == checked
  double sin_theta;
  SampleStatus status;
};

struct SaturationCertificate {
  std::vector<SaturationRecord> records;
  double max_residual = 0.0;  // over checked samples
  double min_lambda = 0.0;    // over checked samples
  int checked_count = 0;
  int skipped_count = 0;

  double skipped_fraction() const {
    const int total = checked_count + skipped_count;
    return total == 0 ? 0.0 : static_cast<double>(skipped_count) / total;
  }
};

inline SaturationCertificate saturation_certificate(const Trajectory& traj,
                                                    const HamiltonianSchedule& sched,
                                                    double angle_floor = kAngleFloor) {
  if (sched.dimension() != traj.psi0.dimension()) {
    fail(ErrorKind::dimension_mismatch, "schedule and trajectory dimensions differ");
  }
  SaturationCertificate cert;
  cert.records.reserve(traj.samples.size());
  bool any_checked = false;
  for (const auto& sample : traj.samples) {
    const double sin_theta = std::sin(sample.theta);
    if (sin_theta < angle_floor) {
      // The geodesic direction P_perp psi0 is undefined at Theta ~ 0.
      cert.records.push_back({sample.t, 0.0, 0.0, sin_theta,
                              SampleStatus::skipped_near_zero_angle});
      ++cert.skipped_count;
      continue;
    }
    const HermitianOperator h = sched.at(sample.t);
    const Complex overlap = inner(traj.psi0, sample.phi);
    Vector phi = sample.phi.amplitudes();
    if (std::abs(overlap) > 0.0) {
      phi *= std::conj(overlap) / std::abs(overlap);  // gauge: <psi0|phi> real >= 0
    }
    const Vector h_phi = h.matrix() * phi;
    const double mean = phi.dot(h_phi).real();
    Vector u = -h_phi + mean * phi;
    u -= phi * phi.dot(u);  // tangent-space hygiene; u is orthogonal to phi already
    Vector geo = traj.psi0.amplitudes() - phi * phi.dot(traj.psi0.amplitudes());
    const double geo_norm = geo.stableNorm();
    geo /= geo_norm;
    const double lambda = -geo.dot(u).real();
    const double residual =
        (u + lambda * geo).stableNorm() / std::max(u.stableNorm(), 1e-12);
    cert.records.push_back({sample.t, residual, lambda, sin_theta, SampleStatus::checked});
    if (!any_checked) {
      cert.max_residual = residual;
      cert.min_lambda = lambda;
      any_checked = true;
    } else {
      cert.max_residual = std::max(cert.max_residual, residual);
      cert.min_lambda = std::min(cert.min_lambda, lambda);
    }
    ++cert.checked_count;
  }
  return cert;
}

// Finite-difference check of |dTheta/dt| <= Delta H. The tolerance combines
// the second-order truncation error (third derivative estimated from the
// samples themselves) with a fixed 1e-8 floor.
struct RateRecord {
  double t;
  double dtheta_dt;
  double delta_h;
  double margin;  // delta_h - |dtheta_dt|
};

struct RateCheck {
  std::vector<RateRecord> records;
  double tolerance;
  double min_interior_margin;
};

inline RateCheck rate_check(const Trajectory& traj) {
  const std::size_t n = traj.samples.size();
  if (n < 3) {
    fail(ErrorKind::grid_too_coarse, "rate check needs at least 3 samples");
  }
  const double h = traj.grid.dt();
  std::vector<double> theta(n);
  for (std::size_t k = 0; k < n; ++k) theta[k] = traj.samples[k].theta;

  double third_derivative = 0.0;
  for (std::size_t k = 0; k + 3 < n; ++k) {
    const double d3 = theta[k + 3] - 3.0 * theta[k + 2] + 3.0 * theta[k + 1] - theta[k];
    third_derivative = std::max(third_derivative, std::abs(d3) / (h * h * h));
  }
  const double tolerance = third_derivative / 3.0 * h * h + 1e-8;

  RateCheck check;
  check.tolerance = tolerance;
  check.records.reserve(n);
  check.min_interior_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    double rate;
    if (k == 0) {
      rate = (-3.0 * theta[0] + 4.0 * theta[1] - theta[2]) / (2.0 * h);
    } else if (k + 1 == n) {
      rate = (3.0 * theta[n - 1] - 4.0 * theta[n - 2] + theta[n - 3]) / (2.0 * h);
    } else {
      rate = (theta[k + 1] - theta[k - 1]) / (2.0 * h);
    }
    const double margin = traj.samples[k].delta_h - std::abs(rate);
    check.records.push_back({traj.samples[k].t, rate, traj.samples[k].delta_h, margin});
    if (k > 0 && k + 1 < n) {
      check.min_interior_margin = std::min(check.min_interior_margin, margin);
    }
  }
  return check;
}

}  // namespace itqsl

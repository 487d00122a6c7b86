#pragma once

// Dense complex vector/operator layer: validated state vectors, Hermitian
// operators, spectral decompositions, expectations and dispersions.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <memory>
#include <sstream>
#include <utility>

#include "itqsl/errors.hpp"

namespace itqsl {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kVarianceClampThreshold = 1e-12;

// Finite, nonzero complex vector of dimension >= 2. Immutable after
// construction; norms use Eigen's stableNorm so that subnormal-scale
// amplitudes (e.g. 1e-200) survive normalization.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 2) {
      fail(ErrorKind::dimension_too_small,
           "state vector needs dimension >= 2, got " + std::to_string(amplitudes_.size()));
    }
    if (!amplitudes_.allFinite()) {
      fail(ErrorKind::non_finite_entry, "state vector has a non-finite amplitude");
    }
    norm_ = amplitudes_.stableNorm();
    if (norm_ == 0.0) {
      fail(ErrorKind::zero_vector, "state vector has zero norm");
    }
  }

  StateVector(std::initializer_list<Complex> amplitudes)
      : StateVector(Vector(Eigen::Map<const Vector>(std::data(amplitudes),
                                                    static_cast<Eigen::Index>(amplitudes.size())))) {}

  static StateVector basis(Eigen::Index dimension, Eigen::Index index) {
    Vector v = Vector::Zero(dimension);
    v(index) = Complex(1.0, 0.0);
    return StateVector(std::move(v));
  }

  Eigen::Index dimension() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  double norm() const { return norm_; }

  bool is_normalized(double tol = kNormalizationTolerance) const {
    return std::abs(norm_ - 1.0) <= tol;
  }

  StateVector normalized() const {
    if (is_normalized()) return *this;
    return StateVector(Vector(amplitudes_ / norm_));
  }

 private:
  Vector amplitudes_;
  double norm_;
};

inline StateVector make_state(Vector amplitudes) { return StateVector(std::move(amplitudes)); }

// <a|b> = sum conj(a_i) b_i
inline Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dimension() != b.dimension()) {
    fail(ErrorKind::dimension_mismatch,
         "inner product of dimensions " + std::to_string(a.dimension()) + " and " +
             std::to_string(b.dimension()));
  }
  return a.amplitudes().dot(b.amplitudes());
}

// Validated Hermitian operator. Inputs within the Hermiticity tolerance are
// symmetrized to (H + H^dag)/2 so downstream expectations are exactly real.
// The matrix is shared, so copies are cheap.
class HermitianOperator {
 public:
  static HermitianOperator validated(const Matrix& m, double tol = kHermiticityTolerance) {
    if (m.rows() != m.cols()) {
      fail(ErrorKind::dimension_mismatch, "operator matrix must be square, got " +
                                              std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()));
    }
    if (m.rows() < 2) {
      fail(ErrorKind::dimension_too_small,
           "operator needs dimension >= 2, got " + std::to_string(m.rows()));
    }
    if (!m.allFinite()) {
      fail(ErrorKind::non_finite_entry, "operator matrix has a non-finite entry");
    }
    const double deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (deviation > tol) {
      std::ostringstream msg;
      msg << "matrix is not Hermitian: max |H[i][j] - conj(H[j][i])| = " << deviation
          << " exceeds tolerance " << tol;
      fail(ErrorKind::not_hermitian, msg.str());
    }
    return HermitianOperator(Matrix(0.5 * (m + m.adjoint())), deviation);
  }

  static HermitianOperator diagonal(const Eigen::VectorXd& entries) {
    Matrix m = Matrix::Zero(entries.size(), entries.size());
    m.diagonal() = entries.cast<Complex>();
    return HermitianOperator(std::move(m), 0.0);
  }

  Eigen::Index dimension() const { return matrix_->rows(); }
  const Matrix& matrix() const { return *matrix_; }
  double hermiticity_deviation() const { return deviation_; }

 private:
  HermitianOperator(Matrix m, double deviation)
      : matrix_(std::make_shared<const Matrix>(std::move(m))), deviation_(deviation) {}

  std::shared_ptr<const Matrix> matrix_;
  double deviation_;
};

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // orthonormal columns, aligned with eigenvalues
};

inline SpectralDecomposition eig(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::eig_failure, "eigensolver did not converge");
  }
  return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {
inline void check_operator_state(const HermitianOperator& h, const StateVector& phi,
                                 const char* what) {
  if (h.dimension() != phi.dimension()) {
    fail(ErrorKind::dimension_mismatch, std::string(what) + ": operator dimension " +
                                            std::to_string(h.dimension()) +
                                            " vs state dimension " +
                                            std::to_string(phi.dimension()));
  }
}
}  // namespace detail

// <phi|H|phi> for normalized phi. The raw value's imaginary part must be
// negligible (the operator is symmetrized, so it is roundoff only).
inline double expectation(const HermitianOperator& h, const StateVector& phi) {
  detail::check_operator_state(h, phi, "expectation");
  const Complex raw = phi.amplitudes().dot(h.matrix() * phi.amplitudes());
  if (std::abs(raw.imag()) > 1e-10) {
    std::ostringstream msg;
    msg << "expectation has non-negligible imaginary part " << raw.imag();
    fail(ErrorKind::numerical_inconsistency, msg.str());
  }
  return raw.real();
}

// Delta H = sqrt(max(0, <H^2> - <H>^2)). Tiny negative raw variances
// (roundoff) are clamped to zero; anything below -1e-12 signals a bug
// upstream. The returned value evaluates the same variance in centered form,
// ||(H - <H>)phi||^2, which has no cancellation at the <H>^2 scale.
inline double dispersion(const HermitianOperator& h, const StateVector& phi) {
  detail::check_operator_state(h, phi, "dispersion");
  const Vector h_phi = h.matrix() * phi.amplitudes();
  const Complex raw_mean = phi.amplitudes().dot(h_phi);
  if (std::abs(raw_mean.imag()) > 1e-10) {
    fail(ErrorKind::numerical_inconsistency, "dispersion: expectation not real");
  }
  const double mean = raw_mean.real();
  const double raw_variance = h_phi.squaredNorm() - mean * mean;
  if (raw_variance < -kVarianceClampThreshold) {
    std::ostringstream msg;
    msg << "variance " << raw_variance << " below clamp threshold -"
        << kVarianceClampThreshold;
    fail(ErrorKind::numerical_inconsistency, msg.str());
  }
  const double variance = (h_phi - mean * phi.amplitudes()).squaredNorm();
  return std::sqrt(std::max(0.0, variance));
}

}  // namespace itqsl

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "itqsl/algebra.hpp"
#include "test_support.hpp"

using namespace itqsl;
using test_support::Rng;

namespace {
const Complex kOne(1.0, 0.0);
const Complex kZero(0.0, 0.0);
}  // namespace

TEST_CASE("state construction accepts valid amplitudes unchanged") {
  const StateVector basis0{kOne, kZero};
  CHECK(basis0.dimension() == 2);
  CHECK(basis0.amplitudes()(0) == kOne);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const StateVector plus{Complex(inv_sqrt2, 0.0), Complex(inv_sqrt2, 0.0)};
  CHECK(plus.is_normalized());
}

TEST_CASE("state construction rejects degenerate inputs") {
  CHECK_THROWS_AS(StateVector({kZero, kZero}), Error);
  CHECK_THROWS_AS(StateVector(Vector::Ones(1)), Error);
  Vector bad(2);
  bad << Complex(1.0, 0.0), Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(StateVector(std::move(bad)), Error);

  try {
    StateVector v({kZero, kZero});
    (void)v;
    FAIL("expected zero-vector error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::zero_vector);
  }
}

TEST_CASE("normalize preserves direction and handles scaling") {
  const StateVector doubled{Complex(2.0, 0.0), kZero};
  CHECK(doubled.normalized().amplitudes()(0) == kOne);

  const StateVector ones{kOne, kOne};
  const StateVector n = ones.normalized();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(n.amplitudes()(0).real() - inv_sqrt2) <= 1e-15);
  CHECK(std::abs(n.amplitudes()(1).real() - inv_sqrt2) <= 1e-15);
}

TEST_CASE("normalize survives tiny-norm amplitudes") {
  // |a|^2 underflows here, so naive sum-of-squares norms would divide by zero.
  const StateVector tiny{Complex(0.0, 1e-200), kZero};
  const StateVector n = tiny.normalized();
  CHECK(n.amplitudes()(0) == Complex(0.0, 1.0));
  CHECK(n.amplitudes()(1) == kZero);
  CHECK(n.is_normalized());
}

TEST_CASE("inner products: orthogonality, normalization, mixing") {
  const StateVector zero = StateVector::basis(2, 0);
  const StateVector one = StateVector::basis(2, 1);
  CHECK(inner(zero, one) == kZero);

  Rng rng(11);
  const StateVector psi = test_support::random_state(rng, 5);
  const Complex self = inner(psi, psi);
  CHECK(std::abs(self.real() - 1.0) <= 1e-12);
  CHECK(std::abs(self.imag()) <= 1e-12);

  const double theta = M_PI / 4;
  const StateVector mixed{Complex(std::cos(theta), 0.0), Complex(std::sin(theta), 0.0)};
  const Complex overlap = inner(mixed, one);
  CHECK(std::abs(overlap.real() - 1.0 / std::sqrt(2.0)) <= 1e-15);
  CHECK(overlap.imag() == 0.0);

  CHECK_THROWS_AS(inner(psi, one), Error);
}

TEST_CASE("inner is conjugate symmetric and matches the squared norm") {
  Rng rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 2 + trial % 5;
    const StateVector a = test_support::random_state(rng, dim);
    const StateVector b = test_support::random_state(rng, dim);
    const Complex ab = inner(a, b);
    const Complex ba = inner(b, a);
    CHECK(std::abs(ab - std::conj(ba)) <= 1e-14);
    const Complex aa = inner(a, a);
    CHECK(aa.real() >= 0.0);
    CHECK(std::abs(aa.real() - a.norm() * a.norm()) <= 1e-12 * (1.0 + aa.real()));
  }
}

TEST_CASE("hermitian validation accepts, rejects and symmetrizes") {
  Matrix projector(2, 2);
  projector << kOne, kZero, kZero, kZero;
  const HermitianOperator accepted = HermitianOperator::validated(projector);
  CHECK(accepted.hermiticity_deviation() == 0.0);

  Matrix anti(2, 2);
  anti << kZero, Complex(0.0, 1.0), Complex(0.0, 1.0), kZero;
  CHECK_THROWS_AS(HermitianOperator::validated(anti), Error);
  try {
    HermitianOperator::validated(anti);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_hermitian);
  }

  Matrix slightly(2, 2);
  slightly << kOne, Complex(1e-12, 0.0), kZero, kOne;
  const HermitianOperator sym = HermitianOperator::validated(slightly, 1e-10);
  const double half = 0.5 * 1e-12;  // exact in binary: halving is lossless
  CHECK(sym.matrix()(0, 1) == Complex(half, 0.0));
  CHECK(sym.matrix()(1, 0) == Complex(half, 0.0));
}

TEST_CASE("eig on diagonal and projector spectra") {
  Eigen::VectorXd diag(2);
  diag << 2.5, 0.0;
  const SpectralDecomposition d = eig(HermitianOperator::diagonal(diag));
  CHECK(d.eigenvalues(0) == doctest::Approx(0.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(2.5));
  CHECK(std::abs(d.eigenvectors.col(0)(1)) == doctest::Approx(1.0));

  Matrix grover = Matrix::Identity(4, 4);
  grover(0, 0) = kZero;
  const SpectralDecomposition g = eig(HermitianOperator::validated(grover));
  CHECK(g.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
  for (int k = 1; k < 4; ++k) {
    CHECK(g.eigenvalues(k) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("eig satisfies residual, orthonormality and reconstruction oracles") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 6;
    const HermitianOperator h =
        HermitianOperator::validated(test_support::random_gaussian_hermitian(rng, dim));
    const SpectralDecomposition s = eig(h);
    double max_eigenvalue = 0.0;
    for (int k = 0; k < dim; ++k) {
      max_eigenvalue = std::max(max_eigenvalue, std::abs(s.eigenvalues(k)));
      const Vector residual =
          h.matrix() * s.eigenvectors.col(k) - s.eigenvalues(k) * s.eigenvectors.col(k);
      CHECK(residual.norm() <= 1e-9 * (1.0 + std::abs(s.eigenvalues(k))));
      if (k > 0) CHECK(s.eigenvalues(k) >= s.eigenvalues(k - 1));
      for (int j = 0; j < k; ++j) {
        CHECK(std::abs(s.eigenvectors.col(j).dot(s.eigenvectors.col(k))) <= 1e-10);
      }
    }
    Matrix rebuilt = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
      rebuilt += s.eigenvalues(k) * s.eigenvectors.col(k) * s.eigenvectors.col(k).adjoint();
    }
    CHECK((rebuilt - h.matrix()).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + max_eigenvalue));
  }
}

TEST_CASE("expectation on eigenstates and mixtures") {
  Eigen::VectorXd diag(2);
  diag << 1.0, 0.0;
  const HermitianOperator h = HermitianOperator::diagonal(diag);
  CHECK(expectation(h, StateVector::basis(2, 1)) == doctest::Approx(0.0));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const StateVector plus{Complex(inv_sqrt2, 0.0), Complex(inv_sqrt2, 0.0)};
  CHECK(expectation(h, plus) == doctest::Approx(0.5));

  // <psi0|H|psi0> for the search Hamiltonian equals (N-1)/N; expanding by
  // hand with N = 4 gives 3/4.
  Matrix grover = Matrix::Identity(4, 4);
  grover(0, 0) = kZero;
  const StateVector uniform(Vector::Constant(4, Complex(0.5, 0.0)));
  CHECK(expectation(HermitianOperator::validated(grover), uniform) == doctest::Approx(0.75));
}

TEST_CASE("expectation is invariant under global phase") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 4;
    const HermitianOperator h =
        HermitianOperator::validated(test_support::random_gaussian_hermitian(rng, dim));
    const StateVector phi = test_support::random_state(rng, dim);
    const Complex phase = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    const StateVector rotated(Vector(phase * phi.amplitudes()));
    CHECK(std::abs(expectation(h, phi) - expectation(h, rotated)) <= 1e-12);
  }
}

TEST_CASE("dispersion vanishes on eigenstates and matches closed forms") {
  Eigen::VectorXd diag(2);
  diag << 1.0, 0.0;
  const HermitianOperator h = HermitianOperator::diagonal(diag);
  CHECK(dispersion(h, StateVector::basis(2, 0)) == doctest::Approx(0.0));

  // H = diag(E, 0) on cos(theta)|0> + sin(theta)|1> has Delta H = E sin cos.
  const double theta = M_PI / 4;
  const StateVector mixed{Complex(std::cos(theta), 0.0), Complex(std::sin(theta), 0.0)};
  CHECK(dispersion(h, mixed) == doctest::Approx(0.5).epsilon(1e-12));

  // Search Hamiltonian at N = 4: tan(theta0) = sqrt(3), so sin cos = sqrt(3)/4.
  Matrix grover = Matrix::Identity(4, 4);
  grover(0, 0) = kZero;
  const StateVector uniform(Vector::Constant(4, Complex(0.5, 0.0)));
  CHECK(dispersion(HermitianOperator::validated(grover), uniform) ==
        doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("dispersion and expectation are consistent with the second moment") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 2 + trial % 6;
    const HermitianOperator h =
        HermitianOperator::validated(test_support::random_gaussian_hermitian(rng, dim));
    const StateVector phi = test_support::random_state(rng, dim);
    const double sigma = dispersion(h, phi);
    const double mean = expectation(h, phi);
    const double second_moment = (h.matrix() * phi.amplitudes()).squaredNorm();
    CHECK(sigma * sigma + mean * mean <= second_moment * (1.0 + 1e-10) + 1e-10);

    const SpectralDecomposition s = eig(h);
    CHECK(mean >= s.eigenvalues(0) - 1e-10);
    CHECK(mean <= s.eigenvalues(s.eigenvalues.size() - 1) + 1e-10);
  }
}

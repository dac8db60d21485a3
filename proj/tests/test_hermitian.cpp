#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "zq/builtins.hpp"
#include "zq/hermitian.hpp"

using namespace zq;

namespace {

MatC random_hermitian(Rng& rng, int n, double scale = 1.0) {
  MatC a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.complex_box(scale);
  return 0.5 * (a + a.adjoint().eval());
}

}  // namespace

TEST_CASE("construction symmetrizes and keeps the diagonal real") {
  MatC raw(2, 2);
  raw << Complex(1.0, 1e-13), Complex(0.5, 0.25), Complex(0.5, -0.25 + 1e-14), Complex(2.0, 0.0);
  HermMat m(raw);
  CHECK((m.matrix() - m.matrix().adjoint()).norm() == doctest::Approx(0.0));
  CHECK(m(0, 0).imag() == 0.0);
}

TEST_CASE("eigh: diag(3,1,2) -> (1,2,3)") {
  MatC d = MatC::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  EighResult e = eigh(HermMat(d));
  CHECK(e.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(e.eigenvalues[2] == doctest::Approx(3.0));
}

TEST_CASE("eigh: Pauli-X spectrum (-1, 1)") {
  MatC x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  EighResult e = eigh(HermMat(x));
  CHECK(e.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("eigh: Levi matrix of the n=3,p=1 quadric at (1,0,sqrt(2))") {
  DomainSpec spec = make_quadric(3, 1);
  VecC z(3);
  z[0] = Complex(1.0, 0.0);
  z[1] = Complex(0.0, 0.0);
  z[2] = Complex(std::sqrt(2.0), 0.0);
  REQUIRE(std::abs(spec.rho_at(z)) <= 1e-12);
  BoundaryPointData bp = frame_at(spec, z);
  REQUIRE(bp.mu.size() == 2);
  CHECK(bp.mu[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(bp.mu[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("eigh reconstruction on 1000 random Hermitian matrices, n <= 6") {
  Rng rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.uniform_int(1, 6);
    const MatC a = random_hermitian(rng, n, 2.0);
    HermMat m(a);
    EighResult e = eigh(m);
    MatC d = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = e.eigenvalues[i];
    const double resid = (e.eigenvectors * d * e.eigenvectors.adjoint() - m.matrix()).norm();
    REQUIRE(resid <= 1e-10 * (1.0 + m.frobenius_norm()));
    const double unit = (e.eigenvectors.adjoint() * e.eigenvectors - MatC::Identity(n, n)).norm();
    REQUIRE(unit <= 1e-10);
    for (int i = 0; i + 1 < n; ++i) REQUIRE(e.eigenvalues[i] <= e.eigenvalues[i + 1] + 1e-14);
  }
}

TEST_CASE("eigh agrees with Eigen's SelfAdjointEigenSolver") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const MatC a = random_hermitian(rng, n, 3.0);
    EighResult e = eigh(HermMat(a));
    Eigen::SelfAdjointEigenSolver<MatC> oracle(a);
    for (int i = 0; i < n; ++i) {
      CHECK(e.eigenvalues[i] == doctest::Approx(oracle.eigenvalues()[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("trace and determinant match the spectrum") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(2, 5);
    HermMat m(random_hermitian(rng, n));
    EighResult e = eigh(m);
    double tr = 0.0, det = 1.0;
    for (int i = 0; i < n; ++i) {
      tr += e.eigenvalues[i];
      det *= e.eigenvalues[i];
    }
    CHECK(std::abs(m.trace() - tr) <= 1e-10 * (1.0 + std::abs(tr)));
    CHECK(std::abs(m.determinant().real() - det) <= 1e-8 * (1.0 + std::abs(det)));
  }
}

TEST_CASE("is_range_01: zero matrix, rank-1 projection, shifted spectra") {
  RangeMargin z = is_range_01(HermMat::zero(3), 1e-12);
  CHECK(z.ok);
  CHECK(z.margin == doctest::Approx(0.0));

  // Rank-1 projection v v^H / |v|^2 has eigenvalues {0, 1}.
  VecC v(3);
  v[0] = Complex(1.0, 2.0);
  v[1] = Complex(0.0, -1.0);
  v[2] = Complex(0.5, 0.0);
  MatC proj = v * v.adjoint() / v.squaredNorm();
  RangeMargin p = is_range_01(HermMat(proj), 1e-12);
  CHECK(p.ok);
  CHECK(p.margin == doctest::Approx(0.0).epsilon(1e-12));

  MatC shifted = MatC::Identity(2, 2) * 1.5;
  CHECK_FALSE(is_range_01(HermMat(shifted), 1e-8).ok);
  CHECK(is_range_01(HermMat(shifted), 1e-8).margin == doctest::Approx(-0.5));
}

TEST_CASE("invert: identity, multiply-back residual, singular error") {
  HermMat id = HermMat::identity(4);
  CHECK((invert(id).matrix() - id.matrix()).norm() <= 1e-14);

  Rng rng(321);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(2, 5);
    MatC a = random_hermitian(rng, n);
    // Make it positive definite.
    a += (a.cwiseAbs().sum() + 1.0) * MatC::Identity(n, n);
    HermMat m(a);
    HermMat mi = invert(m);
    CHECK((m.matrix() * mi.matrix() - MatC::Identity(n, n)).norm() <= 1e-10);
  }

  CHECK_THROWS_AS(invert(HermMat::zero(3)), SingularMatrixError);
}

TEST_CASE("deterministic output: repeated eigh calls agree bit-for-bit") {
  Rng rng(9);
  const MatC a = random_hermitian(rng, 5);
  EighResult e1 = eigh(HermMat(a));
  EighResult e2 = eigh(HermMat(a));
  CHECK((e1.eigenvectors - e2.eigenvectors).norm() == 0.0);
  // Phase fix: first non-negligible component of each column is real positive.
  for (int k = 0; k < 5; ++k) {
    for (int r = 0; r < 5; ++r) {
      const Complex c = e1.eigenvectors(r, k);
      if (std::abs(c) > 1e-12) {
        CHECK(c.imag() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(c.real() > 0.0);
        break;
      }
    }
  }
}

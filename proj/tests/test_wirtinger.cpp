#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "zq/wirtinger.hpp"

using namespace zq;

namespace {

// Independent oracle: complex central finite difference of the Wirtinger
// derivative, d/dz = (d/dx - i d/dy)/2 applied to eval().
Complex fd_dz(const PolyRC& p, int j, const VecC& z, double h) {
  VecC zp = z, zm = z;
  zp[j] += h;
  zm[j] -= h;
  const Complex dx = (p.eval(zp) - p.eval(zm)) / (2.0 * h);
  zp = z;
  zm = z;
  zp[j] += Complex(0.0, h);
  zm[j] -= Complex(0.0, h);
  const Complex dy = (p.eval(zp) - p.eval(zm)) / (2.0 * h);
  return 0.5 * (dx - Complex(0.0, 1.0) * dy);
}

Complex fd_dzbar(const PolyRC& p, int j, const VecC& z, double h) {
  VecC zp = z, zm = z;
  zp[j] += h;
  zm[j] -= h;
  const Complex dx = (p.eval(zp) - p.eval(zm)) / (2.0 * h);
  zp = z;
  zm = z;
  zp[j] += Complex(0.0, h);
  zm[j] -= Complex(0.0, h);
  const Complex dy = (p.eval(zp) - p.eval(zm)) / (2.0 * h);
  return 0.5 * (dx + Complex(0.0, 1.0) * dy);
}

VecC random_point(Rng& rng, int n, double box) {
  VecC z(n);
  for (int j = 0; j < n; ++j) z[j] = rng.complex_box(box);
  return z;
}

PolyRC random_poly(Rng& rng, int n, int degree, int monomials) {
  PolyRC p(n);
  p += PolyRC::constant(n, rng.complex_box(1.0));
  for (int m = 0; m < monomials; ++m) {
    PolyRC::Key key(static_cast<size_t>(2 * n), 0);
    int budget = degree;
    for (int slot = 0; slot < 2 * n && budget > 0; ++slot) {
      const int e = rng.uniform_int(0, budget);
      key[static_cast<size_t>(slot)] = e;
      budget -= e;
    }
    PolyRC term(n);
    term.add_term(key, rng.complex_box(1.0));
    p += term;
  }
  return p;
}

PolyRC prop52_p(int n = 2) {
  const PolyRC x = PolyRC::re_variable(n, 0);
  const PolyRC y = PolyRC::im_variable(n, 0);
  const PolyRC a2 = PolyRC::abs2_variable(n, 1);
  return 2.0 * (x * a2) - x * y.pow(4);
}

}  // namespace

TEST_CASE("dz of |z|^2 is zbar (n=1)") {
  PolyRC p = PolyRC::abs2_variable(1, 0);
  PolyRC d = p.dz(0);
  PolyRC expected = PolyRC::conj_variable(1, 0);
  CHECK((d - expected).max_abs_coeff() == doctest::Approx(0.0));
  PolyRC db = p.dzbar(0);
  CHECK((db - PolyRC::variable(1, 0)).max_abs_coeff() == doctest::Approx(0.0));
}

TEST_CASE("dz of a constant is zero, index errors throw") {
  PolyRC c = PolyRC::constant(2, Complex(5.0, 0.0));
  CHECK(c.dz(0).is_zero());
  CHECK(c.dz(1).is_zero());
  CHECK_THROWS_AS(c.dz(2), std::invalid_argument);
  CHECK_THROWS_AS(c.dzbar(-1), std::invalid_argument);
}

TEST_CASE("dz of P(z1,z2) against the closed form z2bar*(z1+z1bar)") {
  // P = 2x|z2|^2 - x y^4 with x = Re z1: dP/dz2 = 2x z2bar = z2bar (z1 + z1bar).
  PolyRC p = prop52_p();
  PolyRC d = p.dz(1);
  PolyRC expected = PolyRC::conj_variable(2, 1) * (PolyRC::variable(2, 0) + PolyRC::conj_variable(2, 0));
  CHECK((d - expected).max_abs_coeff() <= 1e-14);
}

TEST_CASE("finite-difference oracle for dz and dzbar at 20 random points") {
  PolyRC p = prop52_p();
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const VecC z = random_point(rng, 2, 1.0);
    for (int j = 0; j < 2; ++j) {
      const Complex sym = p.dz(j).eval(z);
      const Complex num = fd_dz(p, j, z, 1e-5);
      CHECK(std::abs(sym - num) <= 1e-6 * (1.0 + std::abs(sym)));
      const Complex symb = p.dzbar(j).eval(z);
      const Complex numb = fd_dzbar(p, j, z, 1e-5);
      CHECK(std::abs(symb - numb) <= 1e-6 * (1.0 + std::abs(symb)));
    }
  }
}

TEST_CASE("reality identity: dzbar(p) = conj(dz(p)) for real-valued p") {
  PolyRC p = prop52_p();
  REQUIRE(p.mark_real_valued());
  for (int j = 0; j < 2; ++j) {
    PolyRC diff = p.dzbar(j) - p.dz(j).conjugate();
    CHECK(diff.max_abs_coeff() <= 1e-14);
  }
}

TEST_CASE("conj(d_zbar(p,j)) equals d_z(conj(p),j) on coefficients") {
  Rng rng(7);
  PolyRC p = random_poly(rng, 2, 5, 6);
  for (int j = 0; j < 2; ++j) {
    PolyRC lhs = p.dzbar(j).conjugate();
    PolyRC rhs = p.conjugate().dz(j);
    CHECK((lhs - rhs).max_abs_coeff() <= 1e-14);
  }
}

TEST_CASE("mixed Wirtinger partials commute") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    PolyRC p = random_poly(rng, 3, 6, 8);
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        PolyRC a = p.dzbar(k).dz(j);
        PolyRC b = p.dz(j).dzbar(k);
        CHECK((a - b).max_abs_coeff() <= 1e-13 * (1.0 + p.max_abs_coeff()));
      }
    }
  }
}

TEST_CASE("from_real_poly: x^2 + y^2 -> z zbar") {
  PolyRC p = parse_rho("x1^2 + y1^2", 1);
  PolyRC expected = PolyRC::abs2_variable(1, 0);
  CHECK((p - expected).max_abs_coeff() <= 1e-15);
  CHECK(p.real_valued());
}

TEST_CASE("from_real_poly: P evaluated at (1+i, 1) equals 1") {
  PolyRC p = parse_rho("2*x1*(x2^2 + y2^2) - x1*y1^4", 2);
  VecC z(2);
  z[0] = Complex(1.0, 1.0);
  z[1] = Complex(1.0, 0.0);
  // Direct real-coordinate oracle: 2*1*1 - 1*1 = 1.
  CHECK(p.eval(z).real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(p.eval(z).imag()) <= 1e-13);
  // Matches the programmatic construction.
  CHECK((p - prop52_p()).max_abs_coeff() <= 1e-14);
}

TEST_CASE("from_real_poly of zero gives the empty polynomial") {
  PolyRC p = parse_rho("0", 1);
  CHECK(p.is_zero());
}

TEST_CASE("eval: quadric at (0,1) is on the boundary; constant term at 0") {
  PolyRC quad(2);
  quad += PolyRC::abs2_variable(2, 0);
  quad -= PolyRC::abs2_variable(2, 1);
  quad += PolyRC::constant(2, Complex(1.0, 0.0));
  VecC z(2);
  z[0] = Complex(0.0, 0.0);
  z[1] = Complex(1.0, 0.0);
  CHECK(std::abs(quad.eval(z)) <= 1e-15);

  Rng rng(5);
  PolyRC p = random_poly(rng, 2, 4, 5);
  VecC zero = VecC::Zero(2);
  PolyRC::Key ckey(4, 0);
  auto it = p.terms().find(ckey);
  const Complex c = (it == p.terms().end()) ? Complex(0, 0) : it->second;
  CHECK(std::abs(p.eval(zero) - c) <= 1e-15);
}

TEST_CASE("real-valued eval has negligible imaginary part at 100 random points") {
  PolyRC p = parse_rho("2*x1*(x2^2 + y2^2) - x1*y1^4 + x1^2*y2^2 + 3*y1^2", 2);
  REQUIRE(p.real_valued());
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const VecC z = random_point(rng, 2, 2.0);
    CHECK(std::abs(p.eval(z).imag()) <= 1e-13 * (1.0 + std::abs(p.eval(z))));
  }
}

TEST_CASE("finite-difference consistency for random degree <= 6 polynomials") {
  Rng rng(31337);
  for (int trial = 0; trial < 12; ++trial) {
    PolyRC p = random_poly(rng, 2, 6, 6);
    for (int rep = 0; rep < 4; ++rep) {
      const VecC z = random_point(rng, 2, 1.0);
      for (int j = 0; j < 2; ++j) {
        const Complex sym = p.dz(j).eval(z);
        const Complex num = fd_dz(p, j, z, 1e-5);
        CHECK(std::abs(num - sym) <= 1e-5 * (1.0 + std::abs(sym)));
      }
    }
  }
}

TEST_CASE("degree cap raises an explicit error") {
  CHECK_THROWS_AS(parse_rho("x1^13", 1), DegreeCapError);
  CHECK_NOTHROW(parse_rho("x1^12", 1));
}

TEST_CASE("parser reports line and column on errors") {
  try {
    parse_real_poly_xy("x1 + \n x9", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col >= 2);
  }
  CHECK_THROWS_AS(parse_real_poly_xy("x1 + ", 1), ParseError);
  CHECK_THROWS_AS(parse_real_poly_xy("(x1", 1), ParseError);
  CHECK_THROWS_AS(parse_real_poly_xy("x1 ^ x1", 1), ParseError);
}

TEST_CASE("parser handles decimals, unary minus, powers, nesting") {
  RealPoly p = parse_real_poly_xy("-0.5*x1^2 + (x1 - y1)*(x1 + y1)", 1);
  VecR v(2);
  v[0] = 2.0;  // x1
  v[1] = 1.0;  // y1
  CHECK(p.eval(v) == doctest::Approx(-0.5 * 4.0 + (2.0 - 1.0) * (2.0 + 1.0)));
}

TEST_CASE("compose_affine matches direct evaluation") {
  Rng rng(4242);
  PolyRC p = random_poly(rng, 2, 4, 6);
  VecC center(2);
  center[0] = Complex(0.3, -0.2);
  center[1] = Complex(-1.0, 0.5);
  PolyRC q = p.compose_affine(center, 0.5);
  for (int i = 0; i < 10; ++i) {
    const VecC z = random_point(rng, 2, 1.0);
    const VecC mapped = center + 0.5 * z;
    CHECK(std::abs(q.eval(z) - p.eval(mapped)) <= 1e-12 * (1.0 + std::abs(p.eval(mapped))));
  }
}

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zq/types.hpp"

namespace zq {

/// Total-degree cap for defining-function polynomials entering through the
/// parser, from_real_poly, or DomainSpec validation. Internal integrand
/// assembly in the form calculus is exempt (products of bump polynomials
/// legitimately exceed it).
inline constexpr int kRhoDegreeCap = 12;

/// Polynomial with real coefficients in m real variables. Exponent vectors
/// are dense, length m. Used as the carrier for real-coordinate input
/// (x_1..x_n, y_1..y_n) and for homogeneous polynomials on R^{m}.
class RealPoly {
 public:
  using Key = std::vector<int>;

  RealPoly() = default;
  explicit RealPoly(int vars) : vars_(vars) {}
  static RealPoly constant(int vars, double c);
  static RealPoly variable(int vars, int index);

  int vars() const { return vars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, double>& terms() const { return terms_; }

  void add_term(const Key& exponents, double coeff);

  RealPoly& operator+=(const RealPoly& other);
  RealPoly& operator-=(const RealPoly& other);
  friend RealPoly operator+(RealPoly a, const RealPoly& b) { return a += b; }
  friend RealPoly operator-(RealPoly a, const RealPoly& b) { return a -= b; }
  friend RealPoly operator*(const RealPoly& a, const RealPoly& b);
  friend RealPoly operator*(double s, RealPoly p);
  RealPoly pow(int k) const;

  RealPoly derivative(int index) const;
  double eval(const VecR& x) const;

  int total_degree() const;  // -1 for the zero polynomial
  /// Degree if every monomial has the same total degree, std::nullopt otherwise.
  std::optional<int> homogeneous_degree() const;
  /// Substitute variable `index` := 1 and drop it (result has vars()-1 variables).
  RealPoly substitute_one(int index) const;

  double max_abs_coeff() const;
  std::string canonical_string(const std::vector<std::string>& names) const;

 private:
  void normalize();
  int vars_ = 0;
  std::map<Key, double> terms_;
};

/// Polynomial in (z_1..z_n, zbar_1..zbar_n) with complex coefficients.
/// Keys store the z-exponents followed by the zbar-exponents (length 2n).
/// Values are immutable after construction in all public pipelines; the
/// real_valued flag certifies coeff(a,b) == conj(coeff(b,a)) exactly.
class PolyRC {
 public:
  using Key = std::vector<int>;

  PolyRC() = default;
  explicit PolyRC(int n) : n_(n) {}
  static PolyRC constant(int n, Complex c);
  static PolyRC variable(int n, int j);        // z_j, 0-based
  static PolyRC conj_variable(int n, int j);   // zbar_j
  static PolyRC re_variable(int n, int j);     // (z_j + zbar_j)/2
  static PolyRC im_variable(int n, int j);     // (z_j - zbar_j)/(2i)
  static PolyRC abs2_variable(int n, int j);   // z_j zbar_j

  int dim() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  bool real_valued() const { return real_valued_; }
  const std::map<Key, Complex>& terms() const { return terms_; }

  void add_term(const Key& exponents, Complex coeff);

  PolyRC& operator+=(const PolyRC& other);
  PolyRC& operator-=(const PolyRC& other);
  friend PolyRC operator+(PolyRC a, const PolyRC& b) { return a += b; }
  friend PolyRC operator-(PolyRC a, const PolyRC& b) { return a -= b; }
  friend PolyRC operator*(const PolyRC& a, const PolyRC& b);
  friend PolyRC operator*(Complex s, PolyRC p);
  friend PolyRC operator*(double s, PolyRC p) { return Complex(s, 0.0) * std::move(p); }
  PolyRC operator-() const { return Complex(-1.0, 0.0) * (*this); }
  PolyRC pow(int k) const;

  PolyRC conjugate() const;
  PolyRC dz(int j) const;     // Wirtinger d/dz_j
  PolyRC dzbar(int j) const;  // Wirtinger d/dzbar_j
  /// Real-coordinate derivative: axis 2j is x_j, axis 2j+1 is y_j.
  PolyRC real_derivative(int axis) const;

  Complex eval(const VecC& z) const;
  /// Substitute z := center + scale*z (and conjugates accordingly).
  PolyRC compose_affine(const VecC& center, double scale) const;

  int total_degree() const;  // -1 for the zero polynomial
  double max_abs_coeff() const;

  /// Verifies coeff(a,b) == conj(coeff(b,a)) within tol*scale, then
  /// symmetrizes so the identity holds exactly. Returns false (and leaves the
  /// flag unset) if the scan fails.
  bool mark_real_valued(double tol = 1e-12);
  /// Largest |coeff(a,b) - conj(coeff(b,a))| over all exponent pairs.
  double reality_defect() const;

  std::string canonical_string() const;

 private:
  void normalize();
  int n_ = 0;
  bool real_valued_ = false;
  std::map<Key, Complex> terms_;
};

void check_degree_cap(const PolyRC& p, int cap = kRhoDegreeCap);

/// Convert a real-coefficient polynomial in (x_1..x_n, y_1..y_n) to the
/// z/zbar basis via x_j = (z_j + zbar_j)/2, y_j = (z_j - zbar_j)/(2i).
/// The result is marked real_valued.
PolyRC from_real_poly(const RealPoly& p);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col);
  int line;
  int col;
};

/// Parse a polynomial expression over the named variables. Supported syntax:
/// + - * ^, parentheses, integer and decimal literals.
RealPoly parse_real_poly(const std::string& text, const std::vector<std::string>& var_names);

/// Variables x1..xn, y1..yn mapped to slots 0..n-1, n..2n-1.
RealPoly parse_real_poly_xy(const std::string& text, int n);

/// Parse in x/y variables, convert to PolyRC, enforce the degree cap.
PolyRC parse_rho(const std::string& text, int n);

}  // namespace zq

#include "zq/wirtinger.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace zq {

namespace {

// Relative prune threshold: coefficients with modulus below
// kPruneRel * max|coeff| are dropped after arithmetic. A relative threshold
// keeps affinely rescaled polynomials (scaling demos) term-for-term identical.
constexpr double kPruneRel = 1e-14;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_hex(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

// ---------------------------------------------------------------------------
// RealPoly

RealPoly RealPoly::constant(int vars, double c) {
  RealPoly p(vars);
  p.add_term(Key(static_cast<size_t>(vars), 0), c);
  return p;
}

RealPoly RealPoly::variable(int vars, int index) {
  if (index < 0 || index >= vars) throw std::invalid_argument("RealPoly: variable index out of range");
  RealPoly p(vars);
  Key k(static_cast<size_t>(vars), 0);
  k[static_cast<size_t>(index)] = 1;
  p.add_term(k, 1.0);
  return p;
}

void RealPoly::add_term(const Key& exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != vars_) throw std::invalid_argument("RealPoly: bad exponent vector");
  terms_[exponents] += coeff;
  normalize();
}

void RealPoly::normalize() {
  double scale = 0.0;
  for (const auto& [k, c] : terms_) scale = std::max(scale, std::abs(c));
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= kPruneRel * scale || it->second == 0.0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

RealPoly& RealPoly::operator+=(const RealPoly& other) {
  if (vars_ != other.vars_) throw std::invalid_argument("RealPoly: dimension mismatch");
  for (const auto& [k, c] : other.terms_) terms_[k] += c;
  normalize();
  return *this;
}

RealPoly& RealPoly::operator-=(const RealPoly& other) {
  if (vars_ != other.vars_) throw std::invalid_argument("RealPoly: dimension mismatch");
  for (const auto& [k, c] : other.terms_) terms_[k] -= c;
  normalize();
  return *this;
}

RealPoly operator*(const RealPoly& a, const RealPoly& b) {
  if (a.vars_ != b.vars_) throw std::invalid_argument("RealPoly: dimension mismatch");
  RealPoly out(a.vars_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      RealPoly::Key k(ka);
      for (size_t i = 0; i < k.size(); ++i) k[i] += kb[i];
      out.terms_[k] += ca * cb;
    }
  }
  out.normalize();
  return out;
}

RealPoly operator*(double s, RealPoly p) {
  for (auto& [k, c] : p.terms_) c *= s;
  p.normalize();
  return p;
}

RealPoly RealPoly::pow(int k) const {
  if (k < 0) throw std::invalid_argument("RealPoly: negative exponent");
  RealPoly out = RealPoly::constant(vars_, 1.0);
  for (int i = 0; i < k; ++i) out = out * (*this);
  return out;
}

RealPoly RealPoly::derivative(int index) const {
  if (index < 0 || index >= vars_) throw std::invalid_argument("RealPoly: derivative index out of range");
  RealPoly out(vars_);
  for (const auto& [k, c] : terms_) {
    int e = k[static_cast<size_t>(index)];
    if (e == 0) continue;
    Key nk(k);
    nk[static_cast<size_t>(index)] = e - 1;
    out.terms_[nk] += c * static_cast<double>(e);
  }
  out.normalize();
  return out;
}

double RealPoly::eval(const VecR& x) const {
  if (x.size() != vars_) throw std::invalid_argument("RealPoly: eval dimension mismatch");
  double sum = 0.0;
  for (const auto& [k, c] : terms_) {
    double m = c;
    for (int i = 0; i < vars_; ++i) {
      for (int e = 0; e < k[static_cast<size_t>(i)]; ++e) m *= x[i];
    }
    sum += m;
  }
  return sum;
}

int RealPoly::total_degree() const {
  int deg = -1;
  for (const auto& [k, c] : terms_) {
    int d = 0;
    for (int e : k) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

std::optional<int> RealPoly::homogeneous_degree() const {
  std::optional<int> deg;
  for (const auto& [k, c] : terms_) {
    int d = 0;
    for (int e : k) d += e;
    if (!deg) {
      deg = d;
    } else if (*deg != d) {
      return std::nullopt;
    }
  }
  return deg;
}

RealPoly RealPoly::substitute_one(int index) const {
  if (index < 0 || index >= vars_) throw std::invalid_argument("RealPoly: substitute index out of range");
  RealPoly out(vars_ - 1);
  for (const auto& [k, c] : terms_) {
    Key nk;
    nk.reserve(k.size() - 1);
    for (size_t i = 0; i < k.size(); ++i) {
      if (static_cast<int>(i) != index) nk.push_back(k[i]);
    }
    out.terms_[nk] += c;
  }
  out.normalize();
  return out;
}

double RealPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string RealPoly::canonical_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << format_double(c);
    for (size_t i = 0; i < k.size(); ++i) {
      if (k[i] > 0) os << "*" << names[i] << "^" << k[i];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// PolyRC

PolyRC PolyRC::constant(int n, Complex c) {
  PolyRC p(n);
  p.add_term(Key(static_cast<size_t>(2 * n), 0), c);
  return p;
}

PolyRC PolyRC::variable(int n, int j) {
  if (j < 0 || j >= n) throw std::invalid_argument("PolyRC: variable index out of range");
  PolyRC p(n);
  Key k(static_cast<size_t>(2 * n), 0);
  k[static_cast<size_t>(j)] = 1;
  p.add_term(k, Complex(1.0, 0.0));
  return p;
}

PolyRC PolyRC::conj_variable(int n, int j) {
  if (j < 0 || j >= n) throw std::invalid_argument("PolyRC: variable index out of range");
  PolyRC p(n);
  Key k(static_cast<size_t>(2 * n), 0);
  k[static_cast<size_t>(n + j)] = 1;
  p.add_term(k, Complex(1.0, 0.0));
  return p;
}

PolyRC PolyRC::re_variable(int n, int j) {
  PolyRC p = variable(n, j) + conj_variable(n, j);
  return 0.5 * p;
}

PolyRC PolyRC::im_variable(int n, int j) {
  // (z - zbar)/(2i) = -i/2 z + i/2 zbar
  PolyRC p = Complex(0.0, -0.5) * variable(n, j);
  p += Complex(0.0, 0.5) * conj_variable(n, j);
  return p;
}

PolyRC PolyRC::abs2_variable(int n, int j) { return variable(n, j) * conj_variable(n, j); }

void PolyRC::add_term(const Key& exponents, Complex coeff) {
  if (static_cast<int>(exponents.size()) != 2 * n_) throw std::invalid_argument("PolyRC: bad exponent vector");
  terms_[exponents] += coeff;
  real_valued_ = false;
  normalize();
}

void PolyRC::normalize() {
  double scale = 0.0;
  for (const auto& [k, c] : terms_) scale = std::max(scale, std::abs(c));
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= kPruneRel * scale || it->second == Complex(0.0, 0.0)) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

PolyRC& PolyRC::operator+=(const PolyRC& other) {
  if (n_ != other.n_) throw std::invalid_argument("PolyRC: dimension mismatch");
  for (const auto& [k, c] : other.terms_) terms_[k] += c;
  real_valued_ = false;
  normalize();
  return *this;
}

PolyRC& PolyRC::operator-=(const PolyRC& other) {
  if (n_ != other.n_) throw std::invalid_argument("PolyRC: dimension mismatch");
  for (const auto& [k, c] : other.terms_) terms_[k] -= c;
  real_valued_ = false;
  normalize();
  return *this;
}

PolyRC operator*(const PolyRC& a, const PolyRC& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("PolyRC: dimension mismatch");
  PolyRC out(a.n_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      PolyRC::Key k(ka);
      for (size_t i = 0; i < k.size(); ++i) k[i] += kb[i];
      out.terms_[k] += ca * cb;
    }
  }
  out.normalize();
  return out;
}

PolyRC operator*(Complex s, PolyRC p) {
  for (auto& [k, c] : p.terms_) c *= s;
  p.real_valued_ = false;
  p.normalize();
  return p;
}

PolyRC PolyRC::pow(int k) const {
  if (k < 0) throw std::invalid_argument("PolyRC: negative exponent");
  PolyRC out = PolyRC::constant(n_, Complex(1.0, 0.0));
  for (int i = 0; i < k; ++i) out = out * (*this);
  return out;
}

PolyRC PolyRC::conjugate() const {
  PolyRC out(n_);
  for (const auto& [k, c] : terms_) {
    Key nk(static_cast<size_t>(2 * n_), 0);
    for (int j = 0; j < n_; ++j) {
      nk[static_cast<size_t>(j)] = k[static_cast<size_t>(n_ + j)];
      nk[static_cast<size_t>(n_ + j)] = k[static_cast<size_t>(j)];
    }
    out.terms_[nk] += std::conj(c);
  }
  out.real_valued_ = real_valued_;
  out.normalize();
  return out;
}

PolyRC PolyRC::dz(int j) const {
  if (j < 0 || j >= n_) throw std::invalid_argument("PolyRC: derivative index out of range");
  PolyRC out(n_);
  for (const auto& [k, c] : terms_) {
    int e = k[static_cast<size_t>(j)];
    if (e == 0) continue;
    Key nk(k);
    nk[static_cast<size_t>(j)] = e - 1;
    out.terms_[nk] += c * static_cast<double>(e);
  }
  out.normalize();
  return out;
}

PolyRC PolyRC::dzbar(int j) const {
  if (j < 0 || j >= n_) throw std::invalid_argument("PolyRC: derivative index out of range");
  PolyRC out(n_);
  for (const auto& [k, c] : terms_) {
    int e = k[static_cast<size_t>(n_ + j)];
    if (e == 0) continue;
    Key nk(k);
    nk[static_cast<size_t>(n_ + j)] = e - 1;
    out.terms_[nk] += c * static_cast<double>(e);
  }
  out.normalize();
  return out;
}

PolyRC PolyRC::real_derivative(int axis) const {
  if (axis < 0 || axis >= 2 * n_) throw std::invalid_argument("PolyRC: real axis out of range");
  int j = axis / 2;
  if (axis % 2 == 0) {
    // d/dx_j = d/dz_j + d/dzbar_j
    return dz(j) + dzbar(j);
  }
  // d/dy_j = i (d/dz_j - d/dzbar_j)
  return Complex(0.0, 1.0) * (dz(j) - dzbar(j));
}

Complex PolyRC::eval(const VecC& z) const {
  if (z.size() != n_) throw std::invalid_argument("PolyRC: eval dimension mismatch");
  Complex sum(0.0, 0.0);
  for (const auto& [k, c] : terms_) {
    Complex m = c;
    for (int j = 0; j < n_; ++j) {
      for (int e = 0; e < k[static_cast<size_t>(j)]; ++e) m *= z[j];
      const Complex zb = std::conj(z[j]);
      for (int e = 0; e < k[static_cast<size_t>(n_ + j)]; ++e) m *= zb;
    }
    sum += m;
  }
  return sum;
}

PolyRC PolyRC::compose_affine(const VecC& center, double scale) const {
  if (center.size() != n_) throw std::invalid_argument("PolyRC: affine dimension mismatch");
  std::vector<PolyRC> zs, zbs;
  zs.reserve(static_cast<size_t>(n_));
  zbs.reserve(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    zs.push_back(PolyRC::constant(n_, center[j]) + scale * PolyRC::variable(n_, j));
    zbs.push_back(PolyRC::constant(n_, std::conj(center[j])) + scale * PolyRC::conj_variable(n_, j));
  }
  PolyRC out(n_);
  for (const auto& [k, c] : terms_) {
    PolyRC term = PolyRC::constant(n_, c);
    for (int j = 0; j < n_; ++j) {
      if (k[static_cast<size_t>(j)] > 0) term = term * zs[static_cast<size_t>(j)].pow(k[static_cast<size_t>(j)]);
      if (k[static_cast<size_t>(n_ + j)] > 0)
        term = term * zbs[static_cast<size_t>(j)].pow(k[static_cast<size_t>(n_ + j)]);
    }
    out += term;
  }
  return out;
}

int PolyRC::total_degree() const {
  int deg = -1;
  for (const auto& [k, c] : terms_) {
    int d = 0;
    for (int e : k) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

double PolyRC::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double PolyRC::reality_defect() const {
  double defect = 0.0;
  for (const auto& [k, c] : terms_) {
    Key swapped(static_cast<size_t>(2 * n_), 0);
    for (int j = 0; j < n_; ++j) {
      swapped[static_cast<size_t>(j)] = k[static_cast<size_t>(n_ + j)];
      swapped[static_cast<size_t>(n_ + j)] = k[static_cast<size_t>(j)];
    }
    auto it = terms_.find(swapped);
    Complex mirror = (it == terms_.end()) ? Complex(0.0, 0.0) : it->second;
    defect = std::max(defect, std::abs(c - std::conj(mirror)));
  }
  return defect;
}

bool PolyRC::mark_real_valued(double tol) {
  double scale = std::max(1.0, max_abs_coeff());
  if (reality_defect() > tol * scale) return false;
  // Symmetrize so coeff(a,b) == conj(coeff(b,a)) holds exactly.
  std::map<Key, Complex> sym;
  for (const auto& [k, c] : terms_) {
    Key swapped(static_cast<size_t>(2 * n_), 0);
    for (int j = 0; j < n_; ++j) {
      swapped[static_cast<size_t>(j)] = k[static_cast<size_t>(n_ + j)];
      swapped[static_cast<size_t>(n_ + j)] = k[static_cast<size_t>(j)];
    }
    auto it = terms_.find(swapped);
    Complex mirror = (it == terms_.end()) ? Complex(0.0, 0.0) : it->second;
    sym[k] = 0.5 * (c + std::conj(mirror));
  }
  terms_ = std::move(sym);
  normalize();
  real_valued_ = true;
  return true;
}

std::string PolyRC::canonical_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << format_double(c.real()) << "," << format_double(c.imag()) << ")";
    for (int j = 0; j < n_; ++j) {
      if (k[static_cast<size_t>(j)] > 0) os << "*z" << (j + 1) << "^" << k[static_cast<size_t>(j)];
      if (k[static_cast<size_t>(n_ + j)] > 0) os << "*w" << (j + 1) << "^" << k[static_cast<size_t>(n_ + j)];
    }
  }
  return os.str();
}

void check_degree_cap(const PolyRC& p, int cap) {
  if (p.total_degree() > cap) {
    throw DegreeCapError("polynomial total degree " + std::to_string(p.total_degree()) +
                         " exceeds cap " + std::to_string(cap));
  }
}

PolyRC from_real_poly(const RealPoly& p) {
  if (p.vars() % 2 != 0) throw std::invalid_argument("from_real_poly: expected 2n real variables");
  const int n = p.vars() / 2;
  std::vector<PolyRC> xs, ys;
  for (int j = 0; j < n; ++j) {
    xs.push_back(PolyRC::re_variable(n, j));
    ys.push_back(PolyRC::im_variable(n, j));
  }
  PolyRC out(n);
  for (const auto& [k, c] : p.terms()) {
    PolyRC term = PolyRC::constant(n, Complex(c, 0.0));
    for (int j = 0; j < n; ++j) {
      if (k[static_cast<size_t>(j)] > 0) term = term * xs[static_cast<size_t>(j)].pow(k[static_cast<size_t>(j)]);
      if (k[static_cast<size_t>(n + j)] > 0)
        term = term * ys[static_cast<size_t>(j)].pow(k[static_cast<size_t>(n + j)]);
    }
    out += term;
  }
  if (!out.mark_real_valued()) {
    throw std::runtime_error("from_real_poly: conversion lost reality (internal error)");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(const std::string& msg, int line_, int col_)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
      line(line_),
      col(col_) {}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& names) : text_(text) {
    for (size_t i = 0; i < names.size(); ++i) name_to_index_[names[i]] = static_cast<int>(i);
    vars_ = static_cast<int>(names.size());
  }

  RealPoly parse() {
    RealPoly p = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void advance() {
    if (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  RealPoly parse_expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = (peek() == '-');
      advance();
    }
    RealPoly acc = parse_term();
    if (negate) acc = -1.0 * acc;
    for (;;) {
      skip_ws();
      char c = peek();
      if (c == '+' || c == '-') {
        advance();
        RealPoly t = parse_term();
        if (c == '+') {
          acc += t;
        } else {
          acc -= t;
        }
      } else {
        return acc;
      }
    }
  }

  RealPoly parse_term() {
    RealPoly acc = parse_factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        advance();
        acc = acc * parse_factor();
      } else {
        return acc;
      }
    }
  }

  RealPoly parse_factor() {
    RealPoly base = parse_atom();
    skip_ws();
    if (peek() == '^') {
      advance();
      skip_ws();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer exponent after '^'");
      int e = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        e = e * 10 + (peek() - '0');
        if (e > 64) fail("exponent too large");
        advance();
      }
      return base.pow(e);
    }
    return base;
  }

  RealPoly parse_atom() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      advance();
      RealPoly p = parse_expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      advance();
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '.') {
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
      double v = std::stod(text_.substr(start, pos_ - start));
      return RealPoly::constant(vars_, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      std::string name = text_.substr(start, pos_ - start);
      auto it = name_to_index_.find(name);
      if (it == name_to_index_.end()) fail("unknown variable '" + name + "'");
      return RealPoly::variable(vars_, it->second);
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  std::map<std::string, int> name_to_index_;
  int vars_ = 0;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

RealPoly parse_real_poly(const std::string& text, const std::vector<std::string>& var_names) {
  Parser p(text, var_names);
  return p.parse();
}

RealPoly parse_real_poly_xy(const std::string& text, int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(2 * n));
  for (int j = 1; j <= n; ++j) names.push_back("x" + std::to_string(j));
  for (int j = 1; j <= n; ++j) names.push_back("y" + std::to_string(j));
  return parse_real_poly(text, names);
}

PolyRC parse_rho(const std::string& text, int n) {
  RealPoly rp = parse_real_poly_xy(text, n);
  PolyRC p = from_real_poly(rp);
  check_degree_cap(p);
  return p;
}

}  // namespace zq

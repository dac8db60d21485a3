#pragma once

#include <array>
#include <optional>
#include <vector>

#include "zq/domain.hpp"

namespace zq {

/// Strictly increasing multi-indices I_q over {0..n-1} and the permutation
/// sign table eps^{jI}_J.
class MultiIndexAlg {
 public:
  MultiIndexAlg(int n, int q);

  int n() const { return n_; }
  int q() const { return q_; }
  int count() const { return static_cast<int>(tuples_.size()); }
  const std::vector<int>& tuple(int i) const { return tuples_[static_cast<size_t>(i)]; }
  /// Position of a sorted tuple, -1 if absent.
  int position(const std::vector<int>& t) const;

  /// Sign of the permutation taking (j, I...) to J when {j} union I == J as
  /// sets with j not in I; zero otherwise. I must be strictly increasing.
  static int eps_sign(int j, const std::vector<int>& I, const std::vector<int>& J);

 private:
  int n_, q_;
  std::vector<std::vector<int>> tuples_;
};

/// Weight phi with complex Hessian phi_{j kbar} = t * delta_{jk}:
/// gauss: phi = t |z|^2, model: phi = 2t sum_j (Re z_j)^2.
struct WeightSpec {
  enum class Form { gauss, model };
  double t = 0.0;
  Form form = Form::gauss;

  PolyRC phi(int n) const;  // global coordinates
  double phi_at(const VecC& z) const;
  /// d phi / d z_j as a polynomial in the local variable w = z - center.
  PolyRC phi_z_local(int n, int j, const VecC& center) const;
};

/// Compactly supported (0,q)-form. Coefficients are polynomials in the local
/// variable w = z - center (numerically stable for far-away centers), carried
/// on the closed polydisc |z_j - center_j| <= radii_j and extended by zero.
/// An optional radial zoning by |z|^2 supports the truncation transformer;
/// zone coefficients override `coeff` where present.
class TestForm {
 public:
  struct RadialZone {
    double lo = 0.0;  // active when lo <= |z|^2 < hi
    double hi = 0.0;
    std::vector<PolyRC> coeff;
  };

  TestForm(int n, int q, VecC center, VecR radii);

  int n() const { return n_; }
  int q() const { return q_; }
  const MultiIndexAlg& alg() const { return alg_; }
  const VecC& center() const { return center_; }
  const VecR& radii() const { return radii_; }

  std::vector<PolyRC> coeff;       // indexed by alg().tuple order
  std::vector<RadialZone> zones;   // empty for plain polydisc forms

  bool zoned() const { return !zones.empty(); }
  bool in_polydisc(const VecC& z) const;
  /// Coefficient value at a point (zero outside the support).
  Complex eval_coeff(int t, const VecC& z) const;
  double max_abs_poly_coeff() const;

 private:
  int n_, q_;
  MultiIndexAlg alg_;
  VecC center_;
  VecR radii_;
};

/// Product bump profile: prod_j (1 - |w_j|^2 / r_j^2)^4, C^3 across the seam.
PolyRC bump_polynomial(int n, const VecR& radii);

/// Assemble a form whose J-coefficient is outer[J] * bump (outer given in
/// local coordinates).
TestForm make_bump_form(int n, int q, const VecC& center, const VecR& radii,
                        const std::vector<PolyRC>& outer);

/// Random polynomial-times-bump form; outer polynomials have total degree
/// <= degree with coefficients in the unit box.
TestForm make_random_form(Rng& rng, int n, int q, const VecC& center, const VecR& radii,
                          int degree);

/// dbar in coordinates: (dbar f)_K = sum_{k,J} eps^{kJ}_K d f_J / d zbar_k.
/// Requires q <= n-1.
TestForm dbar(const TestForm& f);

/// Weighted adjoint in coordinates:
/// (dbar*_phi g)_J = - sum_j L^phi_j g_{jJ}, L^phi_j = d/dz_j - phi_j.
/// Defined for q >= 1; g must be compactly supported in the interior so no
/// boundary condition applies.
TestForm dbar_star(const TestForm& g, const WeightSpec& w);

/// Multiply by the radial cutoff chi(((r+1)^2 - |z|^2)/(2r+1)) realized as a
/// C^3 piecewise-polynomial smoothstep; the result is 1 on |z| <= r and 0 on
/// |z| >= r+1. Requires an un-zoned input.
TestForm truncate_form(const TestForm& f, double r);

/// Optional explicit quadrature box over the 2n global real axes; empty means
/// the support box of the form(s).
struct QuadBox {
  std::vector<std::array<double, 2>> axes;
};

struct NormReport {
  double norm2_f = 0.0;
  double norm2_dbar = 0.0;
  double norm2_dbar_star = 0.0;
  double norm2_grad = 0.0;  // sum_{J,j} || d f_J / d zbar_j ||^2
  double err_estimate = 0.0;
};

/// Tensor-product midpoint quadrature of the four weighted norms at
/// points_per_axis points per real axis, with a half-resolution pass for the
/// error estimate. Throws ContainmentError if a custom box does not contain
/// the support.
NormReport weighted_norms(const TestForm& f, const WeightSpec& w, int points_per_axis,
                          const QuadBox* box = nullptr);

/// (a, b)_phi = sum_J integral a_J conj(b_J) e^{-phi}. Forms must share
/// support (center and radii) and degree q.
Complex weighted_inner_product(const TestForm& a, const TestForm& b, const WeightSpec& w,
                               int points_per_axis);

struct MkhReport {
  double lhs = 0.0;  // ||dbar f||^2 + ||dbar*_phi f||^2 at the fine grid
  double rhs = 0.0;  // gradient term + q t ||f||^2 at the fine grid
  double rel_residual_coarse = 0.0;
  double rel_residual_fine = 0.0;
  double ratio = 0.0;  // coarse/fine, ~4 for a second-order rule
};

/// Interior Morrey-Kohn-Hoermander identity check (boundary integral absent
/// for interior-supported forms):
///   ||dbar f||^2 + ||dbar* f||^2 = sum ||d f_J/d zbar_j||^2 + q t ||f||^2.
/// Residuals are computed at points_per_axis and twice that.
MkhReport mkh_check(const TestForm& f, const WeightSpec& w, int points_per_axis);

/// ||dbar f||^2 + ||dbar* f||^2 - q t ||f||^2; nonnegative up to quadrature
/// error for interior forms with t > 0 (gauss weight).
double basic_estimate_margin(const TestForm& f, const WeightSpec& w, int points_per_axis);

struct ScalingRow {
  double radius = 0.0;
  double norm_f = 0.0;
  double norm_dbar = 0.0;
  double norm_dbar_star = 0.0;
  double rayleigh = 0.0;    // (||dbar u|| + ||dbar* u||) / ||u||
  double rayleigh_times_r = 0.0;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double max_rel_deviation = 0.0;  // of rayleigh*R across rows
};

/// Translate-and-dilate u_R(z) = R^{-n} u1((z - z_R)/R) and tabulate the
/// unweighted Rayleigh quotient. Ball containment of each support in
/// {rho < 0} is verified by sampling. Throws if a support leaves the domain.
ScalingReport scaling_demo(const TestForm& u1, const DomainSpec& omega,
                           const std::vector<double>& radii, const std::vector<VecC>& centers,
                           int points_per_axis);

struct ModelWeightReport {
  double hessian_residual = 0.0;  // coeff norm of (phi_{j kbar} - t delta_{jk})
  double sampled_sup = 0.0;       // max of phi over closed-domain samples
  double bound = 0.0;             // 2t
  bool pass = false;
};

/// For the slab domain sum (Re z_j)^2 < 1 with phi = 2t sum (Re z_j)^2:
/// symbolic Hessian identity and the sampled bound sup |phi| <= 2t.
ModelWeightReport model_weight_checks(double t, int n, int per_axis = 9);

}  // namespace zq

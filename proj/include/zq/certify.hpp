#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zq/upsilon.hpp"

#include "json.hpp"

namespace zq {

struct CertTolerances {
  double tol = 1e-8;        // closed conditions (i), (ii), tangency
  double theta_min = 1e-3;  // quantitative floor for the open condition (iii)
};

struct PointRecord {
  VecC z;
  VecR mu;
  double tr_upsilon = 0.0;
  double c_i = 0.0;    // min(lambda_min, 1 - lambda_max) of Upsilon
  double c_ii = 0.0;   // mu_1+..+mu_q - Tr(Upsilon * Hessian), consistent normalization
  double c_iii = 0.0;  // |q - Tr(Upsilon)|
  double tangency = 0.0;  // ||M ghat||_2, ghat the unit gradient
};

struct CertReport {
  std::string check = "weak_zq";
  int q = 0;
  LeviNormalization normalization = LeviNormalization::raw;
  CertTolerances tols;
  std::vector<PointRecord> points;
  int dropped = 0;
  double min_c_i = 0.0;
  double min_c_ii = 0.0;
  double inf_c_iii = 0.0;
  double max_tangency = 0.0;
  std::vector<int> failure_indices;
  bool pass = false;

  nlohmann::ordered_json to_json() const;
  void write_points_csv(std::ostream& os) const;
};

/// Weak Z(q) scan over a boundary sample. The per-point conditions are
///   (i)  eigenvalues of Upsilon within [-tol, 1+tol],
///   (ii) mu_1+..+mu_q - Tr(Upsilon H) >= -tol,
///   (iii) |q - Tr Upsilon| with aggregate infimum >= theta_min,
/// plus the tangency residual <= max(tol, 1e-9). The Hessian in (ii) uses the
/// same normalization as the Levi eigenvalues.
CertReport check_weak_zq(const DomainSpec& spec, const HermitianField& field, int q,
                         const std::vector<BoundaryPointData>& sample, CertTolerances tols = {});

struct K0PointRecord {
  double y = 0.0;
  double off_diag = 0.0;        // |frame Upsilon^{2bar 1}|
  double forced_identity = 0.0; // residual of the second forced identity
  int unit_eigenvalues_9 = 0;   // eigenvalues within 1e-9 of 1
  int unit_eigenvalues_6 = 0;   // eigenvalues within 1e-6 of 1
};

struct K0Report {
  std::vector<K0PointRecord> points;
  double max_off_diag = 0.0;
  double max_forced_identity = 0.0;
  bool pass = false;
  nlohmann::ordered_json to_json() const;
};

/// On K0 = {x = 0, z2 = 0} the displayed frame entries of any admissible
/// field must satisfy Upsilon^{2bar 1} = 0 and
///   (-3 y^2 / (1 + 4|rho_1|^2)) (1 - Upsilon^{1bar 1}) + 2 (1 - Upsilon^{2bar 2}) = 0.
/// Also counts eigenvalues equal to one at y = 0 versus y != 0.
K0Report check_k0_negative_result(const DomainSpec& spec, const HermitianField& field,
                                  const std::vector<BoundaryPointData>& k0_sample, double tol);

struct GrowthWindowRecord {
  double scale = 0.0;
  int points = 0;
  std::vector<double> max_ratio;       // per requested order k
  std::vector<double> max_ratio_scaled;  // ratio * (|x|^2+1)^{k/2-1}
  double min_grad = 0.0;
  double mean_abs_z = 0.0;
};

struct GrowthReport {
  std::vector<int> orders;
  std::vector<GrowthWindowRecord> windows;
  /// Least-squares slope of log(min |grad rho|) against log(1 + s), where s
  /// is the squared window scale. Evidence only.
  double grad_growth_exponent = 0.0;
  nlohmann::ordered_json to_json() const;
};

/// Samples |grad^k rho| / |grad rho| over boundary windows on a geometric
/// scale schedule (L, 2L, 4L, 8L, ...). Reported values are numerical
/// evidence for the uniform-C^m ratio bounds, never a proof.
GrowthReport uniform_cm_evidence(const DomainSpec& spec, const std::vector<int>& orders,
                                 double base_scale, int num_windows, int per_axis,
                                 const std::vector<int>& growth_axes = {});

struct HomogReport {
  int degree = 0;
  double euler_residual = 0.0;    // coeff norm of y.grad(rho~) - deg * rho~
  double eq51_residual = 0.0;     // coeff norm of x.grad(rho) + rho~_{n+1}(x,1)
  double c0 = 0.0;                // sampled min |grad rho~| on the unit sphere of b(Omega~)
  double min_bound_slack = 0.0;   // min over samples of |grad rho|(|x|^2+1) - c0
  bool pass = false;
  nlohmann::ordered_json to_json() const;
};

/// Dehomogenization rho(x) = rho~(x, 1) with symbolic Euler and
/// radial-derivative identities, plus the sampled gradient lower bound
/// |grad rho| >= C0 / (|x|^2 + 1).
HomogReport dehomogenize_and_check(const RealPoly& rho_tilde, RealPoly* rho_out = nullptr,
                                   int sphere_samples = 400, std::uint64_t seed = 1);

}  // namespace zq

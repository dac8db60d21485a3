#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <vector>

#include "zq/hermitian.hpp"
#include "zq/wirtinger.hpp"

namespace zq {

/// Which gradient norm divides the Levi matrix.
///   raw:      Levi = (tangential restriction of the complex Hessian), no division.
///             Matches the closed-form eigenvalue computations for the builtin
///             quadric and graph examples.
///   gradient: divide by |d rho| (equal to the Euclidean norm of the real
///             gradient), making verdicts invariant under rescaling rho.
enum class LeviNormalization { raw, gradient };

const char* to_string(LeviNormalization n);

/// Domain {rho < 0} with a real-valued polynomial defining function.
class DomainSpec {
 public:
  /// Validates that rho is real-valued (marking it if the coefficient scan
  /// passes) and, when graph_var is set, that rho = -Im z_g + rest with rest
  /// independent of z_g (checked symbolically).
  static DomainSpec create(PolyRC rho, std::optional<int> graph_var = std::nullopt);

  const PolyRC& rho() const { return rho_; }
  int dim() const { return n_; }
  std::optional<int> graph_var() const { return graph_var_; }
  /// For graph domains, the polynomial `rest` with rho = -Im z_g + rest.
  const PolyRC& graph_rest() const { return graph_rest_; }

  double rho_at(const VecC& z) const;
  /// Wirtinger gradient (rho_1, ..., rho_n).
  VecC gradient(const VecC& z) const;
  /// Complex Hessian H(j,k) = rho_{j kbar}.
  MatC hessian_at(const VecC& z) const;
  /// |d rho| = sqrt(4 sum_j |rho_j|^2); equals the Euclidean norm of the real
  /// gradient on R^{2n}.
  double grad_norm(const VecC& z) const;

  const PolyRC& rho_z(int j) const { return rho_z_[static_cast<size_t>(j)]; }
  const PolyRC& rho_hess(int j, int k) const {
    return hess_[static_cast<size_t>(j)][static_cast<size_t>(k)];
  }

 private:
  PolyRC rho_;
  int n_ = 0;
  std::optional<int> graph_var_;
  PolyRC graph_rest_;
  std::vector<PolyRC> rho_z_;
  std::vector<std::vector<PolyRC>> hess_;
};

/// Boundary point with first/second order data, tangential frame, and Levi
/// spectrum. Frame rows u_1..u_{n-1} span T^{1,0}(bOmega) at z (so
/// sum_l u^l rho_l = 0); the normal row is conj(grad)/|grad|. The full n x n
/// row matrix is unitary.
struct BoundaryPointData {
  VecC z;
  VecC grad;          // (rho_1..rho_n)
  double grad_norm = 0.0;
  MatC hessian;       // n x n
  MatC tangential;    // (n-1) x n, rows u_1..u_{n-1}
  VecC normal;        // conj(grad)/||grad||_2
  MatC levi;          // (n-1) x (n-1)
  VecR mu;            // ascending Levi eigenvalues
  LeviNormalization normalization = LeviNormalization::raw;
};

/// Axis-aligned box over the 2n real coordinates (x1, y1, ..., xn, yn)
/// with per-axis sample counts. For graph domains the axis of Im z_g is
/// ignored (the graph equation determines it).
struct SampleWindow {
  std::vector<std::array<double, 2>> axes;
  std::vector<int> counts;
};

struct BoundarySampleResult {
  std::vector<BoundaryPointData> points;
  int dropped = 0;  // seeds that failed Newton projection or had degenerate gradient
};

/// Newton projection z <- z - rho(z) grad rho(z)/|grad rho(z)|^2 onto {rho=0}.
/// Tolerance |rho| <= 1e-12, 50 iteration cap. Throws NonConvergenceError.
VecC newton_project(const DomainSpec& spec, VecC seed);

/// Hermitian Gram-Schmidt frame of the orthogonal complement of `normal`,
/// seeded by standard basis vectors in the given order. Rows are the n-1
/// tangential vectors. Exposed for the frame-choice-independence tests.
MatC tangential_frame(const VecC& normal, const std::vector<int>& seed_order);

BoundaryPointData frame_at(const DomainSpec& spec, const VecC& z,
                           LeviNormalization norm = LeviNormalization::raw);

/// Tensor-grid boundary sampling. Graph domains solve Im z_g = rest exactly;
/// other domains Newton-project each grid seed. Throws if no points are found.
BoundarySampleResult boundary_sample(const DomainSpec& spec, const SampleWindow& window,
                                     LeviNormalization norm = LeviNormalization::raw,
                                     int threads = 1);

struct SignedDistanceResult {
  double delta = 0.0;  // negative inside {rho<0}
  VecC foot;
  VecC normal_grad;  // gradient of the signed distance at the foot point
  int iterations = 0;
};

/// Foot-point projection via alternating Newton projection and tangential
/// correction. Throws NonConvergenceError outside the tubular reach.
SignedDistanceResult signed_distance(const DomainSpec& spec, const VecC& p, double eps_reach);

/// For the quadric |z|^2_+ - |z|^2_- + 1 with signature p: assembles the
/// tangential eigenvector v = (|z|^2_- z_1..|z|^2_- z_p, |z|^2_+ z_{p+1}..)
/// and returns the max residual of the tangency and eigenvalue relations.
/// Throws for z = 0.
double levi_eigenvector_check(const DomainSpec& spec, int p_signature, const VecC& z);

/// CSV dump: point coordinates, |d rho|, ascending Levi eigenvalues.
void write_boundary_csv(std::ostream& os, const std::vector<BoundaryPointData>& points);

}  // namespace zq

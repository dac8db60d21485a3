#pragma once

#include <functional>
#include <string>

#include "zq/domain.hpp"

namespace zq {

/// Hermitian-matrix-valued field on (a region of) C^n. Storage convention:
/// M(k, j) holds the component contracting the j-th gradient entry, so the
/// tangency condition reads M * (rho_1..rho_n)^T = 0. Evaluation is lazy;
/// `valid` marks the region of definition.
struct HermitianField {
  int n = 0;
  std::string label;
  std::function<MatC(const VecC&)> evaluate;
  std::function<bool(const VecC&)> valid = [](const VecC&) { return true; };
};

/// Smooth step: 0 for t <= 0, 1 for t >= 1, C^infinity, with the symmetry
/// 1 - chi(t) = chi(1 - t).
double smooth_step(double t);

/// The trivial field, valid everywhere.
HermitianField upsilon_zero(int n);

/// Projection field for the signature quadric:
/// M(k,j) = delta_jk - conj(z_k) z_j / |z|^2_- on the lower block
/// (p+1 <= j,k <= n), zero elsewhere. Rank n-p-1 projection onto the Levi
/// eigenspace with eigenvalue -1. Invalid where |z|^2_- = 0.
HermitianField upsilon_quadric(int n, int p);

/// Patch parameters for the graph-domain field. R0 is the pseudoconvexity
/// radius, R1 = R2 the outer cutoff radius, Y1 < Y2 the |y| band.
struct Prop52Params {
  double R0 = 3.0;
  double R1 = 6.0;
  double R2 = 6.0;
  double Y1 = 15.0;
  double Y2 = 30.0;
};

/// Rank-one field on the band |y| >= Y1:
///   (4 lambda / |d rho|^2) * v v^H, v = (conj(rho_2), -conj(rho_1), 0),
///   lambda = 1 - (150 y^2 - 100)/(y^10 + 100 y^8).
/// Throws when lambda falls outside (0,1) (Y1 too small).
HermitianField upsilon_one(const DomainSpec& spec, double Y1);

/// Trace-one field assembled in the closed-form tangential frame:
///   Y2_frame = I - s^{-1} U^{-1} diag(2, 3y^2) U^{-1},
///   s = 2(1+4|rho_1|^2) + 3y^2(1+4|rho_2|^2),
/// lifted to ambient coordinates through the frame rows.
HermitianField upsilon_two(const DomainSpec& spec);

/// Cutoff-patched combination of upsilon_one and upsilon_two:
/// reduces to upsilon_one for y^2 >= Y2^2 inside R0, to upsilon_two for
/// y^2 <= Y1^2 inside R0, and to zero outside radius R1.
HermitianField upsilon_patched(const DomainSpec& spec, const Prop52Params& params);

enum class ExtendSignCase {
  q_minus_tr_positive,  // extension psi * Upsilon(pi(p))
  q_minus_tr_negative,  // extension psi * Upsilon(pi(p)) + (1 - psi) I
};

/// Extension of a boundary field to a tubular neighborhood via the foot-point
/// projection: psi == 1 within distance eps, == 0 beyond 2*eps. Restricted to
/// the boundary the extension equals the input field.
HermitianField extend_upsilon(const HermitianField& boundary_field, const DomainSpec& spec,
                              double eps, ExtendSignCase sign_case);

/// Ambient lift W_t^H F W_t of a frame-indexed Hermitian matrix, where W_t is
/// the (n-1) x n tangential row matrix. Preserves spectrum (plus a zero) and
/// trace, and satisfies the tangency condition.
MatC lift_frame_matrix(const MatC& tangential_rows, const MatC& frame_matrix);

/// Frame representation W_t M W_t^H of an ambient tangential field.
MatC restrict_to_frame(const MatC& tangential_rows, const MatC& ambient);

/// Validation scan used to pin Prop52Params: returns the smallest integer
/// Y1 in [y_low, y_high] such that on a grid over the band region both the
/// lambda bracket 100 y^-8 < 1 - lambda < 200 y^-8 and the condition-(ii)
/// inequality for upsilon_one hold. Throws if none is found.
int scan_prop52_y1(const DomainSpec& spec, double R1, int y_low, int y_high);

}  // namespace zq

#pragma once

#include <string>
#include <vector>

#include "zq/domain.hpp"

namespace zq {

/// Ball of radius 1: rho = |z|^2 - 1.
DomainSpec make_ball(int n);

/// Signature quadric: rho = sum_{j<=p} |z_j|^2 - sum_{j>p} |z_j|^2 + 1.
DomainSpec make_quadric(int n, int p);

/// Half-space above the Heisenberg group in C^2: rho = -Im z_2 + |z_1|^2.
DomainSpec make_heisenberg();

/// Strictly pseudoconvex slab: rho = sum_j (Re z_j)^2 - 1.
DomainSpec make_model_section4(int n);

/// Graph domain in C^3: rho = -Im z_3 + P(z_1,z_2) + Q(z_1,z_2) with
///   P = 2x|z_2|^2 - x y^4
///   Q = (1/3)(x^2+|z_2|^2)^3 + (x^2+|z_2|^2)^2 y^2
///       - (1/60)x^6 + (1/4)x^4 y^2 - (1/4)x^2 y^4 + (1/60)y^6
/// where z_1 = x + iy. The last four terms of Q sum to -(1/60) Re(z_1^6).
DomainSpec make_prop52();

/// P alone (no Q correction): rho = -Im z_3 + P. The uniform-smoothness
/// failure control case.
DomainSpec make_prop52_uncorrected();

struct BuiltinInfo {
  std::string name;
  std::string formula;   // real-coordinate text of rho
  std::string notes;
  int n = 0;
  bool parametrized = false;  // accepts n (and p) parameters
};

std::vector<BuiltinInfo> builtin_catalog();

/// Resolve a builtin by name with optional parameters. Throws
/// std::invalid_argument for unknown names or bad parameters.
DomainSpec make_builtin(const std::string& name, int n = 0, int p = 0);

}  // namespace zq

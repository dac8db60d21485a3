#pragma once

#include "zq/types.hpp"

namespace zq {

/// Dense Hermitian matrix at small n. Construction symmetrizes the input as
/// (m + m*)/2, so the stored matrix satisfies entries(j,k) == conj(entries(k,j))
/// exactly and the diagonal is real.
class HermMat {
 public:
  explicit HermMat(const MatC& raw);
  static HermMat identity(int n);
  static HermMat zero(int n);

  int size() const { return static_cast<int>(m_.rows()); }
  const MatC& matrix() const { return m_; }
  Complex operator()(int j, int k) const { return m_(j, k); }

  double trace() const { return m_.diagonal().real().sum(); }
  Complex determinant() const { return m_.determinant(); }
  double frobenius_norm() const { return m_.norm(); }

 private:
  MatC m_;
};

struct EighResult {
  VecR eigenvalues;   // ascending
  MatC eigenvectors;  // unitary, columns matched to eigenvalues
  int sweeps = 0;
};

/// Cyclic complex Jacobi eigensolver. Eigenvalues ascend; ties keep the
/// pre-sort order. Each eigenvector has its first non-negligible component
/// rotated to the positive real axis for deterministic output.
/// Throws NonConvergenceError if the off-diagonal mass does not vanish
/// within the sweep cap (ill-formed input).
EighResult eigh(const HermMat& m);

struct RangeMargin {
  bool ok = false;
  double margin = 0.0;  // min(lambda_min, 1 - lambda_max)
};

/// True iff all eigenvalues lie in [-tol, 1 + tol].
RangeMargin is_range_01(const HermMat& m, double tol);

/// Inverse of a Hermitian matrix. Throws SingularMatrixError when |det| <= 1e-12.
HermMat invert(const HermMat& m);

}  // namespace zq

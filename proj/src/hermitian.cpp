#include "zq/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace zq {

HermMat::HermMat(const MatC& raw) {
  if (raw.rows() != raw.cols()) throw std::invalid_argument("HermMat: matrix must be square");
  m_ = 0.5 * (raw + raw.adjoint().eval());
  for (int i = 0; i < m_.rows(); ++i) m_(i, i) = Complex(m_(i, i).real(), 0.0);
}

HermMat HermMat::identity(int n) { return HermMat(MatC::Identity(n, n)); }

HermMat HermMat::zero(int n) { return HermMat(MatC::Zero(n, n)); }

EighResult eigh(const HermMat& m) {
  const int n = m.size();
  MatC a = m.matrix();
  MatC v = MatC::Identity(n, n);

  const double scale = std::max(1.0, a.norm());
  const double off_tol = 1e-14 * scale;
  const int max_sweeps = 64;

  int sweep = 0;
  bool converged = false;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    off = std::sqrt(2.0 * off);
    if (off <= off_tol) {
      converged = true;
      break;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq_abs = std::abs(a(p, q));
        if (apq_abs <= 1e-18 * scale) {
          a(p, q) = Complex(0.0, 0.0);
          a(q, p) = Complex(0.0, 0.0);
          continue;
        }
        const Complex alpha = a(p, q) / apq_abs;  // phase of the pivot
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * apq_abs);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex alpha_bar = std::conj(alpha);

        // A <- J^H A J with J(p,p)=c, J(p,q)=s, J(q,p)=-s conj(alpha), J(q,q)=c conj(alpha)
        for (int r = 0; r < n; ++r) {
          const Complex arp = a(r, p);
          const Complex arq = a(r, q);
          a(r, p) = c * arp - s * alpha_bar * arq;
          a(r, q) = s * arp + c * alpha_bar * arq;
        }
        for (int r = 0; r < n; ++r) {
          const Complex apr = a(p, r);
          const Complex aqr = a(q, r);
          a(p, r) = c * apr - s * alpha * aqr;
          a(q, r) = s * apr + c * alpha * aqr;
        }
        a(p, q) = Complex(0.0, 0.0);
        a(q, p) = Complex(0.0, 0.0);
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);

        for (int r = 0; r < n; ++r) {
          const Complex vrp = v(r, p);
          const Complex vrq = v(r, q);
          v(r, p) = c * vrp - s * alpha_bar * vrq;
          v(r, q) = s * vrp + c * alpha_bar * vrq;
        }
      }
    }
  }
  if (!converged) throw NonConvergenceError("eigh: Jacobi sweeps did not converge");

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EighResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.sweeps = sweep;
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[static_cast<size_t>(k)], order[static_cast<size_t>(k)]).real();
    out.eigenvectors.col(k) = v.col(order[static_cast<size_t>(k)]);
  }
  // Deterministic phase: first non-negligible component made real positive.
  for (int k = 0; k < n; ++k) {
    for (int r = 0; r < n; ++r) {
      const Complex c = out.eigenvectors(r, k);
      if (std::abs(c) > 1e-12) {
        out.eigenvectors.col(k) *= std::conj(c) / std::abs(c);
        break;
      }
    }
  }
  return out;
}

RangeMargin is_range_01(const HermMat& m, double tol) {
  EighResult e = eigh(m);
  RangeMargin out;
  const double lo = e.eigenvalues.minCoeff();
  const double hi = e.eigenvalues.maxCoeff();
  out.margin = std::min(lo, 1.0 - hi);
  out.ok = (lo >= -tol) && (hi <= 1.0 + tol);
  return out;
}

HermMat invert(const HermMat& m) {
  Eigen::PartialPivLU<MatC> lu(m.matrix());
  const Complex det = lu.determinant();
  if (std::abs(det) <= 1e-12) throw SingularMatrixError("invert: |det| <= 1e-12");
  MatC inv = lu.solve(MatC::Identity(m.size(), m.size()));
  return HermMat(inv);
}

}  // namespace zq

#include "zq/domain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace zq {

namespace {

constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonCap = 50;
constexpr double kDegenerateGrad = 1e-10;

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || count < 2 * threads) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

const char* to_string(LeviNormalization n) {
  return n == LeviNormalization::raw ? "raw" : "gradient";
}

DomainSpec DomainSpec::create(PolyRC rho, std::optional<int> graph_var) {
  DomainSpec spec;
  spec.n_ = rho.dim();
  if (spec.n_ < 1) throw std::invalid_argument("DomainSpec: dimension must be >= 1");
  if (!rho.real_valued()) {
    if (!rho.mark_real_valued()) {
      throw std::invalid_argument("DomainSpec: defining function is not real-valued");
    }
  }
  check_degree_cap(rho);
  spec.rho_ = std::move(rho);
  if (graph_var) {
    const int g = *graph_var;
    if (g < 0 || g >= spec.n_) throw std::invalid_argument("DomainSpec: graph_var out of range");
    // rho = -Im z_g + rest  =>  rest = rho + Im z_g must not involve z_g.
    PolyRC rest = spec.rho_ + PolyRC::im_variable(spec.n_, g);
    for (const auto& [k, c] : rest.terms()) {
      if (k[static_cast<size_t>(g)] != 0 || k[static_cast<size_t>(spec.n_ + g)] != 0) {
        throw std::invalid_argument("DomainSpec: rho is not of the form -Im z_g + rest(z_others)");
      }
    }
    rest.mark_real_valued();
    spec.graph_rest_ = std::move(rest);
    spec.graph_var_ = g;
  }
  spec.rho_z_.reserve(static_cast<size_t>(spec.n_));
  for (int j = 0; j < spec.n_; ++j) spec.rho_z_.push_back(spec.rho_.dz(j));
  spec.hess_.resize(static_cast<size_t>(spec.n_));
  for (int j = 0; j < spec.n_; ++j) {
    spec.hess_[static_cast<size_t>(j)].reserve(static_cast<size_t>(spec.n_));
    for (int k = 0; k < spec.n_; ++k) {
      spec.hess_[static_cast<size_t>(j)].push_back(spec.rho_z_[static_cast<size_t>(j)].dzbar(k));
    }
  }
  return spec;
}

double DomainSpec::rho_at(const VecC& z) const { return rho_.eval(z).real(); }

VecC DomainSpec::gradient(const VecC& z) const {
  VecC g(n_);
  for (int j = 0; j < n_; ++j) g[j] = rho_z_[static_cast<size_t>(j)].eval(z);
  return g;
}

MatC DomainSpec::hessian_at(const VecC& z) const {
  MatC h(n_, n_);
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k) h(j, k) = hess_[static_cast<size_t>(j)][static_cast<size_t>(k)].eval(z);
  return h;
}

double DomainSpec::grad_norm(const VecC& z) const {
  return 2.0 * gradient(z).norm();
}

MatC tangential_frame(const VecC& normal, const std::vector<int>& seed_order) {
  const int n = static_cast<int>(normal.size());
  MatC rows(n - 1, n);
  int filled = 0;
  for (int cand : seed_order) {
    if (filled >= n - 1) break;
    VecC v = VecC::Zero(n);
    v[cand] = Complex(1.0, 0.0);
    v -= normal * normal.dot(v);
    for (int r = 0; r < filled; ++r) {
      const VecC u = rows.row(r).transpose();
      v -= u * u.dot(v);
    }
    const double nv = v.norm();
    if (nv > 1e-8) {
      rows.row(filled) = (v / nv).transpose();
      ++filled;
    }
  }
  if (filled != n - 1) throw std::runtime_error("tangential_frame: Gram-Schmidt failed to span the tangent space");
  return rows;
}

VecC newton_project(const DomainSpec& spec, VecC seed) {
  for (int it = 0; it < kNewtonCap; ++it) {
    const double r = spec.rho_at(seed);
    if (std::abs(r) <= kNewtonTol) return seed;
    const VecC g = spec.gradient(seed);
    // Real gradient of rho as a complex vector is 2 conj(g); the Newton step
    // p <- p - rho * grad/|grad|^2 becomes:
    const double g2 = 4.0 * g.squaredNorm();
    if (g2 <= kDegenerateGrad * kDegenerateGrad) {
      throw NonConvergenceError("newton_project: degenerate gradient");
    }
    seed -= (r / g2) * 2.0 * g.conjugate();
  }
  throw NonConvergenceError("newton_project: no convergence within 50 iterations");
}

BoundaryPointData frame_at(const DomainSpec& spec, const VecC& z, LeviNormalization norm) {
  const int n = spec.dim();
  if (z.size() != n) throw std::invalid_argument("frame_at: dimension mismatch");
  BoundaryPointData out;
  out.z = z;
  out.grad = spec.gradient(z);
  out.grad_norm = 2.0 * out.grad.norm();
  if (out.grad_norm < kDegenerateGrad) {
    throw std::invalid_argument("frame_at: degenerate boundary point (|grad rho| < 1e-10)");
  }
  out.hessian = spec.hessian_at(z);
  out.normal = out.grad.conjugate() / out.grad.norm();
  out.normalization = norm;

  MatC rows(n, n);
  const bool paper_frame = (n == 3) && spec.graph_var() && *spec.graph_var() == 2;
  if (paper_frame) {
    // Closed-form orthonormal frame for n=3 graph domains, z3 the graph
    // direction: D = |d rho|, u3 the unit normal.
    const Complex r1 = out.grad[0];
    const Complex r2 = out.grad[1];
    const double d = out.grad_norm;
    const double denom = d + 1.0;
    rows(0, 0) = (1.0 + 4.0 * std::norm(r2) / denom) / d;
    rows(0, 1) = (-4.0 * r1 * std::conj(r2) / denom) / d;
    rows(0, 2) = Complex(0.0, 2.0) * r1 / d;
    rows(1, 0) = (-4.0 * std::conj(r1) * r2 / denom) / d;
    rows(1, 1) = (1.0 + 4.0 * std::norm(r1) / denom) / d;
    rows(1, 2) = Complex(0.0, 2.0) * r2 / d;
    rows(2, 0) = 2.0 * std::conj(r1) / d;
    rows(2, 1) = 2.0 * std::conj(r2) / d;
    rows(2, 2) = Complex(0.0, -1.0) / d;
  } else {
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    const MatC tang = tangential_frame(out.normal, order);
    rows.topRows(n - 1) = tang;
    rows.row(n - 1) = out.normal.transpose();
  }

  out.tangential = rows.topRows(n - 1);
  MatC hess = out.hessian;
  if (norm == LeviNormalization::gradient) hess /= out.grad_norm;
  out.levi = out.tangential * hess * out.tangential.adjoint();
  out.mu = eigh(HermMat(out.levi)).eigenvalues;
  return out;
}

namespace {

// Enumerate the tensor grid over the selected axes. Axis a in [0, 2n):
// even = Re z_{a/2}, odd = Im z_{a/2}.
std::vector<VecC> window_grid(const SampleWindow& window, int n, std::optional<int> skip_axis) {
  const int axes = 2 * n;
  if (static_cast<int>(window.axes.size()) != axes || static_cast<int>(window.counts.size()) != axes) {
    throw std::invalid_argument("boundary_sample: window must list all 2n real axes");
  }
  std::vector<int> active;
  for (int a = 0; a < axes; ++a) {
    if (skip_axis && a == *skip_axis) continue;
    if (window.counts[static_cast<size_t>(a)] < 1) throw std::invalid_argument("boundary_sample: counts must be >= 1");
    active.push_back(a);
  }
  long total = 1;
  for (int a : active) total *= window.counts[static_cast<size_t>(a)];
  if (total <= 0 || total > 50'000'000) throw std::invalid_argument("boundary_sample: grid too large");

  std::vector<VecC> pts;
  pts.reserve(static_cast<size_t>(total));
  std::vector<int> idx(active.size(), 0);
  for (long s = 0; s < total; ++s) {
    VecC z = VecC::Zero(n);
    std::vector<double> coords(static_cast<size_t>(axes), 0.0);
    for (size_t i = 0; i < active.size(); ++i) {
      const int a = active[i];
      const auto& [lo, hi] = window.axes[static_cast<size_t>(a)];
      const int c = window.counts[static_cast<size_t>(a)];
      coords[static_cast<size_t>(a)] = (c == 1) ? 0.5 * (lo + hi)
                                                : lo + (hi - lo) * static_cast<double>(idx[i]) / (c - 1);
    }
    for (int j = 0; j < n; ++j) {
      z[j] = Complex(coords[static_cast<size_t>(2 * j)], coords[static_cast<size_t>(2 * j + 1)]);
    }
    pts.push_back(std::move(z));
    for (size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < window.counts[static_cast<size_t>(active[i])]) break;
      idx[i] = 0;
    }
  }
  return pts;
}

}  // namespace

BoundarySampleResult boundary_sample(const DomainSpec& spec, const SampleWindow& window,
                                     LeviNormalization norm, int threads) {
  const int n = spec.dim();
  std::optional<int> skip_axis;
  if (spec.graph_var()) skip_axis = 2 * (*spec.graph_var()) + 1;  // the Im z_g axis
  std::vector<VecC> seeds = window_grid(window, n, skip_axis);

  std::vector<std::optional<BoundaryPointData>> slots(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), threads, [&](int i) {
    VecC z = seeds[static_cast<size_t>(i)];
    try {
      if (spec.graph_var()) {
        const int g = *spec.graph_var();
        const double im = spec.graph_rest().eval(z).real();
        z[g] = Complex(z[g].real(), im);
      } else {
        z = newton_project(spec, z);
      }
      slots[static_cast<size_t>(i)] = frame_at(spec, z, norm);
    } catch (const NonConvergenceError&) {
    } catch (const std::invalid_argument&) {
    }
  });

  BoundarySampleResult out;
  for (auto& s : slots) {
    if (s) {
      out.points.push_back(std::move(*s));
    } else {
      ++out.dropped;
    }
  }
  if (out.points.empty()) {
    throw std::runtime_error("boundary_sample: window produced no boundary points");
  }
  return out;
}

SignedDistanceResult signed_distance(const DomainSpec& spec, const VecC& p, double eps_reach) {
  const double rho_p = spec.rho_at(p);
  SignedDistanceResult out;

  VecC foot = newton_project(spec, p);
  const int cap = 100;
  int it = 0;
  for (; it < cap; ++it) {
    const VecC g = spec.gradient(foot);
    const double gn = g.norm();
    if (2.0 * gn < kDegenerateGrad) throw NonConvergenceError("signed_distance: degenerate gradient at foot");
    const VecC nu = g.conjugate() / gn;  // complex representation of the real unit normal
    const VecC r = p - foot;
    // Real-orthogonal decomposition: component of r along nu under Re<.,.>.
    const double along = (r.transpose() * nu.conjugate())(0, 0).real();
    const VecC tangential = r - along * nu;
    const double resid = tangential.norm();
    if (resid <= 1e-10 * std::max(1.0, r.norm()) && std::abs(spec.rho_at(foot)) <= kNewtonTol) break;
    foot = newton_project(spec, foot + tangential);
  }
  if (it == cap) throw NonConvergenceError("signed_distance: foot-point iteration did not converge");

  const double dist = (p - foot).norm();
  if (dist > 2.0 * eps_reach + 1e-12) {
    throw NonConvergenceError("signed_distance: point outside the requested tubular reach");
  }
  out.delta = (rho_p >= 0.0) ? dist : -dist;
  out.foot = foot;
  const VecC gf = spec.gradient(foot);
  out.normal_grad = gf.conjugate() / gf.norm();
  out.iterations = it;
  return out;
}

double levi_eigenvector_check(const DomainSpec& spec, int p_signature, const VecC& z) {
  const int n = spec.dim();
  if (z.norm() == 0.0) throw std::invalid_argument("levi_eigenvector_check: v undefined at z = 0");
  double plus = 0.0, minus = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j < p_signature) {
      plus += std::norm(z[j]);
    } else {
      minus += std::norm(z[j]);
    }
  }
  const double z2 = plus + minus;
  VecC v(n);
  for (int j = 0; j < n; ++j) v[j] = (j < p_signature ? minus : plus) * z[j];

  const VecC g = spec.gradient(z);
  const MatC h = spec.hessian_at(z);

  double residual = std::abs((v.transpose() * g)(0, 0));  // sum v_j rho_j = 0
  const double lambda = (minus - plus) / z2;
  const double coeff = 2.0 * minus * plus / z2;
  for (int k = 0; k < n; ++k) {
    Complex lhs(0.0, 0.0);
    for (int j = 0; j < n; ++j) lhs += v[j] * h(j, k);
    const Complex rhs = lambda * v[k] + coeff * std::conj(g[k]);
    residual = std::max(residual, std::abs(lhs - rhs));
  }
  return residual;
}

void write_boundary_csv(std::ostream& os, const std::vector<BoundaryPointData>& points) {
  if (points.empty()) return;
  const int n = static_cast<int>(points.front().z.size());
  os << "index";
  for (int j = 1; j <= n; ++j) os << ",re_z" << j << ",im_z" << j;
  os << ",grad_norm";
  for (int j = 1; j < n; ++j) os << ",mu" << j;
  os << "\n";
  os.precision(17);
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    os << i;
    for (int j = 0; j < n; ++j) os << "," << p.z[j].real() << "," << p.z[j].imag();
    os << "," << p.grad_norm;
    for (int j = 0; j + 1 < n; ++j) os << "," << p.mu[j];
    os << "\n";
  }
}

}  // namespace zq

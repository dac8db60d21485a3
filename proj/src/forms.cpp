#include "zq/forms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>

namespace zq {

// ---------------------------------------------------------------------------
// MultiIndexAlg

MultiIndexAlg::MultiIndexAlg(int n, int q) : n_(n), q_(q) {
  if (n < 1 || q < 0 || q > n) throw std::invalid_argument("MultiIndexAlg: need 0 <= q <= n");
  std::vector<int> current;
  // Lexicographic enumeration of strictly increasing q-tuples.
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(current.size()) == q) {
      tuples_.push_back(current);
      return;
    }
    for (int v = start; v < n; ++v) {
      current.push_back(v);
      rec(v + 1);
      current.pop_back();
    }
  };
  rec(0);
}

int MultiIndexAlg::position(const std::vector<int>& t) const {
  for (size_t i = 0; i < tuples_.size(); ++i) {
    if (tuples_[i] == t) return static_cast<int>(i);
  }
  return -1;
}

int MultiIndexAlg::eps_sign(int j, const std::vector<int>& I, const std::vector<int>& J) {
  for (size_t i = 0; i + 1 < I.size(); ++i) {
    if (I[i] >= I[i + 1]) throw std::invalid_argument("eps_sign: I must be strictly increasing");
  }
  if (std::find(I.begin(), I.end(), j) != I.end()) return 0;
  std::vector<int> merged(I);
  merged.push_back(j);
  std::sort(merged.begin(), merged.end());
  if (merged != J) return 0;
  int below = 0;
  for (int v : I) {
    if (v < j) ++below;
  }
  return (below % 2 == 0) ? 1 : -1;
}

// ---------------------------------------------------------------------------
// WeightSpec

PolyRC WeightSpec::phi(int n) const {
  PolyRC p(n);
  if (form == Form::gauss) {
    for (int j = 0; j < n; ++j) p += PolyRC::abs2_variable(n, j);
  } else {
    for (int j = 0; j < n; ++j) p += 2.0 * PolyRC::re_variable(n, j).pow(2);
  }
  p = t * p;
  p.mark_real_valued();
  return p;
}

double WeightSpec::phi_at(const VecC& z) const {
  double s = 0.0;
  if (form == Form::gauss) {
    s = z.squaredNorm();
  } else {
    for (int j = 0; j < z.size(); ++j) s += 2.0 * z[j].real() * z[j].real();
  }
  return t * s;
}

PolyRC WeightSpec::phi_z_local(int n, int j, const VecC& center) const {
  // gauss: phi_j = t zbar_j = t (conj(c_j) + wbar_j)
  // model: phi_j = t (z_j + zbar_j) = t (c_j + conj(c_j) + w_j + wbar_j)
  PolyRC p(n);
  if (form == Form::gauss) {
    p += PolyRC::constant(n, std::conj(center[j]));
    p += PolyRC::conj_variable(n, j);
  } else {
    p += PolyRC::constant(n, center[j] + std::conj(center[j]));
    p += PolyRC::variable(n, j);
    p += PolyRC::conj_variable(n, j);
  }
  return t * p;
}

// ---------------------------------------------------------------------------
// TestForm

TestForm::TestForm(int n, int q, VecC center, VecR radii)
    : n_(n), q_(q), alg_(n, q), center_(std::move(center)), radii_(std::move(radii)) {
  if (center_.size() != n_ || radii_.size() != n_) {
    throw std::invalid_argument("TestForm: center/radii dimension mismatch");
  }
  for (int j = 0; j < n_; ++j) {
    if (radii_[j] <= 0.0) throw std::invalid_argument("TestForm: radii must be positive");
  }
  coeff.assign(static_cast<size_t>(alg_.count()), PolyRC(n_));
}

bool TestForm::in_polydisc(const VecC& z) const {
  for (int j = 0; j < n_; ++j) {
    if (std::abs(z[j] - center_[j]) > radii_[j]) return false;
  }
  return true;
}

Complex TestForm::eval_coeff(int t, const VecC& z) const {
  if (!in_polydisc(z)) return {0.0, 0.0};
  const VecC w = z - center_;
  if (zones.empty()) return coeff[static_cast<size_t>(t)].eval(w);
  const double big = z.squaredNorm();
  for (const auto& zone : zones) {
    if (big >= zone.lo && big < zone.hi) return zone.coeff[static_cast<size_t>(t)].eval(w);
  }
  return {0.0, 0.0};
}

double TestForm::max_abs_poly_coeff() const {
  double m = 0.0;
  for (const auto& p : coeff) m = std::max(m, p.max_abs_coeff());
  for (const auto& zone : zones) {
    for (const auto& p : zone.coeff) m = std::max(m, p.max_abs_coeff());
  }
  return m;
}

PolyRC bump_polynomial(int n, const VecR& radii) {
  PolyRC bump = PolyRC::constant(n, Complex(1.0, 0.0));
  for (int j = 0; j < n; ++j) {
    PolyRC one_minus = PolyRC::constant(n, Complex(1.0, 0.0));
    one_minus -= (1.0 / (radii[j] * radii[j])) * PolyRC::abs2_variable(n, j);
    bump = bump * one_minus.pow(4);
  }
  return bump;
}

TestForm make_bump_form(int n, int q, const VecC& center, const VecR& radii,
                        const std::vector<PolyRC>& outer) {
  TestForm f(n, q, center, radii);
  if (static_cast<int>(outer.size()) != f.alg().count()) {
    throw std::invalid_argument("make_bump_form: wrong number of coefficient polynomials");
  }
  const PolyRC bump = bump_polynomial(n, radii);
  for (size_t i = 0; i < outer.size(); ++i) f.coeff[i] = outer[i] * bump;
  return f;
}

TestForm make_random_form(Rng& rng, int n, int q, const VecC& center, const VecR& radii,
                          int degree) {
  MultiIndexAlg alg(n, q);
  std::vector<PolyRC> outer;
  outer.reserve(static_cast<size_t>(alg.count()));
  for (int t = 0; t < alg.count(); ++t) {
    PolyRC p(n);
    p += PolyRC::constant(n, rng.complex_box(1.0));
    for (int mono = 0; mono < 3; ++mono) {
      PolyRC::Key key(static_cast<size_t>(2 * n), 0);
      int budget = degree;
      for (int slot = 0; slot < 2 * n && budget > 0; ++slot) {
        const int e = rng.uniform_int(0, budget);
        key[static_cast<size_t>(slot)] = e;
        budget -= e;
      }
      PolyRC term(n);
      term.add_term(key, rng.complex_box(1.0));
      p += term;
    }
    outer.push_back(std::move(p));
  }
  return make_bump_form(n, q, center, radii, outer);
}

// ---------------------------------------------------------------------------
// dbar / dbar_star / truncate

namespace {

std::vector<PolyRC> dbar_coeffs(const MultiIndexAlg& in_alg, const MultiIndexAlg& out_alg,
                                const std::vector<PolyRC>& in, int n) {
  std::vector<PolyRC> out(static_cast<size_t>(out_alg.count()), PolyRC(n));
  for (int jt = 0; jt < in_alg.count(); ++jt) {
    const std::vector<int>& J = in_alg.tuple(jt);
    for (int k = 0; k < n; ++k) {
      if (std::find(J.begin(), J.end(), k) != J.end()) continue;
      std::vector<int> K(J);
      K.push_back(k);
      std::sort(K.begin(), K.end());
      const int sign = MultiIndexAlg::eps_sign(k, J, K);
      const int pos = out_alg.position(K);
      PolyRC d = in[static_cast<size_t>(jt)].dzbar(k);
      if (sign > 0) {
        out[static_cast<size_t>(pos)] += d;
      } else {
        out[static_cast<size_t>(pos)] -= d;
      }
    }
  }
  return out;
}

std::vector<PolyRC> dbar_star_coeffs(const MultiIndexAlg& in_alg, const MultiIndexAlg& out_alg,
                                     const std::vector<PolyRC>& in, int n,
                                     const std::vector<PolyRC>& phi_z) {
  std::vector<PolyRC> out(static_cast<size_t>(out_alg.count()), PolyRC(n));
  for (int jt = 0; jt < out_alg.count(); ++jt) {
    const std::vector<int>& J = out_alg.tuple(jt);
    for (int j = 0; j < n; ++j) {
      if (std::find(J.begin(), J.end(), j) != J.end()) continue;
      std::vector<int> K(J);
      K.push_back(j);
      std::sort(K.begin(), K.end());
      const int sign = MultiIndexAlg::eps_sign(j, J, K);
      const int pos = in_alg.position(K);
      // g_{jJ} = sign * g_K; contribution -L^phi_j g_{jJ}.
      PolyRC g = in[static_cast<size_t>(pos)];
      PolyRC l = g.dz(j) - phi_z[static_cast<size_t>(j)] * g;
      if (sign > 0) {
        out[static_cast<size_t>(jt)] -= l;
      } else {
        out[static_cast<size_t>(jt)] += l;
      }
    }
  }
  return out;
}

}  // namespace

TestForm dbar(const TestForm& f) {
  const int n = f.n();
  if (f.q() >= n) throw std::invalid_argument("dbar: form degree q = n has no image");
  TestForm out(n, f.q() + 1, f.center(), f.radii());
  if (!f.zoned()) {
    out.coeff = dbar_coeffs(f.alg(), out.alg(), f.coeff, n);
  } else {
    for (const auto& zone : f.zones) {
      out.zones.push_back({zone.lo, zone.hi, dbar_coeffs(f.alg(), out.alg(), zone.coeff, n)});
    }
  }
  return out;
}

TestForm dbar_star(const TestForm& g, const WeightSpec& w) {
  const int n = g.n();
  if (g.q() < 1) throw std::invalid_argument("dbar_star: form degree must be >= 1");
  TestForm out(n, g.q() - 1, g.center(), g.radii());
  std::vector<PolyRC> phi_z;
  phi_z.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) phi_z.push_back(w.phi_z_local(n, j, g.center()));
  if (!g.zoned()) {
    out.coeff = dbar_star_coeffs(g.alg(), out.alg(), g.coeff, n, phi_z);
  } else {
    for (const auto& zone : g.zones) {
      out.zones.push_back(
          {zone.lo, zone.hi, dbar_star_coeffs(g.alg(), out.alg(), zone.coeff, n, phi_z)});
    }
  }
  return out;
}

TestForm truncate_form(const TestForm& f, double r) {
  if (f.zoned()) throw std::invalid_argument("truncate_form: input already zoned");
  if (r <= 0.0) throw std::invalid_argument("truncate_form: radius must be positive");
  const int n = f.n();

  // |z|^2 in local coordinates.
  PolyRC big(n);
  for (int j = 0; j < n; ++j) {
    big += PolyRC::constant(n, Complex(std::norm(f.center()[j]), 0.0));
    big += Complex(std::conj(f.center()[j])) * PolyRC::variable(n, j);
    big += Complex(f.center()[j]) * PolyRC::conj_variable(n, j);
    big += PolyRC::abs2_variable(n, j);
  }
  // Smoothstep argument u = ((r+1)^2 - |z|^2)/(2r+1); chi = 35u^4 - 84u^5 + 70u^6 - 20u^7
  // on 0 < u < 1 (C^3 at both seams, 1 - chi(t) = chi(1 - t)).
  PolyRC u = PolyRC::constant(n, Complex((r + 1.0) * (r + 1.0), 0.0));
  u -= big;
  u = (1.0 / (2.0 * r + 1.0)) * u;
  PolyRC chi = 35.0 * u.pow(4) - 84.0 * u.pow(5) + 70.0 * u.pow(6) - 20.0 * u.pow(7);

  TestForm out(n, f.q(), f.center(), f.radii());
  TestForm::RadialZone inner;
  inner.lo = 0.0;
  inner.hi = r * r;
  inner.coeff = f.coeff;
  TestForm::RadialZone mid;
  mid.lo = r * r;
  mid.hi = (r + 1.0) * (r + 1.0);
  mid.coeff.reserve(f.coeff.size());
  for (const auto& p : f.coeff) mid.coeff.push_back(p * chi);
  out.zones.push_back(std::move(inner));
  out.zones.push_back(std::move(mid));
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

struct CoordTables {
  int n = 0;
  int max_exp = 0;
  std::vector<MatC> s;  // per coordinate: s[j](a, b) = sum w^a wbar^b * weight * dA
};

int max_coord_exponent(const std::vector<const PolyRC*>& polys, int n) {
  int m = 0;
  for (const PolyRC* p : polys) {
    for (const auto& [k, c] : p->terms()) {
      for (int j = 0; j < 2 * n; ++j) m = std::max(m, k[static_cast<size_t>(j)]);
    }
  }
  return m;
}

// Local per-coordinate integration boxes; defaults to the support squares.
std::vector<std::array<double, 4>> local_boxes(const TestForm& shape, const QuadBox* box) {
  const int n = shape.n();
  std::vector<std::array<double, 4>> out(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double r = shape.radii()[j];
    if (box && !box->axes.empty()) {
      if (static_cast<int>(box->axes.size()) != 2 * n) {
        throw std::invalid_argument("QuadBox: must list all 2n axes");
      }
      const double cx = shape.center()[j].real();
      const double cy = shape.center()[j].imag();
      const auto& bx = box->axes[static_cast<size_t>(2 * j)];
      const auto& by = box->axes[static_cast<size_t>(2 * j + 1)];
      if (cx - r < bx[0] - 1e-14 || cx + r > bx[1] + 1e-14 || cy - r < by[0] - 1e-14 ||
          cy + r > by[1] + 1e-14) {
        throw ContainmentError("quadrature box does not contain the form support");
      }
      out[static_cast<size_t>(j)] = {bx[0] - cx, bx[1] - cx, by[0] - cy, by[1] - cy};
    } else {
      out[static_cast<size_t>(j)] = {-r, r, -r, r};
    }
  }
  return out;
}

CoordTables build_tables(const TestForm& shape, const WeightSpec& w, int m, const QuadBox* box,
                         int max_exp) {
  const int n = shape.n();
  CoordTables tables;
  tables.n = n;
  tables.max_exp = max_exp;
  const auto boxes = local_boxes(shape, box);
  std::vector<Complex> pw(static_cast<size_t>(max_exp + 1));
  std::vector<Complex> pwb(static_cast<size_t>(max_exp + 1));
  for (int j = 0; j < n; ++j) {
    const auto& [lox, hix, loy, hiy] = boxes[static_cast<size_t>(j)];
    const double hx = (hix - lox) / m;
    const double hy = (hiy - loy) / m;
    const double da = hx * hy;
    const double r2 = shape.radii()[j] * shape.radii()[j];
    MatC s = MatC::Zero(max_exp + 1, max_exp + 1);
    for (int ix = 0; ix < m; ++ix) {
      const double x = lox + (ix + 0.5) * hx;
      for (int iy = 0; iy < m; ++iy) {
        const double y = loy + (iy + 0.5) * hy;
        if (x * x + y * y > r2) continue;
        const Complex wj(x, y);
        const Complex zj = shape.center()[j] + wj;
        double wf;
        if (w.form == WeightSpec::Form::gauss) {
          wf = std::exp(-w.t * std::norm(zj));
        } else {
          wf = std::exp(-2.0 * w.t * zj.real() * zj.real());
        }
        wf *= da;
        pw[0] = Complex(1.0, 0.0);
        pwb[0] = Complex(1.0, 0.0);
        const Complex wjc = std::conj(wj);
        for (int a = 1; a <= max_exp; ++a) {
          pw[static_cast<size_t>(a)] = pw[static_cast<size_t>(a - 1)] * wj;
          pwb[static_cast<size_t>(a)] = pwb[static_cast<size_t>(a - 1)] * wjc;
        }
        for (int a = 0; a <= max_exp; ++a) {
          const Complex za = pw[static_cast<size_t>(a)] * wf;
          for (int b = 0; b <= max_exp; ++b) {
            s(a, b) += za * pwb[static_cast<size_t>(b)];
          }
        }
      }
    }
    tables.s.push_back(std::move(s));
  }
  return tables;
}

Complex integrate_poly(const PolyRC& p, const CoordTables& t) {
  Complex sum(0.0, 0.0);
  const int n = t.n;
  for (const auto& [k, c] : p.terms()) {
    Complex prod = c;
    for (int j = 0; j < n; ++j) {
      prod *= t.s[static_cast<size_t>(j)](k[static_cast<size_t>(j)], k[static_cast<size_t>(n + j)]);
    }
    sum += prod;
  }
  return sum;
}

PolyRC abs_square_sum(const std::vector<PolyRC>& polys) {
  if (polys.empty()) throw std::invalid_argument("abs_square_sum: empty");
  PolyRC out(polys.front().dim());
  for (const auto& p : polys) out += p * p.conjugate();
  return out;
}

// Pointwise tensor midpoint rule over the support box; used for zoned forms.
double integrate_pointwise(const TestForm& shape, const WeightSpec& w, int m,
                           const std::function<double(const VecC&)>& fn) {
  const int n = shape.n();
  const auto boxes = local_boxes(shape, nullptr);
  const int axes = 2 * n;
  std::vector<int> idx(static_cast<size_t>(axes), 0);
  long total = 1;
  for (int a = 0; a < axes; ++a) total *= m;
  double da = 1.0;
  std::vector<double> lo(static_cast<size_t>(axes)), h(static_cast<size_t>(axes));
  for (int j = 0; j < n; ++j) {
    const auto& [lox, hix, loy, hiy] = boxes[static_cast<size_t>(j)];
    lo[static_cast<size_t>(2 * j)] = lox;
    lo[static_cast<size_t>(2 * j + 1)] = loy;
    h[static_cast<size_t>(2 * j)] = (hix - lox) / m;
    h[static_cast<size_t>(2 * j + 1)] = (hiy - loy) / m;
    da *= h[static_cast<size_t>(2 * j)] * h[static_cast<size_t>(2 * j + 1)];
  }
  double sum = 0.0;
  for (long s = 0; s < total; ++s) {
    VecC z(n);
    for (int j = 0; j < n; ++j) {
      const double x = lo[static_cast<size_t>(2 * j)] + (idx[static_cast<size_t>(2 * j)] + 0.5) * h[static_cast<size_t>(2 * j)];
      const double y = lo[static_cast<size_t>(2 * j + 1)] + (idx[static_cast<size_t>(2 * j + 1)] + 0.5) * h[static_cast<size_t>(2 * j + 1)];
      z[j] = shape.center()[j] + Complex(x, y);
    }
    sum += fn(z) * std::exp(-w.phi_at(z));
    for (size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < m) break;
      idx[i] = 0;
    }
  }
  return sum * da;
}

double form_norm2_pointwise(const TestForm& f, const WeightSpec& w, int m) {
  return integrate_pointwise(f, w, m, [&](const VecC& z) {
    double s = 0.0;
    for (int t = 0; t < f.alg().count(); ++t) s += std::norm(f.eval_coeff(t, z));
    return s;
  });
}

struct NormJobs {
  PolyRC p_f, p_dbar, p_star, p_grad;
  bool has_dbar = false, has_star = false;
};

NormJobs make_norm_jobs(const TestForm& f, const WeightSpec& w) {
  const int n = f.n();
  NormJobs jobs;
  jobs.p_f = abs_square_sum(f.coeff);
  if (f.q() < n) {
    jobs.p_dbar = abs_square_sum(dbar(f).coeff);
    jobs.has_dbar = true;
  } else {
    jobs.p_dbar = PolyRC(n);
  }
  if (f.q() >= 1) {
    jobs.p_star = abs_square_sum(dbar_star(f, w).coeff);
    jobs.has_star = true;
  } else {
    jobs.p_star = PolyRC(n);
  }
  PolyRC grad(n);
  for (const auto& p : f.coeff) {
    for (int j = 0; j < n; ++j) {
      const PolyRC d = p.dzbar(j);
      grad += d * d.conjugate();
    }
  }
  jobs.p_grad = grad;
  return jobs;
}

NormReport norms_at(const TestForm& f, const WeightSpec& w, const NormJobs& jobs, int m,
                    const QuadBox* box) {
  std::vector<const PolyRC*> all = {&jobs.p_f, &jobs.p_dbar, &jobs.p_star, &jobs.p_grad};
  const int max_exp = max_coord_exponent(all, f.n());
  const CoordTables tables = build_tables(f, w, m, box, max_exp);
  NormReport out;
  out.norm2_f = integrate_poly(jobs.p_f, tables).real();
  out.norm2_dbar = jobs.has_dbar ? integrate_poly(jobs.p_dbar, tables).real() : 0.0;
  out.norm2_dbar_star = jobs.has_star ? integrate_poly(jobs.p_star, tables).real() : 0.0;
  out.norm2_grad = integrate_poly(jobs.p_grad, tables).real();
  return out;
}

}  // namespace

NormReport weighted_norms(const TestForm& f, const WeightSpec& w, int points_per_axis,
                          const QuadBox* box) {
  if (points_per_axis < 2) throw std::invalid_argument("weighted_norms: need >= 2 points per axis");
  if (f.zoned()) {
    // Zoned coefficients are evaluated pointwise; quadratic cost, intended for
    // modest grids.
    NormReport out;
    out.norm2_f = form_norm2_pointwise(f, w, points_per_axis);
    if (f.q() < f.n()) out.norm2_dbar = form_norm2_pointwise(dbar(f), w, points_per_axis);
    if (f.q() >= 1) out.norm2_dbar_star = form_norm2_pointwise(dbar_star(f, w), w, points_per_axis);
    // Gradient term: per-zone exact zbar-derivatives of every coefficient.
    std::vector<std::vector<PolyRC>> zone_grads;
    for (const auto& zone : f.zones) {
      std::vector<PolyRC> g;
      for (const auto& p : zone.coeff) {
        for (int j = 0; j < f.n(); ++j) g.push_back(p.dzbar(j));
      }
      zone_grads.push_back(std::move(g));
    }
    out.norm2_grad = integrate_pointwise(f, w, points_per_axis, [&](const VecC& z) {
      if (!f.in_polydisc(z)) return 0.0;
      const double big = z.squaredNorm();
      const VecC wloc = z - f.center();
      for (size_t zi = 0; zi < f.zones.size(); ++zi) {
        if (big >= f.zones[zi].lo && big < f.zones[zi].hi) {
          double s = 0.0;
          for (const auto& p : zone_grads[zi]) s += std::norm(p.eval(wloc));
          return s;
        }
      }
      return 0.0;
    });
    const double coarse = form_norm2_pointwise(f, w, std::max(2, points_per_axis / 2));
    out.err_estimate = std::abs(out.norm2_f - coarse) / 3.0;
    return out;
  }
  const NormJobs jobs = make_norm_jobs(f, w);
  NormReport fine = norms_at(f, w, jobs, points_per_axis, box);
  const NormReport coarse = norms_at(f, w, jobs, std::max(2, points_per_axis / 2), box);
  double err = 0.0;
  err = std::max(err, std::abs(fine.norm2_f - coarse.norm2_f));
  err = std::max(err, std::abs(fine.norm2_dbar - coarse.norm2_dbar));
  err = std::max(err, std::abs(fine.norm2_dbar_star - coarse.norm2_dbar_star));
  err = std::max(err, std::abs(fine.norm2_grad - coarse.norm2_grad));
  fine.err_estimate = err / 3.0;  // Richardson factor for a second-order rule
  return fine;
}

Complex weighted_inner_product(const TestForm& a, const TestForm& b, const WeightSpec& w,
                               int points_per_axis) {
  if (a.n() != b.n() || a.q() != b.q()) {
    throw std::invalid_argument("weighted_inner_product: shape mismatch");
  }
  if (a.zoned() || b.zoned()) {
    throw std::invalid_argument("weighted_inner_product: zoned forms unsupported");
  }
  if ((a.center() - b.center()).norm() > 0.0 || (a.radii() - b.radii()).norm() > 0.0) {
    throw std::invalid_argument("weighted_inner_product: forms must share support");
  }
  PolyRC p(a.n());
  for (size_t i = 0; i < a.coeff.size(); ++i) p += a.coeff[i] * b.coeff[i].conjugate();
  std::vector<const PolyRC*> all = {&p};
  const CoordTables tables = build_tables(a, w, points_per_axis, nullptr,
                                          max_coord_exponent(all, a.n()));
  return integrate_poly(p, tables);
}

MkhReport mkh_check(const TestForm& f, const WeightSpec& w, int points_per_axis) {
  if (f.zoned()) throw std::invalid_argument("mkh_check: zoned forms unsupported");
  const NormJobs jobs = make_norm_jobs(f, w);
  const double qt = static_cast<double>(f.q()) * w.t;
  auto residual = [&](int m) {
    const NormReport r = norms_at(f, w, jobs, m, nullptr);
    const double lhs = r.norm2_dbar + r.norm2_dbar_star;
    const double rhs = r.norm2_grad + qt * r.norm2_f;
    const double scale =
        r.norm2_dbar + r.norm2_dbar_star + r.norm2_grad + std::abs(qt) * r.norm2_f;
    return std::tuple<double, double, double>(lhs, rhs, std::abs(lhs - rhs) / scale);
  };
  MkhReport out;
  const auto [lc, rc, relc] = residual(points_per_axis);
  const auto [lf, rf, relf] = residual(2 * points_per_axis);
  out.lhs = lf;
  out.rhs = rf;
  out.rel_residual_coarse = relc;
  out.rel_residual_fine = relf;
  out.ratio = (relf > 0.0) ? relc / relf : std::numeric_limits<double>::infinity();
  return out;
}

double basic_estimate_margin(const TestForm& f, const WeightSpec& w, int points_per_axis) {
  if (w.form != WeightSpec::Form::gauss || w.t <= 0.0) {
    throw std::invalid_argument("basic_estimate_margin: needs the gauss weight with t > 0");
  }
  const NormReport r = weighted_norms(f, w, points_per_axis);
  return r.norm2_dbar + r.norm2_dbar_star - static_cast<double>(f.q()) * w.t * r.norm2_f;
}

namespace {

TestForm translate_dilate(const TestForm& u1, const VecC& z_r, double r) {
  if (u1.zoned()) throw std::invalid_argument("scaling_demo: zoned forms unsupported");
  const int n = u1.n();
  VecC center = z_r + r * u1.center();
  VecR radii = r * u1.radii();
  TestForm out(n, u1.q(), center, radii);
  const double amp = std::pow(r, -static_cast<double>(n));
  const VecC zero = VecC::Zero(n);
  for (size_t i = 0; i < u1.coeff.size(); ++i) {
    out.coeff[i] = amp * u1.coeff[i].compose_affine(zero, 1.0 / r);
  }
  return out;
}

}  // namespace

ScalingReport scaling_demo(const TestForm& u1, const DomainSpec& omega,
                           const std::vector<double>& radii, const std::vector<VecC>& centers,
                           int points_per_axis) {
  if (radii.size() != centers.size()) {
    throw std::invalid_argument("scaling_demo: radii/centers size mismatch");
  }
  ScalingReport report;
  const WeightSpec unweighted{0.0, WeightSpec::Form::gauss};
  for (size_t i = 0; i < radii.size(); ++i) {
    const TestForm ur = translate_dilate(u1, centers[i], radii[i]);
    // Containment: sample the support polydisc and require rho < 0.
    const int probe = 5;
    std::vector<int> idx(static_cast<size_t>(2 * ur.n()), 0);
    long total = 1;
    for (int a = 0; a < 2 * ur.n(); ++a) total *= probe;
    for (long s = 0; s < total; ++s) {
      VecC z(ur.n());
      bool inside = true;
      for (int j = 0; j < ur.n(); ++j) {
        const double r = ur.radii()[j];
        const double x = -r + (idx[static_cast<size_t>(2 * j)] + 0.5) * 2.0 * r / probe;
        const double y = -r + (idx[static_cast<size_t>(2 * j + 1)] + 0.5) * 2.0 * r / probe;
        if (x * x + y * y > r * r) inside = false;
        z[j] = ur.center()[j] + Complex(x, y);
      }
      if (inside && omega.rho_at(z) >= 0.0) {
        throw ContainmentError("scaling_demo: form support is not inside the domain");
      }
      for (size_t a = idx.size(); a-- > 0;) {
        if (++idx[a] < probe) break;
        idx[a] = 0;
      }
    }
    const NormReport norms = weighted_norms(ur, unweighted, points_per_axis);
    ScalingRow row;
    row.radius = radii[i];
    row.norm_f = std::sqrt(norms.norm2_f);
    row.norm_dbar = std::sqrt(norms.norm2_dbar);
    row.norm_dbar_star = std::sqrt(norms.norm2_dbar_star);
    row.rayleigh = (row.norm_dbar + row.norm_dbar_star) / row.norm_f;
    row.rayleigh_times_r = row.rayleigh * row.radius;
    report.rows.push_back(row);
  }
  if (!report.rows.empty()) {
    const double base = report.rows.front().rayleigh_times_r;
    for (const auto& row : report.rows) {
      report.max_rel_deviation =
          std::max(report.max_rel_deviation, std::abs(row.rayleigh_times_r - base) / base);
    }
  }
  return report;
}

ModelWeightReport model_weight_checks(double t, int n, int per_axis) {
  ModelWeightReport report;
  report.bound = 2.0 * t;
  const WeightSpec w{t, WeightSpec::Form::model};
  const PolyRC phi = w.phi(n);
  double residual = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      PolyRC d = phi.dz(j).dzbar(k);
      if (j == k) d -= PolyRC::constant(n, Complex(t, 0.0));
      residual = std::max(residual, d.max_abs_coeff());
    }
  }
  report.hessian_residual = residual;

  // Sample phi over the closure of {sum (Re z_j)^2 < 1}: interior grid points
  // plus their radial projections to the boundary sphere in x-space.
  double sup = 0.0;
  std::vector<int> idx(static_cast<size_t>(n), 0);
  long total = 1;
  for (int j = 0; j < n; ++j) total *= per_axis;
  for (long s = 0; s < total; ++s) {
    VecR x(n);
    for (int j = 0; j < n; ++j) {
      x[j] = -1.0 + (idx[static_cast<size_t>(j)] + 0.5) * 2.0 / per_axis;
    }
    const double r2 = x.squaredNorm();
    VecC z = VecC::Zero(n);
    if (r2 <= 1.0) {
      for (int j = 0; j < n; ++j) z[j] = Complex(x[j], 0.0);
      sup = std::max(sup, w.phi_at(z));
    }
    if (r2 > 1e-12) {
      const VecR xb = x / std::sqrt(r2);
      for (int j = 0; j < n; ++j) z[j] = Complex(xb[j], 0.0);
      sup = std::max(sup, w.phi_at(z));
    }
    for (size_t a = idx.size(); a-- > 0;) {
      if (++idx[a] < per_axis) break;
      idx[a] = 0;
    }
  }
  report.sampled_sup = sup;
  report.pass = report.hessian_residual <= 1e-13 * std::max(1.0, std::abs(t)) &&
                report.sampled_sup <= report.bound + 1e-9;
  return report;
}

}  // namespace zq

#include "zq/certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace zq {

namespace {

nlohmann::ordered_json vec_to_json(const VecC& z) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int j = 0; j < z.size(); ++j) arr.push_back({z[j].real(), z[j].imag()});
  return arr;
}

nlohmann::ordered_json vec_to_json(const VecR& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int j = 0; j < v.size(); ++j) arr.push_back(v[j]);
  return arr;
}

}  // namespace

CertReport check_weak_zq(const DomainSpec& spec, const HermitianField& field, int q,
                         const std::vector<BoundaryPointData>& sample, CertTolerances tols) {
  const int n = spec.dim();
  if (field.n != n) throw std::invalid_argument("check_weak_zq: field/domain dimension mismatch");
  if (q < 1 || q > n - 1) throw std::invalid_argument("check_weak_zq: need 1 <= q <= n-1");
  if (sample.empty()) throw std::invalid_argument("check_weak_zq: empty sample");

  CertReport report;
  report.q = q;
  report.tols = tols;
  report.normalization = sample.front().normalization;

  const double tangency_tol = std::max(tols.tol, 1e-9);
  report.min_c_i = std::numeric_limits<double>::infinity();
  report.min_c_ii = std::numeric_limits<double>::infinity();
  report.inf_c_iii = std::numeric_limits<double>::infinity();

  for (size_t i = 0; i < sample.size(); ++i) {
    const BoundaryPointData& bp = sample[i];
    if (bp.z.size() != n) throw std::invalid_argument("check_weak_zq: invalid point in sample");
    if (std::abs(spec.rho_at(bp.z)) > 1e-9) {
      throw std::invalid_argument("check_weak_zq: sample point off the boundary");
    }
    const MatC ups = field.evaluate(bp.z);
    const HermMat ups_h(ups);

    PointRecord rec;
    rec.z = bp.z;
    rec.mu = bp.mu;
    rec.tr_upsilon = ups_h.trace();
    rec.c_i = is_range_01(ups_h, tols.tol).margin;
    MatC hess = bp.hessian;
    if (bp.normalization == LeviNormalization::gradient) hess /= bp.grad_norm;
    double mu_sum = 0.0;
    for (int k = 0; k < q; ++k) mu_sum += bp.mu[k];
    rec.c_ii = mu_sum - (ups_h.matrix() * hess).trace().real();
    rec.c_iii = std::abs(static_cast<double>(q) - rec.tr_upsilon);
    rec.tangency = (ups_h.matrix() * bp.grad).norm() / bp.grad.norm();

    const bool point_ok = rec.c_i >= -tols.tol && rec.c_ii >= -tols.tol &&
                          rec.tangency <= tangency_tol;
    if (!point_ok) report.failure_indices.push_back(static_cast<int>(i));

    report.min_c_i = std::min(report.min_c_i, rec.c_i);
    report.min_c_ii = std::min(report.min_c_ii, rec.c_ii);
    report.inf_c_iii = std::min(report.inf_c_iii, rec.c_iii);
    report.max_tangency = std::max(report.max_tangency, rec.tangency);
    report.points.push_back(std::move(rec));
  }
  report.pass = report.failure_indices.empty() && report.inf_c_iii >= tols.theta_min;
  return report;
}

nlohmann::ordered_json CertReport::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["q"] = q;
  j["normalization"] = to_string(normalization);
  j["tolerances"] = {{"tol", tols.tol}, {"theta_min", tols.theta_min}};
  j["sample_count"] = points.size();
  j["dropped"] = dropped;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    nlohmann::ordered_json pj;
    pj["z"] = vec_to_json(p.z);
    pj["mu"] = vec_to_json(p.mu);
    pj["tr_upsilon"] = p.tr_upsilon;
    pj["c_i"] = p.c_i;
    pj["c_ii"] = p.c_ii;
    pj["c_iii"] = p.c_iii;
    pj["tangency"] = p.tangency;
    pts.push_back(std::move(pj));
  }
  j["points"] = std::move(pts);
  j["aggregate"] = {{"min_c_i", min_c_i},
                    {"min_c_ii", min_c_ii},
                    {"inf_c_iii", inf_c_iii},
                    {"max_tangency", max_tangency},
                    {"failures", failure_indices}};
  j["quantifier_note"] =
      "conditions checked on the sampled window only; aggregate infima are numerical evidence";
  j["verdict"] = pass ? "PASS" : "FAIL";
  return j;
}

void CertReport::write_points_csv(std::ostream& os) const {
  if (points.empty()) return;
  const int n = static_cast<int>(points.front().z.size());
  os << "index";
  for (int j = 1; j <= n; ++j) os << ",re_z" << j << ",im_z" << j;
  for (int j = 1; j < n; ++j) os << ",mu" << j;
  os << ",tr_upsilon,c_i,c_ii,c_iii,tangency\n";
  os.precision(17);
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    os << i;
    for (int j = 0; j < n; ++j) os << "," << p.z[j].real() << "," << p.z[j].imag();
    for (int j = 0; j + 1 < n; ++j) os << "," << p.mu[j];
    os << "," << p.tr_upsilon << "," << p.c_i << "," << p.c_ii << "," << p.c_iii << ","
       << p.tangency << "\n";
  }
}

K0Report check_k0_negative_result(const DomainSpec& spec, const HermitianField& field,
                                  const std::vector<BoundaryPointData>& k0_sample, double tol) {
  if (spec.dim() != 3 || !spec.graph_var() || *spec.graph_var() != 2) {
    throw std::invalid_argument("check_k0_negative_result: needs the n=3 graph domain");
  }
  K0Report report;
  for (const auto& bp : k0_sample) {
    if (std::abs(bp.z[0].real()) > 1e-12 || std::abs(bp.z[1]) > 1e-12) {
      throw std::invalid_argument("check_k0_negative_result: sample point off K0");
    }
    const MatC ambient = field.evaluate(bp.z);
    const MatC frame = restrict_to_frame(bp.tangential, ambient);

    K0PointRecord rec;
    rec.y = bp.z[0].imag();
    rec.off_diag = std::abs(frame(1, 0));
    const double r1sq = std::norm(spec.rho_z(0).eval(bp.z));
    const double lhs = (-3.0 * rec.y * rec.y / (1.0 + 4.0 * r1sq)) * (1.0 - frame(0, 0).real()) +
                       2.0 * (1.0 - frame(1, 1).real());
    rec.forced_identity = std::abs(lhs);

    const EighResult eg = eigh(HermMat(ambient));
    for (int k = 0; k < eg.eigenvalues.size(); ++k) {
      if (std::abs(eg.eigenvalues[k] - 1.0) <= 1e-9) ++rec.unit_eigenvalues_9;
      if (std::abs(eg.eigenvalues[k] - 1.0) <= 1e-6) ++rec.unit_eigenvalues_6;
    }
    report.max_off_diag = std::max(report.max_off_diag, rec.off_diag);
    report.max_forced_identity = std::max(report.max_forced_identity, rec.forced_identity);
    report.points.push_back(rec);
  }
  bool pass = report.max_off_diag <= tol && report.max_forced_identity <= tol;
  for (const auto& rec : report.points) {
    if (std::abs(rec.y) <= 1e-12) {
      if (rec.unit_eigenvalues_9 != 1) pass = false;
    } else {
      if (rec.unit_eigenvalues_6 != 0) pass = false;
    }
  }
  report.pass = pass;
  return report;
}

nlohmann::ordered_json K0Report::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = "k0_dichotomy";
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    pts.push_back({{"y", p.y},
                   {"off_diag", p.off_diag},
                   {"forced_identity", p.forced_identity},
                   {"unit_eigenvalues_1e9", p.unit_eigenvalues_9},
                   {"unit_eigenvalues_1e6", p.unit_eigenvalues_6}});
  }
  j["points"] = std::move(pts);
  j["aggregate"] = {{"max_off_diag", max_off_diag}, {"max_forced_identity", max_forced_identity}};
  j["verdict"] = pass ? "PASS" : "FAIL";
  return j;
}

namespace {

// All real multi-indices of total order k over `vars` axes, each counted once.
void enumerate_multi_indices(int vars, int k, int start, std::vector<int>& current,
                             std::vector<std::vector<int>>& out) {
  if (k == 0) {
    out.push_back(current);
    return;
  }
  for (int a = start; a < vars; ++a) {
    ++current[static_cast<size_t>(a)];
    enumerate_multi_indices(vars, k - 1, a, current, out);
    --current[static_cast<size_t>(a)];
  }
}

}  // namespace

GrowthReport uniform_cm_evidence(const DomainSpec& spec, const std::vector<int>& orders,
                                 double base_scale, int num_windows, int per_axis,
                                 const std::vector<int>& growth_axes) {
  const int n = spec.dim();
  const int axes = 2 * n;
  GrowthReport report;
  report.orders = orders;

  // Cache derivative polynomials per order.
  std::map<int, std::vector<PolyRC>> deriv_polys;
  for (int k : orders) {
    if (k < 1) throw std::invalid_argument("uniform_cm_evidence: orders must be >= 1");
    std::vector<std::vector<int>> multi;
    std::vector<int> current(static_cast<size_t>(axes), 0);
    enumerate_multi_indices(axes, k, 0, current, multi);
    std::vector<PolyRC> polys;
    polys.reserve(multi.size());
    for (const auto& alpha : multi) {
      PolyRC d = spec.rho();
      for (int a = 0; a < axes; ++a) {
        for (int rep = 0; rep < alpha[static_cast<size_t>(a)]; ++rep) d = d.real_derivative(a);
      }
      polys.push_back(std::move(d));
    }
    deriv_polys[k] = std::move(polys);
  }

  // Which axes grow with the window (default: all).
  std::vector<int> grow = growth_axes;
  if (grow.empty()) {
    for (int a = 0; a < axes; ++a) grow.push_back(a);
  }

  std::vector<double> log_scale, log_min_grad;
  for (int w = 0; w < num_windows; ++w) {
    const double scale = base_scale * std::pow(2.0, w);
    SampleWindow window;
    window.axes.assign(static_cast<size_t>(axes), {0.0, 0.0});
    window.counts.assign(static_cast<size_t>(axes), 1);
    for (int a : grow) {
      window.axes[static_cast<size_t>(a)] = {-scale, scale};
      window.counts[static_cast<size_t>(a)] = per_axis;
    }
    BoundarySampleResult sample = boundary_sample(spec, window);

    GrowthWindowRecord rec;
    rec.scale = scale;
    rec.points = static_cast<int>(sample.points.size());
    rec.max_ratio.assign(orders.size(), 0.0);
    rec.max_ratio_scaled.assign(orders.size(), 0.0);
    rec.min_grad = std::numeric_limits<double>::infinity();
    double sum_abs = 0.0;
    for (const auto& bp : sample.points) {
      // Shell filter: keep the outer half of the window so successive
      // windows measure separated scales.
      double s = 0.0;
      for (int a : grow) {
        const double c = (a % 2 == 0) ? bp.z[a / 2].real() : bp.z[a / 2].imag();
        s += c * c;
      }
      const double radial = std::sqrt(s);
      if (w > 0 && radial < scale / 2.0) continue;
      const double grad = 2.0 * spec.gradient(bp.z).norm();
      rec.min_grad = std::min(rec.min_grad, grad);
      sum_abs += radial;
      for (size_t oi = 0; oi < orders.size(); ++oi) {
        double norm2 = 0.0;
        for (const auto& dp : deriv_polys[orders[oi]]) norm2 += std::norm(dp.eval(bp.z));
        const double ratio = std::sqrt(norm2) / grad;
        rec.max_ratio[oi] = std::max(rec.max_ratio[oi], ratio);
        const double weight = std::pow(radial * radial + 1.0, 0.5 * orders[oi] - 1.0);
        rec.max_ratio_scaled[oi] = std::max(rec.max_ratio_scaled[oi], ratio * weight);
      }
    }
    rec.mean_abs_z = sum_abs / std::max(1, rec.points);
    if (std::isfinite(rec.min_grad)) {
      log_scale.push_back(std::log(1.0 + scale * scale));
      log_min_grad.push_back(std::log(rec.min_grad));
    }
    report.windows.push_back(std::move(rec));
  }

  // Least-squares slope over the window shells.
  if (log_scale.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(log_scale.size());
    for (size_t i = 0; i < log_scale.size(); ++i) {
      sx += log_scale[i];
      sy += log_min_grad[i];
      sxx += log_scale[i] * log_scale[i];
      sxy += log_scale[i] * log_min_grad[i];
    }
    report.grad_growth_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return report;
}

nlohmann::ordered_json GrowthReport::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = "uniform_cm_evidence";
  j["orders"] = orders;
  nlohmann::ordered_json ws = nlohmann::ordered_json::array();
  for (const auto& w : windows) {
    ws.push_back({{"scale", w.scale},
                  {"points", w.points},
                  {"max_ratio", w.max_ratio},
                  {"max_ratio_scaled", w.max_ratio_scaled},
                  {"min_grad", w.min_grad},
                  {"mean_abs_z", w.mean_abs_z}});
  }
  j["windows"] = std::move(ws);
  j["grad_growth_exponent"] = grad_growth_exponent;
  j["note"] = "numerical evidence on sampled windows, not a proof";
  return j;
}

HomogReport dehomogenize_and_check(const RealPoly& rho_tilde, RealPoly* rho_out,
                                   int sphere_samples, std::uint64_t seed) {
  const int m = rho_tilde.vars();
  if (m < 2) throw std::invalid_argument("dehomogenize_and_check: need at least 2 variables");
  HomogReport report;

  const std::optional<int> deg = rho_tilde.homogeneous_degree();
  if (!deg || *deg < 1) {
    throw std::invalid_argument("dehomogenize_and_check: input is not homogeneous");
  }
  report.degree = *deg;

  // Euler identity: y . grad(rho~) = deg * rho~, exactly on coefficients.
  RealPoly euler(m);
  for (int i = 0; i < m; ++i) {
    euler += RealPoly::variable(m, i) * rho_tilde.derivative(i);
  }
  euler -= static_cast<double>(*deg) * rho_tilde;
  report.euler_residual = euler.max_abs_coeff();

  RealPoly rho = rho_tilde.substitute_one(m - 1);
  if (rho_out) *rho_out = rho;

  // x . grad(rho)(x) + rho~_{m}(x, 1) = 0, exactly on coefficients.
  RealPoly radial(m - 1);
  for (int i = 0; i < m - 1; ++i) {
    radial += RealPoly::variable(m - 1, i) * rho.derivative(i);
  }
  radial += rho_tilde.derivative(m - 1).substitute_one(m - 1);
  report.eq51_residual = radial.max_abs_coeff();

  // Sampled C0 = min |grad rho~| over the unit sphere intersected with {rho~ = 0}.
  Rng rng(seed);
  double c0 = std::numeric_limits<double>::infinity();
  int found = 0;
  for (int s = 0; s < sphere_samples; ++s) {
    VecR y(m);
    for (int i = 0; i < m; ++i) y[i] = rng.uniform(-1.0, 1.0);
    if (y.norm() < 1e-6) continue;
    y /= y.norm();
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const double val = rho_tilde.eval(y);
      if (std::abs(val) <= 1e-11) {
        ok = true;
        break;
      }
      VecR g(m);
      for (int i = 0; i < m; ++i) g[i] = rho_tilde.derivative(i).eval(y);
      // Project the Newton step onto the sphere tangent space, then renormalize.
      VecR step = (val / g.squaredNorm()) * g;
      y -= step - step.dot(y) * y;
      y /= y.norm();
    }
    if (!ok) continue;
    VecR g(m);
    for (int i = 0; i < m; ++i) g[i] = rho_tilde.derivative(i).eval(y);
    c0 = std::min(c0, g.norm());
    ++found;
  }
  if (found == 0) {
    // Boundary does not meet the sphere in the sampled directions; the bound
    // is vacuous but the symbolic identities still stand.
    c0 = 0.0;
  }
  report.c0 = c0;

  // Gradient lower bound |grad rho|(|x|^2 + 1) >= C0 at sampled boundary points of {rho = 0}.
  double slack = std::numeric_limits<double>::infinity();
  int bound_pts = 0;
  for (int s = 0; s < sphere_samples && c0 > 0.0; ++s) {
    VecR x(m - 1);
    for (int i = 0; i < m - 1; ++i) x[i] = rng.uniform(-6.0, 6.0);
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
      const double val = rho.eval(x);
      if (std::abs(val) <= 1e-11) {
        ok = true;
        break;
      }
      VecR g(m - 1);
      for (int i = 0; i < m - 1; ++i) g[i] = rho.derivative(i).eval(x);
      const double g2 = g.squaredNorm();
      if (g2 < 1e-20) break;
      x -= (val / g2) * g;
    }
    if (!ok) continue;
    VecR g(m - 1);
    for (int i = 0; i < m - 1; ++i) g[i] = rho.derivative(i).eval(x);
    slack = std::min(slack, g.norm() * (x.squaredNorm() + 1.0) - c0);
    ++bound_pts;
  }
  report.min_bound_slack = (bound_pts > 0) ? slack : 0.0;

  report.pass = report.euler_residual <= 1e-10 && report.eq51_residual <= 1e-10 &&
                report.min_bound_slack >= -1e-8;
  return report;
}

nlohmann::ordered_json HomogReport::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = "dehomogenize";
  j["degree"] = degree;
  j["euler_residual"] = euler_residual;
  j["eq51_residual"] = eq51_residual;
  j["c0"] = c0;
  j["min_bound_slack"] = min_bound_slack;
  j["verdict"] = pass ? "PASS" : "FAIL";
  return j;
}

}  // namespace zq

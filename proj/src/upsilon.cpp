#include "zq/upsilon.hpp"

#include <cmath>

namespace zq {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

HermitianField upsilon_zero(int n) {
  HermitianField f;
  f.n = n;
  f.label = "zero";
  f.evaluate = [n](const VecC&) { return MatC::Zero(n, n).eval(); };
  return f;
}

HermitianField upsilon_quadric(int n, int p) {
  if (p < 1 || p > n - 1) throw std::invalid_argument("upsilon_quadric: need 1 <= p <= n-1");
  HermitianField f;
  f.n = n;
  f.label = "quadric";
  auto minus_norm = [n, p](const VecC& z) {
    double m = 0.0;
    for (int j = p; j < n; ++j) m += std::norm(z[j]);
    return m;
  };
  f.valid = [minus_norm](const VecC& z) { return minus_norm(z) > 0.0; };
  f.evaluate = [n, p, minus_norm](const VecC& z) {
    const double m = minus_norm(z);
    if (m <= 0.0) throw std::invalid_argument("upsilon_quadric: |z|^2_- = 0");
    MatC out = MatC::Zero(n, n);
    for (int k = p; k < n; ++k) {
      for (int j = p; j < n; ++j) {
        out(k, j) = ((j == k) ? Complex(1.0, 0.0) : Complex(0.0, 0.0)) - std::conj(z[k]) * z[j] / m;
      }
    }
    return out;
  };
  return f;
}

namespace {

double prop52_lambda(double y) {
  const double y2 = y * y;
  const double y8 = y2 * y2 * y2 * y2;
  return 1.0 - (150.0 * y2 - 100.0) / (y8 * (y2 + 100.0));
}

struct GraphFirstOrder {
  Complex r1;
  Complex r2;
  double y = 0.0;
  double d = 0.0;  // |d rho|
};

GraphFirstOrder graph_first_order(const DomainSpec& spec, const VecC& z) {
  GraphFirstOrder g;
  g.r1 = spec.rho_z(0).eval(z);
  g.r2 = spec.rho_z(1).eval(z);
  g.y = z[0].imag();
  g.d = std::sqrt(1.0 + 4.0 * std::norm(g.r1) + 4.0 * std::norm(g.r2));
  return g;
}

// Rows u_1, u_2 of the closed-form frame (the 2x2 block of interest).
MatC graph_frame_block(const GraphFirstOrder& g) {
  MatC u(2, 2);
  const double denom = g.d + 1.0;
  u(0, 0) = (1.0 + 4.0 * std::norm(g.r2) / denom) / g.d;
  u(0, 1) = (-4.0 * g.r1 * std::conj(g.r2) / denom) / g.d;
  u(1, 0) = (-4.0 * std::conj(g.r1) * g.r2 / denom) / g.d;
  u(1, 1) = (1.0 + 4.0 * std::norm(g.r1) / denom) / g.d;
  return u;
}

void require_prop52_shape(const DomainSpec& spec, const char* who) {
  if (spec.dim() != 3 || !spec.graph_var() || *spec.graph_var() != 2) {
    throw std::invalid_argument(std::string(who) + ": needs an n=3 graph domain in z3");
  }
}

}  // namespace

HermitianField upsilon_one(const DomainSpec& spec, double Y1) {
  require_prop52_shape(spec, "upsilon_one");
  HermitianField f;
  f.n = 3;
  f.label = "prop52_band";
  f.valid = [Y1](const VecC& z) {
    const double y = z[0].imag();
    if (std::abs(y) < Y1) return false;
    const double l = prop52_lambda(y);
    return l > 0.0 && l < 1.0;
  };
  f.evaluate = [&spec, Y1](const VecC& z) {
    const GraphFirstOrder g = graph_first_order(spec, z);
    if (std::abs(g.y) < Y1) {
      throw std::invalid_argument("upsilon_one: point outside the band |y| >= Y1");
    }
    const double lambda = prop52_lambda(g.y);
    if (!(lambda > 0.0 && lambda < 1.0)) {
      throw std::invalid_argument("upsilon_one: lambda outside (0,1); Y1 too small");
    }
    VecC v = VecC::Zero(3);
    v[0] = std::conj(g.r2);
    v[1] = -std::conj(g.r1);
    MatC out = (4.0 * lambda / (g.d * g.d)) * (v * v.adjoint());
    return out;
  };
  return f;
}

HermitianField upsilon_two(const DomainSpec& spec) {
  require_prop52_shape(spec, "upsilon_two");
  HermitianField f;
  f.n = 3;
  f.label = "prop52_core";
  f.evaluate = [&spec](const VecC& z) {
    const GraphFirstOrder g = graph_first_order(spec, z);
    const double y2 = g.y * g.y;
    const double s = 2.0 * (1.0 + 4.0 * std::norm(g.r1)) + 3.0 * y2 * (1.0 + 4.0 * std::norm(g.r2));
    const MatC u = graph_frame_block(g);
    const HermMat u_inv = invert(HermMat(u));
    MatC d = MatC::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0 * y2;
    const MatC frame_val = MatC::Identity(2, 2) - (u_inv.matrix() * d * u_inv.matrix()) / s;

    // Lift through the tangential rows of the closed-form frame.
    const BoundaryPointData bp = frame_at(spec, z);
    return lift_frame_matrix(bp.tangential, frame_val);
  };
  return f;
}

HermitianField upsilon_patched(const DomainSpec& spec, const Prop52Params& params) {
  require_prop52_shape(spec, "upsilon_patched");
  if (!(params.R2 == params.R1 && params.R1 > params.R0 && params.R0 > 0.0 &&
        params.Y2 > params.Y1 && params.Y1 > 0.0)) {
    throw std::invalid_argument("upsilon_patched: need R2 == R1 > R0 > 0 and Y2 > Y1 > 0");
  }
  HermitianField band = upsilon_one(spec, params.Y1);
  HermitianField core = upsilon_two(spec);
  HermitianField f;
  f.n = 3;
  f.label = "prop52_patched";
  f.evaluate = [spec_band = std::move(band), spec_core = std::move(core), params](const VecC& z) {
    const double x = z[0].real();
    const double y = z[0].imag();
    const double r2 = x * x + std::norm(z[1]);
    const double y2 = y * y;
    const double band_y = smooth_step((y2 - params.Y1 * params.Y1) /
                                      (params.Y2 * params.Y2 - params.Y1 * params.Y1));
    const double core_y = smooth_step((params.Y2 * params.Y2 - y2) /
                                      (params.Y2 * params.Y2 - params.Y1 * params.Y1));
    const double band_r = smooth_step((params.R1 * params.R1 - r2) /
                                      (params.R1 * params.R1 - params.R0 * params.R0));
    const double core_r = smooth_step((params.R2 * params.R2 - r2) /
                                      (params.R2 * params.R2 - params.R0 * params.R0));
    MatC out = MatC::Zero(3, 3);
    const double a_band = band_y * band_r;
    const double a_core = core_y * core_r;
    if (a_band > 0.0) out += a_band * spec_band.evaluate(z);
    if (a_core > 0.0) out += a_core * spec_core.evaluate(z);
    return out;
  };
  return f;
}

HermitianField extend_upsilon(const HermitianField& boundary_field, const DomainSpec& spec,
                              double eps, ExtendSignCase sign_case) {
  if (eps <= 0.0) throw std::invalid_argument("extend_upsilon: eps must be positive");
  HermitianField f;
  f.n = boundary_field.n;
  f.label = boundary_field.label + "_extended";
  f.evaluate = [boundary_field, &spec, eps, sign_case](const VecC& p) {
    // The foot point is only needed where psi > 0, but the iteration itself
    // is what certifies the distance, so run it with a generous reach and
    // branch on the resulting |delta|.
    const SignedDistanceResult sd = signed_distance(spec, p, 1e6 * eps);
    const double psi = 1.0 - smooth_step(std::abs(sd.delta) / eps - 1.0);
    const int n = boundary_field.n;
    MatC out = MatC::Zero(n, n);
    if (psi > 0.0) out += psi * boundary_field.evaluate(sd.foot);
    if (sign_case == ExtendSignCase::q_minus_tr_negative) {
      out += (1.0 - psi) * MatC::Identity(n, n);
    }
    return out;
  };
  return f;
}

MatC lift_frame_matrix(const MatC& tangential_rows, const MatC& frame_matrix) {
  return tangential_rows.adjoint() * frame_matrix * tangential_rows;
}

MatC restrict_to_frame(const MatC& tangential_rows, const MatC& ambient) {
  return tangential_rows * ambient * tangential_rows.adjoint();
}

int scan_prop52_y1(const DomainSpec& spec, double R1, int y_low, int y_high) {
  require_prop52_shape(spec, "scan_prop52_y1");
  for (int y1 = y_low; y1 <= y_high; ++y1) {
    bool ok = true;
    HermitianField band = upsilon_one(spec, static_cast<double>(y1));
    // Grid over the band region: |y| in [Y1, 4*Y1], sqrt(x^2+|z2|^2) <= R1.
    for (int iy = 0; iy <= 24 && ok; ++iy) {
      const double y = y1 * (1.0 + 3.0 * iy / 24.0);
      if (!(prop52_lambda(y) > 0.0 && prop52_lambda(y) < 1.0)) {
        ok = false;
        break;
      }
      const double one_minus = 1.0 - prop52_lambda(y);
      const double y8 = std::pow(y, 8.0);
      if (!(100.0 / y8 < one_minus && one_minus < 200.0 / y8)) {
        ok = false;
        break;
      }
      for (int ix = -4; ix <= 4 && ok; ++ix) {
        for (int iz = 0; iz <= 4 && ok; ++iz) {
          const double x = R1 * ix / 4.0;
          const double z2r = R1 * iz / 4.0;
          if (x * x + z2r * z2r > R1 * R1) continue;
          VecC z(3);
          z[0] = Complex(x, y);
          z[1] = Complex(z2r, 0.0);
          z[2] = Complex(0.0, 0.0);
          const double im3 = spec.graph_rest().eval(z).real();
          z[2] = Complex(0.0, im3);
          const BoundaryPointData bp = frame_at(spec, z);
          const MatC ups = band.evaluate(z);
          const double mu_sum = bp.mu.sum();
          const double contracted = (ups * bp.hessian).trace().real();
          if (mu_sum - contracted < -1e-10) ok = false;
        }
      }
    }
    if (ok) return y1;
  }
  throw std::runtime_error("scan_prop52_y1: no admissible Y1 in range");
}

}  // namespace zq

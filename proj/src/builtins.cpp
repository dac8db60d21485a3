#include "zq/builtins.hpp"

namespace zq {

DomainSpec make_ball(int n) {
  PolyRC rho(n);
  rho += PolyRC::constant(n, Complex(-1.0, 0.0));
  for (int j = 0; j < n; ++j) rho += PolyRC::abs2_variable(n, j);
  return DomainSpec::create(rho);
}

DomainSpec make_quadric(int n, int p) {
  if (p < 1 || p > n - 1) throw std::invalid_argument("make_quadric: need 1 <= p <= n-1");
  PolyRC rho(n);
  rho += PolyRC::constant(n, Complex(1.0, 0.0));
  for (int j = 0; j < n; ++j) {
    if (j < p) {
      rho += PolyRC::abs2_variable(n, j);
    } else {
      rho -= PolyRC::abs2_variable(n, j);
    }
  }
  return DomainSpec::create(rho);
}

DomainSpec make_heisenberg() {
  const int n = 2;
  PolyRC rho = -1.0 * PolyRC::im_variable(n, 1);
  rho += PolyRC::abs2_variable(n, 0);
  return DomainSpec::create(rho, 1);
}

DomainSpec make_model_section4(int n) {
  PolyRC rho(n);
  rho += PolyRC::constant(n, Complex(-1.0, 0.0));
  for (int j = 0; j < n; ++j) rho += PolyRC::re_variable(n, j).pow(2);
  return DomainSpec::create(rho);
}

namespace {

PolyRC prop52_p_polynomial() {
  const int n = 3;
  const PolyRC x = PolyRC::re_variable(n, 0);
  const PolyRC y = PolyRC::im_variable(n, 0);
  const PolyRC a2 = PolyRC::abs2_variable(n, 1);
  return 2.0 * (x * a2) - x * y.pow(4);
}

PolyRC prop52_q_polynomial() {
  const int n = 3;
  const PolyRC x = PolyRC::re_variable(n, 0);
  const PolyRC y = PolyRC::im_variable(n, 0);
  const PolyRC s = x * x + PolyRC::abs2_variable(n, 1);  // x^2 + |z2|^2
  PolyRC q = (1.0 / 3.0) * s.pow(3);
  q += s.pow(2) * y.pow(2);
  q -= (1.0 / 60.0) * x.pow(6);
  q += 0.25 * (x.pow(4) * y.pow(2));
  q -= 0.25 * (x.pow(2) * y.pow(4));
  q += (1.0 / 60.0) * y.pow(6);
  return q;
}

}  // namespace

DomainSpec make_prop52() {
  const int n = 3;
  PolyRC rho = -1.0 * PolyRC::im_variable(n, 2);
  rho += prop52_p_polynomial();
  rho += prop52_q_polynomial();
  return DomainSpec::create(rho, 2);
}

DomainSpec make_prop52_uncorrected() {
  const int n = 3;
  PolyRC rho = -1.0 * PolyRC::im_variable(n, 2);
  rho += prop52_p_polynomial();
  return DomainSpec::create(rho, 2);
}

std::vector<BuiltinInfo> builtin_catalog() {
  std::vector<BuiltinInfo> out;
  out.push_back({"ball", "x1^2 + y1^2 + ... + xn^2 + yn^2 - 1",
                 "unit ball; Levi form is the identity on the tangent space", 0, true});
  out.push_back({"quadric", "(x1^2 + y1^2 + ... up to p) - (remaining |z_j|^2) + 1",
                 "signature quadric; Levi spectrum {-1, (1+2|z|_+^2)^{-1}, +1}", 0, true});
  out.push_back({"heisenberg", "x1^2 + y1^2 - y2",
                 "half-space above the Heisenberg group (n = 2 instance)", 2, false});
  out.push_back({"model_section4", "x1^2 + ... + xn^2 - 1",
                 "strictly pseudoconvex slab; pairs with the bounded weight 2t*sum(Re z_j)^2", 0, true});
  out.push_back({"prop52",
                 "-y3 + 2*x1*(x2^2+y2^2) - x1*y1^4 + (1/3)*(x1^2+x2^2+y2^2)^3"
                 " + (x1^2+x2^2+y2^2)^2*y1^2 - (1/60)*x1^6 + (1/4)*x1^4*y1^2"
                 " - (1/4)*x1^2*y1^4 + (1/60)*y1^6",
                 "graph domain in C^3 whose Levi form vanishes exactly on {x1 = 0, z2 = 0}", 3, false});
  out.push_back({"prop52_uncorrected", "-y3 + 2*x1*(x2^2+y2^2) - x1*y1^4",
                 "same graph domain without the degree-6 correction; not uniformly C^2", 3, false});
  return out;
}

DomainSpec make_builtin(const std::string& name, int n, int p) {
  if (name == "ball") {
    if (n < 1) throw std::invalid_argument("builtin ball: need n >= 1");
    return make_ball(n);
  }
  if (name == "quadric") {
    if (n < 2) throw std::invalid_argument("builtin quadric: need n >= 2");
    return make_quadric(n, p);
  }
  if (name == "heisenberg") return make_heisenberg();
  if (name == "model_section4") {
    if (n < 1) throw std::invalid_argument("builtin model_section4: need n >= 1");
    return make_model_section4(n);
  }
  if (name == "prop52") return make_prop52();
  if (name == "prop52_uncorrected") return make_prop52_uncorrected();
  throw std::invalid_argument("unknown builtin domain '" + name + "'");
}

}  // namespace zq

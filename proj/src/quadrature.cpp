#include "hyperam/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hyperam/error.hpp"

namespace hyperam::quad {

namespace {

// Node at parameter t on [-1, 1]: abscissa, distances to -1 and +1, weight.
struct Node {
  double x;
  double to_left;
  double to_right;
  double weight;
};

Node node_at(double t) {
  const double half_pi = 0.5 * std::numbers::pi;
  const double v = half_pi * std::sinh(t);
  const double ev = std::exp(-2.0 * std::abs(v));
  // 1 - tanh|v| = 2 e^{-2|v|} / (1 + e^{-2|v|})
  const double small = 2.0 * ev / (1.0 + ev);
  const double big = 2.0 - small;
  const double cosh_v = std::cosh(v);
  Node nd{};
  nd.x = std::tanh(v);
  nd.to_left = v >= 0.0 ? big : small;
  nd.to_right = v >= 0.0 ? small : big;
  nd.weight = half_pi * std::cosh(t) / (cosh_v * cosh_v);
  return nd;
}

}  // namespace

Result tanh_sinh(const EndpointIntegrand& f, double a, double b,
                 const TanhSinhOptions& opts) {
  if (a == b) return {};
  if (b < a) {
    Result r = tanh_sinh(
        [&](double x, double da, double db) { return f(x, db, da); }, b, a,
        opts);
    r.value = -r.value;
    return r;
  }
  const double half = 0.5 * (b - a);
  auto eval = [&](double t) {
    const Node nd = node_at(t);
    const double da = half * nd.to_left;
    const double db = half * nd.to_right;
    if (da <= 0.0 || db <= 0.0 || nd.weight == 0.0) return 0.0;
    const double x = nd.to_left < nd.to_right ? a + da : b - db;
    return nd.weight * f(x, da, db);
  };

  double h = 1.0;
  double sum = eval(0.0);
  for (double t = h; t <= opts.t_max; t += h) sum += eval(t) + eval(-t);
  double estimate = half * h * sum;
  for (int level = 1; level <= opts.max_levels; ++level) {
    h *= 0.5;
    double added = 0.0;
    for (double t = h; t <= opts.t_max; t += 2.0 * h) {
      added += eval(t) + eval(-t);
    }
    sum += added;
    const double next = half * h * sum;
    const double err = std::abs(next - estimate);
    estimate = next;
    if (!std::isfinite(estimate)) break;
    if (level >= 3 &&
        err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(estimate))) {
      return {estimate, err, level};
    }
  }
  throw Error(ErrorCode::NoConvergence, "contour_quad.integrate_phi",
              "tanh-sinh did not converge on [" + std::to_string(a) + ", " +
                  std::to_string(b) + "]");
}

Result tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 const TanhSinhOptions& opts) {
  return tanh_sinh(EndpointIntegrand([&](double x, double, double) {
                     return f(x);
                   }),
                   a, b, opts);
}

double gauss_chebyshev(const std::function<double(double)>& g, double a,
                       double b, int n) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double x = std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
    sum += g(mid + half * x);
  }
  return std::numbers::pi / n * sum;
}

}  // namespace hyperam::quad

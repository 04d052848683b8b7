#pragma once

#include <functional>

namespace hyperam::quad {

/// Integrand evaluated at x with its exact distances to the interval ends,
/// da = x - a and db = b - x.  Integrands with inverse-square-root endpoint
/// singularities should build the vanishing factors from da / db.
using EndpointIntegrand = std::function<double(double x, double da, double db)>;

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels = 0;
};

struct TanhSinhOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int max_levels = 12;
  double t_max = 4.5;
};

/// Double-exponential quadrature over [a, b]; b < a integrates backwards.
/// Throws NoConvergence when successive step halvings do not settle.
Result tanh_sinh(const EndpointIntegrand& f, double a, double b,
                 const TanhSinhOptions& opts = {});

Result tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 const TanhSinhOptions& opts = {});

/// Gauss-Chebyshev rule for int_a^b g(x) / sqrt((x - a)(b - x)) dx with n
/// nodes; exact for polynomial g of degree < 2n.
double gauss_chebyshev(const std::function<double(double)>& g, double a,
                       double b, int n);

}  // namespace hyperam::quad

#pragma once

// Reference computations kept independent of the library's quadrature and
// inversion code.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double agm(double a, double b) {
  for (int i = 0; i < 80 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}

/// K(m) = pi / (2 agm(1, sqrt(1 - m))), any m < 1.
inline double complete_k(double m) {
  return 0.5 * std::numbers::pi / agm(1.0, std::sqrt(1.0 - m));
}

/// int_0^{pi/2} dphi / sqrt(A + B sin^2 phi) for A, A + B > 0.
inline double quarter_integral(double A, double B) {
  return 0.5 * std::numbers::pi / agm(std::sqrt(A), std::sqrt(A + B));
}

/// Composite 20-point Gauss-Legendre on [a, b] split into `pieces`.
inline double gauss_legendre(const std::function<double(double)>& f, double a,
                             double b, int pieces = 64) {
  static const double x[10] = {
      0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
      0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
      0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
      0.9931285991850949};
  static const double w[10] = {
      0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
      0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
      0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
      0.0176140071391521};
  double total = 0.0;
  const double h = (b - a) / pieces;
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 10; ++i) {
      total += 0.5 * h * w[i] * (f(mid - 0.5 * h * x[i]) + f(mid + 0.5 * h * x[i]));
    }
  }
  return total;
}

/// Jacobi amplitude by classical RK4 on d phi / du = sqrt(1 - m sin^2 phi),
/// valid for m < 1 (the right-hand side never vanishes).
inline double am_rk4(double u, double m, int steps_per_unit = 4000) {
  auto f = [m](double phi) {
    const double s = std::sin(phi);
    return std::sqrt(1.0 - m * s * s);
  };
  const int n = std::max(1, static_cast<int>(std::abs(u) * steps_per_unit));
  const double h = u / n;
  double phi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k1 = f(phi);
    const double k2 = f(phi + 0.5 * h * k1);
    const double k3 = f(phi + 0.5 * h * k2);
    const double k4 = f(phi + h * k3);
    phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return phi;
}

}  // namespace oracle

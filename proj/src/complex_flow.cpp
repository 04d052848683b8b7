#include "hyperam/complex_flow.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "hyperam/error.hpp"
#include "hyperam/ode.hpp"

namespace hyperam {

namespace {

cplx f_prime(const Curve& curve, cplx x) {
  const auto& lam = curve.coeffs();
  const std::size_t deg = lam.size();  // leading x^deg term has coefficient 1
  cplx d = static_cast<double>(deg);
  for (std::size_t k = deg - 1; k >= 1; --k) d = d * x + static_cast<double>(k) * lam[k];
  return d;
}

ode::Vec pack(const ComplexDivisor& d) {
  ode::Vec y;
  for (const cplx& v : d.x) {
    y.push_back(v.real());
    y.push_back(v.imag());
  }
  for (const cplx& v : d.y) {
    y.push_back(v.real());
    y.push_back(v.imag());
  }
  return y;
}

ComplexDivisor unpack(const ode::Vec& y, std::size_t g) {
  ComplexDivisor d;
  for (std::size_t i = 0; i < g; ++i) d.x.emplace_back(y[2 * i], y[2 * i + 1]);
  for (std::size_t i = 0; i < g; ++i) {
    d.y.emplace_back(y[2 * g + 2 * i], y[2 * g + 2 * i + 1]);
  }
  return d;
}

}  // namespace

ComplexDivisor lift(const ChartModel& model, const DivisorState& state) {
  const int g = model.genus();
  const PhiChart& ch = model.chart();
  ComplexDivisor d;
  for (int i = 0; i < g; ++i) {
    const double phi = state.phis.at(i);
    const double n = std::abs(model.N(phi));
    if (n < 1e-8) {
      throw Error(ErrorCode::DegenerateDivisor, "divisor_flow.lift",
                  "point " + std::to_string(i) + " sits where N vanishes");
    }
    const cplx x = ch.x_of_phi(phi);
    const cplx dx_dphi = cplx(0.0, 2.0) * (x - ch.e_a());
    // d phi / du = psi / |N|
    const double dphi_du = state.kin_velocity.at(i) / n;
    d.x.push_back(x);
    d.y.push_back(0.5 * std::pow(x, g - 1) * dx_dphi * dphi_du);
  }
  // The chart's A_j = (sqrt p - sqrt q)^2 equals p + q - 2 sqrt(pq) only for
  // positive offsets; otherwise the chart circle carries non-real du_g on
  // the curve itself and y^2 = f(x) fails.
  const double defect = curve_defect(ch.curve(), d);
  if (defect > 1e-8) {
    throw Error(ErrorCode::NonRealVelocity, "divisor_flow.lift",
                "chart model is off the curve here (y^2 defect " +
                    std::to_string(defect) + ")");
  }
  return d;
}

ComplexDivisor complex_flow(const Curve& curve, const ComplexDivisor& d,
                            cplx d_gm1, cplx d_g, double rtol, double atol) {
  const std::size_t g = d.x.size();
  if (g == 0 || d.y.size() != g || static_cast<int>(g) != curve.genus()) {
    throw Error(ErrorCode::InvalidArgument, "divisor_flow.complex_flow",
                "divisor does not match the curve genus");
  }
  if (g == 1 && d_gm1 != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "divisor_flow.complex_flow",
                "genus one has no u_{g-1}");
  }
  if (d_gm1 == 0.0 && d_g == 0.0) return d;
  Eigen::VectorXcd target = Eigen::VectorXcd::Zero(g);
  target(g - 1) = d_g;
  if (g >= 2) target(g - 2) = d_gm1;

  // sigma in [0, 1]: du_k / dsigma = target_k = sum_i x_i^{k-1} w_i,
  // w_i = dx_i / (2 y_i)
  ode::Rhs rhs = [&](double, const ode::Vec& y, ode::Vec& dy) {
    const ComplexDivisor c = unpack(y, g);
    Eigen::MatrixXcd V(g, g);
    for (std::size_t i = 0; i < g; ++i) {
      cplx p = 1.0;
      for (std::size_t k = 0; k < g; ++k) {
        V(k, i) = p;
        p *= c.x[i];
      }
    }
    const Eigen::VectorXcd w = V.partialPivLu().solve(target);
    dy.assign(y.size(), 0.0);
    for (std::size_t i = 0; i < g; ++i) {
      const cplx dx = 2.0 * c.y[i] * w(i);
      const cplx dyi = f_prime(curve, c.x[i]) * w(i);
      dy[2 * i] = dx.real();
      dy[2 * i + 1] = dx.imag();
      dy[2 * g + 2 * i] = dyi.real();
      dy[2 * g + 2 * i + 1] = dyi.imag();
    }
  };
  ode::Options opts;
  opts.rtol = rtol;
  opts.atol = atol;
  opts.h_max = 0.125;
  ode::Dopri5 solver(rhs, 0.0, pack(d), opts);
  while (solver.s() < 1.0) {
    const double s0 = solver.s();
    const ode::Vec y0 = solver.y();
    solver.step();
    if (solver.s() > 1.0) {
      solver.reset(s0, y0);
      solver.reset(1.0, solver.trial(1.0 - s0));
    }
  }
  return unpack(solver.y(), g);
}

cplx complex_turning(const PhiChart& chart, const ComplexDivisor& d) {
  cplx p = 1.0;
  for (const cplx& x : d.x) p *= (x - chart.e_a()) / chart.c1();
  return cplx(0.0, -1.0) * std::log(p);
}

double curve_defect(const Curve& curve, const ComplexDivisor& d) {
  double worst = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const cplx f = curve.y_squared(d.x[i]);
    worst = std::max(worst, std::abs(d.y[i] * d.y[i] - f) / std::max(1.0, std::abs(f)));
  }
  return worst;
}

}  // namespace hyperam

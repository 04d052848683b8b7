#pragma once

#include <vector>

#include "hyperam/divisor_flow.hpp"

namespace hyperam {

/// A degree-g divisor anywhere on the curve: points (x_i, y_i) with
/// y_i^2 = f(x_i).  Needed once a flow leaves the real slice.
struct ComplexDivisor {
  std::vector<cplx> x;
  std::vector<cplx> y;
};

/// The real-slice state as curve points.  y_i carries the sheet through
/// du_g^{(i)} = x^{g-1} dx / (2 y).  Throws DegenerateDivisor where a point
/// sits at N = 0 (g >= 2), where the sheet is not defined, and
/// NonRealVelocity where the chart model does not describe the curve (pairs
/// with negative offsets).
ComplexDivisor lift(const ChartModel& model, const DivisorState& state);

/// Moves the divisor by du_{g-1} = d_gm1 and du_g = d_g with u_1..u_{g-2}
/// held fixed, integrating the Abel-Jacobi inversion in x.  g >= 2 uses
/// both components; g = 1 requires d_gm1 = 0.
ComplexDivisor complex_flow(const Curve& curve, const ComplexDivisor& d,
                            cplx d_gm1, cplx d_g, double rtol = 1e-12,
                            double atol = 1e-14);

/// -i log(prod_i (x_i - e_a) / c_1^g), principal branch.  Real on the real
/// slice, where it equals 2 sum_i phi_i mod 2 pi.
cplx complex_turning(const PhiChart& chart, const ComplexDivisor& d);

/// max_i |y_i^2 - f(x_i)| / max(1, |f(x_i)|)
double curve_defect(const Curve& curve, const ComplexDivisor& d);

}  // namespace hyperam

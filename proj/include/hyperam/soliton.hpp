#pragma once

#include <cstddef>
#include <vector>

#include "hyperam/divisor_flow.hpp"

namespace hyperam {

/// prod_i (x^{(i)} - e_a) / R = e^{2 i sum_i phi_i} on the real slice.
cplx tangent(const ChartModel& model, const DivisorState& state);

struct ShapeSample {
  double t1 = 0.0;
  double phi_total = 0.0;  ///< phi_a = sum_i phi_i
  double turning = 0.0;    ///< tangent angle 2 phi_a, continuous in t1
  cplx tangent;
  cplx Z;
};

/// Planar curve from a t_1 trajectory sampled uniformly in t: Z is the
/// fourth-order cumulative integral of the tangent, Z = 0 at the first
/// sample.
std::vector<ShapeSample> shape(const ChartModel& model,
                               const std::vector<DivisorState>& traj);

/// round(sum_i Delta phi_i / pi) over a trajectory spanning exactly one
/// primitive u-period of every point.  Throws PeriodMismatch otherwise.
int winding_number(const std::vector<DivisorState>& traj,
                   const AmSolver& solver);

/// Proper crossings between non-adjacent segments of the polyline Z.
std::size_t self_intersections(const std::vector<ShapeSample>& shape);

/// Coefficient of the cubic term in the static MKdV equation
/// a phi' + kappa phi'^3 + phi''' = 0 as published for this solution.
inline constexpr double kStaticMkdvCubic = 1.0 / 3.0;
/// Coefficient of the cubic term in phi_{t2} + kappa phi_{t1}^3 + phi_{t1 t1 t1} = 0.
inline constexpr double kMkdvCubic = 1.0 / 4.0;

struct StaticMkdvFit {
  double a = 0.0;
  double max_residual = 0.0;
  double max_third = 0.0;      ///< max |phi'''| over the grid
  double relative = 0.0;       ///< max_residual / max_third
  bool indeterminate = false;  ///< phi' vanishes identically
};

/// Fits a by least squares over the interior of the shape's turning angle
/// using fourth-order central differences.  Requires at least
/// `min_per_period` samples per `period_t1` (GridTooCoarse otherwise).
StaticMkdvFit smkdv_residual(const std::vector<ShapeSample>& shape,
                             double period_t1,
                             double cubic = kStaticMkdvCubic,
                             double min_per_period = 2000.0);

struct MkdvResult {
  double max_residual = 0.0;
  double max_third = 0.0;
  double relative = 0.0;
};

/// Residual of phi_{t2} + kappa phi_{t1}^3 + phi_{t1 t1 t1} over the interior
/// of a grid phi[j][k] = phi(t1_0 + k h1, t2_0 + j h2).  Throws
/// PhaseUnwrapFailure if adjacent values jump by more than pi.
MkdvResult mkdv_residual_grid(const std::vector<std::vector<double>>& phi,
                              double h1, double h2, double cubic = kMkdvCubic);

/// Which t_1 direction the grid follows.  FixedT2: t_1 at fixed
/// t_2 = R (u_{g-1} - u_g / (lambda_{2g} + e_a)), i.e. d u_{g-1} = d u_g /
/// (lambda_{2g} + e_a).  FixedUgm1: u_{g-1} held fixed.  Both step t_2 as
/// d u_{g-1} = d t_2 / R at fixed u_g.
enum class MkdvFrame { FixedT2, FixedUgm1 };

struct MkdvGrid {
  std::vector<std::vector<double>> phi;       ///< Re of the turning angle, [t2][t1]
  std::vector<std::vector<double>> phi_imag;  ///< -log(|prod (x - e_a)| / R)
  double h1 = 0.0;
  double h2 = 0.0;
};

/// Turning angle on an n1 x n2 grid from the complex divisor flow: t_2 steps
/// from `init` by h2, then n1 - 1 steps of h1 in t_1 from each slice (slices
/// run in parallel).  Off the real slice the angle is complex.
MkdvGrid mkdv_grid(const ChartModel& model, const DivisorState& init,
                   double t1_span, std::size_t n1, double t2_span,
                   std::size_t n2, MkdvFrame frame = MkdvFrame::FixedT2,
                   double rtol = 1e-12, double atol = 1e-14);

/// Complex residual |phi_{t2} + kappa phi_{t1}^3 + phi_{t1 t1 t1}| over the
/// grid interior.
MkdvResult mkdv_residual_grid(const MkdvGrid& grid, double cubic = kMkdvCubic);

MkdvResult mkdv_residual(const ChartModel& model, const DivisorState& init,
                         double t1_span, std::size_t n1, double t2_span,
                         std::size_t n2, double cubic = kMkdvCubic);

/// Least-squares fit of phi_{t2} + alpha phi_{t1} + kappa phi_{t1}^3 +
/// beta phi_{t1 t1 t1} = 0 over the grid interior (complex coefficients).
struct MkdvFit {
  cplx alpha;
  cplx kappa;
  cplx beta;
  double relative = 0.0;  ///< max |fit residual| / max |phi_{t2}|
};
MkdvFit mkdv_fit(const MkdvGrid& grid);

/// max |phi_imag| over the grid: how far the flow left the real slice.
double max_reality_defect(const MkdvGrid& grid);

}  // namespace hyperam

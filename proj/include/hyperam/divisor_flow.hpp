#pragma once

#include <cstddef>
#include <vector>

#include "hyperam/amfun.hpp"
#include "hyperam/contour.hpp"
#include "hyperam/divisor_state.hpp"

namespace hyperam {

/// A flow of the divisor in the (u_1, ..., u_g) coordinates.  Only
/// velocities in u_{g-1} and u_g are realisable; lower components must be 0.
struct FlowSpec {
  ChartModel model;
  std::vector<double> velocity;  ///< d u_k / dt, k = 1..g
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.25;        ///< in the regularised flow parameter

  /// d u_g / dt = rate, u_{g-1} free.
  static FlowSpec u_g(const ChartModel& model, double rate = 1.0);
  /// t_1 = R u_g.
  static FlowSpec t1(const ChartModel& model);
  /// t_2 = R (u_{g-1} - (lambda_{2g} + e_a)^{-1} u_g) at fixed t_1, i.e.
  /// d u_{g-1} / dt_2 = 1 / R, d u_g / dt_2 = 0.  Genus >= 2.
  static FlowSpec t2(const ChartModel& model);

  /// True when the u_{g-1} component is left free.
  bool pure() const;
};

/// d u_g^{(i)} / dt for each point: the split of the target velocity over
/// the divisor with every rate real.  Pure u_g flows give target_g / g each;
/// mixed flows keep sum = target_g and match Re sum_i rate_i / x_i =
/// target_{g-1} with the least-norm correction.  Throws DegenerateDivisor
/// where that row vanishes, e.g. at conjugate-symmetric divisors.
std::vector<double> point_rates(const FlowSpec& spec, const DivisorState& st);

/// d phi_i / dt.  Infinite where N vanishes at phi = k pi (g >= 2).
std::vector<double> flow_velocity(const FlowSpec& spec,
                                  const DivisorState& state);

/// Integrates the flow over a time dt (either sign).
DivisorState step(const FlowSpec& spec, const DivisorState& state, double dt);

/// States at `samples` equally spaced times over [t0, t1], starting from
/// init (which is first carried to t0 if init.t differs).
std::vector<DivisorState> trajectory(const FlowSpec& spec,
                                     const DivisorState& init, double t0,
                                     double t1, std::size_t samples);

/// Point i at u = (i + 1/2) P / g, P the u-length of the phase cell.
DivisorState canonical_initial_state(const ChartModel& model);
DivisorState canonical_initial_state(const AmSolver& solver);
/// State with the given phis on the given sheets, t = 0, u_partial = 0.
DivisorState make_state(const ChartModel& model, std::vector<double> phis,
                        std::vector<int> sheets);

/// Kinematic energy of point i: E = w'^2 - (1 - w^2) prod_j (A_j + B_j w^2),
/// w = sin phi, ' = d / ds_i with du_g^{(i)} = |N| ds_i.  Zero on the curve.
double energy(const ChartModel& model, const DivisorState& state,
              std::size_t point);

/// Largest |Im u_g^{(i)}| accumulated along the sampled path, computed from
/// the chart's complex coefficients.
double max_imag_u(const ChartModel& model,
                  const std::vector<DivisorState>& states);

}  // namespace hyperam

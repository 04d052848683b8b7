#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "hyperam/contour.hpp"
#include "hyperam/divisor_state.hpp"

namespace hyperam {

/// Inverse of u_of_phi for one chart, continued to all real u.
/// Rotating charts: phi(u + P) = phi(u) + pi, P = u over [0, pi].
/// Librating charts: phi oscillates through the cell with period 2P,
/// P = u from lo to hi.
class AmSolver {
 public:
  explicit AmSolver(ChartModel model, int table_nodes = 64);

  const ChartModel& model() const noexcept { return model_; }
  /// u across one traversal of the phase cell.
  double cell_length() const noexcept { return cell_u_.back(); }
  /// Primitive u-period of the point motion (P rotating, 2P librating).
  double period() const noexcept;

  struct Point {
    double phi;
    int sheet;  ///< +1 while phi increases with u, -1 on the return half
  };
  Point evaluate(double u) const;
  double operator()(double u) const { return evaluate(u).phi; }

 private:
  /// Cell coordinate (phi for rotating, theta for librating) where the
  /// integral from the cell start equals r, 0 <= r <= cell_length().
  double invert_cell(double r) const;
  double cell_integral(double from, double to) const;
  double cell_density(double x) const;

  ChartModel model_;
  std::vector<double> nodes_;   ///< cell coordinate
  std::vector<double> cell_u_;  ///< cumulative u at nodes_
};

/// phi_a^{(i)}(u): every point of a chart shares the same inverse.
double am_point(const ChartModel& model, std::size_t point, double u);
double am_point(const PhiChart& chart, std::size_t point, double u);

/// Jacobi amplitude am(u | m), m = k^2 any real, by the AGM
/// (with the reciprocal and imaginary modulus transformations).
double am_jacobi(double u, double m);
inline double am_genus1_oracle(double k_sq, double u) {
  return am_jacobi(u, k_sq);
}
/// Complete elliptic integral K(m), 0 <= m < 1, by the AGM.
double elliptic_k(double m);

struct AmEvaluation {
  double u = 0.0;
  std::vector<double> phis;
  double phi_total = 0.0;
  std::complex<double> al;  ///< e^{i phi_total}
};

/// phi_a = sum_i phi_a^{(i)} and al = e^{i phi_a} along sampled states;
/// u is the total u_g = sum_i u_g^{(i)} of each state.
std::vector<AmEvaluation> hyper_am(const ChartModel& model,
                                   const std::vector<DivisorState>& states);

}  // namespace hyperam

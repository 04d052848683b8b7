#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "hyperam/curve.hpp"
#include "hyperam/reality.hpp"

namespace hyperam {

/// A reality-classified chart with the real pair coefficients the
/// differentials are built from:
///   D(phi)^2 = prod_j (A_j + B_j sin^2 phi),  N(phi) = (2 sqrt(c) sin phi)^{g-1},
///   du_g / dphi = N / D.
/// Every divisor point of the chart shares these.
class ChartModel {
 public:
  /// Classifies the chart; throws whatever classify_case throws.
  explicit ChartModel(PhiChart chart);
  ChartModel(PhiChart chart, CaseClass cls);

  const PhiChart& chart() const noexcept { return chart_; }
  const CaseClass& case_class() const noexcept { return cls_; }
  const PhaseInterval& phase() const noexcept { return cls_.phase; }
  int genus() const noexcept { return chart_.genus(); }
  double c() const noexcept { return c_; }
  const std::vector<double>& a_coefs() const noexcept { return a_; }
  const std::vector<double>& b_coefs() const noexcept { return b_; }
  /// |d t1 / d u_g| normalisation: |e_a|^g for g >= 2, c_1 for g = 1.
  double R() const noexcept { return R_; }

  double F(double phi) const;
  double F_prime(double phi) const;
  double N(double phi) const;
  double D(double phi) const;  ///< throws OutsideAdmissibleRange if F < 0

  /// True if F >= 0 at phi, allowing for rounding near turning points.
  bool admissible(double phi) const;

  /// Librating cells are parametrised by theta in [0, pi]:
  /// phi = mid - half cos(theta).
  double phi_of_theta(double theta) const;
  double theta_of_phi(double phi) const;
  /// |N|/D dphi/dtheta, evaluated from the exact endpoint distances.
  double theta_integrand(double theta, double dlo, double dhi) const;

 private:
  PhiChart chart_;
  CaseClass cls_;
  double c_ = 0.0;
  double R_ = 1.0;
  std::vector<double> a_;
  std::vector<double> b_;
};

/// N/D at phi (signed numerator).  Throws OutsideAdmissibleRange where D^2 < 0.
double du_over_dphi(const ChartModel& model, std::size_t point, double phi);
double du_over_dphi(const PhiChart& chart, std::size_t point, double phi);

struct IntegrandSpec {
  const ChartModel* model = nullptr;
  std::size_t point = 0;
};

/// int_from^to |N|/D dphi: the u_g increment along the sheet-consistent
/// real contour.  Rotating charts accept any interval; librating intervals
/// must lie inside the turning-point cell.
double integrate_phi(const IntegrandSpec& spec, double from, double to);

/// The same integral over a librating cell in theta, 0 <= ta <= tb <= pi.
/// Endpoints at exactly 0 or pi are treated as turning points.
double integrate_theta(const ChartModel& model, double ta, double tb);

/// u(phi) measured from the reference point of the phase cell.
double u_of_phi(const ChartModel& model, std::size_t point, double phi);

/// u_g increment computed in complex arithmetic straight from the chart's
/// principal roots; its imaginary part measures departure from a real
/// contour.
std::complex<double> complex_u_increment(const ChartModel& model, double from,
                                         double to);

/// Same increment as integrate_phi for 0 <= from <= to <= pi/2 inside the
/// admissible set, computed for genus 2 in v = sin^2 phi, where it becomes
/// the elliptic integral sqrt(c) dv / sqrt((1-v)(A_1+B_1 v)(A_2+B_2 v)).
double u_via_w_squared(const ChartModel& model, double from, double to);

struct PeriodLattice {
  double omega = 0.0;
  std::complex<double> omega_prime;
  std::complex<double> tau;  ///< 2 omega' / (4 omega), lattice (4w, 2w')
  CaseLabel label = CaseLabel::I1;

  /// Re tau reduced modulo 1 into [0, 1) (translations of PSL(2, Z)).
  double reduced_re_tau() const;
};

PeriodLattice periods(const PhiChart& chart);
/// Same lattice by Gauss-Chebyshev rules (independent cross-check).
PeriodLattice periods_gauss_chebyshev(const PhiChart& chart, int nodes = 64);

}  // namespace hyperam

#include "hyperam/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hyperam/error.hpp"
#include "hyperam/quadrature.hpp"

namespace hyperam {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }

}  // namespace

ChartModel::ChartModel(PhiChart chart)
    : ChartModel(chart, classify_case(chart)) {}

ChartModel::ChartModel(PhiChart chart, CaseClass cls)
    : chart_(std::move(chart)), cls_(std::move(cls)) {
  c_ = chart_.c1().real();
  for (const auto& pr : chart_.pairs()) {
    a_.push_back(pr.a_coef.real());
    b_.push_back(pr.b_coef.real());
  }
  const int g = chart_.genus();
  R_ = g == 1 ? c_ : std::pow(std::abs(chart_.e_a().real()), g);
}

double ChartModel::F(double phi) const {
  const double s2 = sq(std::sin(phi));
  double f = 1.0;
  for (std::size_t j = 0; j < a_.size(); ++j) f *= a_[j] + b_[j] * s2;
  return f;
}

double ChartModel::F_prime(double phi) const {
  const double s2 = sq(std::sin(phi));
  const double s2p = std::sin(2.0 * phi);
  double total = 0.0;
  for (std::size_t j = 0; j < a_.size(); ++j) {
    double term = b_[j] * s2p;
    for (std::size_t l = 0; l < a_.size(); ++l) {
      if (l != j) term *= a_[l] + b_[l] * s2;
    }
    total += term;
  }
  return total;
}

double ChartModel::N(double phi) const {
  const int g = genus();
  if (g == 1) return 1.0;
  return std::pow(2.0 * std::sqrt(c_) * std::sin(phi), g - 1);
}

bool ChartModel::admissible(double phi) const {
  double scale = 1.0;
  for (std::size_t j = 0; j < a_.size(); ++j) {
    scale *= std::abs(a_[j]) + std::abs(b_[j]);
  }
  return F(phi) >= -1e-12 * scale;
}

double ChartModel::D(double phi) const {
  if (!admissible(phi)) {
    throw Error(ErrorCode::OutsideAdmissibleRange, "contour_quad.du_over_dphi",
                "D^2 < 0 at phi = " + std::to_string(phi));
  }
  return std::sqrt(std::max(F(phi), 0.0));
}

double ChartModel::phi_of_theta(double theta) const {
  const double mid = 0.5 * (phase().lo + phase().hi);
  const double half = 0.5 * (phase().hi - phase().lo);
  return mid - half * std::cos(theta);
}

double ChartModel::theta_of_phi(double phi) const {
  const double half = 0.5 * (phase().hi - phase().lo);
  const double r = std::clamp((phi - phase().lo) / (2.0 * half), 0.0, 1.0);
  return 2.0 * std::asin(std::sqrt(r));
}

double ChartModel::theta_integrand(double theta, double dlo, double dhi) const {
  const PhaseInterval& ph = phase();
  const double half = 0.5 * (ph.hi - ph.lo);
  const double s = std::sin(0.5 * dlo);
  const double co = std::sin(0.5 * dhi);
  const double dl = 2.0 * half * s * s;   // phi - lo
  const double dh = 2.0 * half * co * co;  // hi - phi
  const double phi = dl < dh ? ph.lo + dl : ph.hi - dh;
  const bool mirrored = std::abs(ph.lo + ph.hi - kPi) < 1e-12;
  double f = 1.0;
  for (std::size_t j = 0; j < a_.size(); ++j) {
    const int jj = static_cast<int>(j);
    if (jj == ph.lo_factor && jj == ph.hi_factor) {
      // sin^2 phi - sin^2 lo factored about both turning points.
      const double v = b_[j] * std::sin(dl) * std::sin(dh);
      f *= mirrored ? v : -v;
    } else if (jj == ph.lo_factor) {
      f *= b_[j] * std::sin(dl) * std::sin(2.0 * ph.lo + dl);
    } else if (jj == ph.hi_factor) {
      f *= b_[j] * std::sin(-dh) * std::sin(2.0 * ph.hi - dh);
    } else {
      f *= a_[j] + b_[j] * sq(std::sin(phi));
    }
  }
  if (!(f > 0.0)) return 0.0;
  (void)theta;
  return std::abs(N(phi)) * half * 2.0 * s * co / std::sqrt(f);
}

double du_over_dphi(const ChartModel& model, std::size_t, double phi) {
  return model.N(phi) / model.D(phi);
}

double du_over_dphi(const PhiChart& chart, std::size_t point, double phi) {
  return du_over_dphi(ChartModel(chart), point, phi);
}

namespace {

double integrate_rotating(const ChartModel& m, double from, double to) {
  // |N| has kinks at multiples of pi; integrate piecewise between them.
  std::vector<double> cuts{from};
  for (double k = std::floor(from / kPi) + 1.0; k * kPi < to; k += 1.0) {
    cuts.push_back(k * kPi);
  }
  cuts.push_back(to);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += quad::tanh_sinh(
                 [&](double phi) { return std::abs(m.N(phi)) / m.D(phi); },
                 cuts[i], cuts[i + 1])
                 .value;
  }
  return total;
}

}  // namespace

double integrate_theta(const ChartModel& m, double ta, double tb) {
  if (ta == tb) return 0.0;
  if (tb < ta) return -integrate_theta(m, tb, ta);
  std::vector<double> cuts{ta};
  const PhaseInterval& ph = m.phase();
  if (m.genus() > 1 && ph.lo < 0.0 && ph.hi > 0.0) {
    const double t0 = m.theta_of_phi(0.0);
    if (t0 > ta && t0 < tb) cuts.push_back(t0);
  }
  cuts.push_back(tb);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    total += quad::tanh_sinh(
                 [&](double th, double da, double db) {
                   const double dlo = a == 0.0 ? da : th;
                   const double dhi = b == kPi ? db : kPi - th;
                   return m.theta_integrand(th, dlo, dhi);
                 },
                 a, b)
                 .value;
  }
  return total;
}

double integrate_phi(const IntegrandSpec& spec, double from, double to) {
  if (spec.model == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "contour_quad.integrate_phi",
                "missing chart model");
  }
  const ChartModel& m = *spec.model;
  if (from == to) return 0.0;
  if (to < from) return -integrate_phi(spec, to, from);
  const PhaseInterval& ph = m.phase();
  if (ph.rotating) return integrate_rotating(m, from, to);

  const double tol = 1e-12 * (1.0 + std::abs(ph.hi));
  const bool inside = from >= ph.lo - tol && to <= ph.hi + tol;
  if (!inside) {
    if (m.admissible(from) && m.admissible(to)) {
      throw Error(ErrorCode::SingularInterior, "contour_quad.integrate_phi",
                  "interval crosses a turning point of the librating cell");
    }
    throw Error(ErrorCode::OutsideAdmissibleRange, "contour_quad.integrate_phi",
                "interval leaves the admissible phase cell");
  }
  const double ta = from <= ph.lo ? 0.0 : m.theta_of_phi(from);
  const double tb = to >= ph.hi ? kPi : m.theta_of_phi(to);
  return integrate_theta(m, ta, tb);
}

double u_of_phi(const ChartModel& model, std::size_t point, double phi) {
  return integrate_phi({&model, point}, model.phase().reference(), phi);
}

std::complex<double> complex_u_increment(const ChartModel& m, double from,
                                         double to) {
  const double re = integrate_phi({&m, 0}, from, to);
  // The imaginary part of 1 / sqrt(prod (A_j + B_j sin^2)) evaluated with
  // the chart's complex coefficients, relative to the real integrand.
  auto ratio_imag = [&](double phi) {
    const double s2 = sq(std::sin(phi));
    std::complex<double> fc = 1.0;
    for (const auto& pr : m.chart().pairs()) fc *= pr.a_coef + pr.b_coef * s2;
    const double fr = m.F(phi);
    if (!(fr > 0.0)) return 0.0;
    return (std::sqrt(std::complex<double>(fr)) / std::sqrt(fc)).imag();
  };
  double im = 0.0;
  if (from != to) {
    const double lo = std::min(from, to);
    const double hi = std::max(from, to);
    const double sign = to >= from ? 1.0 : -1.0;
    if (m.phase().rotating) {
      im = sign * quad::tanh_sinh(
                      [&](double phi) {
                        return ratio_imag(phi) * std::abs(m.N(phi)) / m.D(phi);
                      },
                      lo, hi)
                      .value;
    } else {
      const PhaseInterval& ph = m.phase();
      const double ta = lo <= ph.lo ? 0.0 : m.theta_of_phi(lo);
      const double tb = hi >= ph.hi ? kPi : m.theta_of_phi(hi);
      im = sign * quad::tanh_sinh(
                      [&](double th, double da, double db) {
                        const double dlo = ta == 0.0 ? da : th;
                        const double dhi = tb == kPi ? db : kPi - th;
                        return ratio_imag(m.phi_of_theta(th)) *
                               m.theta_integrand(th, dlo, dhi);
                      },
                      ta, tb)
                      .value;
    }
  }
  return {re, im};
}

double u_via_w_squared(const ChartModel& m, double from, double to) {
  if (m.genus() != 2) {
    throw Error(ErrorCode::WrongGenus, "contour_quad.u_via_w_squared",
                "the v = w^2 reduction is specific to genus 2");
  }
  if (from > to) return -u_via_w_squared(m, to, from);
  if (from < 0.0 || to > 0.5 * kPi + 1e-15 || !m.admissible(from) ||
      !m.admissible(to)) {
    throw Error(ErrorCode::OutsideAdmissibleRange,
                "contour_quad.u_via_w_squared",
                "need 0 <= from <= to <= pi/2 inside the admissible set");
  }
  const double v0 = sq(std::sin(from));
  const double v1 = to >= 0.5 * kPi ? 1.0 : sq(std::sin(to));
  const auto& A = m.a_coefs();
  const auto& B = m.b_coefs();
  std::vector<int> anchor(A.size(), 0);  // +1: root at v0, -1: root at v1
  for (std::size_t j = 0; j < A.size(); ++j) {
    if (A[j] >= 0.0) continue;
    const double root = -A[j] / B[j];
    if (std::abs(root - v0) <= 1e-13 * (1.0 + root)) anchor[j] = 1;
    if (std::abs(root - v1) <= 1e-13 * (1.0 + root)) anchor[j] = -1;
  }
  const double sqrt_c = std::sqrt(m.c());
  return quad::tanh_sinh(
             [&](double v, double da, double db) {
               const double one_minus = v1 == 1.0 ? db : 1.0 - v;
               double f = one_minus;
               for (std::size_t j = 0; j < A.size(); ++j) {
                 if (anchor[j] == 1) {
                   f *= B[j] * da;
                 } else if (anchor[j] == -1) {
                   f *= -B[j] * db;
                 } else {
                   f *= A[j] + B[j] * v;
                 }
               }
               return f > 0.0 ? sqrt_c / std::sqrt(f) : 0.0;
             },
             v0, v1)
      .value;
}

double PeriodLattice::reduced_re_tau() const {
  double r = tau.real() - std::floor(tau.real());
  if (r > 1.0 - 1e-12) r = 0.0;
  return r;
}

namespace {

struct Genus1Data {
  double A;
  double B;
  CaseLabel label;
};

Genus1Data genus1_data(const PhiChart& chart, const char* where) {
  if (chart.genus() != 1) {
    throw Error(ErrorCode::WrongGenus, where, "periods need genus 1");
  }
  CaseClass cls;
  try {
    cls = classify_case(chart);
  } catch (const Error& err) {
    throw Error(ErrorCode::UnclassifiedChart, where, err.what());
  }
  const ChartPair& pr = chart.pair(0);
  return {pr.a_coef.real(), pr.b_coef.real(), cls.label};
}

}  // namespace

PeriodLattice periods(const PhiChart& chart) {
  const auto [A, B, label] = genus1_data(chart, "contour_quad.periods");
  PeriodLattice lat;
  lat.label = label;
  if (label == CaseLabel::I1) {
    lat.omega = quad::tanh_sinh(
                    [&](double w, double, double db) {
                      return 1.0 / std::sqrt(db * (1.0 + w) * (A + B * w * w));
                    },
                    0.0, 1.0)
                    .value;
    const double s = std::sqrt(A / B);  // 1/|k|
    const double j = quad::tanh_sinh(
                         [&](double v, double, double db) {
                           return 1.0 /
                                  std::sqrt((1.0 + v * v) * B * db * (s + v));
                         },
                         0.0, s)
                         .value;
    lat.omega_prime = {-lat.omega, j};
  } else {
    const double s = std::sqrt(-A / B);  // 1/k
    lat.omega = 2.0 * quad::tanh_sinh(
                          [&](double w, double, double db) {
                            return 1.0 / std::sqrt((1.0 - w * w) * B * db *
                                                   (s + w));
                          },
                          0.0, s)
                          .value;
    const double j = quad::tanh_sinh(
                         [&](double w, double da, double db) {
                           return 1.0 / std::sqrt(db * (1.0 + w) * B * da *
                                                  (w + s));
                         },
                         s, 1.0)
                         .value;
    lat.omega_prime = {0.0, j};
  }
  lat.tau = lat.omega_prime / (2.0 * lat.omega);
  return lat;
}

PeriodLattice periods_gauss_chebyshev(const PhiChart& chart, int nodes) {
  const auto [A, B, label] =
      genus1_data(chart, "contour_quad.periods_gauss_chebyshev");
  PeriodLattice lat;
  lat.label = label;
  if (label == CaseLabel::I1) {
    lat.omega = 0.5 * quad::gauss_chebyshev(
                          [&](double w) { return 1.0 / std::sqrt(A + B * w * w); },
                          -1.0, 1.0, nodes);
    const double s = std::sqrt(A / B);
    const double j = 0.5 * quad::gauss_chebyshev(
                               [&](double v) {
                                 return 1.0 / std::sqrt((1.0 + v * v) * B);
                               },
                               -s, s, nodes);
    lat.omega_prime = {-lat.omega, j};
  } else {
    const double s = std::sqrt(-A / B);
    lat.omega = quad::gauss_chebyshev(
        [&](double w) { return 1.0 / std::sqrt(B * (1.0 - w * w)); }, -s, s,
        nodes);
    const double j = quad::gauss_chebyshev(
        [&](double w) { return 1.0 / std::sqrt((1.0 + w) * B * (w + s)); }, s,
        1.0, nodes);
    lat.omega_prime = {0.0, j};
  }
  lat.tau = lat.omega_prime / (2.0 * lat.omega);
  return lat;
}

}  // namespace hyperam

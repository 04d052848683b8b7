#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperam/contour.hpp"
#include "hyperam/error.hpp"
#include "hyperam/quadrature.hpp"
#include "oracles.hpp"

using namespace hyperam;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

PhiChart positive_chart() {
  return phi_chart(Curve::from_branch_points({0.0, 1.0, 4.0}), 0, {1, 2});
}

PhiChart negative_chart() {
  return phi_chart(Curve::from_branch_points({-4.0, -1.0, 0.0}), 2, {0, 1});
}

/// Negative genus-one chart {0, -x^2, -1} with the requested k^2 > 1.
PhiChart negative_chart_with(double k_sq) {
  const double x = (k_sq + 2.0 + 2.0 * std::sqrt(k_sq + 1.0)) / k_sq;
  return phi_chart(Curve::from_branch_points({0.0, -x * x, -1.0}), 0, {1, 2});
}

}  // namespace

TEST_CASE("tanh-sinh handles smooth and endpoint-singular integrands") {
  CHECK(quad::tanh_sinh([](double) { return 1.0; }, 0.0, 1.0).value ==
        doctest::Approx(1.0).epsilon(1e-14));
  const double arcsine =
      quad::tanh_sinh(
          [](double w, double, double db) {
            return 1.0 / std::sqrt(db * (1.0 + w));
          },
          0.0, 1.0)
          .value;
  CHECK(std::abs(arcsine - 0.5 * kPi) < 1e-14);
  const double reversed =
      quad::tanh_sinh([](double x) { return std::exp(x); }, 1.0, 0.0).value;
  CHECK(std::abs(reversed + (std::exp(1.0) - 1.0)) < 1e-14);
  CHECK(std::abs(quad::gauss_chebyshev([](double) { return 1.0; }, -1.0, 1.0, 8) -
                 kPi) < 1e-14);
}

TEST_CASE("genus-one differential values") {
  const PhiChart ch = positive_chart();
  CHECK(std::abs(du_over_dphi(ch, 0, 0.0)) == doctest::Approx(1.0));
  CHECK(du_over_dphi(ch, 0, 0.5 * kPi) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("genus-two differential vanishes at phi = 0 and has the parity of N") {
  const Synthesis s = synthesize_curve(2, -2.0, {1.0, 0.5});
  const ChartModel m(s.chart);
  CHECK(du_over_dphi(m, 0, 0.0) == 0.0);
  for (double phi : {0.3, 1.1, 2.0}) {
    CHECK(m.N(-phi) == doctest::Approx(-m.N(phi)));
    CHECK(m.D(-phi) == doctest::Approx(m.D(phi)));
  }
  const Synthesis s3 = synthesize_curve(3, -1.5, {0.4, 1.1, 2.7});
  const ChartModel m3(s3.chart);
  CHECK(m3.N(-0.7) == doctest::Approx(m3.N(0.7)));
}

TEST_CASE("quarter integral matches the AGM complete integral") {
  const ChartModel m(positive_chart());
  const double q = integrate_phi({&m, 0}, 0.0, 0.5 * kPi);
  CHECK(std::abs(q - oracle::complete_k(8.0 / 9.0) / 3.0) < 1e-13);
  CHECK(std::abs(u_of_phi(m, 0, 0.5 * kPi) - q) < 1e-15);
  CHECK(u_of_phi(m, 0, 0.0) == 0.0);
  CHECK(std::abs(integrate_phi({&m, 0}, 0.5 * kPi, 0.0) + q) < 1e-15);
}

TEST_CASE("rotating integrals are additive across multiples of pi") {
  const Synthesis s = synthesize_curve(2, -2.0, {1.0, 0.5});
  const ChartModel m(s.chart);
  const double whole = integrate_phi({&m, 0}, -1.0, 4.0);
  const double parts = integrate_phi({&m, 0}, -1.0, 0.0) +
                       integrate_phi({&m, 0}, 0.0, kPi) +
                       integrate_phi({&m, 0}, kPi, 4.0);
  CHECK(std::abs(whole - parts) < 1e-13 * whole);
  const double ref = oracle::gauss_legendre(
                         [&](double p) { return std::abs(m.N(p)) / m.D(p); },
                         -1.0, 0.0) +
                     oracle::gauss_legendre(
                         [&](double p) { return std::abs(m.N(p)) / m.D(p); },
                         0.0, kPi) +
                     oracle::gauss_legendre(
                         [&](double p) { return std::abs(m.N(p)) / m.D(p); },
                         kPi, 4.0);
  CHECK(std::abs(whole - ref) < 1e-12 * whole);
}

TEST_CASE("librating integral from the turning point") {
  const ChartModel m(negative_chart());
  const double lo = m.phase().lo;
  CHECK(u_of_phi(m, 0, lo) == 0.0);
  // Half cell: A = -1, B = 8, s = 1 / sqrt 8; u(lo -> pi/2) = K(1 - s^2) / sqrt(B)
  // by w = sin(phi).
  const double half = integrate_phi({&m, 0}, lo, 0.5 * kPi);
  CHECK(std::abs(half - oracle::complete_k(7.0 / 8.0) / std::sqrt(8.0)) < 1e-13);
  const double whole = integrate_phi({&m, 0}, lo, m.phase().hi);
  CHECK(std::abs(whole - 2.0 * half) < 1e-13);
}

TEST_CASE("librating intervals are checked against the cell") {
  const ChartModel m(negative_chart());
  CHECK(code_of([&] { integrate_phi({&m, 0}, 0.1, 1.0); }) ==
        ErrorCode::OutsideAdmissibleRange);
  CHECK(code_of([&] { integrate_phi({&m, 0}, 0.5, kPi + 0.5); }) ==
        ErrorCode::SingularInterior);
  CHECK(code_of([&] { m.D(0.1); }) == ErrorCode::OutsideAdmissibleRange);
}

TEST_CASE("periods of a positive chart") {
  const PhiChart ch = positive_chart();
  const PeriodLattice lat = periods(ch);
  CHECK(lat.label == CaseLabel::I1);
  CHECK(std::abs(lat.omega - oracle::quarter_integral(1.0, 8.0)) < 1e-14);
  const double s2 = 1.0 / 8.0;  // A / B
  const double j = oracle::complete_k(s2 / (1.0 + s2)) /
                   (std::sqrt(8.0) * std::sqrt(1.0 + s2));
  CHECK(std::abs(lat.omega_prime.imag() - j) < 1e-13);
  CHECK(lat.tau.imag() > 0.0);
  CHECK(std::abs(lat.reduced_re_tau() - 0.5) < 1e-12);
  const PeriodLattice gc = periods_gauss_chebyshev(ch);
  CHECK(std::abs(gc.omega - lat.omega) < 1e-11);
  CHECK(std::abs(gc.tau - lat.tau) < 1e-11);
}

TEST_CASE("periods of a negative chart") {
  const PhiChart ch = negative_chart();
  const PeriodLattice lat = periods(ch);
  CHECK(lat.label == CaseLabel::I2);
  const double s2 = 1.0 / 8.0;
  CHECK(std::abs(lat.omega - 2.0 * oracle::complete_k(s2) / std::sqrt(8.0)) < 1e-13);
  CHECK(std::abs(lat.omega_prime.imag() -
                 oracle::complete_k(1.0 - s2) / std::sqrt(8.0)) < 1e-13);
  CHECK(std::abs(lat.reduced_re_tau()) < 1e-12);
  CHECK(lat.tau.imag() > 0.0);
  const PeriodLattice gc = periods_gauss_chebyshev(ch);
  CHECK(std::abs(gc.tau - lat.tau) < 1e-11);
}

TEST_CASE("complementary moduli invert tau up to a fixed real factor") {
  double first = 0.0;
  for (double s2 : {0.2, 0.35, 0.5, 0.8}) {
    const cplx t = periods(negative_chart_with(1.0 / s2)).tau;
    const cplx tc = periods(negative_chart_with(1.0 / (1.0 - s2))).tau;
    const cplx prod = t * tc;
    CHECK(std::abs(prod.imag()) < 1e-12);
    CHECK(prod.real() < 0.0);
    if (first == 0.0) first = prod.real();
    CHECK(prod.real() == doctest::Approx(first).epsilon(1e-12));
  }
}

TEST_CASE("period errors") {
  const Synthesis s = synthesize_curve(2, -2.0, {1.0, 0.5});
  CHECK(code_of([&] { periods(s.chart); }) == ErrorCode::WrongGenus);
  const PhiChart mixed =
      phi_chart(Curve::from_branch_points({0.0, -1.0, 4.0}), 0, {1, 2});
  CHECK(code_of([&] { periods(mixed); }) == ErrorCode::UnclassifiedChart);
}

TEST_CASE("genus-two phi and w-squared quadratures agree") {
  const Synthesis pos = synthesize_curve(2, -2.0, {1.0, 0.5});
  const ChartModel m(pos.chart);
  for (auto [a, b] : {std::pair{0.0, 0.5 * kPi}, std::pair{0.2, 1.3},
                      std::pair{0.0, 0.01}, std::pair{1.5, 0.5 * kPi}}) {
    CHECK(std::abs(integrate_phi({&m, 0}, a, b) - u_via_w_squared(m, a, b)) <
          1e-12);
  }
  const Synthesis mixed = synthesize_curve(2, -2.0, {1.0, 0.5}, {false, true});
  const ChartModel mm(mixed.chart);
  REQUIRE_FALSE(mm.phase().rotating);
  const double lo = mm.phase().lo;
  for (double b : {lo + 1e-6, 0.9, 0.5 * kPi}) {
    CHECK(std::abs(integrate_phi({&mm, 0}, lo, b) - u_via_w_squared(mm, lo, b)) <
          1e-12);
  }
}

TEST_CASE("complex increment is real for real charts") {
  const Synthesis s = synthesize_curve(2, -2.0, {1.0, 0.5}, {false, true});
  const ChartModel m(s.chart);
  const double lo = m.phase().lo;
  const cplx d = complex_u_increment(m, lo, 1.2);
  CHECK(std::abs(d.imag()) < 1e-14);
  CHECK(std::abs(d.real() - integrate_phi({&m, 0}, lo, 1.2)) < 1e-15);
}

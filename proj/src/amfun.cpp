#include "hyperam/amfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hyperam/error.hpp"

namespace hyperam {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

AmSolver::AmSolver(ChartModel model, int table_nodes)
    : model_(std::move(model)) {
  if (table_nodes < 2 || table_nodes % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "amfun.am_point",
                "table needs an even node count >= 2");
  }
  nodes_.resize(table_nodes + 1);
  cell_u_.assign(table_nodes + 1, 0.0);
  for (int k = 0; k <= table_nodes; ++k) nodes_[k] = kPi * k / table_nodes;
  nodes_.back() = kPi;
  nodes_[table_nodes / 2] = 0.5 * kPi;
  for (int k = 1; k <= table_nodes; ++k) {
    cell_u_[k] = cell_u_[k - 1] + cell_integral(nodes_[k - 1], nodes_[k]);
  }
}

double AmSolver::period() const noexcept {
  return model_.phase().rotating ? cell_length() : 2.0 * cell_length();
}

double AmSolver::cell_integral(double from, double to) const {
  if (model_.phase().rotating) return integrate_phi({&model_, 0}, from, to);
  return integrate_theta(model_, from, to);
}

double AmSolver::cell_density(double x) const {
  if (model_.phase().rotating) {
    return std::abs(model_.N(x)) / model_.D(x);
  }
  return model_.theta_integrand(x, x, kPi - x);
}

double AmSolver::invert_cell(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= cell_length()) return kPi;
  const auto it = std::upper_bound(cell_u_.begin(), cell_u_.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - cell_u_.begin()) - 1;
  double lo = nodes_[k];
  double hi = nodes_[k + 1];
  const double base = cell_u_[k];
  const double frac = (r - base) / (cell_u_[k + 1] - base);
  double x = lo + frac * (hi - lo);
  const double ftol = 4e-15 * (1.0 + cell_length());
  double f = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    f = base + cell_integral(nodes_[k], x) - r;
    if (std::abs(f) <= ftol) return x;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * kPi) {
      return x;
    }
    const double d = cell_density(x);
    double next = d > 0.0 ? x - f / d : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  if (std::abs(f) > 1e-9 * (1.0 + cell_length())) {
    throw Error(ErrorCode::InversionFailure, "amfun.am_point",
                "no convergence inverting u = " + std::to_string(r));
  }
  return x;
}

AmSolver::Point AmSolver::evaluate(double u) const {
  const double P = cell_length();
  if (model_.phase().rotating) {
    const double m = std::floor(u / P);
    const double r = u - m * P;
    return {m * kPi + invert_cell(r), 1};
  }
  const double T = 2.0 * P;
  const double r = u - std::floor(u / T) * T;
  if (r <= P) return {model_.phi_of_theta(invert_cell(r)), 1};
  return {model_.phi_of_theta(invert_cell(T - r)), -1};
}

double am_point(const ChartModel& model, std::size_t, double u) {
  return AmSolver(model).evaluate(u).phi;
}

double am_point(const PhiChart& chart, std::size_t point, double u) {
  return am_point(ChartModel(chart), point, u);
}

namespace {

// Descending Landen/AGM scheme for 0 <= m < 1.
double am_agm(double u, double m) {
  if (m == 0.0) return u;
  std::vector<double> a{1.0};
  std::vector<double> c{std::sqrt(m)};
  double b = std::sqrt(1.0 - m);
  for (int n = 0; n < 40 && std::abs(c.back()) > 1e-17; ++n) {
    const double an = a.back();
    c.push_back(0.5 * (an - b));
    a.push_back(0.5 * (an + b));
    b = std::sqrt(an * b);
  }
  const std::size_t N = a.size() - 1;
  double phi = std::ldexp(a[N] * u, static_cast<int>(N));
  for (std::size_t n = N; n >= 1; --n) {
    phi = 0.5 * (phi + std::asin(c[n] / a[n] * std::sin(phi)));
  }
  return phi;
}

}  // namespace

double am_jacobi(double u, double m) {
  if (m == 1.0) return 2.0 * std::atan(std::tanh(0.5 * u));
  if (m >= 0.0 && m < 1.0) return am_agm(u, m);
  if (m > 1.0) {
    const double s = std::sqrt(m);
    return std::asin(std::sin(am_agm(u * s, 1.0 / m)) / s);
  }
  const double mu = -m / (1.0 - m);
  const double s = std::sqrt(1.0 - m);
  const double psi = am_agm(u * s, mu);
  const double n = std::round(psi / kPi);
  const double pr = psi - n * kPi;
  return n * kPi + std::atan2(std::sin(pr) / s, std::cos(pr));
}

double elliptic_k(double m) {
  if (!(m < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "amfun.elliptic_k", "need m < 1");
  }
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  for (int n = 0; n < 60 && std::abs(a - b) > 1e-16 * a; ++n) {
    const double an = a;
    a = 0.5 * (an + b);
    b = std::sqrt(an * b);
  }
  return 0.5 * kPi / a;
}

std::vector<AmEvaluation> hyper_am(const ChartModel&,
                                   const std::vector<DivisorState>& states) {
  std::vector<AmEvaluation> out;
  out.reserve(states.size());
  for (const auto& st : states) {
    AmEvaluation ev;
    ev.phis = st.phis;
    for (double p : st.phis) ev.phi_total += p;
    for (double u : st.u_partial) ev.u += u;
    ev.al = std::polar(1.0, ev.phi_total);
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace hyperam

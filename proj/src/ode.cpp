#include "hyperam/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperam/error.hpp"

namespace hyperam::ode {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

}  // namespace

double DenseStep::eval(std::size_t i, double s) const {
  const double th = (s - s0) / h;
  const double th1 = 1.0 - th;
  return r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
}

Vec DenseStep::eval(double s) const {
  Vec out(r1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval(i, s);
  return out;
}

Dopri5::Dopri5(Rhs f, double s0, Vec y0, Options opts)
    : f_(std::move(f)), opts_(opts), s_(s0), y_(std::move(y0)) {
  k1_.resize(y_.size());
  f_(s_, y_, k1_);
  h_ = initial_step();
}

void Dopri5::reset(double s, Vec y) {
  s_ = s;
  y_ = std::move(y);
  f_(s_, y_, k1_);
  if (!(h_ > 0.0)) h_ = initial_step();
}

double Dopri5::initial_step() const {
  const std::size_t n = y_.size();
  double d0 = 0.0;
  double d1n = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = opts_.atol + opts_.rtol * std::abs(y_[i]);
    d0 += (y_[i] / sc) * (y_[i] / sc);
    d1n += (k1_[i] / sc) * (k1_[i] / sc);
  }
  d0 = std::sqrt(d0 / n);
  d1n = std::sqrt(d1n / n);
  double h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  return std::min(h, opts_.h_max);
}

void Dopri5::stages(double h, Vec& y1, Vec& err, std::vector<Vec>& k) const {
  const std::size_t n = y_.size();
  k.assign(7, Vec(n));
  k[0] = k1_;
  Vec tmp(n);
  auto stage = [&](int idx, double c, auto&& combine) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y_[i] + h * combine(i);
    f_(s_ + c * h, tmp, k[idx]);
  };
  stage(1, c2, [&](std::size_t i) { return a21 * k[0][i]; });
  stage(2, c3, [&](std::size_t i) { return a31 * k[0][i] + a32 * k[1][i]; });
  stage(3, c4, [&](std::size_t i) {
    return a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i];
  });
  stage(4, c5, [&](std::size_t i) {
    return a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i];
  });
  stage(5, 1.0, [&](std::size_t i) {
    return a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
           a65 * k[4][i];
  });
  y1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    y1[i] = y_[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] +
                         a75 * k[4][i] + a76 * k[5][i]);
  }
  f_(s_ + h, y1, k[6]);
  err.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                  e6 * k[5][i] + e7 * k[6][i]);
  }
}

Vec Dopri5::trial(double h) const {
  Vec y1, err;
  std::vector<Vec> k;
  stages(h, y1, err, k);
  return y1;
}

const DenseStep& Dopri5::step() {
  const std::size_t n = y_.size();
  Vec y1, err;
  std::vector<Vec> k;
  while (true) {
    if (++steps_ > opts_.max_steps) {
      throw Error(ErrorCode::StepFailure, "divisor_flow.step",
                  "step budget exhausted");
    }
    double h = std::min(h_, opts_.h_max);
    stages(h, y1, err, k);
    double norm = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc =
          opts_.atol + opts_.rtol * std::max(std::abs(y_[i]), std::abs(y1[i]));
      norm += (err[i] / sc) * (err[i] / sc);
      finite = finite && std::isfinite(y1[i]);
    }
    norm = std::sqrt(norm / n);
    if (!finite) norm = 1e10;
    const double fac =
        std::clamp(0.9 * std::pow(std::max(norm, 1e-10), -0.2), 0.2, 5.0);
    if (norm <= 1.0) {
      dense_.s0 = s_;
      dense_.h = h;
      dense_.r1 = y_;
      dense_.r2.resize(n);
      dense_.r3.resize(n);
      dense_.r4.resize(n);
      dense_.r5.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = y1[i] - y_[i];
        const double bspl = h * k[0][i] - ydiff;
        dense_.r2[i] = ydiff;
        dense_.r3[i] = bspl;
        dense_.r4[i] = ydiff - h * k[6][i] - bspl;
        dense_.r5[i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] +
                            d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
      }
      s_ += h;
      y_ = std::move(y1);
      k1_ = std::move(k[6]);
      h_ = std::min(h * fac, opts_.h_max);
      return dense_;
    }
    h_ = h * std::min(fac, 0.9);
    if (h_ < opts_.h_min) {
      throw Error(ErrorCode::StepFailure, "divisor_flow.step",
                  "step size fell below " + std::to_string(opts_.h_min));
    }
  }
}

}  // namespace hyperam::ode

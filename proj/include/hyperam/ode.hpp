#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace hyperam::ode {

using Vec = std::vector<double>;
using Rhs = std::function<void(double s, const Vec& y, Vec& dy)>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_max = std::numeric_limits<double>::infinity();
  double h_min = 1e-13;
  long max_steps = 10'000'000;
};

/// Quartic continuous extension of one Dormand-Prince step.
struct DenseStep {
  double s0 = 0.0;
  double h = 0.0;
  Vec r1, r2, r3, r4, r5;

  double s1() const { return s0 + h; }
  double eval(std::size_t component, double s) const;
  Vec eval(double s) const;
};

/// Dormand-Prince 5(4) with step size control.  Integrates forward in s.
class Dopri5 {
 public:
  Dopri5(Rhs f, double s0, Vec y0, Options opts = {});

  /// Takes one accepted step; throws StepFailure when the step size
  /// collapses below h_min.
  const DenseStep& step();
  /// Single unchecked step of size h from the current point.
  Vec trial(double h) const;
  /// Restarts from (s, y), keeping the current step size guess.
  void reset(double s, Vec y);

  double s() const noexcept { return s_; }
  const Vec& y() const noexcept { return y_; }
  const DenseStep& last() const noexcept { return dense_; }
  void derivative(const Vec& y, Vec& dy) const { f_(s_, y, dy); }

 private:
  double initial_step() const;
  void stages(double h, Vec& y1, Vec& err, std::vector<Vec>& k) const;

  Rhs f_;
  Options opts_;
  double s_;
  Vec y_;
  Vec k1_;
  double h_ = 0.0;
  long steps_ = 0;
  DenseStep dense_;
};

}  // namespace hyperam::ode

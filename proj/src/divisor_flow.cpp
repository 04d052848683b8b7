#include "hyperam/divisor_flow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hyperam/error.hpp"
#include "hyperam/ode.hpp"

namespace hyperam {

namespace {

constexpr double kPi = std::numbers::pi;

void check_velocity(const ChartModel& model, const std::vector<double>& v) {
  const int g = model.genus();
  if (static_cast<int>(v.size()) != g) {
    throw Error(ErrorCode::InvalidArgument, "divisor_flow.flow_velocity",
                "velocity needs " + std::to_string(g) + " components");
  }
  bool nonzero = false;
  for (int k = 0; k < g; ++k) {
    if (k < g - 2 && v[k] != 0.0) {
      throw Error(ErrorCode::InvalidArgument, "divisor_flow.flow_velocity",
                  "only u_{g-1} and u_g velocities are realisable");
    }
    nonzero = nonzero || v[k] != 0.0;
  }
  if (!nonzero) {
    throw Error(ErrorCode::InvalidArgument, "divisor_flow.flow_velocity",
                "velocity must be nonzero");
  }
}

std::vector<double> rates_at(const FlowSpec& spec, const double* phis) {
  const ChartModel& m = spec.model;
  const int g = m.genus();
  const double target_g = spec.velocity[g - 1];
  std::vector<double> n(g, target_g / g);
  if (spec.pure()) return n;

  // Real rates cannot match a complex u_{g-1} velocity; the real part of
  // sum_i rate_i / x_i is matched and Im u_{g-1} drifts.
  const double target_gm1 = spec.velocity[g - 2];
  Eigen::RowVectorXd M(g);
  for (int i = 0; i < g; ++i) {
    M(i) = (1.0 / m.chart().x_of_phi(phis[i])).real();
  }
  Eigen::VectorXd np = Eigen::VectorXd::Constant(g, target_g / g);
  // Orthonormal basis of the rate vectors with zero sum.
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(g, g - 1);
  for (int k = 1; k < g; ++k) {
    const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    Z.col(k - 1).head(k).setConstant(1.0 / norm);
    Z(k, k - 1) = -k / norm;
  }
  const Eigen::RowVectorXd A = M * Z;
  const double a2 = A.squaredNorm();
  if (std::sqrt(a2) <= 1e-12 * std::max(M.norm(), 1e-300)) {
    throw Error(ErrorCode::DegenerateDivisor, "divisor_flow.flow_velocity",
                "u_{g-1} velocity cannot be resolved at this divisor");
  }
  // least-norm solution of A z = target - M np
  const Eigen::VectorXd z = A.transpose() * ((target_gm1 - M.dot(np)) / a2);
  const Eigen::VectorXd sol = np + Z * z;
  for (int i = 0; i < g; ++i) n[i] = sol(i);
  return n;
}

DivisorState unpack(const ode::Vec& y, int g) {
  DivisorState st;
  st.phis.assign(y.begin(), y.begin() + g);
  st.kin_velocity.assign(y.begin() + g, y.begin() + 2 * g);
  st.u_partial.assign(y.begin() + 2 * g, y.begin() + 3 * g);
  st.t = y[3 * g];
  st.sheets.resize(g);
  for (int i = 0; i < g; ++i) st.sheets[i] = st.kin_velocity[i] >= 0.0 ? 1 : -1;
  return st;
}

ode::Vec pack(const DivisorState& st) {
  ode::Vec y(st.phis);
  y.insert(y.end(), st.kin_velocity.begin(), st.kin_velocity.end());
  y.insert(y.end(), st.u_partial.begin(), st.u_partial.end());
  y.push_back(st.t);
  return y;
}

void validate(const ChartModel& m, const DivisorState& st) {
  const std::size_t g = m.genus();
  if (st.phis.size() != g || st.kin_velocity.size() != g ||
      st.u_partial.size() != g) {
    throw Error(ErrorCode::InvalidArgument, "divisor_flow.step",
                "state does not match the chart genus");
  }
}

// Regularised flow: d t = dir * prod_j |N_j| d sigma, each point advancing
// in its own kinematic time s_i with d u^{(i)} = |N_i| d s_i.
class FlowRun {
 public:
  FlowRun(const FlowSpec& spec, const DivisorState& init, double dir)
      : spec_(spec),
        g_(spec.model.genus()),
        dir_(dir),
        solver_([this](double, const ode::Vec& y, ode::Vec& dy) { rhs(y, dy); },
                0.0, pack(init), options(spec)) {}

  DivisorState advance_to(double target) {
    const std::size_t it = 3 * g_;
    while (dir_ * (solver_.y()[it] - target) < 0.0) {
      const double s0 = solver_.s();
      const ode::Vec y0 = solver_.y();
      const ode::DenseStep& ds = solver_.step();
      const double s1 = solver_.s();

      // Earliest event in the step: t reaching the target, or a point
      // crossing phi = k pi where |N| has a kink (g >= 2).
      double s_event = s1;
      int kink_point = -1;
      double kink_value = 0.0;
      bool hit = dir_ * (solver_.y()[it] - target) >= 0.0;
      if (hit) s_event = bisect(ds, it, target, s0, s1);
      if (g_ >= 2) {
        for (int i = 0; i < g_; ++i) {
          const double a = y0[i];
          const double b = solver_.y()[i];
          const double lo = std::min(a, b);
          const double hi = std::max(a, b);
          for (double m = std::ceil(lo / kPi); m * kPi <= hi; m += 1.0) {
            const double v = m * kPi;
            if (!(v > lo && v < hi)) continue;
            const double sc = bisect(ds, i, v, s0, s1, a < b ? 1.0 : -1.0);
            if (sc < s_event) {
              s_event = sc;
              kink_point = i;
              kink_value = v;
              hit = false;
            }
          }
        }
      }
      if (!hit && kink_point < 0) continue;

      solver_.reset(s0, y0);
      ode::Vec y = s_event > s0 ? solver_.trial(s_event - s0) : y0;
      ode::Vec dy(y.size());
      rhs(y, dy);
      const std::size_t fix = hit ? it : static_cast<std::size_t>(kink_point);
      const double want = hit ? target : kink_value;
      if (dy[fix] != 0.0) {
        const double ds_fix = (want - y[fix]) / dy[fix];
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += dy[i] * ds_fix;
      }
      y[fix] = want;
      solver_.reset(s_event, y);
    }
    return unpack(solver_.y(), g_);
  }

 private:
  // sigma in [s0, s1] where component i of the dense output reaches v,
  // given that it increases along the step when dir_ * sense > 0.
  double bisect(const ode::DenseStep& ds, std::size_t i, double v, double s0,
                double s1, double sense = 0.0) const {
    const double d = sense == 0.0 ? dir_ : sense;
    double lo = s0;
    double hi = s1;
    for (int k = 0; k < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++k) {
      const double mid = 0.5 * (lo + hi);
      if (d * (ds.eval(i, mid) - v) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  static ode::Options options(const FlowSpec& spec) {
    ode::Options o;
    o.rtol = spec.rtol;
    o.atol = spec.atol;
    o.h_max = spec.max_step;
    return o;
  }

  void rhs(const ode::Vec& y, ode::Vec& dy) const {
    const ChartModel& m = spec_.model;
    const std::vector<double> n = rates_at(spec_, y.data());
    std::vector<double> absn(g_);
    double q = 1.0;
    for (int i = 0; i < g_; ++i) {
      absn[i] = std::abs(m.N(y[i]));
      q *= absn[i];
    }
    dy.assign(y.size(), 0.0);
    for (int i = 0; i < g_; ++i) {
      double qi = 1.0;
      for (int j = 0; j < g_; ++j) {
        if (j != i) qi *= absn[j];
      }
      const double w = dir_ * n[i] * qi;
      dy[i] = w * y[g_ + i];
      dy[g_ + i] = w * 0.5 * m.F_prime(y[i]);
      dy[2 * g_ + i] = dir_ * n[i] * q;
    }
    dy[3 * g_] = dir_ * q;
  }

  const FlowSpec& spec_;
  int g_;
  double dir_;
  ode::Dopri5 solver_;
};

}  // namespace

FlowSpec FlowSpec::u_g(const ChartModel& model, double rate) {
  FlowSpec s{model, std::vector<double>(model.genus(), 0.0)};
  s.velocity.back() = rate;
  return s;
}

FlowSpec FlowSpec::t1(const ChartModel& model) {
  return u_g(model, 1.0 / model.R());
}

FlowSpec FlowSpec::t2(const ChartModel& model) {
  const int g = model.genus();
  if (g < 2) {
    throw Error(ErrorCode::InvalidArgument, "divisor_flow.t2",
                "the t_2 flow needs genus >= 2");
  }
  const PhiChart& ch = model.chart();
  const cplx mix = ch.curve().coeffs()[2 * g] + ch.e_a();
  if (std::abs(mix) < 1e-8 * ch.curve().scale()) {
    throw Error(ErrorCode::NearSingularTimeMix, "divisor_flow.t2",
                "lambda_{2g} + e_a vanishes");
  }
  FlowSpec s{model, std::vector<double>(g, 0.0)};
  s.velocity[g - 2] = 1.0 / model.R();
  return s;
}

bool FlowSpec::pure() const {
  const std::size_t g = velocity.size();
  return g == 1 || velocity[g - 2] == 0.0;
}

std::vector<double> point_rates(const FlowSpec& spec, const DivisorState& st) {
  check_velocity(spec.model, spec.velocity);
  validate(spec.model, st);
  return rates_at(spec, st.phis.data());
}

std::vector<double> flow_velocity(const FlowSpec& spec,
                                  const DivisorState& state) {
  const std::vector<double> n = point_rates(spec, state);
  std::vector<double> out(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double phi = state.phis[i];
    const double psi = state.kin_velocity[i];
    out[i] = n[i] == 0.0 ? 0.0 : n[i] * psi / std::abs(spec.model.N(phi));
  }
  return out;
}

DivisorState step(const FlowSpec& spec, const DivisorState& state, double dt) {
  check_velocity(spec.model, spec.velocity);
  validate(spec.model, state);
  if (dt == 0.0) return state;
  FlowRun run(spec, state, dt > 0.0 ? 1.0 : -1.0);
  return run.advance_to(state.t + dt);
}

std::vector<DivisorState> trajectory(const FlowSpec& spec,
                                     const DivisorState& init, double t0,
                                     double t1, std::size_t samples) {
  check_velocity(spec.model, spec.velocity);
  validate(spec.model, init);
  if (!std::isfinite(t0) || !std::isfinite(t1)) {
    throw Error(ErrorCode::InvalidArgument, "divisor_flow.trajectory",
                "time span must be finite");
  }
  if (samples == 0) return {};
  DivisorState start = init.t == t0 ? init : step(spec, init, t0 - init.t);
  start.t = t0;
  if (t0 == t1 || samples == 1) return {start};
  std::vector<DivisorState> out{start};
  FlowRun run(spec, start, t1 > t0 ? 1.0 : -1.0);
  for (std::size_t k = 1; k < samples; ++k) {
    const double t = k + 1 == samples
                         ? t1
                         : t0 + (t1 - t0) * static_cast<double>(k) / (samples - 1);
    out.push_back(run.advance_to(t));
  }
  return out;
}

DivisorState make_state(const ChartModel& model, std::vector<double> phis,
                        std::vector<int> sheets) {
  const std::size_t g = model.genus();
  if (phis.size() != g || sheets.size() != g) {
    throw Error(ErrorCode::InvalidArgument, "divisor_flow.make_state",
                "need g phis and g sheets");
  }
  DivisorState st;
  st.kin_velocity.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    if (!model.admissible(phis[i])) {
      throw Error(ErrorCode::OutsideAdmissibleRange, "divisor_flow.make_state",
                  "phi outside the admissible set");
    }
    st.kin_velocity[i] = (sheets[i] >= 0 ? 1.0 : -1.0) *
                         std::sqrt(std::max(model.F(phis[i]), 0.0));
  }
  st.phis = std::move(phis);
  st.sheets = std::move(sheets);
  st.u_partial.assign(g, 0.0);
  return st;
}

DivisorState canonical_initial_state(const AmSolver& solver) {
  const ChartModel& m = solver.model();
  const int g = m.genus();
  std::vector<double> phis(g);
  std::vector<int> sheets(g);
  std::vector<double> us(g);
  for (int i = 0; i < g; ++i) {
    us[i] = solver.cell_length() * (i + 0.5) / g;
    const AmSolver::Point p = solver.evaluate(us[i]);
    phis[i] = p.phi;
    sheets[i] = p.sheet;
  }
  DivisorState st = make_state(m, std::move(phis), std::move(sheets));
  st.u_partial = std::move(us);
  return st;
}

DivisorState canonical_initial_state(const ChartModel& model) {
  return canonical_initial_state(AmSolver(model));
}

double energy(const ChartModel& model, const DivisorState& state,
              std::size_t point) {
  const double phi = state.phis.at(point);
  const double psi = state.kin_velocity.at(point);
  const double c = std::cos(phi);
  return c * c * (psi * psi - model.F(phi));
}

double max_imag_u(const ChartModel& model,
                  const std::vector<DivisorState>& states) {
  const PhaseInterval& ph = model.phase();
  auto clamp = [&](double phi) {
    return ph.rotating ? phi : std::clamp(phi, ph.lo, ph.hi);
  };
  auto im = [&](double a, double b) {
    return complex_u_increment(model, clamp(a), clamp(b)).imag();
  };
  double worst = 0.0;
  if (states.empty()) return worst;
  for (std::size_t i = 0; i < states.front().phis.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < states.size(); ++k) {
      const double a = states[k].phis[i];
      const double b = states[k + 1].phis[i];
      const int sa = states[k].sheets[i];
      const int sb = states[k + 1].sheets[i];
      if (ph.rotating || sa == sb) {
        acc += sa * im(a, b);
      } else {
        const double tp = sa > 0 ? ph.hi : ph.lo;
        acc += sa * im(a, tp) + sb * im(tp, b);
      }
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

}  // namespace hyperam

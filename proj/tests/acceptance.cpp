// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hyperam/amfun.hpp"
#include "hyperam/contour.hpp"
#include "hyperam/divisor_flow.hpp"
#include "hyperam/error.hpp"
#include "hyperam/parallel.hpp"
#include "hyperam/reality.hpp"
#include "hyperam/soliton.hpp"

using namespace hyperam;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr unsigned kSeed = 20240611;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, double budget_s,
            const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const Error& e) {
    v = {false, std::string("error ") + e.what()};
  } catch (const std::exception& e) {
    v = {false, std::string("exception ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0 && secs > budget_s) {
    v.pass = false;
    v.detail += "; over time budget";
  }
  if (!v.pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", id,
              name.c_str(), v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Random admissible genus-one charts.  Positive offsets from the smallest
// point give I-1, negative offsets from the largest give I-2.
std::optional<ChartModel> random_genus1(std::mt19937_64& rng, bool positive) {
  std::uniform_real_distribution<double> ea_d(-2.0, -0.1);
  std::uniform_real_distribution<double> off_d(0.2, 4.0);
  const double ea = ea_d(rng);
  const double p = off_d(rng);
  const double q = p + off_d(rng);
  try {
    if (positive) {
      return ChartModel(
          phi_chart(Curve::from_branch_points({ea, ea + p, ea + q}), 0, {1, 2}));
    }
    return ChartModel(
        phi_chart(Curve::from_branch_points({ea - q, ea - p, ea}), 2, {0, 1}));
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Random genus-two synthesis; rho^2 |e_a| is the first offset of each pair.
std::optional<Synthesis> random_genus2(std::mt19937_64& rng, std::vector<bool> neg) {
  std::uniform_real_distribution<double> ea_d(-3.0, -0.5);
  std::uniform_real_distribution<double> rho_d(0.08, 2.8);
  const double ea = ea_d(rng);
  std::vector<double> ratios;
  for (std::size_t j = 0; j < neg.size(); ++j) {
    ratios.push_back(std::pow(rho_d(rng), 2) * std::abs(ea));
  }
  try {
    Synthesis s = synthesize_curve(static_cast<int>(neg.size()), ea, ratios, neg);
    if (!check_reality(s.curve, 0).passed) return std::nullopt;
    ChartModel probe(s.chart);
    return s;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Time for every divisor point to sweep one primitive u-period under t_1.
double t1_period(const AmSolver& s) {
  return s.period() * s.model().genus() * s.model().R();
}

FlowSpec tuned(FlowSpec f, double rtol, double atol) {
  f.rtol = rtol;
  f.atol = atol;
  return f;
}

// Reality metrics gathered from every trajectory the run produces.
struct RealityStats {
  std::mutex mu;
  double imag_u = 0.0;
  double tangent_dev = 0.0;
  std::size_t trajectories = 0;

  void add(const ChartModel& m, const std::vector<DivisorState>& traj) {
    const double iu = max_imag_u(m, traj);
    double tg = 0.0;
    for (const auto& st : traj) {
      tg = std::max(tg, std::abs(std::abs(tangent(m, st)) - 1.0));
    }
    std::lock_guard lock(mu);
    imag_u = std::max(imag_u, iu);
    tangent_dev = std::max(tangent_dev, tg);
    ++trajectories;
  }
};

RealityStats reality_stats;

double agm(double a, double b) {
  for (int k = 0; k < 60 && std::abs(a - b) > 1e-16 * a; ++k) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}

// Independent amplitude: classical RK4 on d phi / dv = sqrt(1 - m sin^2 phi)
// for m < 1, marched between successive arguments.
class AmplitudeMarch {
 public:
  explicit AmplitudeMarch(double m) : m_(m) {}

  double at(double v) {
    const double dist = v - v_;
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(dist) * 4000.0)));
    const double h = dist / n;
    for (int i = 0; i < n; ++i) {
      const double k1 = f(phi_);
      const double k2 = f(phi_ + 0.5 * h * k1);
      const double k3 = f(phi_ + 0.5 * h * k2);
      const double k4 = f(phi_ + h * k3);
      phi_ += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    v_ = v;
    return phi_;
  }

 private:
  double f(double phi) const {
    const double s = std::sin(phi);
    return std::sqrt(1.0 - m_ * s * s);
  }
  double m_;
  double v_ = 0.0;
  double phi_ = 0.0;
};

// ---------------------------------------------------------------------------

Verdict moduli_lines() {
  std::mt19937_64 rng(kSeed);
  double worst_i1 = 0.0;
  double worst_i2 = 0.0;
  int n1 = 0;
  int n2 = 0;
  while (n1 < 50 || n2 < 50) {
    const bool positive = n1 < 50;
    const auto m = random_genus1(rng, positive);
    if (!m) continue;
    const PeriodLattice lat = periods(m->chart());
    if (positive) {
      worst_i1 = std::max(worst_i1, std::abs(lat.reduced_re_tau() - 0.5));
      ++n1;
    } else {
      worst_i2 = std::max(worst_i2, std::abs(lat.reduced_re_tau()));
      ++n2;
    }
  }
  const bool ok = worst_i1 < 1e-8 && worst_i2 < 1e-8;
  return {ok, "50+50 curves, max |Re tau - 1/2| (I-1) = " + fmt("%.2e", worst_i1) +
                  ", max |Re tau| (I-2) = " + fmt("%.2e", worst_i2) +
                  ", tolerance 1e-8, budget 10 s"};
}

Verdict winding_table() {
  const std::map<CaseLabel, int> expected{
      {CaseLabel::I1, 1},   {CaseLabel::I2, 0},   {CaseLabel::II1, 2},
      {CaseLabel::II2, 0},  {CaseLabel::II3a, 2}, {CaseLabel::II3b, 0},
      {CaseLabel::II3c, 0}};
  constexpr int kPerCase = 10;
  std::mt19937_64 rng(kSeed + 1);
  std::map<CaseLabel, std::vector<ChartModel>> pool;
  auto want = [&](CaseLabel l) { return pool[l].size() < kPerCase; };
  for (int guard = 0; guard < 20000; ++guard) {
    bool need = false;
    for (const auto& [l, w] : expected) need = need || want(l);
    if (!need) break;
    const int kind = guard % 5;
    if (kind == 0) {
      if (auto m = random_genus1(rng, true); m && want(m->case_class().label)) {
        pool[m->case_class().label].push_back(*m);
      }
    } else if (kind == 1) {
      if (auto m = random_genus1(rng, false); m && want(m->case_class().label)) {
        pool[m->case_class().label].push_back(*m);
      }
    } else {
      std::vector<bool> neg = kind == 2   ? std::vector<bool>{false, false}
                              : kind == 3 ? std::vector<bool>{false, true}
                                          : std::vector<bool>{true, true};
      if (auto s = random_genus2(rng, neg)) {
        ChartModel m(s->chart);
        if (want(m.case_class().label)) pool[m.case_class().label].push_back(m);
      }
    }
  }
  std::vector<std::pair<CaseLabel, const ChartModel*>> jobs;
  std::string counts;
  bool enough = true;
  for (const auto& [l, w] : expected) {
    counts += std::string(counts.empty() ? "" : " ") + to_string(l) + ":" +
              std::to_string(pool[l].size());
    enough = enough && pool[l].size() >= kPerCase;
    for (const auto& m : pool[l]) jobs.emplace_back(l, &m);
  }
  std::vector<int> got(jobs.size(), -99);
  std::vector<std::string> errs(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const ChartModel& m = *jobs[i].second;
    try {
      const AmSolver s(m);
      const auto traj = trajectory(tuned(FlowSpec::t1(m), 1e-11, 1e-13),
                                   canonical_initial_state(s), 0.0, t1_period(s), 201);
      reality_stats.add(m, traj);
      got[i] = winding_number(traj, s);
    } catch (const Error& e) {
      errs[i] = e.what();
    }
  });
  int wrong = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (got[i] != expected.at(jobs[i].first)) {
      ++wrong;
      if (first_bad.empty()) {
        first_bad = std::string("; first mismatch ") + to_string(jobs[i].first) +
                    " got " + (errs[i].empty() ? std::to_string(got[i]) : errs[i]);
      }
    }
  }
  return {enough && wrong == 0,
          std::to_string(jobs.size() - wrong) + "/" + std::to_string(jobs.size()) +
              " windings match (" + counts + ")" + first_bad};
}

Verdict am_oracle() {
  std::mt19937_64 rng(kSeed + 2);
  double worst = 0.0;
  int curves = 0;
  for (bool positive : {true, false}) {
    int made = 0;
    std::vector<ChartModel> models;
    models.push_back(positive
                         ? ChartModel(phi_chart(Curve::from_branch_points({0.0, 1.0, 4.0}),
                                                0, {1, 2}))
                         : ChartModel(phi_chart(
                               Curve::from_branch_points({-4.0, -1.0, 0.0}), 2, {0, 1})));
    while (made < 4) {
      if (auto m = random_genus1(rng, positive)) {
        models.push_back(*m);
        ++made;
      }
    }
    for (const ChartModel& m : models) {
      const double A = m.a_coefs()[0];
      const double B = m.b_coefs()[0];
      const double P = AmSolver(m).period();
      if (positive) {
        // phi = am(sqrt(A) u | -B / A)
        AmplitudeMarch ref(-B / A);
        for (int i = 0; i < 1000; ++i) {
          const double u = 3.0 * P * i / 999.0;
          worst = std::max(worst, std::abs(am_point(m, 0, u) - ref.at(std::sqrt(A) * u)));
        }
      } else {
        // phi = pi/2 - am(v0 - sqrt(A + B) u | mu), mu = B / (A + B) > 1,
        // through sin am(v | mu) = sin am(sqrt(mu) v | 1 / mu) / sqrt(mu)
        const double mu = B / (A + B);
        const double kp = 0.5 * kPi / agm(1.0, std::sqrt(1.0 - 1.0 / mu));
        const double v0 = kp / std::sqrt(mu);
        AmplitudeMarch ref(1.0 / mu);
        for (int i = 0; i < 1000; ++i) {
          const double u = 3.0 * P * i / 999.0;
          const double v = v0 - std::sqrt(A + B) * u;
          const double am = std::asin(std::sin(ref.at(std::sqrt(mu) * v)) / std::sqrt(mu));
          worst = std::max(worst, std::abs(am_point(m, 0, u) - (0.5 * kPi - am)));
        }
      }
      ++curves;
    }
  }
  return {worst < 1e-8, std::to_string(curves) +
                            " curves x 1000 points over 3 periods, max error " +
                            fmt("%.2e", worst) + ", tolerance 1e-8"};
}

std::vector<ChartModel> reference_models() {
  auto ii3 = [](double r1, double r2) {
    return ChartModel(
        synthesize_curve(2, -2.0, {r1 * r1 * 2.0, r2 * r2 * 2.0}, {true, true}).chart);
  };
  return {
      ChartModel(phi_chart(Curve::from_branch_points({0.0, 1.0, 4.0}), 0, {1, 2})),
      ChartModel(phi_chart(Curve::from_branch_points({-4.0, -1.0, 0.0}), 2, {0, 1})),
      ChartModel(synthesize_curve(2, -2.0, {1.0, 0.5}).chart),
      ChartModel(synthesize_curve(2, -2.0, {1.0, 0.5}, {false, true}).chart),
      ii3(0.2, 0.3),
      ii3(0.2, 0.8),
      ii3(0.7, 0.9),
  };
}

Verdict reality_invariants() {
  const auto models = reference_models();
  std::vector<std::pair<const ChartModel*, int>> jobs;
  for (const auto& m : models) {
    for (int f = 0; f < 2; ++f) jobs.emplace_back(&m, f);
  }
  parallel_for(jobs.size(), [&](std::size_t i) {
    const ChartModel& m = *jobs[i].first;
    const FlowSpec f = jobs[i].second == 0 ? FlowSpec::t1(m) : FlowSpec::u_g(m, 1.0);
    const double T = 10.0;
    reality_stats.add(m, trajectory(tuned(f, 1e-12, 1e-14),
                                    canonical_initial_state(m), 0.0, T, 401));
  });
  const bool ok = reality_stats.imag_u < 1e-9 && reality_stats.tangent_dev < 1e-10;
  return {ok, std::to_string(reality_stats.trajectories) +
                  " trajectories, max |Im u_g| = " + fmt("%.2e", reality_stats.imag_u) +
                  ", max ||tangent| - 1| = " + fmt("%.2e", reality_stats.tangent_dev)};
}

StaticMkdvFit static_fit(const ChartModel& m, double cubic) {
  const AmSolver s(m);
  const double T = t1_period(s);
  const auto traj = trajectory(tuned(FlowSpec::t1(m), 1e-12, 1e-14),
                               canonical_initial_state(s), 0.0, T, 4001);
  return smkdv_residual(shape(m, traj), T, cubic);
}

Verdict static_mkdv() {
  std::mt19937_64 rng(kSeed + 3);
  std::vector<ChartModel> models;
  for (bool positive : {true, false}) {
    int made = 0;
    while (made < 5) {
      if (auto m = random_genus1(rng, positive)) {
        models.push_back(*m);
        ++made;
      }
    }
  }
  std::vector<double> published(models.size()), half(models.size());
  parallel_for(models.size(), [&](std::size_t i) {
    published[i] = static_fit(models[i], kStaticMkdvCubic).relative;
    half[i] = static_fit(models[i], 0.5).relative;
  });
  const double worst = *std::max_element(published.begin(), published.end());
  const double worst_half = *std::max_element(half.begin(), half.end());
  return {worst < 1e-5,
          "5 I-1 + 5 I-2 curves, cubic coefficient 1/3: max relative residual " +
              fmt("%.2e", worst) + " (tolerance 1e-5); diagnostic with 1/2: " +
              fmt("%.2e", worst_half)};
}

Verdict mkdv() {
  const auto all = reference_models();
  const std::vector<ChartModel> models(all.begin() + 2, all.end());
  std::string per_curve;
  std::string diag;
  bool ok = true;
  for (const ChartModel& m : models) {
    const std::string label = to_string(m.case_class().label);
    per_curve += std::string(per_curve.empty() ? "" : " ") + label + "=";
    try {
      const DivisorState init = canonical_initial_state(m);
      const MkdvGrid grid = mkdv_grid(m, init, 2.0, 200, 0.2, 20, MkdvFrame::FixedT2);
      const double r = mkdv_residual_grid(grid, kMkdvCubic).relative;
      ok = ok && r < 1e-3;
      per_curve += fmt("%.2e", r);
      // where the grid exists: 1/2 in the same frame, and the free fit at
      // fixed u_{g-1}
      const MkdvFit f =
          mkdv_fit(mkdv_grid(m, init, 2.0, 200, 0.2, 20, MkdvFrame::FixedUgm1));
      diag += std::string(diag.empty() ? "" : "; ") + label + ": 1/2 gives " +
              fmt("%.2e", mkdv_residual_grid(grid, 0.5).relative) + ", max |Im phi| " +
              fmt("%.2e", max_reality_defect(grid)) +
              ", fixed-u_{g-1} free fit kappa/beta = " +
              fmt("%.4f", (f.kappa / f.beta).real()) + " at relative residual " +
              fmt("%.1e", f.relative);
    } catch (const Error& e) {
      ok = false;
      per_curve += std::string("n/a (") + to_string(e.code()) + ")";
    }
  }
  return {ok, "200x20 grids, t1 span 2, t2 span 0.2, cubic coefficient 1/4: " +
                  per_curve + " (tolerance 1e-3); diagnostics: " + diag};
}

Verdict elliptic_reduction() {
  std::mt19937_64 rng(kSeed + 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    const auto s = random_genus2(rng, {coin(rng), coin(rng)});
    if (!s) continue;
    const ChartModel m(s->chart);
    const PhaseInterval& ph = m.phase();
    const double lo = ph.rotating ? 0.0 : std::max(ph.lo, 0.0);
    const double hi = ph.rotating ? 0.5 * kPi : std::min(ph.hi, 0.5 * kPi);
    if (!(hi > lo)) continue;
    double a = lo + (hi - lo) * unit(rng);
    double b = lo + (hi - lo) * unit(rng);
    if (a > b) std::swap(a, b);
    if (done % 4 == 0) a = lo;
    if (done % 4 == 1) b = hi;
    const double direct = integrate_phi({&m, 0}, a, b);
    const double reduced = u_via_w_squared(m, a, b);
    worst = std::max(worst, std::abs(direct - reduced) / std::max(1.0, std::abs(direct)));
    ++done;
  }
  return {worst < 1e-10, "100 random genus-2 (chart, interval) pairs, max difference " +
                             fmt("%.2e", worst) + ", tolerance 1e-10"};
}

Verdict energy_conservation() {
  const auto models = reference_models();
  std::vector<std::pair<const ChartModel*, int>> jobs;
  for (const auto& m : models) {
    for (int f = 0; f < 2; ++f) jobs.emplace_back(&m, f);
  }
  std::vector<double> drift(jobs.size(), 0.0);
  parallel_for(jobs.size(), [&](std::size_t i) {
    const ChartModel& m = *jobs[i].first;
    const FlowSpec f = jobs[i].second == 0 ? FlowSpec::t1(m) : FlowSpec::u_g(m, 1.0);
    const double T = 20.0;
    const auto traj = trajectory(tuned(f, 1e-14, 1e-16), canonical_initial_state(m),
                                 0.0, T, 801);
    for (const auto& st : traj) {
      for (std::size_t p = 0; p < st.phis.size(); ++p) {
        drift[i] = std::max(drift[i], std::abs(energy(m, st, p)));
      }
    }
  });
  const double worst = *std::max_element(drift.begin(), drift.end());
  if (std::getenv("HYPERAM_VERBOSE")) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      std::printf("  %s flow %d: %.3e\n", to_string(jobs[i].first->case_class().label),
                  jobs[i].second, drift[i]);
    }
  }
  return {worst < 1e-9, std::to_string(jobs.size()) +
                            " flows (t1, u_g) on genus 1 and 2, max |E| = " +
                            fmt("%.2e", worst) + ", tolerance 1e-9"};
}

Verdict pairing_checker() {
  std::mt19937_64 rng(kSeed + 5);
  std::uniform_real_distribution<double> ea_d(-3.0, -0.5);
  std::uniform_real_distribution<double> r_d(0.05, 4.0);
  std::bernoulli_distribution coin(0.5);
  int accepted = 0;
  int rejected = 0;
  int cases = 0;
  while (cases < 100) {
    const int g = 2 + cases % 3;
    const double ea = ea_d(rng);
    std::vector<double> ratios;
    std::vector<bool> neg;
    for (int j = 0; j < g; ++j) {
      ratios.push_back(r_d(rng));
      neg.push_back(coin(rng));
    }
    std::optional<Synthesis> s;
    try {
      s = synthesize_curve(g, ea, ratios, neg);
    } catch (const Error&) {
      continue;
    }
    ++cases;
    if (check_reality(s->curve, 0).passed) ++accepted;
    std::vector<cplx> pts = s->curve.branch_points();
    const std::size_t b =
        std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng);
    pts[b] += (coin(rng) ? 1.0 : -1.0) * 1e-3 * s->curve.scale();
    try {
      const RealityReport r = check_reality(Curve::from_branch_points(pts), 0);
      if (!r.passed && !r.violations.empty()) ++rejected;
    } catch (const Error&) {
      ++rejected;
    }
  }
  return {accepted == 100 && rejected == 100,
          std::to_string(accepted) + "/100 synthesized curves accepted, " +
              std::to_string(rejected) + "/100 perturbed curves rejected"};
}

}  // namespace

int main() {
  report(1, "moduli lines", 10.0, moduli_lines);
  report(2, "winding table", 60.0, winding_table);
  report(3, "genus-1 am oracle", 0.0, am_oracle);
  report(4, "reality invariants", 0.0, reality_invariants);
  report(5, "static MKdV", 30.0, static_mkdv);
  report(6, "MKdV", 300.0, mkdv);
  report(7, "genus-2 elliptic reduction", 0.0, elliptic_reduction);
  report(8, "energy conservation", 0.0, energy_conservation);
  report(9, "pairing checker", 0.0, pairing_checker);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

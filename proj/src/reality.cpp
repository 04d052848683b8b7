#include "hyperam/reality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "hyperam/error.hpp"

namespace hyperam {

const char* to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::I1: return "I-1";
    case CaseLabel::I2: return "I-2";
    case CaseLabel::II1: return "II-1";
    case CaseLabel::II2: return "II-2";
    case CaseLabel::II3a: return "II-3a";
    case CaseLabel::II3b: return "II-3b";
    case CaseLabel::II3c: return "II-3c";
    case CaseLabel::GGeneral: return "G-general";
  }
  return "?";
}

std::vector<std::size_t> RealityReport::sigma() const {
  std::vector<std::size_t> out;
  for (const auto& [c, d] : pairs) {
    out.push_back(c);
    out.push_back(d);
  }
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Calls visit(matching) for every perfect matching of `items`.
bool for_each_matching(
    std::vector<std::size_t>& items,
    std::vector<std::pair<std::size_t, std::size_t>>& acc,
    const std::function<bool(
        const std::vector<std::pair<std::size_t, std::size_t>>&)>& visit) {
  if (items.empty()) return visit(acc);
  const std::size_t first = items.front();
  for (std::size_t k = 1; k < items.size(); ++k) {
    const std::size_t partner = items[k];
    std::vector<std::size_t> rest;
    for (std::size_t m = 1; m < items.size(); ++m) {
      if (m != k) rest.push_back(items[m]);
    }
    acc.emplace_back(first, partner);
    if (for_each_matching(rest, acc, visit)) return true;
    acc.pop_back();
  }
  return false;
}

}  // namespace

RealityReport check_reality(const Curve& curve, std::size_t a) {
  const auto& e = curve.branch_points();
  if (a >= e.size()) {
    throw Error(ErrorCode::InvalidArgument, "reality.check_reality",
                "distinguished index out of range");
  }
  for (std::size_t b = 0; b < e.size(); ++b) {
    if (std::abs(e[b].imag()) > kRealityTolerance * curve.scale()) {
      throw Error(ErrorCode::NonRealBranchPoint, "reality.check_reality",
                  "branch point " + std::to_string(b + 1) +
                      " has imaginary part " + fmt(e[b].imag()));
    }
  }

  RealityReport report;
  const int g = curve.genus();
  const double ea = e[a].real();
  report.e_a = ea;
  std::vector<std::size_t> others;
  for (std::size_t b = 0; b < e.size(); ++b) {
    if (b != a) others.push_back(b);
  }
  auto normalized = [&](std::size_t c, std::size_t d) {
    return e[c].real() <= e[d].real() ? std::make_pair(c, d)
                                      : std::make_pair(d, c);
  };

  if (g == 1) {
    report.notes.push_back(
        "genus 1: only the sign condition on e_{b,a}, e_{c,a} is applied; "
        "the general-genus pair-product condition is not "
        "required");
    const double p = e[others[0]].real() - ea;
    const double q = e[others[1]].real() - ea;
    report.pairs.push_back(normalized(others[0], others[1]));
    report.R = std::sqrt(std::abs(p * q));
    if ((p > 0.0 && q > 0.0) || (p <= 0.0 && q <= 0.0)) {
      report.passed = true;
    } else {
      report.violations.push_back(
          "e_{b,a} and e_{c,a} have opposite signs (excluded case I-0)");
    }
    return report;
  }

  if (g > 6) {
    throw Error(ErrorCode::UnsupportedGenus, "reality.check_reality",
                "pairing search supports genus <= 6");
  }
  report.R = std::pow(std::abs(ea), g);
  if (!(ea < 0.0)) {
    report.violations.push_back("e_a must be negative, got " + fmt(ea));
    if (ea == 0.0) {
      report.notes.push_back("e_a = 0 collapses every pair constant to 0");
    }
    return report;
  }

  const double target = ea * ea;
  std::vector<std::pair<std::size_t, std::size_t>> acc;
  std::vector<std::pair<std::size_t, std::size_t>> found;
  std::vector<std::size_t> items = others;
  const bool ok = for_each_matching(
      items, acc, [&](const std::vector<std::pair<std::size_t, std::size_t>>& m) {
        for (const auto& [c, d] : m) {
          const double prod = (e[c].real() - ea) * (e[d].real() - ea);
          if (std::abs(prod - target) > kRealityTolerance * target) {
            return false;
          }
        }
        found = m;
        return true;
      });
  if (!ok) {
    report.violations.push_back("no pairing achieves products e_a^2 = " +
                                fmt(target));
    return report;
  }
  for (auto& pr : found) pr = normalized(pr.first, pr.second);
  std::sort(found.begin(), found.end(), [&](const auto& x, const auto& y) {
    return e[x.first].real() < e[y.first].real();
  });
  report.pairs = found;
  report.passed = true;
  return report;
}

namespace {

struct PairInfo {
  bool positive;
  double a_coef;
  double b_coef;
  double k_sq;
};

std::vector<PairInfo> pair_infos(const PhiChart& chart) {
  const double tol = kRealityTolerance * chart.curve().scale();
  std::vector<PairInfo> out;
  for (std::size_t j = 0; j < chart.pairs().size(); ++j) {
    const ChartPair& pr = chart.pair(j);
    if (std::abs(pr.p.imag()) > tol || std::abs(pr.q.imag()) > tol) {
      throw Error(ErrorCode::UnclassifiableSigns, "reality.classify_case",
                  "pair " + std::to_string(j + 1) + " is not real");
    }
    const double p = pr.p.real();
    const double q = pr.q.real();
    PairInfo info{};
    if (p > 0.0 && q > 0.0) {
      info.positive = true;
    } else if (p < 0.0 && q < 0.0) {
      info.positive = false;
    } else {
      throw Error(ErrorCode::UnclassifiableSigns, "reality.classify_case",
                  "pair " + std::to_string(j + 1) +
                      " mixes signs of e_{b,a} (excluded case I-0)");
    }
    info.a_coef = pr.a_coef.real();
    info.b_coef = pr.b_coef.real();
    info.k_sq = -info.b_coef / info.a_coef;
    out.push_back(info);
  }
  return out;
}

// Sub-intervals of w^2 in [0, 1] where prod_j (A_j + B_j w^2) > 0.
std::vector<WInterval> positive_w2_intervals(const std::vector<PairInfo>& ps) {
  std::vector<double> cuts{0.0, 1.0};
  for (const auto& p : ps) {
    if (!p.positive) {
      const double s = 1.0 / p.k_sq;
      if (s > 0.0 && s < 1.0) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<WInterval> out;
  for (std::size_t m = 0; m + 1 < cuts.size(); ++m) {
    const double mid = 0.5 * (cuts[m] + cuts[m + 1]);
    if (cuts[m + 1] - cuts[m] <= 0.0) continue;
    int negatives = 0;
    for (const auto& p : ps) {
      if (p.a_coef + p.b_coef * mid < 0.0) ++negatives;
    }
    if (negatives % 2 != 0) continue;
    if (!out.empty() && out.back().hi == cuts[m]) {
      out.back().hi = cuts[m + 1];
    } else {
      out.push_back({cuts[m], cuts[m + 1]});
    }
  }
  return out;
}

std::vector<WInterval> to_w_ranges(const std::vector<WInterval>& w2) {
  std::vector<WInterval> out;
  for (const auto& iv : w2) {
    const double hi = std::sqrt(iv.hi);
    if (iv.lo == 0.0) {
      out.push_back({-hi, hi});
    } else {
      const double lo = std::sqrt(iv.lo);
      out.push_back({lo, hi});
      out.push_back({-hi, -lo});
    }
  }
  return out;
}

int factor_for(const std::vector<PairInfo>& ps, double w) {
  int best = -1;
  double best_gap = 1e-6;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    if (ps[j].positive) continue;
    const double gap = std::abs(w * w - 1.0 / ps[j].k_sq);
    if (gap < best_gap) {
      best_gap = gap;
      best = static_cast<int>(j);
    }
  }
  return best;
}

PhaseInterval phase_for(const std::vector<PairInfo>& ps,
                        const std::vector<WInterval>& ranges, bool rotating) {
  PhaseInterval ph;
  if (rotating) {
    ph.lo = 0.0;
    ph.hi = std::numbers::pi;
    ph.rotating = true;
    return ph;
  }
  // Primary range: the one reaching furthest toward w = 1.
  const WInterval* best = &ranges.front();
  for (const auto& r : ranges) {
    if (r.hi > best->hi) best = &r;
  }
  ph.rotating = false;
  if (best->hi >= 1.0) {
    ph.lo = std::asin(best->lo);
    ph.hi = std::numbers::pi - ph.lo;
    ph.lo_factor = ph.hi_factor = factor_for(ps, best->lo);
  } else {
    ph.lo = std::asin(best->lo);
    ph.hi = std::asin(best->hi);
    ph.lo_factor = factor_for(ps, best->lo);
    ph.hi_factor = factor_for(ps, best->hi);
  }
  return ph;
}

void empty_range(const std::string& why) {
  throw Error(ErrorCode::EmptyAdmissibleRange, "reality.classify_case", why);
}

}  // namespace

CaseClass classify_case(const PhiChart& chart) {
  const auto ps = pair_infos(chart);
  const int g = chart.genus();
  CaseClass cls;
  cls.genus = g;
  for (const auto& p : ps) cls.k_squares.push_back(p.k_sq);

  const std::vector<WInterval> full{{-1.0, 1.0}};
  auto outer = [](double k) {
    return std::vector<WInterval>{{1.0 / k, 1.0}, {-1.0, -1.0 / k}};
  };

  if (g == 1) {
    if (ps[0].positive) {
      cls.label = CaseLabel::I1;
      cls.w_ranges = full;
    } else {
      cls.label = CaseLabel::I2;
      if (ps[0].k_sq <= 1.0) {
        empty_range("case I-2 needs k > 1, got k^2 = " + fmt(ps[0].k_sq));
      }
      cls.w_ranges = outer(std::sqrt(ps[0].k_sq));
    }
  } else if (g == 2) {
    const int positives = static_cast<int>(
        std::count_if(ps.begin(), ps.end(), [](auto& p) { return p.positive; }));
    if (positives == 2) {
      cls.label = CaseLabel::II1;
      cls.w_ranges = full;
    } else if (positives == 1) {
      cls.label = CaseLabel::II2;
      const double k2 = ps[0].positive ? ps[1].k_sq : ps[0].k_sq;
      if (k2 <= 1.0) {
        empty_range("case II-2 needs k_2 > 1, got k_2^2 = " + fmt(k2));
      }
      cls.w_ranges = outer(std::sqrt(k2));
    } else {
      const double k1 = std::sqrt(std::min(ps[0].k_sq, ps[1].k_sq));
      const double k2 = std::sqrt(std::max(ps[0].k_sq, ps[1].k_sq));
      if (k1 > 1.0) {
        cls.label = CaseLabel::II3c;
        cls.w_ranges = outer(k1);
      } else if (k2 > 1.0) {
        cls.label = CaseLabel::II3b;
        cls.w_ranges = {{-1.0 / k2, 1.0 / k2}};
      } else {
        cls.label = CaseLabel::II3a;
        cls.w_ranges = full;
      }
    }
  } else {
    cls.label = CaseLabel::GGeneral;
    cls.w_ranges = to_w_ranges(positive_w2_intervals(ps));
    if (cls.w_ranges.empty()) {
      empty_range("no w in [-1, 1] makes every chart factor product positive");
    }
  }
  cls.rotating = cls.w_ranges.size() == 1 && cls.w_ranges[0].lo <= -1.0 &&
                 cls.w_ranges[0].hi >= 1.0;
  cls.phase = phase_for(ps, cls.w_ranges, cls.rotating);
  return cls;
}

int predicted_winding(const CaseClass& cls) {
  switch (cls.label) {
    case CaseLabel::I1: return 1;
    case CaseLabel::I2: return 0;
    case CaseLabel::II1: return 2;
    case CaseLabel::II2: return 0;
    case CaseLabel::II3a: return 2;
    case CaseLabel::II3b: return 0;
    case CaseLabel::II3c: return 0;
    case CaseLabel::GGeneral: return cls.rotating ? cls.genus : 0;
  }
  return 0;
}

Synthesis synthesize_curve(int genus, double e_a,
                           const std::vector<double>& ratios,
                           const std::vector<bool>& negative) {
  const char* where = "reality.synthesize_curve";
  if (genus < 1) throw Error(ErrorCode::InvalidArgument, where, "genus < 1");
  if (!(e_a < 0.0)) {
    throw Error(ErrorCode::InvalidArgument, where, "e_a must be negative");
  }
  if (ratios.size() != static_cast<std::size_t>(genus)) {
    throw Error(ErrorCode::InvalidArgument, where,
                "need one ratio per pair (g ratios)");
  }
  if (!negative.empty() && negative.size() != ratios.size()) {
    throw Error(ErrorCode::InvalidArgument, where,
                "sign choices must match the number of ratios");
  }
  const double c = e_a * e_a;
  std::vector<cplx> points{e_a};
  for (std::size_t j = 0; j < ratios.size(); ++j) {
    const double r = ratios[j];
    if (!(r > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, where, "ratios must be positive");
    }
    const double sign = (!negative.empty() && negative[j]) ? -1.0 : 1.0;
    double lo = e_a + sign * r;
    double hi = e_a + sign * c / r;
    if (std::abs(lo - hi) <= 1e-12 * (std::abs(e_a) + 1.0)) {
      throw Error(ErrorCode::DegenerateSynthesis, where,
                  "ratio " + fmt(r) + " = |e_a| makes both pair members "
                  "coincide");
    }
    if (lo > hi) std::swap(lo, hi);
    points.emplace_back(lo);
    points.emplace_back(hi);
  }
  try {
    Curve curve = Curve::from_branch_points(points);
    std::vector<std::size_t> sigma;
    for (std::size_t b = 1; b < points.size(); ++b) sigma.push_back(b);
    PhiChart chart(curve, 0, sigma);
    return Synthesis{curve, chart};
  } catch (const Error& err) {
    if (err.code() == ErrorCode::DuplicateBranchPoint) {
      throw Error(ErrorCode::DegenerateSynthesis, where,
                  std::string("pairs collide: ") + err.what());
    }
    throw;
  }
}

}  // namespace hyperam

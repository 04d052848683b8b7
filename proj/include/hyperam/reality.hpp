#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hyperam/curve.hpp"

namespace hyperam {

enum class CaseLabel { I1, I2, II1, II2, II3a, II3b, II3c, GGeneral };

const char* to_string(CaseLabel label);

struct WInterval {
  double lo;
  double hi;
};

/// The phi-interval a divisor point moves in.  Rotating points use [0, pi]
/// as their fundamental cell; librating points oscillate between turning
/// points lo and hi, each of which is a zero of one chart pair factor
/// (lo_factor / hi_factor index that pair, -1 if none).
struct PhaseInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool rotating = true;
  int lo_factor = -1;
  int hi_factor = -1;

  double reference() const noexcept { return rotating ? 0.0 : lo; }
};

struct CaseClass {
  int genus = 0;
  CaseLabel label = CaseLabel::I1;
  std::vector<double> k_squares;       ///< per chart pair, chart order
  std::vector<WInterval> w_ranges;     ///< admissible w = sin(phi)
  bool rotating = false;
  PhaseInterval phase;
};

struct RealityReport {
  bool passed = false;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< zero-based
  double e_a = 0.0;
  double R = 0.0;
  std::vector<std::string> violations;
  std::vector<std::string> notes;

  /// Ordering for PhiChart built from `pairs`.
  std::vector<std::size_t> sigma() const;
};

/// Relative tolerance for "real" and for pair-product equality.
inline constexpr double kRealityTolerance = 1e-10;

RealityReport check_reality(const Curve& curve, std::size_t a);

CaseClass classify_case(const PhiChart& chart);

int predicted_winding(const CaseClass& cls);

struct Synthesis {
  Curve curve;
  PhiChart chart;
};

/// Builds a curve whose pairs satisfy (e_c - e_a)(e_d - e_a) = e_a^2:
/// e_c = e_a + r, e_d = e_a + e_a^2 / r, or both offsets negated where
/// `negative[j]` is set.  The distinguished point is index 0.
Synthesis synthesize_curve(int genus, double e_a,
                           const std::vector<double>& ratios,
                           const std::vector<bool>& negative = {});

}  // namespace hyperam

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hyperam/curve.hpp"

namespace hyperam::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitReality = 2;
inline constexpr int kExitUsage = 64;

struct JobConfig {
  std::string command;
  std::vector<cplx> curve;          ///< branch points
  std::size_t a = 0;                ///< zero-based
  std::optional<std::vector<std::size_t>> sigma;  ///< zero-based
  int genus = 0;                    ///< synth
  double e_a = 0.0;                 ///< synth
  std::vector<double> ratios;       ///< synth
  std::vector<bool> negative;       ///< synth
  double t1_from = 0.0;
  double t1_to = 20.0;
  double t2_from = 0.0;
  double t2_to = 0.2;
  std::size_t samples = 2000;
  std::size_t t2_samples = 20;
  std::optional<double> u_from;
  std::optional<double> u_to;
  std::optional<double> kappa;
  double rtol = 1e-12;
  double atol = 1e-14;
  std::string out;
};

/// Parses argv (including the program name) and runs the job.  Results go
/// to `out` (or the --out file), diagnostics to `err` as
/// "ERROR <module>.<op>: <message>".  Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already parsed job.
int run(const JobConfig& config, std::ostream& out, std::ostream& err);

/// Curve file: {"genus": g, "branch_points": [[re, im], ...], "a": 1-based,
/// "sigma": [1-based, ...]}.  Bare numbers are accepted as real points.
JobConfig read_curve_file(const std::string& path, JobConfig base = {});

}  // namespace hyperam::cli

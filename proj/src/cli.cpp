#include "hyperam/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hyperam/amfun.hpp"
#include "hyperam/contour.hpp"
#include "hyperam/divisor_flow.hpp"
#include "hyperam/error.hpp"
#include "hyperam/reality.hpp"
#include "hyperam/soliton.hpp"

namespace hyperam::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RealityFailure {
  RealityReport report;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + " entry '" +
                       item + "'");
    }
  }
  return out;
}

std::pair<double, double> parse_span(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError(std::string(what) + " must look like FROM:TO");
  }
  const auto a = parse_list(text.substr(0, colon), what);
  const auto b = parse_list(text.substr(colon + 1), what);
  if (a.size() != 1 || b.size() != 1) {
    throw UsageError(std::string(what) + " must look like FROM:TO");
  }
  return {a[0], b[0]};
}

std::vector<std::size_t> to_indices(const std::vector<double>& v,
                                    const char* what) {
  std::vector<std::size_t> out;
  for (double x : v) {
    if (x < 1.0 || x != std::floor(x)) {
      throw UsageError(std::string(what) + " entries are 1-based integers");
    }
    out.push_back(static_cast<std::size_t>(x) - 1);
  }
  return out;
}

cplx point_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw UsageError("branch points must be numbers or [re, im] pairs");
}

std::pair<double, double> span_from_json(const json& j, const char* what) {
  if (j.is_string()) return parse_span(j.get<std::string>(), what);
  if (j.is_array() && j.size() == 2) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw UsageError(std::string(what) + " must be [from, to] or \"from:to\"");
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void apply_curve_json(const json& j, JobConfig& cfg) {
  if (!j.contains("branch_points")) {
    throw UsageError("curve file lacks branch_points");
  }
  cfg.curve.clear();
  for (const auto& p : j.at("branch_points")) {
    cfg.curve.push_back(point_from_json(p));
  }
  if (j.contains("a")) {
    cfg.a = to_indices({j.at("a").get<double>()}, "a").front();
  }
  if (j.contains("sigma")) {
    cfg.sigma = to_indices(j.at("sigma").get<std::vector<double>>(), "sigma");
  }
  if (j.contains("genus") &&
      2 * j.at("genus").get<int>() + 1 != static_cast<int>(cfg.curve.size())) {
    throw UsageError("curve file genus does not match its branch points");
  }
}

void apply_config_json(const json& j, JobConfig& cfg, bool& has_curve) {
  try {
    if (j.contains("command")) cfg.command = j.at("command").get<std::string>();
    if (j.contains("curve_file")) {
      cfg = read_curve_file(j.at("curve_file").get<std::string>(), cfg);
      has_curve = true;
    }
    if (j.contains("curve")) {
      if (has_curve) throw UsageError("config gives two curve sources");
      cfg.curve.clear();
      for (const auto& p : j.at("curve")) cfg.curve.push_back(point_from_json(p));
      has_curve = true;
    }
    if (j.contains("branch_points")) {
      if (has_curve) throw UsageError("config gives two curve sources");
      apply_curve_json(j, cfg);
      has_curve = true;
    }
    if (j.contains("a") && !j.contains("branch_points")) {
      cfg.a = to_indices({j.at("a").get<double>()}, "a").front();
    }
    if (j.contains("sigma") && !j.contains("branch_points")) {
      cfg.sigma = to_indices(j.at("sigma").get<std::vector<double>>(), "sigma");
    }
    if (j.contains("g")) cfg.genus = j.at("g").get<int>();
    if (j.contains("ea")) cfg.e_a = j.at("ea").get<double>();
    if (j.contains("ratios")) cfg.ratios = j.at("ratios").get<std::vector<double>>();
    if (j.contains("negative")) {
      cfg.negative.clear();
      for (const auto& b : j.at("negative")) cfg.negative.push_back(b.get<bool>());
    }
    if (j.contains("t1_span")) {
      std::tie(cfg.t1_from, cfg.t1_to) = span_from_json(j.at("t1_span"), "t1_span");
    }
    if (j.contains("t2_span")) {
      std::tie(cfg.t2_from, cfg.t2_to) = span_from_json(j.at("t2_span"), "t2_span");
    }
    if (j.contains("u_span")) {
      const auto [a, b] = span_from_json(j.at("u_span"), "u_span");
      cfg.u_from = a;
      cfg.u_to = b;
    }
    if (j.contains("samples")) cfg.samples = j.at("samples").get<std::size_t>();
    if (j.contains("t2_samples")) cfg.t2_samples = j.at("t2_samples").get<std::size_t>();
    if (j.contains("kappa")) cfg.kappa = j.at("kappa").get<double>();
    if (j.contains("rtol")) cfg.rtol = j.at("rtol").get<double>();
    if (j.contains("atol")) cfg.atol = j.at("atol").get<double>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

// ---------------------------------------------------------------- commands

struct Setup {
  Curve curve;
  PhiChart chart;
  ChartModel model;
};

Setup setup(const JobConfig& cfg) {
  if (cfg.curve.empty()) throw UsageError("no curve given");
  Curve curve = Curve::from_branch_points(cfg.curve);
  if (cfg.a >= cfg.curve.size()) throw UsageError("--a out of range");
  RealityReport report = check_reality(curve, cfg.a);
  if (!report.passed) throw RealityFailure{report};
  PhiChart chart(curve, cfg.a, cfg.sigma ? *cfg.sigma : report.sigma());
  ChartModel model(chart);
  return {curve, chart, model};
}

void write_report(std::ostream& os, const RealityReport& r) {
  os << "{\"passed\":" << (r.passed ? "true" : "false") << ",\"violations\":[";
  for (std::size_t i = 0; i < r.violations.size(); ++i) {
    os << (i ? "," : "") << quoted(r.violations[i]);
  }
  os << "],\"notes\":[";
  for (std::size_t i = 0; i < r.notes.size(); ++i) {
    os << (i ? "," : "") << quoted(r.notes[i]);
  }
  os << "]}\n";
}

void cmd_classify(const JobConfig& cfg, std::ostream& os) {
  const Setup s = setup(cfg);
  const CaseClass& cls = s.model.case_class();
  os << "{\"case\":" << quoted(to_string(cls.label)) << ",\"k_sq\":";
  if (cls.k_squares.size() == 1) {
    os << num(cls.k_squares[0]);
  } else {
    os << "[";
    for (std::size_t i = 0; i < cls.k_squares.size(); ++i) {
      os << (i ? "," : "") << num(cls.k_squares[i]);
    }
    os << "]";
  }
  os << ",\"winding_pred\":" << predicted_winding(cls) << "}\n";
}

void cmd_synth(const JobConfig& cfg, std::ostream& os) {
  if (cfg.genus < 1) throw UsageError("synth needs --g >= 1");
  const Synthesis syn =
      synthesize_curve(cfg.genus, cfg.e_a, cfg.ratios, cfg.negative);
  os << "{\"genus\":" << cfg.genus << ",\"branch_points\":[";
  const auto& e = syn.curve.branch_points();
  for (std::size_t i = 0; i < e.size(); ++i) {
    os << (i ? "," : "") << "[" << num(e[i].real()) << "," << num(e[i].imag())
       << "]";
  }
  os << "],\"a\":" << syn.chart.a() + 1 << ",\"sigma\":[";
  const auto& sg = syn.chart.sigma();
  for (std::size_t i = 0; i < sg.size(); ++i) os << (i ? "," : "") << sg[i] + 1;
  os << "]}\n";
}

void cmd_periods(const JobConfig& cfg, std::ostream& os) {
  const Setup s = setup(cfg);
  const PeriodLattice lat = periods(s.chart);
  os << "omega,re_omega_prime,im_omega_prime,re_tau,im_tau,case\n"
     << num(lat.omega) << "," << num(lat.omega_prime.real()) << ","
     << num(lat.omega_prime.imag()) << "," << num(lat.reduced_re_tau()) << ","
     << num(lat.tau.imag()) << "," << to_string(lat.label) << "\n";
}

void cmd_am(const JobConfig& cfg, std::ostream& os) {
  const Setup s = setup(cfg);
  const AmSolver solver(s.model);
  const double from = cfg.u_from.value_or(0.0);
  const double to = cfg.u_to.value_or(solver.period());
  if (cfg.samples < 2) throw UsageError("--samples must be >= 2");
  os << "u,phi,sheet\n";
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    const double u = from + (to - from) * static_cast<double>(k) / (cfg.samples - 1);
    const AmSolver::Point p = solver.evaluate(u);
    os << num(u) << "," << num(p.phi) << "," << p.sheet << "\n";
  }
}

std::vector<DivisorState> t1_trajectory(const Setup& s, const JobConfig& cfg,
                                        double from, double to,
                                        std::size_t samples) {
  FlowSpec spec = FlowSpec::t1(s.model);
  spec.rtol = cfg.rtol;
  spec.atol = cfg.atol;
  return trajectory(spec, canonical_initial_state(s.model), from, to, samples);
}

void cmd_shape(const JobConfig& cfg, std::ostream& os) {
  const Setup s = setup(cfg);
  if (cfg.samples < 1) throw UsageError("--samples must be >= 1");
  const auto traj = t1_trajectory(s, cfg, cfg.t1_from, cfg.t1_to, cfg.samples);
  const auto sh = shape(s.model, traj);
  os << "t1,phi,re_z,im_z,abs_tangent\n";
  for (const auto& p : sh) {
    os << num(p.t1) << "," << num(p.turning) << "," << num(p.Z.real()) << ","
       << num(p.Z.imag()) << "," << num(std::abs(p.tangent)) << "\n";
  }
}

void cmd_winding(const JobConfig& cfg, std::ostream& os) {
  const Setup s = setup(cfg);
  const AmSolver solver(s.model);
  const double period_t1 = solver.period() * s.model.genus() * s.model.R();
  FlowSpec spec = FlowSpec::t1(s.model);
  spec.rtol = cfg.rtol;
  spec.atol = cfg.atol;
  const auto traj = trajectory(spec, canonical_initial_state(solver), 0.0,
                               period_t1, std::max<std::size_t>(cfg.samples, 2));
  const int w = winding_number(traj, solver);
  os << "{\"case\":" << quoted(to_string(s.model.case_class().label))
     << ",\"winding\":" << w
     << ",\"winding_pred\":" << predicted_winding(s.model.case_class())
     << ",\"period_t1\":" << num(period_t1) << "}\n";
}

void cmd_residual(const JobConfig& cfg, std::ostream& os) {
  const Setup s = setup(cfg);
  if (s.model.genus() == 1) {
    const AmSolver solver(s.model);
    const double period_t1 = solver.period() * s.model.R();
    const std::size_t n = std::max<std::size_t>(cfg.samples, 4001);
    const auto traj = t1_trajectory(s, cfg, 0.0, period_t1, n);
    const double kappa = cfg.kappa.value_or(kStaticMkdvCubic);
    const StaticMkdvFit fit =
        smkdv_residual(shape(s.model, traj), period_t1, kappa);
    os << "{\"equation\":\"static_mkdv\",\"kappa\":" << num(kappa)
       << ",\"a\":" << num(fit.a) << ",\"max_residual\":"
       << num(fit.max_residual) << ",\"max_third\":" << num(fit.max_third)
       << ",\"relative\":" << num(fit.relative) << ",\"indeterminate\":"
       << (fit.indeterminate ? "true" : "false") << "}\n";
    return;
  }
  const double kappa = cfg.kappa.value_or(kMkdvCubic);
  DivisorState init = canonical_initial_state(s.model);
  FlowSpec f1 = FlowSpec::t1(s.model);
  f1.rtol = cfg.rtol;
  f1.atol = cfg.atol;
  if (cfg.t1_from != 0.0) init = step(f1, init, cfg.t1_from);
  // the t_2 grid starts on the real slice
  if (cfg.t2_from != 0.0) throw UsageError("--t2-span must start at 0");
  init.t = 0.0;
  const MkdvGrid grid =
      mkdv_grid(s.model, init, cfg.t1_to - cfg.t1_from, cfg.samples,
                cfg.t2_to, cfg.t2_samples, MkdvFrame::FixedT2, cfg.rtol, cfg.atol);
  const MkdvResult r = mkdv_residual_grid(grid, kappa);
  os << "{\"equation\":\"mkdv\",\"kappa\":" << num(kappa)
     << ",\"max_residual\":" << num(r.max_residual)
     << ",\"max_third\":" << num(r.max_third) << ",\"relative\":"
     << num(r.relative) << ",\"reality_defect\":"
     << num(max_reality_defect(grid)) << "}\n";
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonRealBranchPoint:
    case ErrorCode::UnclassifiableSigns:
      return kExitReality;
    case ErrorCode::InvalidArgument:
    case ErrorCode::EvenCount:
    case ErrorCode::DuplicateBranchPoint:
    case ErrorCode::DegenerateSynthesis:
    case ErrorCode::UnsupportedGenus:
    case ErrorCode::WrongGenus:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

}  // namespace

JobConfig read_curve_file(const std::string& path, JobConfig base) {
  apply_curve_json(load_json(path), base);
  return base;
}

int run(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      err << "ERROR cli.run: cannot write " << cfg.out << "\n";
      return kExitUsage;
    }
    os = &file;
  }
  os->precision(17);
  try {
    if (cfg.command == "classify") {
      cmd_classify(cfg, *os);
    } else if (cfg.command == "synth") {
      cmd_synth(cfg, *os);
    } else if (cfg.command == "periods") {
      cmd_periods(cfg, *os);
    } else if (cfg.command == "am") {
      cmd_am(cfg, *os);
    } else if (cfg.command == "shape") {
      cmd_shape(cfg, *os);
    } else if (cfg.command == "winding") {
      cmd_winding(cfg, *os);
    } else if (cfg.command == "residual") {
      cmd_residual(cfg, *os);
    } else {
      throw UsageError("unknown command '" + cfg.command + "'");
    }
  } catch (const RealityFailure& f) {
    write_report(*os, f.report);
    for (const auto& v : f.report.violations) {
      err << "ERROR reality.check_reality: " << v << "\n";
    }
    return kExitReality;
  } catch (const UsageError& e) {
    err << "ERROR cli.run: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "ERROR " << e.where() << ": " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "ERROR cli.run: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperelliptic am-functions and loop-soliton shapes"};
  std::string config_path;
  app.add_option("--config", config_path, "JSON job file");

  std::string curve, curve_file, sigma, ratios, negative, t1_span, t2_span,
      u_span, out_path;
  std::size_t a = 1, samples = 0, t2_samples = 0;
  int genus = 0;
  double ea = 0.0, kappa = 0.0, rtol = 0.0, atol = 0.0;

  struct Flags {
    CLI::Option *curve, *curve_file, *a, *sigma, *g, *ea, *ratios, *negative,
        *t1, *t2, *u, *samples, *t2_samples, *kappa, *rtol, *atol, *out;
  };
  std::vector<std::pair<CLI::App*, Flags>> subs;
  for (const char* name :
       {"classify", "synth", "periods", "am", "shape", "winding", "residual"}) {
    CLI::App* sub = app.add_subcommand(name);
    Flags f{};
    f.curve = sub->add_option("--curve", curve, "comma-separated real branch points");
    f.curve_file = sub->add_option("--curve-file", curve_file, "JSON curve file");
    f.a = sub->add_option("--a", a, "distinguished branch point (1-based)");
    f.sigma = sub->add_option("--sigma", sigma, "pair ordering (1-based, comma-separated)");
    f.g = sub->add_option("--g", genus, "genus (synth)");
    f.ea = sub->add_option("--ea", ea, "distinguished branch point value (synth)");
    f.ratios = sub->add_option("--ratios", ratios, "pair offsets r_j (synth)");
    f.negative = sub->add_option("--negative", negative, "0/1 per pair: negate offsets (synth)");
    f.t1 = sub->add_option("--t1-span", t1_span, "FROM:TO");
    f.t2 = sub->add_option("--t2-span", t2_span, "FROM:TO (residual, genus >= 2)");
    f.u = sub->add_option("--u-span", u_span, "FROM:TO (am)");
    f.samples = sub->add_option("--samples", samples, "sample count");
    f.t2_samples = sub->add_option("--t2-samples", t2_samples, "t2 grid size");
    f.kappa = sub->add_option("--kappa", kappa, "cubic coefficient override (residual)");
    f.rtol = sub->add_option("--rtol", rtol, "flow relative tolerance");
    f.atol = sub->add_option("--atol", atol, "flow absolute tolerance");
    f.out = sub->add_option("--out", out_path, "output file (default stdout)");
    subs.emplace_back(sub, f);
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ERROR cli.parse: " << e.what() << "\n";
    return kExitUsage;
  }

  JobConfig cfg;
  try {
    bool has_curve = false;
    if (!config_path.empty()) apply_config_json(load_json(config_path), cfg, has_curve);
    for (const auto& [sub, f] : subs) {
      if (!sub->parsed()) continue;
      cfg.command = sub->get_name();
      if (f.curve->count() && f.curve_file->count()) {
        throw UsageError("give either --curve or --curve-file, not both");
      }
      if (f.curve->count() || f.curve_file->count()) {
        cfg.curve.clear();
        cfg.sigma.reset();
      }
      if (f.curve->count()) {
        for (double x : parse_list(curve, "--curve")) cfg.curve.emplace_back(x, 0.0);
      }
      if (f.curve_file->count()) cfg = read_curve_file(curve_file, cfg);
      if (f.a->count()) {
        if (a < 1) throw UsageError("--a is 1-based");
        cfg.a = a - 1;
      }
      if (f.sigma->count()) cfg.sigma = to_indices(parse_list(sigma, "--sigma"), "--sigma");
      if (f.g->count()) cfg.genus = genus;
      if (f.ea->count()) cfg.e_a = ea;
      if (f.ratios->count()) cfg.ratios = parse_list(ratios, "--ratios");
      if (f.negative->count()) {
        cfg.negative.clear();
        for (double v : parse_list(negative, "--negative")) cfg.negative.push_back(v != 0.0);
      }
      if (f.t1->count()) std::tie(cfg.t1_from, cfg.t1_to) = parse_span(t1_span, "--t1-span");
      if (f.t2->count()) std::tie(cfg.t2_from, cfg.t2_to) = parse_span(t2_span, "--t2-span");
      if (f.u->count()) {
        const auto [lo, hi] = parse_span(u_span, "--u-span");
        cfg.u_from = lo;
        cfg.u_to = hi;
      }
      if (f.samples->count()) cfg.samples = samples;
      if (f.t2_samples->count()) cfg.t2_samples = t2_samples;
      if (f.kappa->count()) cfg.kappa = kappa;
      if (f.rtol->count()) cfg.rtol = rtol;
      if (f.atol->count()) cfg.atol = atol;
      if (f.out->count()) cfg.out = out_path;
    }
    if (cfg.command.empty()) throw UsageError("no command given");
    if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0)) {
      throw UsageError("tolerances must be positive");
    }
  } catch (const UsageError& e) {
    err << "ERROR cli.parse: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "ERROR " << e.where() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace hyperam::cli

#include "hyperam/soliton.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hyperam/complex_flow.hpp"
#include "hyperam/error.hpp"
#include "hyperam/parallel.hpp"

namespace hyperam {

cplx tangent(const ChartModel& model, const DivisorState& state) {
  const PhiChart& ch = model.chart();
  cplx prod = 1.0;
  for (double phi : state.phis) prod *= ch.x_of_phi(phi) - ch.e_a();
  return prod / model.R();
}

std::vector<ShapeSample> shape(const ChartModel& model,
                               const std::vector<DivisorState>& traj) {
  const std::size_t n = traj.size();
  std::vector<ShapeSample> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    ShapeSample& s = out[k];
    s.t1 = traj[k].t;
    for (double phi : traj[k].phis) s.phi_total += phi;
    s.turning = 2.0 * s.phi_total;
    s.tangent = tangent(model, traj[k]);
  }
  if (n == 0) return out;
  out[0].Z = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = out[k + 1].t1 - out[k].t1;
    auto f = [&](std::size_t i) { return out[i].tangent; };
    cplx dz;
    if (n < 4) {
      dz = 0.5 * h * (f(k) + f(k + 1));
    } else if (k == 0) {
      dz = h / 24.0 * (9.0 * f(0) + 19.0 * f(1) - 5.0 * f(2) + f(3));
    } else if (k + 2 == n) {
      dz = h / 24.0 *
           (9.0 * f(n - 1) + 19.0 * f(n - 2) - 5.0 * f(n - 3) + f(n - 4));
    } else {
      dz = h / 24.0 * (-f(k - 1) + 13.0 * f(k) + 13.0 * f(k + 1) - f(k + 2));
    }
    out[k + 1].Z = out[k].Z + dz;
  }
  return out;
}

int winding_number(const std::vector<DivisorState>& traj,
                   const AmSolver& solver) {
  if (traj.size() < 2) {
    throw Error(ErrorCode::PeriodMismatch, "soliton.winding_number",
                "trajectory has no extent");
  }
  const double period = solver.period();
  const DivisorState& a = traj.front();
  const DivisorState& b = traj.back();
  double turns = 0.0;
  for (std::size_t i = 0; i < a.phis.size(); ++i) {
    const double du = std::abs(b.u_partial[i] - a.u_partial[i]);
    if (std::abs(du - period) > 1e-6 * period) {
      throw Error(ErrorCode::PeriodMismatch, "soliton.winding_number",
                  "point " + std::to_string(i) + " spans u = " +
                      std::to_string(du) + ", period is " +
                      std::to_string(period));
    }
    turns += (b.phis[i] - a.phis[i]) / std::numbers::pi;
  }
  const double w = std::round(turns);
  if (std::abs(turns - w) >= 0.05) {
    throw Error(ErrorCode::PeriodMismatch, "soliton.winding_number",
                "total turning " + std::to_string(turns) +
                    " is not near an integer");
  }
  return static_cast<int>(w);
}

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
         ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

double d1_central(const std::vector<double>& f, std::size_t k, double h) {
  return (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
}

double d3_central(const std::vector<double>& f, std::size_t k, double h) {
  return (f[k - 3] - 8.0 * f[k - 2] + 13.0 * f[k - 1] - 13.0 * f[k + 1] +
          8.0 * f[k + 2] - f[k + 3]) /
         (8.0 * h * h * h);
}

}  // namespace

std::size_t self_intersections(const std::vector<ShapeSample>& s) {
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    for (std::size_t j = i + 2; j + 1 < s.size(); ++j) {
      if (segments_cross(s[i].Z, s[i + 1].Z, s[j].Z, s[j + 1].Z)) ++count;
    }
  }
  return count;
}

StaticMkdvFit smkdv_residual(const std::vector<ShapeSample>& shape,
                             double period_t1, double cubic,
                             double min_per_period) {
  const std::size_t n = shape.size();
  if (n < 7) {
    throw Error(ErrorCode::GridTooCoarse, "soliton.smkdv_residual",
                "need at least 7 samples");
  }
  const double h = (shape.back().t1 - shape.front().t1) / (n - 1);
  if (!(h > 0.0) || period_t1 / h < min_per_period) {
    throw Error(ErrorCode::GridTooCoarse, "soliton.smkdv_residual",
                std::to_string(period_t1 / h) + " samples per period, need " +
                    std::to_string(min_per_period));
  }
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = shape[k].turning;
  std::vector<double> d1, d3;
  for (std::size_t k = 3; k + 3 < n; ++k) {
    d1.push_back(d1_central(f, k, h));
    d3.push_back(d3_central(f, k, h));
  }
  StaticMkdvFit fit;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < d1.size(); ++k) {
    num += d1[k] * (cubic * d1[k] * d1[k] * d1[k] + d3[k]);
    den += d1[k] * d1[k];
  }
  // phi' at rounding level: a straight line
  double fmax = 0.0;
  double d1max = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  for (double v : d1) d1max = std::max(d1max, std::abs(v));
  fit.indeterminate =
      d1max * h <= 64.0 * std::numeric_limits<double>::epsilon() * (fmax + 1.0);
  fit.a = fit.indeterminate ? 0.0 : -num / den;
  for (std::size_t k = 0; k < d1.size(); ++k) {
    const double r = fit.a * d1[k] + cubic * d1[k] * d1[k] * d1[k] + d3[k];
    fit.max_residual = std::max(fit.max_residual, std::abs(r));
    fit.max_third = std::max(fit.max_third, std::abs(d3[k]));
  }
  fit.relative = fit.max_third > 0.0 ? fit.max_residual / fit.max_third
                 : fit.max_residual == 0.0
                     ? 0.0
                     : std::numeric_limits<double>::infinity();
  return fit;
}

namespace {

void check_grid(const std::vector<std::vector<double>>& phi) {
  const std::size_t n2 = phi.size();
  const std::size_t n1 = n2 ? phi.front().size() : 0;
  if (n2 < 5 || n1 < 7) {
    throw Error(ErrorCode::InvalidArgument, "soliton.mkdv_residual",
                "grid needs at least 7 x 5 points");
  }
  for (std::size_t j = 0; j < n2; ++j) {
    if (phi[j].size() != n1) {
      throw Error(ErrorCode::InvalidArgument, "soliton.mkdv_residual",
                  "ragged grid");
    }
    for (std::size_t k = 0; k < n1; ++k) {
      const bool jump1 = k > 0 && std::abs(phi[j][k] - phi[j][k - 1]) > std::numbers::pi;
      const bool jump2 = j > 0 && std::abs(phi[j][k] - phi[j - 1][k]) > std::numbers::pi;
      if (jump1 || jump2) {
        throw Error(ErrorCode::PhaseUnwrapFailure, "soliton.mkdv_residual",
                    "phase jumps by more than pi at (" + std::to_string(j) +
                        ", " + std::to_string(k) + ")");
      }
    }
  }
}

// Derivatives at interior node (j, k) of re + i im.
struct Derivs {
  cplx d1;
  cplx d3;
  cplx dt;
};

Derivs derivs(const std::vector<std::vector<double>>& re,
              const std::vector<std::vector<double>>* im, std::size_t j,
              std::size_t k, double h1, double h2) {
  auto part = [&](const std::vector<std::vector<double>>& f) {
    return std::array<double, 3>{
        d1_central(f[j], k, h1), d3_central(f[j], k, h1),
        (f[j - 2][k] - 8.0 * f[j - 1][k] + 8.0 * f[j + 1][k] - f[j + 2][k]) /
            (12.0 * h2)};
  };
  const auto r = part(re);
  if (!im) return {r[0], r[1], r[2]};
  const auto i = part(*im);
  return {cplx(r[0], i[0]), cplx(r[1], i[1]), cplx(r[2], i[2])};
}

MkdvResult residual(const std::vector<std::vector<double>>& re,
                    const std::vector<std::vector<double>>* im, double h1,
                    double h2, double cubic) {
  check_grid(re);
  const std::size_t n2 = re.size();
  const std::size_t n1 = re.front().size();
  if (im && (im->size() != n2 || im->front().size() != n1)) {
    throw Error(ErrorCode::InvalidArgument, "soliton.mkdv_residual",
                "real and imaginary grids differ in shape");
  }
  MkdvResult res;
  for (std::size_t j = 2; j + 2 < n2; ++j) {
    for (std::size_t k = 3; k + 3 < n1; ++k) {
      const Derivs d = derivs(re, im, j, k, h1, h2);
      const cplx r = d.dt + cubic * d.d1 * d.d1 * d.d1 + d.d3;
      res.max_residual = std::max(res.max_residual, std::abs(r));
      res.max_third = std::max(res.max_third, std::abs(d.d3));
    }
  }
  res.relative = res.max_third > 0.0 ? res.max_residual / res.max_third
                 : res.max_residual == 0.0
                     ? 0.0
                     : std::numeric_limits<double>::infinity();
  return res;
}

double wrap_near(double a, double ref) {
  return a - 2.0 * std::numbers::pi * std::round((a - ref) / (2.0 * std::numbers::pi));
}

}  // namespace

MkdvResult mkdv_residual_grid(const std::vector<std::vector<double>>& phi,
                              double h1, double h2, double cubic) {
  return residual(phi, nullptr, h1, h2, cubic);
}

MkdvResult mkdv_residual_grid(const MkdvGrid& grid, double cubic) {
  return residual(grid.phi, &grid.phi_imag, grid.h1, grid.h2, cubic);
}

MkdvGrid mkdv_grid(const ChartModel& model, const DivisorState& init,
                   double t1_span, std::size_t n1, double t2_span,
                   std::size_t n2, MkdvFrame frame, double rtol, double atol) {
  if (n1 < 2 || n2 < 2) {
    throw Error(ErrorCode::InvalidArgument, "soliton.mkdv_residual",
                "grid needs at least two points per axis");
  }
  const int g = model.genus();
  if (g < 2) {
    throw Error(ErrorCode::InvalidArgument, "soliton.mkdv_residual",
                "the MKdV grid needs genus >= 2");
  }
  const PhiChart& ch = model.chart();
  const Curve& curve = ch.curve();
  const double R = model.R();
  cplx mix = 0.0;
  if (frame == MkdvFrame::FixedT2) {
    const cplx denom = curve.coeffs()[2 * g] + ch.e_a();
    if (std::abs(denom) < 1e-8 * curve.scale()) {
      throw Error(ErrorCode::NearSingularTimeMix, "soliton.mkdv_residual",
                  "lambda_{2g} + e_a vanishes");
    }
    mix = 1.0 / denom;
  }
  MkdvGrid grid;
  grid.h1 = t1_span / (n1 - 1);
  grid.h2 = t2_span / (n2 - 1);
  std::vector<ComplexDivisor> slices{lift(model, init)};
  for (std::size_t j = 1; j < n2; ++j) {
    slices.push_back(
        complex_flow(curve, slices.back(), grid.h2 / R, 0.0, rtol, atol));
  }
  std::vector<std::vector<cplx>> theta(n2, std::vector<cplx>(n1));
  parallel_for(n2, [&](std::size_t j) {
    ComplexDivisor d = slices[j];
    for (std::size_t k = 0; k < n1; ++k) {
      theta[j][k] = complex_turning(ch, d);
      if (k + 1 < n1) {
        d = complex_flow(curve, d, mix * grid.h1 / R, grid.h1 / R, rtol, atol);
      }
    }
  });
  // continuous real part: along t_2 in the first column, then along t_1
  grid.phi.assign(n2, std::vector<double>(n1));
  grid.phi_imag.assign(n2, std::vector<double>(n1));
  const double start = 2.0 * [&] {
    double s = 0.0;
    for (double p : init.phis) s += p;
    return s;
  }();
  for (std::size_t j = 0; j < n2; ++j) {
    const double ref = j == 0 ? start : grid.phi[j - 1][0];
    grid.phi[j][0] = wrap_near(theta[j][0].real(), ref);
    grid.phi_imag[j][0] = theta[j][0].imag();
    for (std::size_t k = 1; k < n1; ++k) {
      grid.phi[j][k] = wrap_near(theta[j][k].real(), grid.phi[j][k - 1]);
      grid.phi_imag[j][k] = theta[j][k].imag();
    }
  }
  return grid;
}

MkdvResult mkdv_residual(const ChartModel& model, const DivisorState& init,
                         double t1_span, std::size_t n1, double t2_span,
                         std::size_t n2, double cubic) {
  return mkdv_residual_grid(mkdv_grid(model, init, t1_span, n1, t2_span, n2),
                            cubic);
}

MkdvFit mkdv_fit(const MkdvGrid& grid) {
  check_grid(grid.phi);
  const std::size_t n2 = grid.phi.size();
  const std::size_t n1 = grid.phi.front().size();
  std::vector<Derivs> rows;
  for (std::size_t j = 2; j + 2 < n2; ++j) {
    for (std::size_t k = 3; k + 3 < n1; ++k) {
      rows.push_back(derivs(grid.phi, &grid.phi_imag, j, k, grid.h1, grid.h2));
    }
  }
  Eigen::MatrixXcd A(rows.size(), 3);
  Eigen::VectorXcd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    A(r, 0) = rows[r].d1;
    A(r, 1) = rows[r].d1 * rows[r].d1 * rows[r].d1;
    A(r, 2) = rows[r].d3;
    b(r) = -rows[r].dt;
  }
  const Eigen::VectorXcd x = A.colPivHouseholderQr().solve(b);
  MkdvFit fit;
  fit.alpha = x(0);
  fit.kappa = x(1);
  fit.beta = x(2);
  const double scale = b.cwiseAbs().maxCoeff();
  fit.relative = scale > 0.0 ? (A * x - b).cwiseAbs().maxCoeff() / scale : 0.0;
  return fit;
}

double max_reality_defect(const MkdvGrid& grid) {
  double worst = 0.0;
  for (const auto& row : grid.phi_imag) {
    for (double v : row) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace hyperam

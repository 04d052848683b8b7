#include "hyperam/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperam/error.hpp"

namespace hyperam {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DuplicateBranchPoint: return "DuplicateBranchPoint";
    case ErrorCode::EvenCount: return "EvenCount";
    case ErrorCode::NonRealBranchPoint: return "NonRealBranchPoint";
    case ErrorCode::UnclassifiableSigns: return "UnclassifiableSigns";
    case ErrorCode::EmptyAdmissibleRange: return "EmptyAdmissibleRange";
    case ErrorCode::DegenerateSynthesis: return "DegenerateSynthesis";
    case ErrorCode::UnsupportedGenus: return "UnsupportedGenus";
    case ErrorCode::OutsideAdmissibleRange: return "OutsideAdmissibleRange";
    case ErrorCode::SingularInterior: return "SingularInterior";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::WrongGenus: return "WrongGenus";
    case ErrorCode::UnclassifiedChart: return "UnclassifiedChart";
    case ErrorCode::InversionFailure: return "InversionFailure";
    case ErrorCode::DegenerateDivisor: return "DegenerateDivisor";
    case ErrorCode::NonRealVelocity: return "NonRealVelocity";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::PhaseUnwrapFailure: return "PhaseUnwrapFailure";
    case ErrorCode::NearSingularTimeMix: return "NearSingularTimeMix";
  }
  return "Unknown";
}

Curve Curve::from_branch_points(std::vector<cplx> branch_points,
                                double tolerance) {
  const std::size_t n = branch_points.size();
  if (n < 3 || n % 2 == 0) {
    throw Error(ErrorCode::EvenCount, "curve_model.new_curve",
                "need an odd number (>= 3) of branch points, got " +
                    std::to_string(n));
  }
  double scale = 0.0;
  for (const cplx& e : branch_points) {
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
      throw Error(ErrorCode::InvalidArgument, "curve_model.new_curve",
                  "branch point is not finite");
    }
    scale = std::max(scale, std::abs(e));
  }
  scale += 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(branch_points[i] - branch_points[j]) <= tolerance * scale) {
        throw Error(ErrorCode::DuplicateBranchPoint, "curve_model.new_curve",
                    "branch points " + std::to_string(i + 1) + " and " +
                        std::to_string(j + 1) + " coincide");
      }
    }
  }

  Curve curve;
  curve.genus_ = static_cast<int>((n - 1) / 2);
  curve.scale_ = scale;
  // Expand prod (x - e_b); poly[j] is the coefficient of x^j.
  std::vector<cplx> poly{1.0};
  for (const cplx& e : branch_points) {
    std::vector<cplx> next(poly.size() + 1, 0.0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 1] += poly[j];
      next[j] -= e * poly[j];
    }
    poly = std::move(next);
  }
  poly.pop_back();
  curve.lambda_ = std::move(poly);
  curve.e_ = std::move(branch_points);
  return curve;
}

cplx Curve::y_squared(cplx x) const noexcept {
  cplx result = 1.0;
  for (const cplx& e : e_) result *= x - e;
  return result;
}

cplx Curve::y_squared_from_coeffs(cplx x) const noexcept {
  cplx result = 1.0;
  for (auto it = lambda_.rbegin(); it != lambda_.rend(); ++it) {
    result = result * x + *it;
  }
  return result;
}

std::vector<std::size_t> default_sigma(const Curve& curve, std::size_t a) {
  std::vector<std::size_t> sigma;
  for (std::size_t b = 0; b < curve.branch_points().size(); ++b) {
    if (b != a) sigma.push_back(b);
  }
  return sigma;
}

PhiChart::PhiChart(const Curve& curve, std::size_t a,
                   std::vector<std::size_t> sigma)
    : curve_(curve), a_(a), sigma_(std::move(sigma)) {
  const std::size_t n = curve_.branch_points().size();
  if (a_ >= n) {
    throw Error(ErrorCode::InvalidArgument, "curve_model.phi_chart",
                "distinguished index out of range");
  }
  std::vector<bool> seen(n, false);
  seen[a_] = true;
  if (sigma_.size() != n - 1) {
    throw Error(ErrorCode::InvalidArgument, "curve_model.phi_chart",
                "sigma must list the other 2g indices");
  }
  for (std::size_t s : sigma_) {
    if (s >= n || seen[s]) {
      throw Error(ErrorCode::InvalidArgument, "curve_model.phi_chart",
                  "sigma is not a bijection onto the remaining indices");
    }
    seen[s] = true;
  }

  const cplx ea = e_a();
  const cplx two_i(0.0, 2.0);
  prefactor_ = 1.0;
  for (std::size_t s : sigma_) {
    cplx d = curve_.branch_point(s) - ea;
    // A negative zero imaginary part would flip the principal square root.
    d = cplx(d.real(), d.imag() + 0.0);
    offsets_.push_back(d);
  }
  for (std::size_t j = 0; j + 1 < offsets_.size(); j += 2) {
    ChartPair pr;
    pr.p = offsets_[j];
    pr.q = offsets_[j + 1];
    pr.sqrt_p = std::sqrt(pr.p);
    pr.sqrt_q = std::sqrt(pr.q);
    pr.c = std::sqrt(pr.p * pr.q);
    const cplx diff = pr.sqrt_p - pr.sqrt_q;
    pr.k = two_i * std::sqrt(pr.c) / diff;
    pr.k_sq = pr.k * pr.k;
    pr.a_coef = diff * diff;
    pr.b_coef = 4.0 * pr.c;
    prefactor_ *= diff;
    pairs_.push_back(pr);
  }
}

std::vector<cplx> PhiChart::c_pairs() const {
  std::vector<cplx> out;
  for (const auto& pr : pairs_) out.push_back(pr.c);
  return out;
}

std::vector<cplx> PhiChart::k_moduli() const {
  std::vector<cplx> out;
  for (const auto& pr : pairs_) out.push_back(pr.k);
  return out;
}

cplx PhiChart::x_of_phi(double phi) const {
  return e_a() + c1() * std::polar(1.0, 2.0 * phi);
}

}  // namespace hyperam

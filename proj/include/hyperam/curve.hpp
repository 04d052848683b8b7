#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hyperam {

using cplx = std::complex<double>;

/// Hyperelliptic curve y^2 = prod_b (x - e_b) of genus g, stored by its 2g+1
/// branch points in user order.  Immutable after construction.
class Curve {
 public:
  /// Builds the curve and expands the monic polynomial.  Throws EvenCount for
  /// an even number (or fewer than three) of points, DuplicateBranchPoint if
  /// two points lie within `tolerance * scale`.
  static Curve from_branch_points(std::vector<cplx> branch_points,
                                  double tolerance = 1e-12);

  int genus() const noexcept { return genus_; }
  const std::vector<cplx>& branch_points() const noexcept { return e_; }
  const cplx& branch_point(std::size_t b) const { return e_.at(b); }
  /// lambda_0 .. lambda_{2g}; the leading coefficient 1 is implicit.
  const std::vector<cplx>& coeffs() const noexcept { return lambda_; }
  /// max |e_b| + 1
  double scale() const noexcept { return scale_; }

  /// y^2 as the product over branch points.
  cplx y_squared(cplx x) const noexcept;
  /// y^2 from the expanded coefficients (Horner).
  cplx y_squared_from_coeffs(cplx x) const noexcept;

 private:
  Curve() = default;

  int genus_ = 0;
  std::vector<cplx> e_;
  std::vector<cplx> lambda_;
  double scale_ = 1.0;
};

inline cplx eval_y_squared(const Curve& curve, cplx x) {
  return curve.y_squared(x);
}

/// One pair (e_{sigma(2j-1)}, e_{sigma(2j)}) of the angular chart, with the
/// quantities built from principal square and fourth roots of the offsets
/// p = e_{sigma(2j-1)} - e_a and q = e_{sigma(2j)} - e_a.
struct ChartPair {
  cplx p;
  cplx q;
  cplx sqrt_p;
  cplx sqrt_q;
  cplx c;       ///< sqrt(p q)
  cplx k;       ///< 2i (pq)^{1/4} / (sqrt p - sqrt q)
  cplx k_sq;
  cplx a_coef;  ///< (sqrt p - sqrt q)^2
  cplx b_coef;  ///< 4 sqrt(p q)
};

/// The chart e^{2 i phi} = (x - e_a) / c_1 around a distinguished branch point.
/// Indices are zero-based; sigma lists the other 2g indices, consecutive
/// entries forming pairs.
class PhiChart {
 public:
  PhiChart(const Curve& curve, std::size_t a, std::vector<std::size_t> sigma);

  const Curve& curve() const noexcept { return curve_; }
  int genus() const noexcept { return curve_.genus(); }
  std::size_t a() const noexcept { return a_; }
  const std::vector<std::size_t>& sigma() const noexcept { return sigma_; }
  cplx e_a() const { return curve_.branch_point(a_); }

  /// e_{b,a} = e_{sigma(b)} - e_a, b zero-based over the 2g slots.
  cplx offset(std::size_t b) const { return offsets_.at(b); }
  const std::vector<ChartPair>& pairs() const noexcept { return pairs_; }
  const ChartPair& pair(std::size_t j) const { return pairs_.at(j); }

  /// The chart-defining constant, c of the first pair.
  cplx c1() const { return pairs_.front().c; }
  std::vector<cplx> c_pairs() const;
  std::vector<cplx> k_moduli() const;
  /// prod_j (sqrt p_j - sqrt q_j)
  cplx prefactor() const noexcept { return prefactor_; }

  /// x = e_a + c_1 e^{2 i phi}
  cplx x_of_phi(double phi) const;

 private:
  Curve curve_;
  std::size_t a_;
  std::vector<std::size_t> sigma_;
  std::vector<cplx> offsets_;
  std::vector<ChartPair> pairs_;
  cplx prefactor_;
};

/// sigma = all indices except a, in ascending order.
std::vector<std::size_t> default_sigma(const Curve& curve, std::size_t a);

inline PhiChart phi_chart(const Curve& curve, std::size_t a,
                          std::vector<std::size_t> sigma) {
  return PhiChart(curve, a, std::move(sigma));
}

inline cplx x_of_phi(const PhiChart& chart, double phi) {
  return chart.x_of_phi(phi);
}

}  // namespace hyperam

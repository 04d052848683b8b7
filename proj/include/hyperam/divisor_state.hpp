#pragma once

#include <vector>

namespace hyperam {

/// Snapshot of the degree-g divisor on the real slice.
struct DivisorState {
  std::vector<double> phis;
  std::vector<int> sheets;          ///< sign of d phi / d(own kinematic time)
  std::vector<double> u_partial;    ///< accumulated u_g^{(i)}
  double t = 0.0;
  std::vector<double> kin_velocity; ///< psi_i = d phi_i / d s_i, sign = sheet
};

}  // namespace hyperam

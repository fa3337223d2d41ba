// Optimality-condition checkers at candidate solutions: LICQ (orthant
// programs), constraint nondegeneracy via tangent-cone lineality bases,
// strong second-order sufficiency per cone family, and the empirical
// convergence-rate estimator.
#pragma once

#include "soalm/multipliers.hpp"
#include "soalm/program.hpp"

namespace soalm {

struct RankReport {
  bool pass = false;
  double smallest_sv = 0.0;
  double largest_sv = 0.0;
  int rows = 0;
};

// Active-gradient linear independence for orthant-cone programs (active when
// g_j(x) <= 1e-8). Throws std::invalid_argument for non-orthant cones.
RankReport check_licq(const Program& p, const Vector& x);

// Full row rank of [[Jh, 0], [Jg, L]] with L an orthonormal basis of
// lin T_K(g(x)). Works for every cone family.
RankReport check_nondegeneracy(const Program& p, const Vector& x);

struct SsoscReport {
  bool pass = false;
  double min_eig = 0.0;
  int subspace_dim = 0;
};

// Strong second-order sufficiency at a KKT point (total residual <= 1e-8
// required, else std::invalid_argument): reduced min-eigenvalue of
// ∇²L₀ + Σ on the family-specific affine-hull subspace, where Σ collects the
// SOC boundary curvature terms and the PSD Υ curvature form.
SsoscReport check_ssosc(const Program& p, const Vector& x, const Vector& lambda,
                        const Vector& mu);

// Rate estimation over the window lo <= η <= hi (defaults [1e-14, 1e-1]);
// consecutive in-window pairs with ratio < 0.999 feed the geometric-mean
// linear rate and the log-log regression order. Throws std::runtime_error
// ("insufficient usable points") below 3 in-window points / 2 pairs.
RateEstimate estimate_rate(const std::vector<double>& eta, double lo = 1e-14,
                           double hi = 1e-1);

}  // namespace soalm

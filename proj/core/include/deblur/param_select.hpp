#ifndef DEBLUR_PARAM_SELECT_HPP
#define DEBLUR_PARAM_SELECT_HPP

#include <vector>

#include "deblur/regularization.hpp"
#include "deblur/svd_filter.hpp"

namespace deblur {

/// One Tikhonov solution summarized on the L-curve: residual against
/// solution norm in log-log space, parameterized by lambda.
struct LCurvePoint {
  double lambda = 0.0;
  double residual = 0.0;
  double solution_norm = 0.0;
  double log_residual = 0.0;
  double log_solution_norm = 0.0;
};

/// Tikhonov solutions evaluated over a lambda grid (strictly positive,
/// strictly ascending, >= 3 entries; BadGrid otherwise). Computed in
/// coefficient space, so the scan costs O(m) per grid point after one
/// projection of b.
std::vector<LCurvePoint> lcurve_scan(const SvdFactorization& svd, const Vector& b,
                                     const std::vector<double>& grid);

/// Default grid: n logarithmically spaced values in [1e-8 sigma_1, sigma_1].
std::vector<double> default_lambda_grid(const SvdFactorization& svd, int n = 50);

struct LCurveCorner {
  double lambda = 0.0;
  Index index = 0;        // grid position of the corner
  double curvature = 0.0;
  /// The corner is weak when its curvature is below 10x the median; the
  /// L-curve should not be trusted uncritically in that regime.
  bool weak = false;
  /// Discrete curvature per grid point (endpoints zero).
  std::vector<double> curvatures;
};

/// Corner of the L-curve: the interior grid point maximizing the discrete
/// curvature of (log residual, log solution norm) parameterized by log
/// lambda. Needs >= 5 points spanning >= 4 decades (TooFewPoints); a
/// nonpositive maximal curvature means no bend (FlatCurve).
LCurveCorner lcurve_corner(const std::vector<LCurvePoint>& points);

/// Discrepancy principle for the SVD-filter Tikhonov solution: the lambda
/// where ||A x_reg(lambda) - b|| = tau * delta, found by bisection in log
/// lambda on the monotone residual map, to 1e-6 relative. Throws
/// NotBracketed when tau*delta is outside the attainable residual range.
double discrepancy_lambda(const SvdFactorization& svd, const Vector& b, double delta,
                          double tau = 1.0);

/// Residual matching for the general-form Tikhonov problem: the mu where
/// ||A x_mu - b|| = tau * delta, each evaluation a full solve.
double discrepancy_mu_general(const BlurOperator& op, const Vector& b, const RegularizerL& L,
                              double delta, double tau = 1.0, const SolverOptions& inner = {});

/// Residual matching for TV-IRLS (bisection on lambda_tv; evaluations run a
/// shortened IRLS). match_tol is relative to tau * delta.
double discrepancy_lambda_tv(const BlurOperator& op, const Vector& b, const RegularizerL& L,
                             double delta, double tau = 1.0, IrlsOptions opts = {},
                             double match_tol = 1e-3);

/// Discrepancy principle for TSVD: the smallest cutoff k whose residual is
/// <= tau * delta (NotBracketed when even k = m leaves a larger residual).
Index discrepancy_tsvd_cutoff(const SvdFactorization& svd, const Vector& b, double delta,
                              double tau = 1.0);

} // namespace deblur

#endif

#include "deblur/param_select.hpp"

#include <algorithm>
#include <cmath>

namespace deblur {

namespace {

constexpr double kTiny = 1e-300;

// Tikhonov residual and solution norms from projected coefficients:
//   x-coefficient  sigma beta / (sigma^2 + lambda^2)
//   r-coefficient  lambda^2 beta / (sigma^2 + lambda^2)
// Orthonormal bases turn both norms into plain Euclidean sums.
struct CoefficientScan {
  Vector sigma, beta;

  double residual(double lambda) const {
    const double l2 = lambda * lambda;
    return ((l2 / (sigma.array().square() + l2)) * beta.array()).matrix().norm();
  }
  double solution_norm(double lambda) const {
    const double l2 = lambda * lambda;
    return ((sigma.array() / (sigma.array().square() + l2)) * beta.array()).matrix().norm();
  }
};

// log-lambda bisection for a monotone nondecreasing residual map.
template <typename ResidualFn>
double bisect_residual(ResidualFn&& residual, double lo, double hi, double target,
                       double rel_tol, int max_iters) {
  double r_lo = residual(lo);
  double r_hi = residual(hi);
  if (!(r_lo < target && target < r_hi)) {
    throw NotBracketed("target residual " + std::to_string(target) +
                       " outside attainable range [" + std::to_string(r_lo) + ", " +
                       std::to_string(r_hi) + "]");
  }
  double t_lo = std::log(lo);
  double t_hi = std::log(hi);
  for (int it = 0; it < max_iters; ++it) {
    const double t_mid = 0.5 * (t_lo + t_hi);
    const double mid = std::exp(t_mid);
    const double r_mid = residual(mid);
    if (std::abs(r_mid - target) <= rel_tol * target) return mid;
    if (r_mid < target) {
      t_lo = t_mid;
    } else {
      t_hi = t_mid;
    }
  }
  throw NotConverged("residual bisection did not converge");
}

} // namespace

std::vector<LCurvePoint> lcurve_scan(const SvdFactorization& svd, const Vector& b,
                                     const std::vector<double>& grid) {
  if (grid.size() < 3) throw BadGrid("lambda grid needs at least 3 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw BadGrid("lambda grid must be strictly positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw BadGrid("lambda grid must be strictly ascending (no duplicates)");
    }
  }
  CoefficientScan scan{svd.singular_values(), svd.project_left(b)};
  std::vector<LCurvePoint> points;
  points.reserve(grid.size());
  for (double lambda : grid) {
    LCurvePoint pt;
    pt.lambda = lambda;
    pt.residual = scan.residual(lambda);
    pt.solution_norm = scan.solution_norm(lambda);
    pt.log_residual = std::log(std::max(pt.residual, kTiny));
    pt.log_solution_norm = std::log(std::max(pt.solution_norm, kTiny));
    points.push_back(pt);
  }
  return points;
}

std::vector<double> default_lambda_grid(const SvdFactorization& svd, int n) {
  const double sigma1 = svd.singular_values()(0);
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double lo = std::log(1e-8 * sigma1);
  const double hi = std::log(sigma1);
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (n - 1));
  }
  return grid;
}

LCurveCorner lcurve_corner(const std::vector<LCurvePoint>& points) {
  const auto n = static_cast<Index>(points.size());
  if (n < 5) throw TooFewPoints("lcurve_corner needs at least 5 points");
  const double span = points.back().lambda / points.front().lambda;
  if (!(span >= 1e4)) {
    throw TooFewPoints("lambda grid must span at least 4 decades");
  }

  LCurveCorner corner;
  corner.curvatures.assign(points.size(), 0.0);
  double best = 0.0;
  Index best_idx = -1;
  std::vector<double> interior;
  for (Index i = 1; i + 1 < n; ++i) {
    const double t0 = std::log(points[i - 1].lambda);
    const double t1 = std::log(points[i].lambda);
    const double t2 = std::log(points[i + 1].lambda);
    const double h = t2 - t0;
    const auto d1 = [&](double f0, double f2) { return (f2 - f0) / h; };
    const auto d2 = [&](double f0, double f1, double f2) {
      return 2.0 * ((f2 - f1) / (t2 - t1) - (f1 - f0) / (t1 - t0)) / h;
    };
    const double xi0 = points[i - 1].log_residual, xi1 = points[i].log_residual,
                 xi2 = points[i + 1].log_residual;
    const double et0 = points[i - 1].log_solution_norm, et1 = points[i].log_solution_norm,
                 et2 = points[i + 1].log_solution_norm;
    const double xp = d1(xi0, xi2), xpp = d2(xi0, xi1, xi2);
    const double yp = d1(et0, et2), ypp = d2(et0, et1, et2);
    const double speed2 = xp * xp + yp * yp;
    const double kappa =
        speed2 > 0.0 ? (xp * ypp - yp * xpp) / std::pow(speed2, 1.5) : 0.0;
    corner.curvatures[static_cast<std::size_t>(i)] = kappa;
    interior.push_back(std::abs(kappa));
    if (best_idx < 0 || kappa > best) {
      best = kappa;
      best_idx = i;
    }
  }
  // Genuine corners have curvature O(0.1) and up in log-log space; anything
  // at roundoff scale is a straight line.
  if (!(best > 1e-9)) {
    throw FlatCurve("no bend: maximal curvature is nonpositive");
  }
  corner.lambda = points[static_cast<std::size_t>(best_idx)].lambda;
  corner.index = best_idx;
  corner.curvature = best;
  std::nth_element(interior.begin(), interior.begin() + interior.size() / 2, interior.end());
  const double median = interior[interior.size() / 2];
  corner.weak = best < 10.0 * median;
  return corner;
}

double discrepancy_lambda(const SvdFactorization& svd, const Vector& b, double delta,
                          double tau) {
  if (!(tau >= 1.0)) throw NotBracketed("discrepancy safety factor tau must be >= 1");
  if (!(delta > 0.0)) throw NotBracketed("noise estimate delta must be positive");
  CoefficientScan scan{svd.singular_values(), svd.project_left(b)};
  const double target = tau * delta;
  const double sigma1 = scan.sigma(0);

  double lo = 1e-12 * sigma1;
  for (int i = 0; i < 50 && scan.residual(lo) >= target && lo > 1e-290; ++i) lo *= 1e-6;
  double hi = 10.0 * sigma1;
  for (int i = 0; i < 12 && scan.residual(hi) <= target; ++i) hi *= 10.0;
  return bisect_residual([&](double l) { return scan.residual(l); }, lo, hi, target, 1e-6, 60);
}

double discrepancy_mu_general(const BlurOperator& op, const Vector& b, const RegularizerL& L,
                              double delta, double tau, const SolverOptions& inner) {
  if (!(tau >= 1.0)) throw NotBracketed("discrepancy safety factor tau must be >= 1");
  Vector warm = Vector::Zero(op.m());
  const auto residual = [&](double mu) {
    warm = general_tikhonov_solve(op, b, L, mu, inner, nullptr, &warm);
    return (op.apply_vec(warm) - b).norm();
  };
  // Bracket from above so evaluations stay well conditioned.
  const double target = tau * delta;
  double hi = 1.0;
  for (int i = 0; i < 24 && residual(hi) <= target; ++i) hi *= 10.0;
  double lo = hi * 1e-2;
  for (int i = 0; i < 24 && residual(lo) >= target; ++i) lo *= 1e-2;
  return bisect_residual(residual, lo, hi, target, 1e-6, 60);
}

double discrepancy_lambda_tv(const BlurOperator& op, const Vector& b, const RegularizerL& L,
                             double delta, double tau, IrlsOptions opts, double match_tol) {
  if (!(tau >= 1.0)) throw NotBracketed("discrepancy safety factor tau must be >= 1");
  // Each probe is a (shortened) IRLS run; the residual settles within a few
  // outer iterations, well inside the matching tolerance.
  opts.max_outer = std::min(opts.max_outer, 6);
  const auto residual = [&](double lambda) {
    return tv_irls_solve(op, b, L, lambda, opts).trace.back().residual_norm;
  };
  const double target = tau * delta;
  double hi = 1.0;
  for (int i = 0; i < 18 && residual(hi) <= target; ++i) hi *= 10.0;
  double lo = hi * 1e-2;
  for (int i = 0; i < 18 && residual(lo) >= target; ++i) lo *= 1e-2;
  return bisect_residual(residual, lo, hi, target, match_tol, 60);
}

Index discrepancy_tsvd_cutoff(const SvdFactorization& svd, const Vector& b, double delta,
                              double tau) {
  if (!(tau >= 1.0)) throw NotBracketed("discrepancy safety factor tau must be >= 1");
  const Vector beta = svd.project_left(b);
  const double target2 = tau * delta * tau * delta;
  // residual(k)^2 = sum_{l > k} beta_l^2, nonincreasing in k.
  double tail2 = 0.0;
  std::vector<double> tails(static_cast<std::size_t>(svd.m()) + 1);
  tails[static_cast<std::size_t>(svd.m())] = 0.0;
  for (Index l = svd.m() - 1; l >= 0; --l) {
    tail2 += beta(l) * beta(l);
    tails[static_cast<std::size_t>(l)] = tail2;
  }
  for (Index k = 1; k <= svd.m(); ++k) {
    if (tails[static_cast<std::size_t>(k)] <= target2) return k;
  }
  throw NotBracketed("even the full TSVD expansion leaves a residual above tau*delta");
}

} // namespace deblur

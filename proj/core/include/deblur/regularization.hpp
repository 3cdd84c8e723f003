#ifndef DEBLUR_REGULARIZATION_HPP
#define DEBLUR_REGULARIZATION_HPP

#include <vector>

#include "deblur/blur_operator.hpp"
#include "deblur/image.hpp"
#include "deblur/svd_filter.hpp"

namespace deblur {

/// Regularization matrix L: either the identity or the stacked
/// two-dimensional first-derivative operator
///
///   L = [ I (x) L1 ]      with L1 the (p-1) x p forward-difference matrix,
///       [ L1 (x) I ]
///
/// applied matrix-free through column/row differencing of the image.
class RegularizerL {
public:
  static RegularizerL identity(Index m);
  /// Derivative form for p x p images; 2p(p-1) rows. Throws BadSize for p < 2.
  static RegularizerL first_derivative_2d(Index p);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  bool is_identity() const { return identity_; }

  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& y) const;
  /// diag(L^T W L); W defaults to the identity.
  Vector normal_diagonal(const Vector* row_weights = nullptr) const;
  Matrix assemble_dense() const;

private:
  RegularizerL(bool identity, Index p, Index rows, Index cols)
      : identity_(identity), p_(p), rows_(rows), cols_(cols) {}
  bool identity_ = true;
  Index p_ = 0;
  Index rows_ = 0, cols_ = 0;
};

/// The stacked first-derivative operator for p x p images.
RegularizerL derivative_operator(Index p);

/// Inner-solver controls for the normal equations
/// (A^T A + mu L^T W L) x = A^T b.
struct SolverOptions {
  enum class Mode { Auto, Dense, Cg };
  Mode mode = Mode::Auto;
  /// Auto switches from a dense SPD solve to matrix-free PCG above this m.
  Index dense_threshold = 1024;
  /// PCG stop: ||residual|| <= cg_tol * ||A^T b||.
  double cg_tol = 1e-10;
  Index max_cg_iters = 0;  // 0 = choose from m
};

/// Solve min ||Ax - b||^2 + mu ||W^(1/2) L x||^2 via the normal equations.
/// Dense path uses LLT with one refinement step; CG path is Jacobi-
/// preconditioned and optionally warm-started. The returned x satisfies the
/// normal equations to 1e-8 relative (NotConverged otherwise;
/// NullSpaceOverlap when the normal matrix is not positive definite).
Vector general_tikhonov_solve(const BlurOperator& op, const Vector& b, const RegularizerL& L,
                              double mu, const SolverOptions& opts = {},
                              const Vector* row_weights = nullptr,
                              const Vector* warm_start = nullptr);

/// Standard-form Tikhonov for a BCCB operator, solved entirely in Fourier
/// space: X = IDFT2( conj(ahat) .* DFT2(B) ./ (|ahat|^2 + mu) ).
Image tikhonov_fft_solve(const BlurOperator& op, const Image& B, double mu);

/// Standard-form Tikhonov through the Kronecker factor SVDs:
/// X = V_c ( (d_c d_r^T .* (U_c^T B U_r)) ./ ((d_c d_r^T)^2 + mu) ) V_r^T.
Image tikhonov_separable_solve(const SvdFactorization& svd, const Image& B, double mu);

/// IRLS controls for the TV problem min ||Ax-b||^2 + lambda ||Lx||_1.
struct IrlsOptions {
  double epsilon = 0.0;  // smoothing; <= 0 means 1e-4 * max|b|
  int max_outer = 30;
  double tol = 1e-4;     // relative-change stopping threshold
  // Inner solves are warm-started, so 1e-8 holds the normal-equation
  // contract without the headroom the cold general solver carries.
  SolverOptions inner{SolverOptions::Mode::Auto, 1024, 1e-8, 0};
};

struct SolverTraceRow {
  int iteration = 0;
  double objective = 0.0;
  double residual_norm = 0.0;
  double penalty_norm = 0.0;
};

struct TvResult {
  Vector x;
  std::vector<SolverTraceRow> trace;
  bool converged = false;
  double epsilon = 0.0;
};

/// Smoothed-TV solve by iteratively reweighted least squares: each outer
/// step solves a general Tikhonov problem with row weights
/// w_i = ((Lx_k)_i^2 + eps^2)^(-1/2), starting from the unit-weight solve.
/// The trace records the smoothed objective these iterates majorize-
/// minimize, 1/2 ||Ax-b||^2 + lambda * sum_i sqrt((Lx)_i^2 + eps^2); it is
/// nonincreasing across outer iterations. Non-convergence is reported
/// through the flag, not an exception.
TvResult tv_irls_solve(const BlurOperator& op, const Vector& b, const RegularizerL& L,
                       double lambda_tv, const IrlsOptions& opts = {});

} // namespace deblur

#endif

#include "deblur/regularization.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <fftw3.h>

namespace deblur {

namespace {

// L1 X: forward differences down the columns.
Matrix diff_rows(const Matrix& X) {
  const Index p = X.rows();
  return X.bottomRows(p - 1) - X.topRows(p - 1);
}

// X L1^T: forward differences across the rows.
Matrix diff_cols(const Matrix& X) {
  const Index q = X.cols();
  return X.rightCols(q - 1) - X.leftCols(q - 1);
}

Matrix first_difference_dense(Index p) {
  Matrix L1 = Matrix::Zero(p - 1, p);
  for (Index i = 0; i < p - 1; ++i) {
    L1(i, i) = -1.0;
    L1(i, i + 1) = 1.0;
  }
  return L1;
}

} // namespace

RegularizerL RegularizerL::identity(Index m) {
  if (m < 1) throw BadSize("identity regularizer needs m >= 1");
  return RegularizerL(true, 0, m, m);
}

RegularizerL RegularizerL::first_derivative_2d(Index p) {
  if (p < 2) throw BadSize("derivative operator needs p >= 2");
  return RegularizerL(false, p, 2 * p * (p - 1), p * p);
}

RegularizerL derivative_operator(Index p) { return RegularizerL::first_derivative_2d(p); }

Vector RegularizerL::apply(const Vector& x) const {
  if (x.size() != cols_) throw DimensionMismatch("RegularizerL::apply");
  if (identity_) return x;
  const Image X = unvec(x, p_, p_);
  Vector y(rows_);
  y.head((p_ - 1) * p_) = vec(diff_rows(X));
  y.tail(p_ * (p_ - 1)) = vec(diff_cols(X));
  return y;
}

Vector RegularizerL::apply_adjoint(const Vector& y) const {
  if (y.size() != rows_) throw DimensionMismatch("RegularizerL::apply_adjoint");
  if (identity_) return y;
  const Image Y1 = unvec(y.head((p_ - 1) * p_), p_ - 1, p_);
  const Image Y2 = unvec(y.tail(p_ * (p_ - 1)), p_, p_ - 1);
  Matrix out = Matrix::Zero(p_, p_);
  out.topRows(p_ - 1) -= Y1;
  out.bottomRows(p_ - 1) += Y1;
  out.leftCols(p_ - 1) -= Y2;
  out.rightCols(p_ - 1) += Y2;
  return vec(out);
}

Vector RegularizerL::normal_diagonal(const Vector* row_weights) const {
  if (row_weights && row_weights->size() != rows_) {
    throw DimensionMismatch("RegularizerL::normal_diagonal: weight length");
  }
  if (identity_) {
    return row_weights ? *row_weights : Vector::Ones(rows_);
  }
  // Each difference row touches two pixels with coefficients {-1, +1}.
  Vector d = Vector::Zero(cols_);
  Index r = 0;
  for (Index j = 0; j < p_; ++j) {
    for (Index i = 0; i < p_ - 1; ++i, ++r) {
      const double w = row_weights ? (*row_weights)(r) : 1.0;
      d(j * p_ + i) += w;
      d(j * p_ + i + 1) += w;
    }
  }
  for (Index j = 0; j < p_ - 1; ++j) {
    for (Index i = 0; i < p_; ++i, ++r) {
      const double w = row_weights ? (*row_weights)(r) : 1.0;
      d(j * p_ + i) += w;
      d((j + 1) * p_ + i) += w;
    }
  }
  return d;
}

Matrix RegularizerL::assemble_dense() const {
  if (identity_) return Matrix::Identity(rows_, cols_);
  const Matrix L1 = first_difference_dense(p_);
  const Matrix I = Matrix::Identity(p_, p_);
  Matrix L(rows_, cols_);
  L.topRows((p_ - 1) * p_) = kronecker(I, L1);
  L.bottomRows(p_ * (p_ - 1)) = kronecker(L1, I);
  return L;
}

namespace {

// Jacobi-preconditioned conjugate gradients on the SPD normal matrix
// M = A^T A + mu L^T W L. Matvecs go through the operators' fast paths.
Vector solve_normal_cg(const BlurOperator& op, const RegularizerL& L, double mu,
                       const Vector& rhs, const Vector& diag, const SolverOptions& opts,
                       const Vector* row_weights, const Vector* warm_start) {
  const Index m = rhs.size();
  const auto matvec = [&](const Vector& v) -> Vector {
    Vector out = op.apply_vec(op.apply_vec(v), /*adjoint=*/true);
    Vector Lv = L.apply(v);
    if (row_weights) Lv.array() *= row_weights->array();
    out.noalias() += mu * L.apply_adjoint(Lv);
    return out;
  };

  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return Vector::Zero(m);
  const double target = opts.cg_tol * rhs_norm;
  const Index max_iters =
      opts.max_cg_iters > 0 ? opts.max_cg_iters : std::max<Index>(4 * m, 2000);

  Vector x = warm_start ? *warm_start : Vector::Zero(m);
  Vector r = rhs - matvec(x);
  Vector z = r.cwiseQuotient(diag);
  Vector d = z;
  double rz = r.dot(z);

  for (Index it = 0; it < max_iters; ++it) {
    if (r.norm() <= target) {
      // Recursive residuals drift; confirm against the true one.
      r = rhs - matvec(x);
      if (r.norm() <= target) return x;
      z = r.cwiseQuotient(diag);
      d = z;
      rz = r.dot(z);
    }
    const Vector Md = matvec(d);
    const double dMd = d.dot(Md);
    if (!(dMd > 0.0)) {
      throw NullSpaceOverlap("normal matrix is not positive definite");
    }
    const double alpha = rz / dMd;
    x.noalias() += alpha * d;
    r.noalias() -= alpha * Md;
    z = r.cwiseQuotient(diag);
    const double rz_next = r.dot(z);
    d = z + (rz_next / rz) * d;
    rz = rz_next;
  }
  if ((rhs - matvec(x)).norm() <= target) return x;
  throw NotConverged("CG did not reach tolerance in " + std::to_string(max_iters) +
                     " iterations");
}

} // namespace

Vector general_tikhonov_solve(const BlurOperator& op, const Vector& b, const RegularizerL& L,
                              double mu, const SolverOptions& opts, const Vector* row_weights,
                              const Vector* warm_start) {
  if (!(mu > 0.0)) throw InvalidFilter("general_tikhonov_solve: mu must be positive");
  if (b.size() != op.m() || L.cols() != op.m()) {
    throw DimensionMismatch("general_tikhonov_solve: shape disagreement");
  }
  if (row_weights && row_weights->size() != L.rows()) {
    throw DimensionMismatch("general_tikhonov_solve: weight length");
  }
  const Vector rhs = op.apply_vec(b, /*adjoint=*/true);

  const bool dense = opts.mode == SolverOptions::Mode::Dense ||
                     (opts.mode == SolverOptions::Mode::Auto && op.m() <= opts.dense_threshold);
  Vector x;
  if (dense) {
    const Matrix A = op.assemble_dense();
    const Matrix Ld = L.assemble_dense();
    Matrix M = A.transpose() * A;
    if (row_weights) {
      M.noalias() += mu * Ld.transpose() * row_weights->asDiagonal() * Ld;
    } else {
      M.noalias() += mu * Ld.transpose() * Ld;
    }
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() != Eigen::Success) {
      throw NullSpaceOverlap("normal matrix is not positive definite (N(A) and N(L) overlap?)");
    }
    x = llt.solve(rhs);
    x += llt.solve(rhs - M * x);  // one refinement step
    const double rel = (M * x - rhs).norm() / rhs.norm();
    if (!(rel <= 1e-8)) {
      throw NotConverged("dense normal-equation residual " + std::to_string(rel));
    }
  } else {
    Vector diag = op.normal_diagonal() + mu * L.normal_diagonal(row_weights);
    diag = diag.cwiseMax(1e-300);
    x = solve_normal_cg(op, L, mu, rhs, diag, opts, row_weights, warm_start);
  }
  return x;
}

Image tikhonov_fft_solve(const BlurOperator& op, const Image& B, double mu) {
  if (op.kind() != OperatorKind::Bccb) {
    throw WrongVariant("tikhonov_fft_solve needs a BCCB operator");
  }
  if (!(mu > 0.0)) throw InvalidFilter("tikhonov_fft_solve: mu must be positive");
  if (B.rows() != op.p() || B.cols() != op.q()) {
    throw DimensionMismatch("tikhonov_fft_solve: image shape");
  }
  const fft::CMatrix& eig = op.bccb_eigenvalues();
  fft::CMatrix spec = fft::dft2(B);
  spec.array() *= eig.conjugate().array();
  spec.array() /= (eig.cwiseAbs2().array() + mu).template cast<std::complex<double>>();
  fft::dft_2d_inplace(spec, FFTW_BACKWARD);
  spec /= static_cast<double>(spec.size());
  const double re = spec.real().norm();
  const double im = spec.imag().norm();
  if (im > 1e-10 * std::max(re, 1e-300)) {
    throw NotConverged("tikhonov_fft_solve: unexpected imaginary residue");
  }
  return spec.real();
}

Image tikhonov_separable_solve(const SvdFactorization& svd, const Image& B, double mu) {
  if (!svd.is_kron()) {
    throw WrongVariant("tikhonov_separable_solve needs a Kronecker factorization");
  }
  if (!(mu > 0.0)) throw InvalidFilter("tikhonov_separable_solve: mu must be positive");
  // Work in the factor bases: everything inside the parentheses is
  // elementwise on p x q coefficient arrays.
  const Vector beta = svd.project_left(vec(B));
  const Vector& sigma = svd.singular_values();
  Vector coeffs(svd.m());
  for (Index l = 0; l < svd.m(); ++l) {
    coeffs(l) = sigma(l) * beta(l) / (sigma(l) * sigma(l) + mu);
  }
  return unvec(svd.synthesize_right(coeffs), svd.p(), svd.q());
}

TvResult tv_irls_solve(const BlurOperator& op, const Vector& b, const RegularizerL& L,
                       double lambda_tv, const IrlsOptions& opts) {
  if (!(lambda_tv > 0.0)) throw InvalidFilter("tv_irls_solve: lambda must be positive");
  const double eps = opts.epsilon > 0.0
                         ? opts.epsilon
                         : std::max(1e-4 * b.cwiseAbs().maxCoeff(), 1e-300);

  TvResult result;
  result.epsilon = eps;

  const auto record = [&](int iteration, const Vector& x) {
    const Vector Lx = L.apply(x);
    const double penalty = (Lx.array().square() + eps * eps).sqrt().sum();
    const double residual = (op.apply_vec(x) - b).norm();
    // The Lyapunov function of this weight choice carries 1/2 on the data
    // term; each reweighted solve decreases it.
    result.trace.push_back({iteration, 0.5 * residual * residual + lambda_tv * penalty,
                            residual, penalty});
  };

  // Unit-weight start: plain general-form Tikhonov.
  Vector x = general_tikhonov_solve(op, b, L, lambda_tv, opts.inner);
  record(0, x);

  result.converged = false;
  for (int k = 1; k <= opts.max_outer; ++k) {
    const Vector Lx = L.apply(x);
    const Vector weights = (Lx.array().square() + eps * eps).rsqrt().matrix();
    const Vector x_next =
        general_tikhonov_solve(op, b, L, lambda_tv, opts.inner, &weights, &x);
    record(k, x_next);
    const double change = (x_next - x).norm() / std::max(x.norm(), 1e-300);
    x = x_next;
    if (change <= opts.tol) {
      result.converged = true;
      break;
    }
  }
  result.x = std::move(x);
  return result;
}

} // namespace deblur

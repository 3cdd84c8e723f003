#include "deblur/svd_filter.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/SVD>

namespace deblur {

Vector FilterSpec::factors(const Vector& sigma) const {
  const Index m = sigma.size();
  switch (kind) {
    case Kind::Naive:
      return Vector::Ones(m);
    case Kind::Tsvd: {
      if (k < 1 || k > m) {
        throw InvalidFilter("TSVD cutoff " + std::to_string(k) + " outside [1, " +
                            std::to_string(m) + "]");
      }
      Vector phi = Vector::Zero(m);
      phi.head(k).setOnes();
      return phi;
    }
    case Kind::Tikhonov: {
      if (!(lambda > 0.0)) {
        throw InvalidFilter("Tikhonov lambda must be positive");
      }
      return (sigma.array().square() / (sigma.array().square() + lambda * lambda)).matrix();
    }
  }
  throw InvalidFilter("unknown filter kind");
}

SvdFactorization SvdFactorization::dense_of(const BlurOperator& op) {
  Matrix A = op.assemble_dense();  // enforces the m <= 4096 guard
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Dense d{svd.matrixU(), svd.matrixV()};
  return SvdFactorization(std::move(d), svd.singularValues(), op.p(), op.q());
}

SvdFactorization SvdFactorization::kron_of(const BlurOperator& op) {
  Matrix row_factor, col_factor;
  switch (op.kind()) {
    case OperatorKind::SeparableToeplitz:
      row_factor = op.toeplitz_row_factor().realize();
      col_factor = op.toeplitz_col_factor().realize();
      break;
    case OperatorKind::SeparableCirculant:
      row_factor = op.circulant_row_factor().realize();
      col_factor = op.circulant_col_factor().realize();
      break;
    default:
      throw NotSeparable("Kronecker SVD needs a separable operator");
  }
  Eigen::JacobiSVD<Matrix> svd_r(row_factor, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::JacobiSVD<Matrix> svd_c(col_factor, Eigen::ComputeFullU | Eigen::ComputeFullV);

  Kron k;
  k.Ur = svd_r.matrixU();
  k.Vr = svd_r.matrixV();
  k.sr = svd_r.singularValues();
  k.Uc = svd_c.matrixU();
  k.Vc = svd_c.matrixV();
  k.sc = svd_c.singularValues();

  const Index q = k.sr.size();
  const Index p = k.sc.size();
  k.order.reserve(static_cast<std::size_t>(p * q));
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < p; ++j) k.order.emplace_back(i, j);
  // Nonincreasing products; exact ties broken lexicographically in (i, j).
  std::sort(k.order.begin(), k.order.end(), [&](const auto& a, const auto& b) {
    const double sa = k.sr(a.first) * k.sc(a.second);
    const double sb = k.sr(b.first) * k.sc(b.second);
    if (sa != sb) return sa > sb;
    return a < b;
  });
  Vector sigma(p * q);
  for (Index l = 0; l < p * q; ++l) {
    sigma(l) = k.sr(k.order[static_cast<std::size_t>(l)].first) *
               k.sc(k.order[static_cast<std::size_t>(l)].second);
  }
  return SvdFactorization(std::move(k), std::move(sigma), p, q);
}

SvdFactorization svd_of(const BlurOperator& op) {
  return op.is_separable() ? SvdFactorization::kron_of(op) : SvdFactorization::dense_of(op);
}

Vector SvdFactorization::project_left(const Vector& b) const {
  if (b.size() != m()) {
    throw DimensionMismatch("project_left: vector length " + std::to_string(b.size()));
  }
  if (const auto* d = std::get_if<Dense>(&v_)) {
    return d->U.transpose() * b;
  }
  const auto& k = std::get<Kron>(v_);
  // (u_r,i (x) u_c,j)^T vec(B) = (U_c^T B U_r)(j, i)
  const Matrix M = k.Uc.transpose() * unvec(b, p_, q_) * k.Ur;
  Vector beta(m());
  for (Index l = 0; l < m(); ++l) {
    const auto& [i, j] = k.order[static_cast<std::size_t>(l)];
    beta(l) = M(j, i);
  }
  return beta;
}

Vector SvdFactorization::project_right(const Vector& x) const {
  if (x.size() != m()) {
    throw DimensionMismatch("project_right: vector length " + std::to_string(x.size()));
  }
  if (const auto* d = std::get_if<Dense>(&v_)) {
    return d->V.transpose() * x;
  }
  const auto& k = std::get<Kron>(v_);
  const Matrix M = k.Vc.transpose() * unvec(x, p_, q_) * k.Vr;
  Vector out(m());
  for (Index l = 0; l < m(); ++l) {
    const auto& [i, j] = k.order[static_cast<std::size_t>(l)];
    out(l) = M(j, i);
  }
  return out;
}

Vector SvdFactorization::synthesize_right(const Vector& coeffs) const {
  if (coeffs.size() != m()) {
    throw DimensionMismatch("synthesize_right: coefficient length");
  }
  if (const auto* d = std::get_if<Dense>(&v_)) {
    return d->V * coeffs;
  }
  const auto& k = std::get<Kron>(v_);
  Matrix C = Matrix::Zero(p_, q_);
  for (Index l = 0; l < m(); ++l) {
    const auto& [i, j] = k.order[static_cast<std::size_t>(l)];
    C(j, i) = coeffs(l);
  }
  return vec(k.Vc * C * k.Vr.transpose());
}

Vector SvdFactorization::left_vector(Index l) const {
  if (const auto* d = std::get_if<Dense>(&v_)) {
    return d->U.col(l);
  }
  const auto& k = std::get<Kron>(v_);
  const auto& [i, j] = k.order[static_cast<std::size_t>(l)];
  return vec(Matrix(k.Uc.col(j) * k.Ur.col(i).transpose()));
}

Vector SvdFactorization::right_vector(Index l) const {
  if (const auto* d = std::get_if<Dense>(&v_)) {
    return d->V.col(l);
  }
  const auto& k = std::get<Kron>(v_);
  const auto& [i, j] = k.order[static_cast<std::size_t>(l)];
  return vec(Matrix(k.Vc.col(j) * k.Vr.col(i).transpose()));
}

PicardData picard_coefficients(const SvdFactorization& svd, const Vector& b) {
  PicardData data;
  data.sigma = svd.singular_values();
  data.coeffs = svd.project_left(b).cwiseAbs();
  data.ratio = data.coeffs.cwiseQuotient(data.sigma);
  return data;
}

Vector filtered_solve(const SvdFactorization& svd, const Vector& b, const FilterSpec& spec) {
  const Vector& sigma = svd.singular_values();
  const Vector phi = spec.factors(sigma);
  const Vector beta = svd.project_left(b);
  Vector coeffs(svd.m());
  for (Index l = 0; l < svd.m(); ++l) {
    if (phi(l) == 0.0) {
      coeffs(l) = 0.0;
    } else if (sigma(l) == 0.0) {
      throw SingularOperator("filtered_solve: sigma_" + std::to_string(l) +
                             " = 0 with nonzero filter weight");
    } else {
      coeffs(l) = phi(l) * beta(l) / sigma(l);
    }
  }
  return svd.synthesize_right(coeffs);
}

} // namespace deblur

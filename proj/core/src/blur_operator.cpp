#include "deblur/blur_operator.hpp"

#include <fftw3.h>

namespace deblur {

namespace {

using Complex = std::complex<double>;

// Hard cap for explicit m x m assembly.
constexpr Index kDenseGuard = 4096;

// FFT of the first column of a circulant; diagonalizes it.
fft::CVector circulant_symbol(const Vector& first_column) {
  fft::CVector s = first_column.cast<Complex>();
  fft::dft_1d_inplace(s, FFTW_FORWARD);
  return s;
}

// A p x p Toeplitz matrix embeds into a circulant of size 2p whose leading
// p x p block is the original matrix; its symbol makes T x an FFT product.
fft::CVector toeplitz_embedding_symbol(const ToeplitzMatrix& T) {
  const Index p = T.p;
  Vector emb = Vector::Zero(2 * p);
  emb(0) = T.coeff(0);
  for (Index i = 1; i < p; ++i) emb(i) = T.coeff(i);
  for (Index k = 1; k < p; ++k) emb(2 * p - k) = T.coeff(-k);
  return circulant_symbol(emb);
}

// y = C x for the circulant with the given symbol, applied to every column.
void circulant_apply_columns(const fft::CVector& symbol, Matrix& X, bool adjoint) {
  const Index n = X.rows();
  fft::CVector buf(n);
  for (Index j = 0; j < X.cols(); ++j) {
    buf = X.col(j).cast<Complex>();
    fft::dft_1d_inplace(buf, FFTW_FORWARD);
    if (adjoint) {
      buf.array() *= symbol.conjugate().array();
    } else {
      buf.array() *= symbol.array();
    }
    fft::dft_1d_inplace(buf, FFTW_BACKWARD);
    X.col(j) = buf.real() / static_cast<double>(n);
  }
}

// Toeplitz matvec through the 2p embedding: pad, transform, crop.
void toeplitz_apply_columns(const fft::CVector& symbol, Matrix& X, bool adjoint) {
  const Index p = X.rows();
  const Index n = 2 * p;
  fft::CVector buf(n);
  for (Index j = 0; j < X.cols(); ++j) {
    buf.setZero();
    buf.head(p) = X.col(j).cast<Complex>();
    fft::dft_1d_inplace(buf, FFTW_FORWARD);
    if (adjoint) {
      buf.array() *= symbol.conjugate().array();
    } else {
      buf.array() *= symbol.array();
    }
    fft::dft_1d_inplace(buf, FFTW_BACKWARD);
    X.col(j) = buf.head(p).real() / static_cast<double>(n);
  }
}

// Half-sample symmetric extension: ..., x1, x0 | x0, x1, ..., x_{n-1} | x_{n-1}, ...
Index reflect_index(Index i, Index n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -1 - i;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

} // namespace

Matrix ToeplitzMatrix::realize() const {
  Matrix T(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) T(i, j) = coeff(i - j);
  return T;
}

ToeplitzMatrix ToeplitzMatrix::transpose() const {
  ToeplitzMatrix out;
  out.p = p;
  out.t = t.reverse();
  return out;
}

Matrix CirculantMatrix::realize() const {
  Matrix C(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) C(i, j) = c((j - i + p) % p);
  return C;
}

CirculantMatrix CirculantMatrix::transpose() const {
  CirculantMatrix out;
  out.p = p;
  out.c.resize(p);
  for (Index j = 0; j < p; ++j) out.c(j) = c((p - j) % p);
  return out;
}

Vector CirculantMatrix::first_column() const {
  Vector col(p);
  for (Index i = 0; i < p; ++i) col(i) = c((p - i) % p);
  return col;
}

ToeplitzMatrix toeplitz_factor_from_kernel(const Vector& kernel1d, Index p) {
  const Index len = kernel1d.size();
  if (len % 2 == 0 || len > 2 * p - 1) {
    throw KernelTooWide("toeplitz factor: kernel length " + std::to_string(len) +
                        " invalid for dimension " + std::to_string(p));
  }
  const Index hw = (len - 1) / 2;
  ToeplitzMatrix T;
  T.p = p;
  T.t = Vector::Zero(2 * p - 1);
  for (Index d = -hw; d <= hw; ++d) T.t(d + p - 1) = kernel1d(hw + d);
  return T;
}

CirculantMatrix circulant_factor_from_kernel(const Vector& kernel1d, Index p) {
  const Index len = kernel1d.size();
  if (len % 2 == 0 || len > p) {
    throw KernelTooWide("circulant factor: kernel length " + std::to_string(len) +
                        " invalid for dimension " + std::to_string(p));
  }
  const Index hw = (len - 1) / 2;
  // First column: kernel wrapped so its center lands at index 0.
  Vector col = Vector::Zero(p);
  for (Index d = -hw; d <= hw; ++d) col((d + p) % p) += kernel1d(hw + d);
  CirculantMatrix C;
  C.p = p;
  C.c.resize(p);
  for (Index j = 0; j < p; ++j) C.c(j) = col((p - j) % p);
  return C;
}

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Dense: return "dense";
    case OperatorKind::SeparableToeplitz: return "separable_toeplitz";
    case OperatorKind::SeparableCirculant: return "separable_circulant";
    case OperatorKind::Bccb: return "bccb";
    case OperatorKind::ReflexiveConv: return "reflexive_conv";
  }
  return "unknown";
}

const char* to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Zero: return "zero";
    case BoundaryCondition::Periodic: return "periodic";
    case BoundaryCondition::Reflexive: return "reflexive";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& name) {
  if (name == "dense") return OperatorKind::Dense;
  if (name == "separable_toeplitz") return OperatorKind::SeparableToeplitz;
  if (name == "separable_circulant") return OperatorKind::SeparableCirculant;
  if (name == "bccb") return OperatorKind::Bccb;
  if (name == "reflexive_conv") return OperatorKind::ReflexiveConv;
  throw IncompatibleVariant("unknown operator kind: " + name);
}

BoundaryCondition boundary_condition_from_string(const std::string& name) {
  if (name == "zero") return BoundaryCondition::Zero;
  if (name == "periodic") return BoundaryCondition::Periodic;
  if (name == "reflexive") return BoundaryCondition::Reflexive;
  throw IncompatibleVariant("unknown boundary condition: " + name);
}

BlurOperator::BlurOperator(Rep rep, BoundaryCondition bc, Index p, Index q)
    : rep_(std::move(rep)), bc_(bc), p_(p), q_(q) {}

BlurOperator BlurOperator::dense(Matrix A, BoundaryCondition bc, Index p, Index q) {
  if (A.rows() != p * q || A.cols() != p * q) {
    throw DimensionMismatch("dense operator must be pq x pq");
  }
  return BlurOperator(DenseOp{std::move(A)}, bc, p, q);
}

BlurOperator BlurOperator::separable_toeplitz(ToeplitzMatrix row_factor,
                                              ToeplitzMatrix col_factor) {
  SeparableToeplitzOp op;
  op.row_symbol = toeplitz_embedding_symbol(row_factor);
  op.col_symbol = toeplitz_embedding_symbol(col_factor);
  op.row = std::move(row_factor);
  op.col = std::move(col_factor);
  const Index p = op.col.p;
  const Index q = op.row.p;
  return BlurOperator(std::move(op), BoundaryCondition::Zero, p, q);
}

BlurOperator BlurOperator::separable_circulant(CirculantMatrix row_factor,
                                               CirculantMatrix col_factor) {
  SeparableCirculantOp op;
  op.row_symbol = circulant_symbol(row_factor.first_column());
  op.col_symbol = circulant_symbol(col_factor.first_column());
  op.row = std::move(row_factor);
  op.col = std::move(col_factor);
  const Index p = op.col.p;
  const Index q = op.row.p;
  return BlurOperator(std::move(op), BoundaryCondition::Periodic, p, q);
}

BlurOperator BlurOperator::bccb(Matrix psf_shifted) {
  BccbOp op;
  op.eig = fft::dft2(psf_shifted);
  op.a_s = std::move(psf_shifted);
  const Index p = op.a_s.rows();
  const Index q = op.a_s.cols();
  return BlurOperator(std::move(op), BoundaryCondition::Periodic, p, q);
}

BlurOperator BlurOperator::reflexive_conv(Matrix kernel2d, Index p, Index q) {
  if (kernel2d.rows() != kernel2d.cols() || kernel2d.rows() % 2 == 0) {
    throw KernelTooWide("reflexive operator needs a square odd-sized kernel");
  }
  const int hw = static_cast<int>((kernel2d.rows() - 1) / 2);
  if (2 * hw + 1 > std::min(p, q)) {
    throw KernelTooWide("reflexive kernel wider than the image");
  }
  ReflexiveConvOp op{std::move(kernel2d), hw};
  return BlurOperator(std::move(op), BoundaryCondition::Reflexive, p, q);
}

OperatorKind BlurOperator::kind() const {
  switch (rep_.index()) {
    case 0: return OperatorKind::Dense;
    case 1: return OperatorKind::SeparableToeplitz;
    case 2: return OperatorKind::SeparableCirculant;
    case 3: return OperatorKind::Bccb;
    default: return OperatorKind::ReflexiveConv;
  }
}

bool BlurOperator::is_separable() const {
  return kind() == OperatorKind::SeparableToeplitz || kind() == OperatorKind::SeparableCirculant;
}

Image BlurOperator::apply(const Image& X, bool adjoint) const {
  if (X.rows() != p_ || X.cols() != q_) {
    throw DimensionMismatch("apply: image is " + std::to_string(X.rows()) + "x" +
                            std::to_string(X.cols()) + ", operator expects " +
                            std::to_string(p_) + "x" + std::to_string(q_));
  }
  return std::visit(
      [&](const auto& op) -> Image {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          Vector y = adjoint ? Vector(op.A.transpose() * vec(X)) : Vector(op.A * vec(X));
          return unvec(y, p_, q_);
        } else if constexpr (std::is_same_v<T, SeparableToeplitzOp>) {
          // vec(A_c X A_r^T) = (A_r (x) A_c) vec(X)
          Matrix Z = X;
          toeplitz_apply_columns(op.col_symbol, Z, adjoint);
          Matrix Zt = Z.transpose();
          toeplitz_apply_columns(op.row_symbol, Zt, adjoint);
          return Zt.transpose();
        } else if constexpr (std::is_same_v<T, SeparableCirculantOp>) {
          Matrix Z = X;
          circulant_apply_columns(op.col_symbol, Z, adjoint);
          Matrix Zt = Z.transpose();
          circulant_apply_columns(op.row_symbol, Zt, adjoint);
          return Zt.transpose();
        } else if constexpr (std::is_same_v<T, BccbOp>) {
          fft::CMatrix spec = fft::dft2(X);
          if (adjoint) {
            spec.array() *= op.eig.conjugate().array();
          } else {
            spec.array() *= op.eig.array();
          }
          return fft::idft2_real(spec);
        } else {
          const int hw = op.half_width;
          const auto& K = op.kernel;
          Image Y(p_, q_);
          if (!adjoint) {
            for (Index j = 0; j < q_; ++j) {
              for (Index i = 0; i < p_; ++i) {
                double acc = 0.0;
                for (Index dj = -hw; dj <= hw; ++dj) {
                  const Index sj = reflect_index(j - dj, q_);
                  for (Index di = -hw; di <= hw; ++di) {
                    const Index si = reflect_index(i - di, p_);
                    acc += K(di + hw, dj + hw) * X(si, sj);
                  }
                }
                Y(i, j) = acc;
              }
            }
          } else {
            // Transpose of crop(conv(pad(x))): correlate into the padded
            // domain, then fold reflected samples back onto their sources.
            Matrix padded = Matrix::Zero(p_ + 2 * hw, q_ + 2 * hw);
            for (Index v = 0; v < padded.cols(); ++v) {
              for (Index u = 0; u < padded.rows(); ++u) {
                double acc = 0.0;
                for (Index dj = -hw; dj <= hw; ++dj) {
                  const Index j = v - hw + dj;
                  if (j < 0 || j >= q_) continue;
                  for (Index di = -hw; di <= hw; ++di) {
                    const Index i = u - hw + di;
                    if (i < 0 || i >= p_) continue;
                    acc += K(di + hw, dj + hw) * X(i, j);
                  }
                }
                padded(u, v) = acc;
              }
            }
            Y.setZero();
            for (Index v = 0; v < padded.cols(); ++v) {
              const Index j = reflect_index(v - hw, q_);
              for (Index u = 0; u < padded.rows(); ++u) {
                Y(reflect_index(u - hw, p_), j) += padded(u, v);
              }
            }
          }
          return Y;
        }
      },
      rep_);
}

Vector BlurOperator::apply_vec(const Vector& x, bool adjoint) const {
  return vec(apply(unvec(x, p_, q_), adjoint));
}

Matrix BlurOperator::assemble_dense() const {
  if (m() > kDenseGuard) {
    throw TooLarge("assemble_dense: m = " + std::to_string(m()) + " exceeds guard " +
                   std::to_string(kDenseGuard));
  }
  switch (kind()) {
    case OperatorKind::Dense:
      return std::get<DenseOp>(rep_).A;
    case OperatorKind::SeparableToeplitz: {
      const auto& op = std::get<SeparableToeplitzOp>(rep_);
      return kronecker(op.row.realize(), op.col.realize());
    }
    case OperatorKind::SeparableCirculant: {
      const auto& op = std::get<SeparableCirculantOp>(rep_);
      return kronecker(op.row.realize(), op.col.realize());
    }
    default: {
      // Column k is the blur of single pixel k.
      Matrix A(m(), m());
      Image E = Image::Zero(p_, q_);
      for (Index k = 0; k < m(); ++k) {
        E(k % p_, k / p_) = 1.0;
        A.col(k) = vec(apply(E));
        E(k % p_, k / p_) = 0.0;
      }
      return A;
    }
  }
}

Vector BlurOperator::normal_diagonal() const {
  return std::visit(
      [&](const auto& op) -> Vector {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          return op.A.colwise().squaredNorm().transpose();
        } else if constexpr (std::is_same_v<T, SeparableToeplitzOp> ||
                             std::is_same_v<T, SeparableCirculantOp>) {
          // Column (i, j) of A_r (x) A_c is a_r[:,j] (x) a_c[:,i].
          const Vector dr = op.row.realize().colwise().squaredNorm().transpose();
          const Vector dc = op.col.realize().colwise().squaredNorm().transpose();
          Vector d(m());
          for (Index j = 0; j < q_; ++j) d.segment(j * p_, p_) = dr(j) * dc;
          return d;
        } else if constexpr (std::is_same_v<T, BccbOp>) {
          // A^T A is BCCB with constant diagonal mean(|eig|^2).
          const double mean = op.eig.cwiseAbs2().sum() / static_cast<double>(m());
          return Vector::Constant(m(), mean);
        } else {
          const int hw = op.half_width;
          const auto& K = op.kernel;
          Vector d(m());
          for (Index b = 0; b < q_; ++b) {
            // Padded coordinates whose reflection reads column b / row a.
            std::vector<Index> vs{b};
            if (b < hw) vs.push_back(-1 - b);
            if (b >= q_ - hw) vs.push_back(2 * q_ - 1 - b);
            for (Index a = 0; a < p_; ++a) {
              std::vector<Index> us{a};
              if (a < hw) us.push_back(-1 - a);
              if (a >= p_ - hw) us.push_back(2 * p_ - 1 - a);
              double sum = 0.0;
              for (Index i = a - 2 * hw - 1; i <= a + 2 * hw + 1; ++i) {
                if (i < 0 || i >= p_) continue;
                for (Index j = b - 2 * hw - 1; j <= b + 2 * hw + 1; ++j) {
                  if (j < 0 || j >= q_) continue;
                  double val = 0.0;
                  for (Index u : us) {
                    const Index di = i - u;
                    if (di < -hw || di > hw) continue;
                    for (Index v : vs) {
                      const Index dj = j - v;
                      if (dj < -hw || dj > hw) continue;
                      val += K(di + hw, dj + hw);
                    }
                  }
                  sum += val * val;
                }
              }
              d(b * p_ + a) = sum;
            }
          }
          return d;
        }
      },
      rep_);
}

const ToeplitzMatrix& BlurOperator::toeplitz_row_factor() const {
  if (auto* op = std::get_if<SeparableToeplitzOp>(&rep_)) return op->row;
  throw WrongVariant("operator has no Toeplitz factors");
}

const ToeplitzMatrix& BlurOperator::toeplitz_col_factor() const {
  if (auto* op = std::get_if<SeparableToeplitzOp>(&rep_)) return op->col;
  throw WrongVariant("operator has no Toeplitz factors");
}

const CirculantMatrix& BlurOperator::circulant_row_factor() const {
  if (auto* op = std::get_if<SeparableCirculantOp>(&rep_)) return op->row;
  throw WrongVariant("operator has no circulant factors");
}

const CirculantMatrix& BlurOperator::circulant_col_factor() const {
  if (auto* op = std::get_if<SeparableCirculantOp>(&rep_)) return op->col;
  throw WrongVariant("operator has no circulant factors");
}

const fft::CMatrix& BlurOperator::bccb_eigenvalues() const {
  if (auto* op = std::get_if<BccbOp>(&rep_)) return op->eig;
  throw WrongVariant("operator is not BCCB");
}

const Matrix& BlurOperator::shifted_psf() const {
  if (auto* op = std::get_if<BccbOp>(&rep_)) return op->a_s;
  throw WrongVariant("operator is not BCCB");
}

BlurOperator build_operator(const GaussianPsf& psf, BoundaryCondition bc, Index p, Index q,
                            VariantHint hint) {
  if (hint == VariantHint::Auto) {
    switch (bc) {
      case BoundaryCondition::Zero: hint = VariantHint::SeparableToeplitz; break;
      case BoundaryCondition::Periodic: hint = VariantHint::SeparableCirculant; break;
      case BoundaryCondition::Reflexive: hint = VariantHint::MatvecOnly; break;
    }
  }
  const Vector k1 = psf.normalized_kernel_1d();
  switch (hint) {
    case VariantHint::SeparableToeplitz:
      if (bc != BoundaryCondition::Zero) {
        throw IncompatibleVariant("separable Toeplitz requires zero boundary conditions");
      }
      return BlurOperator::separable_toeplitz(toeplitz_factor_from_kernel(k1, q),
                                              toeplitz_factor_from_kernel(k1, p));
    case VariantHint::SeparableCirculant:
      if (bc != BoundaryCondition::Periodic) {
        throw IncompatibleVariant("separable circulant requires periodic boundary conditions");
      }
      return BlurOperator::separable_circulant(circulant_factor_from_kernel(k1, q),
                                               circulant_factor_from_kernel(k1, p));
    case VariantHint::Bccb: {
      if (bc != BoundaryCondition::Periodic) {
        throw IncompatibleVariant("BCCB requires periodic boundary conditions");
      }
      const int hw = psf.half_width;
      if (2 * hw + 1 > std::min(p, q)) {
        throw KernelTooWide("PSF wider than the image");
      }
      Matrix a_s = Matrix::Zero(p, q);
      for (int di = -hw; di <= hw; ++di) {
        for (int dj = -hw; dj <= hw; ++dj) {
          a_s((di + p) % p, (dj + q) % q) = psf.kernel2d(di + hw, dj + hw);
        }
      }
      return BlurOperator::bccb(std::move(a_s));
    }
    case VariantHint::MatvecOnly:
      if (bc != BoundaryCondition::Reflexive) {
        throw IncompatibleVariant("matvec-only representation is the reflexive fallback");
      }
      return BlurOperator::reflexive_conv(psf.kernel2d, p, q);
    case VariantHint::Dense: {
      if (p * q > kDenseGuard) {
        throw TooLarge("dense operator exceeds the m <= 4096 guard");
      }
      BlurOperator natural =
          bc == BoundaryCondition::Reflexive
              ? BlurOperator::reflexive_conv(psf.kernel2d, p, q)
              : build_operator(psf, bc, p, q, VariantHint::Auto);
      return BlurOperator::dense(natural.assemble_dense(), bc, p, q);
    }
    case VariantHint::Auto: break;
  }
  throw IncompatibleVariant("unresolved operator variant");
}

Matrix kronecker(const Matrix& B, const Matrix& C) {
  Matrix K(B.rows() * C.rows(), B.cols() * C.cols());
  for (Index i = 0; i < B.rows(); ++i) {
    for (Index j = 0; j < B.cols(); ++j) {
      K.block(i * C.rows(), j * C.cols(), C.rows(), C.cols()) = B(i, j) * C;
    }
  }
  return K;
}

} // namespace deblur

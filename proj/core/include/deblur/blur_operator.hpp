#ifndef DEBLUR_BLUR_OPERATOR_HPP
#define DEBLUR_BLUR_OPERATOR_HPP

#include <variant>

#include "deblur/fft.hpp"
#include "deblur/image.hpp"
#include "deblur/psf.hpp"

namespace deblur {

/// What the model assumes about light crossing the edge of the field of
/// view: lost (zero), wrapped to the opposite side (periodic), or reflected
/// back in (reflexive).
enum class BoundaryCondition { Zero, Periodic, Reflexive };

/// Toeplitz matrix of dimension p, stored by its diagonal coefficients:
/// T(k, l) = t_{k-l}, with t_d kept at index d + p - 1 (d = -(p-1)..p-1).
struct ToeplitzMatrix {
  Index p = 0;
  Vector t;

  Matrix realize() const;
  ToeplitzMatrix transpose() const;
  /// Coefficient at signed offset d.
  double coeff(Index d) const { return t(d + p - 1); }
};

/// Circulant matrix stored by its first row; every row is the cyclic right
/// shift of the one above: C(i, j) = c[(j - i) mod p].
struct CirculantMatrix {
  Index p = 0;
  Vector c;

  Matrix realize() const;
  CirculantMatrix transpose() const;
  Vector first_column() const;
};

/// Toeplitz factor for a 1-D blur with zero boundary conditions: kernel mass
/// leaving the field of view is lost, so boundary rows sum short. The kernel
/// must have odd length <= 2p-1 (KernelTooWide).
ToeplitzMatrix toeplitz_factor_from_kernel(const Vector& kernel1d, Index p);

/// Circulant factor for periodic boundaries: the kernel is wrapped so its
/// center lands on the main diagonal, and every row sums to the kernel sum.
/// Odd length <= p required (KernelTooWide).
CirculantMatrix circulant_factor_from_kernel(const Vector& kernel1d, Index p);

enum class OperatorKind { Dense, SeparableToeplitz, SeparableCirculant, Bccb, ReflexiveConv };

const char* to_string(OperatorKind kind);
const char* to_string(BoundaryCondition bc);
OperatorKind operator_kind_from_string(const std::string& name);
BoundaryCondition boundary_condition_from_string(const std::string& name);

/// The blur operator A acting on p x q images (an m x m linear map on their
/// vectorizations, m = pq). One logical map, several representations:
///
///   Dense               explicit matrix, any boundary condition
///   SeparableToeplitz   A = A_r (x) A_c with Toeplitz factors (zero bc);
///                       applied as A_c X A_r^T, factor matvecs run through
///                       a circulant embedding of size 2p
///   SeparableCirculant  circulant factors (periodic bc)
///   Bccb                block-circulant with circulant blocks, stored by
///                       its eigenvalue array DFT2(a_s) where a_s is the
///                       PSF wrapped so its center sits at index (0, 0)
///   ReflexiveConv       matvec-only convolution against a symmetric
///                       (half-sample) extension of the image
///
/// Operators are immutable after construction and safe to apply
/// concurrently.
class BlurOperator {
public:
  static BlurOperator dense(Matrix A, BoundaryCondition bc, Index p, Index q);
  static BlurOperator separable_toeplitz(ToeplitzMatrix row_factor, ToeplitzMatrix col_factor);
  static BlurOperator separable_circulant(CirculantMatrix row_factor, CirculantMatrix col_factor);
  /// From the wrapped PSF array a_s (p x q).
  static BlurOperator bccb(Matrix psf_shifted);
  static BlurOperator reflexive_conv(Matrix kernel2d, Index p, Index q);

  /// A X (or A^T X). Throws DimensionMismatch on shape disagreement.
  Image apply(const Image& X, bool adjoint = false) const;
  Vector apply_vec(const Vector& x, bool adjoint = false) const;

  /// Explicit m x m matrix; every column is a blurred single pixel.
  /// Guarded at m <= 4096 (TooLarge).
  Matrix assemble_dense() const;

  /// diag(A^T A); the Jacobi preconditioner building block.
  Vector normal_diagonal() const;

  OperatorKind kind() const;
  BoundaryCondition bc() const { return bc_; }
  Index p() const { return p_; }
  Index q() const { return q_; }
  Index m() const { return p_ * q_; }
  bool is_separable() const;

  /// Factor accessors; WrongVariant when the representation lacks them.
  const ToeplitzMatrix& toeplitz_row_factor() const;
  const ToeplitzMatrix& toeplitz_col_factor() const;
  const CirculantMatrix& circulant_row_factor() const;
  const CirculantMatrix& circulant_col_factor() const;
  /// Bccb eigenvalue array DFT2(a_s).
  const fft::CMatrix& bccb_eigenvalues() const;
  const Matrix& shifted_psf() const;

private:
  struct DenseOp {
    Matrix A;
  };
  struct SeparableToeplitzOp {
    ToeplitzMatrix row, col;
    fft::CVector row_symbol, col_symbol;  // FFT of the circulant embeddings
  };
  struct SeparableCirculantOp {
    CirculantMatrix row, col;
    fft::CVector row_symbol, col_symbol;  // FFT of the first columns
  };
  struct BccbOp {
    Matrix a_s;
    fft::CMatrix eig;
  };
  struct ReflexiveConvOp {
    Matrix kernel;
    int half_width;
  };

  using Rep = std::variant<DenseOp, SeparableToeplitzOp, SeparableCirculantOp,
                           BccbOp, ReflexiveConvOp>;

  BlurOperator(Rep rep, BoundaryCondition bc, Index p, Index q);

  Rep rep_;
  BoundaryCondition bc_;
  Index p_, q_;
};

/// Requested representation for build_operator; Auto picks the structured
/// variant natural for the boundary condition.
enum class VariantHint { Auto, Dense, SeparableToeplitz, SeparableCirculant, Bccb, MatvecOnly };

/// Build the blur operator for a PSF under the given boundary condition.
/// Compatibility: SeparableToeplitz needs zero bc, SeparableCirculant/Bccb
/// need periodic, MatvecOnly needs reflexive; Dense works for all
/// (IncompatibleVariant otherwise).
BlurOperator build_operator(const GaussianPsf& psf, BoundaryCondition bc, Index p, Index q,
                            VariantHint hint = VariantHint::Auto);

/// Kronecker product B (x) C in the block layout b_ij * C.
Matrix kronecker(const Matrix& B, const Matrix& C);

} // namespace deblur

#endif

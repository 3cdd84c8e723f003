#ifndef DEBLUR_SVD_FILTER_HPP
#define DEBLUR_SVD_FILTER_HPP

#include <variant>
#include <vector>

#include "deblur/blur_operator.hpp"
#include "deblur/image.hpp"

namespace deblur {

/// Spectral filter shaping the regularized solution
/// x = sum_l phi_l (u_l^T b / sigma_l) v_l.
struct FilterSpec {
  enum class Kind { Naive, Tsvd, Tikhonov };
  Kind kind = Kind::Naive;
  Index k = 0;          // TSVD cutoff, 1 <= k <= m
  double lambda = 0.0;  // Tikhonov parameter, > 0

  static FilterSpec naive() { return {Kind::Naive, 0, 0.0}; }
  static FilterSpec tsvd(Index k) { return {Kind::Tsvd, k, 0.0}; }
  static FilterSpec tikhonov(double lambda) { return {Kind::Tikhonov, 0, lambda}; }

  /// Filter factors for the given (sorted) singular values: all ones for
  /// Naive, a 0/1 cutoff for TSVD, sigma^2/(sigma^2+lambda^2) for Tikhonov.
  Vector factors(const Vector& sigma) const;
};

/// Picard-condition diagnostics in sorted singular-value order.
struct PicardData {
  Vector sigma;   // singular values
  Vector coeffs;  // |u_l^T b|
  Vector ratio;   // |u_l^T b| / sigma_l
};

/// SVD of a blur operator. Dense factorizations hold explicit U, V; the
/// Kronecker form keeps only the factor SVDs
///   A_r (x) A_c = (U_r (x) U_c)(S_r (x) S_c)(V_r (x) V_c)^T
/// plus the permutation sorting the products sigma_r,i * sigma_c,j, and
/// realizes singular vectors on demand as outer products. Both forms expose
/// the same coefficient-space interface so filters never care which one
/// they got.
class SvdFactorization {
public:
  /// Dense SVD of any operator; guarded at m <= 4096 (TooLarge).
  static SvdFactorization dense_of(const BlurOperator& op);
  /// Factor SVDs of a separable operator (NotSeparable otherwise).
  static SvdFactorization kron_of(const BlurOperator& op);

  Index m() const { return p_ * q_; }
  Index p() const { return p_; }
  Index q() const { return q_; }
  bool is_kron() const { return v_.index() == 1; }

  /// Nonincreasing singular values.
  const Vector& singular_values() const { return sigma_; }

  /// U^T b, in sorted order.
  Vector project_left(const Vector& b) const;
  /// V^T x, in sorted order.
  Vector project_right(const Vector& x) const;
  /// sum_l c_l v_l from sorted coefficients.
  Vector synthesize_right(const Vector& coeffs) const;

  /// Individual singular vectors (realized lazily for the Kronecker form).
  Vector left_vector(Index l) const;
  Vector right_vector(Index l) const;

private:
  struct Dense {
    Matrix U, V;
  };
  struct Kron {
    Matrix Ur, Vr, Uc, Vc;
    Vector sr, sc;
    // order[l] = (row-factor index i, col-factor index j) of the l-th
    // largest product.
    std::vector<std::pair<Index, Index>> order;
  };

  SvdFactorization(std::variant<Dense, Kron> v, Vector sigma, Index p, Index q)
      : v_(std::move(v)), sigma_(std::move(sigma)), p_(p), q_(q) {}

  std::variant<Dense, Kron> v_;
  Vector sigma_;
  Index p_, q_;
};

/// Kronecker SVD when the operator is separable, dense otherwise.
SvdFactorization svd_of(const BlurOperator& op);

/// |u_l^T b| and |u_l^T b| / sigma_l in sorted order.
PicardData picard_coefficients(const SvdFactorization& svd, const Vector& b);

/// Spectral-filter solve. Throws SingularOperator when a mode with nonzero
/// filter weight has sigma_l = 0.
Vector filtered_solve(const SvdFactorization& svd, const Vector& b, const FilterSpec& spec);

} // namespace deblur

#endif

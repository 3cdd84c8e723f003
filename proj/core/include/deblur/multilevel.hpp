#ifndef DEBLUR_MULTILEVEL_HPP
#define DEBLUR_MULTILEVEL_HPP

#include <string>
#include <vector>

#include "deblur/blur_operator.hpp"
#include "deblur/image.hpp"
#include "deblur/regularization.hpp"

namespace deblur {

/// Low-pass half of the Haar wavelet transform: the (p/2) x p matrix whose
/// rows hold 1/sqrt(2) in adjacent column pairs. Restriction of images and
/// operators is R = W1 (x) W1 with prolongation P = R^T.
struct HaarRestriction {
  Index p = 0;
  Matrix W1;

  /// Full orthonormal transform [W1; W2], W2 carrying the +/- detail rows.
  Matrix full() const;
};

/// Throws OddDimension unless p is even and >= 2.
HaarRestriction haar_w1(Index p);

/// W1 X W1^T, halving both dimensions; equals unvec(R vec(X)).
Image restrict_image(const Image& X);

/// W1^T X W1, doubling both dimensions (the interpolation P applied to a
/// coarse image).
Image prolong_image(const Image& X);

/// Theorem-backed structure-preserving coarsening: W1 T W1^T of a Toeplitz
/// matrix is again Toeplitz; the coarse Toeplitz vector comes from the
/// stencil t~_k = t_k/2 + t_{k+1} + t_{k+2}/2 sampled at every second entry.
/// Input is the length 2p-1 Toeplitz vector, p a power of two
/// (NotPowerOfTwo); output has length 2(p/2)-1.
Vector coarsen_toeplitz(const Vector& t, Index p);

/// W1 C W1^T of a circulant matrix is circulant; returns its first row from
/// the wrapped three-point stencil on the fine first row.
Vector coarsen_circulant(const Vector& c, Index p);

/// The coarse systems A^(n+1) = R A^(n) P, b^(n+1) = R b^(n), built by
/// coarsening the Kronecker factors independently so the structure tag is
/// inherited at every level.
struct LevelHierarchy {
  struct Level {
    BlurOperator op;
    Image b;
    Index p = 0;
  };
  std::vector<Level> levels;

  Index depth() const { return static_cast<Index>(levels.size()) - 1; }
};

/// Build a depth-L hierarchy from a separable operator on a square
/// power-of-two image. Requires L <= s-2 so the coarsest level keeps at
/// least 4x4 pixels (TooDeep), and a separable operator (NotSeparable).
LevelHierarchy build_hierarchy(const BlurOperator& op, const Image& b, Index depth);

enum class CoarseMethod { Tikhonov, Tv };

/// Regularization-parameter choice at a coarse level. The discrepancy form
/// estimates the coarse noise norm as ||R^n e|| when the simulated noise
/// image is available, and delta / 2^n otherwise.
struct LevelSelector {
  enum class Kind { Discrepancy, Fixed };
  Kind kind = Kind::Discrepancy;
  double value = 0.0;          // level-0 delta, or the fixed mu
  const Image* noise = nullptr;
  double tau = 1.0;
};

struct MultilevelSolveResult {
  Image x;              // reconstruction at the requested level
  double mu = 0.0;      // penalty multiplier actually used
  double delta = 0.0;   // coarse noise estimate (discrepancy selector)
  bool tv_converged = true;
};

/// Solve the level-n system with Tikhonov (through the Kronecker SVD) or
/// TV-IRLS. Level 0 reproduces the flat solver output.
MultilevelSolveResult multilevel_solve(const LevelHierarchy& h, Index level,
                                       CoarseMethod method, const LevelSelector& selector,
                                       const IrlsOptions& tv_opts = {});

/// Text manifest for regression testing: per level p, structure tag, and a
/// checksum of the defining Toeplitz/circulant vectors.
std::string hierarchy_manifest(const LevelHierarchy& h);

} // namespace deblur

#endif

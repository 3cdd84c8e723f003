#ifndef DEBLUR_IMAGE_HPP
#define DEBLUR_IMAGE_HPP

#include <Eigen/Core>

#include "deblur/errors.hpp"

namespace deblur {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A grayscale image is a p x q matrix of real intensities. Pixel math is
/// done in double precision throughout; quantization happens only at file
/// I/O. Eigen's column-major storage matches the column-stacking order used
/// by every operator in this library, so vec/unvec are plain reinterprets.
using Image = Eigen::MatrixXd;

/// Column-stacking vectorization: (X11,...,Xp1, X12,...,Xp2, ..., Xpq).
Vector vec(const Image& X);

/// Inverse of vec. Throws LengthMismatch unless x.size() == p*q.
Image unvec(const Vector& x, Index p, Index q);

/// ||x - x_ref||_2 / ||x_ref||_2. Throws ZeroReference when ||x_ref|| == 0
/// and LengthMismatch on size disagreement.
double relative_error(const Vector& x, const Vector& x_ref);
double relative_error(const Image& X, const Image& X_ref);

/// Quantities reported for a reconstruction.
struct ErrorReport {
  double relative_error = 0.0;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
};

} // namespace deblur

#endif

#ifndef DEBLUR_FFT_HPP
#define DEBLUR_FFT_HPP

#include <complex>

#include <Eigen/Core>

#include "deblur/image.hpp"

namespace deblur::fft {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Thin FFTW wrapper. Transforms are unnormalized: idft(dft(x)) == n * x.
// Plans are cached per (shape, direction) behind a mutex; execution uses
// per-call buffers, so concurrent transforms are safe.

/// In-place unnormalized 1-D transform; sign -1 forward, +1 backward.
void dft_1d_inplace(CVector& v, int sign);

/// In-place unnormalized 2-D transform of a column-major matrix.
void dft_2d_inplace(CMatrix& M, int sign);

/// Forward 2-D transform of a real matrix.
CMatrix dft2(const Matrix& X);

/// Normalized inverse of dft2, real part. The discarded imaginary residue of
/// a well-formed spectrum is at roundoff level.
Matrix idft2_real(const CMatrix& Xhat);

} // namespace deblur::fft

#endif

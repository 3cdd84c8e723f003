#ifndef DEBLUR_TEST_SUPPORT_HPP
#define DEBLUR_TEST_SUPPORT_HPP

#include <random>

#include "deblur/image.hpp"

// Independent oracles for the structured-operator tests. Everything here is
// assembled entrywise from first principles, never through the library's
// fast paths, so agreement checks are meaningful.
namespace deblur::testing {

// Kronecker product by the block formula: blocks b_ij * C.
inline Matrix kron_oracle(const Matrix& B, const Matrix& C) {
  Matrix K = Matrix::Zero(B.rows() * C.rows(), B.cols() * C.cols());
  for (Index i = 0; i < B.rows(); ++i)
    for (Index j = 0; j < B.cols(); ++j)
      for (Index k = 0; k < C.rows(); ++k)
        for (Index l = 0; l < C.cols(); ++l)
          K(i * C.rows() + k, j * C.cols() + l) = B(i, j) * C(k, l);
  return K;
}

// Toeplitz realization straight from T(k, l) = t_{k-l}.
inline Matrix toeplitz_oracle(const Vector& t, Index p) {
  Matrix T(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) T(i, j) = t(i - j + p - 1);
  return T;
}

// Circulant realization from the first row, each row a cyclic right shift.
inline Matrix circulant_oracle(const Vector& c, Index p) {
  Matrix C(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) C(i, j) = c(((j - i) % p + p) % p);
  return C;
}

// Haar low-pass block with rows (.., 1/sqrt2, 1/sqrt2, ..).
inline Matrix haar_w1_oracle(Index p) {
  Matrix W1 = Matrix::Zero(p / 2, p);
  for (Index i = 0; i < p / 2; ++i) {
    W1(i, 2 * i) = W1(i, 2 * i + 1) = 1.0 / std::sqrt(2.0);
  }
  return W1;
}

inline Matrix random_matrix(Index rows, Index cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = dist(gen);
  return M;
}

inline Vector random_vector(Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = dist(gen);
  return v;
}

} // namespace deblur::testing

#endif

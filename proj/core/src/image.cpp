#include "deblur/image.hpp"

namespace deblur {

Vector vec(const Image& X) {
  return Eigen::Map<const Vector>(X.data(), X.size());
}

Image unvec(const Vector& x, Index p, Index q) {
  if (p < 1 || q < 1 || x.size() != p * q) {
    throw LengthMismatch("unvec: vector of length " + std::to_string(x.size()) +
                         " cannot fill a " + std::to_string(p) + "x" +
                         std::to_string(q) + " image");
  }
  return Eigen::Map<const Matrix>(x.data(), p, q);
}

double relative_error(const Vector& x, const Vector& x_ref) {
  if (x.size() != x_ref.size()) {
    throw LengthMismatch("relative_error: size mismatch");
  }
  const double ref_norm = x_ref.norm();
  if (ref_norm == 0.0) {
    throw ZeroReference("relative_error: reference has zero norm");
  }
  return (x - x_ref).norm() / ref_norm;
}

double relative_error(const Image& X, const Image& X_ref) {
  if (X.rows() != X_ref.rows() || X.cols() != X_ref.cols()) {
    throw LengthMismatch("relative_error: image shape mismatch");
  }
  return relative_error(vec(X), vec(X_ref));
}

} // namespace deblur

#include "deblur/psf.hpp"

#include <cmath>

namespace deblur {

Vector gaussian_kernel_1d(int half_width, double s) {
  if (!(s > 0.0)) {
    throw InvalidSpread("gaussian_kernel_1d: spread must be positive, got " +
                        std::to_string(s));
  }
  if (half_width < 0) {
    throw InvalidSpread("gaussian_kernel_1d: negative half_width");
  }
  Vector k(2 * half_width + 1);
  for (int d = -half_width; d <= half_width; ++d) {
    const double z = static_cast<double>(d) / s;
    k(d + half_width) = std::exp(-0.5 * z * z);
  }
  return k;
}

GaussianPsf gaussian_psf_2d(int half_width, double s) {
  GaussianPsf psf;
  psf.s = s;
  psf.half_width = half_width;
  psf.kernel1d = gaussian_kernel_1d(half_width, s);
  Matrix raw = psf.kernel1d * psf.kernel1d.transpose();
  psf.normalization = raw.sum();
  psf.kernel2d = raw / psf.normalization;
  return psf;
}

Image generate_test_image(SceneKind kind, Index p) {
  if (p < 1) {
    throw UnsupportedSize("generate_test_image: p must be >= 1");
  }
  Image X = Image::Zero(p, p);
  switch (kind) {
    case SceneKind::SinglePixel:
      X(p / 2, p / 2) = 1.0;
      return X;
    case SceneKind::H: {
      if (p < 8) {
        throw UnsupportedSize("generate_test_image: H scene needs p >= 8");
      }
      const Index w = p / 8;           // stroke width
      const Index top = p / 8;         // vertical extent of the bars
      const Index bottom = p - p / 8;
      const Index left = p / 4;        // left bar [left, left+w)
      const Index right = p - p / 4;   // right bar [right-w, right)
      const Index bar_top = (p - w) / 2;
      for (Index i = top; i < bottom; ++i) {
        for (Index j = left; j < left + w; ++j) X(i, j) = 1.0;
        for (Index j = right - w; j < right; ++j) X(i, j) = 1.0;
      }
      for (Index i = bar_top; i < bar_top + w; ++i) {
        for (Index j = left; j < right; ++j) X(i, j) = 1.0;
      }
      return X;
    }
  }
  throw UnsupportedSize("generate_test_image: unknown scene kind");
}

const char* to_string(SceneKind kind) {
  return kind == SceneKind::H ? "H" : "single_pixel";
}

SceneKind scene_kind_from_string(const std::string& name) {
  if (name == "H" || name == "h") return SceneKind::H;
  if (name == "single_pixel") return SceneKind::SinglePixel;
  throw UnsupportedSize("unknown scene kind: " + name);
}

} // namespace deblur

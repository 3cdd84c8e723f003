#ifndef DEBLUR_PSF_HPP
#define DEBLUR_PSF_HPP

#include "deblur/image.hpp"

namespace deblur {

/// Truncated, normalized Gaussian point-spread function. The light leaving
/// one pixel lands on its neighbours with weight
///
///   (1/N) exp(-(di/s)^2 / 2) exp(-(dj/s)^2 / 2),
///
/// which factors into one-dimensional profiles; that separability is what
/// every structured operator in this library exploits. The infinite support
/// is truncated at |d| <= half_width and renormalized so the 2-D kernel sums
/// to exactly 1.
struct GaussianPsf {
  double s = 1.0;
  int half_width = 0;
  /// Unnormalized 1-D profile, entry d+half_width = exp(-(d/s)^2/2).
  Vector kernel1d;
  /// Normalized 2-D kernel, (2*half_width+1)^2 entries summing to 1.
  Matrix kernel2d;
  /// Normalization N: sum of the raw 2-D products.
  double normalization = 1.0;

  int size() const { return 2 * half_width + 1; }
  /// 1-D factor scaled to unit sum, so the outer product of two copies
  /// reproduces kernel2d exactly.
  Vector normalized_kernel_1d() const { return kernel1d / kernel1d.sum(); }
};

/// Default truncation radius: essentially all mass lies within 4 spreads.
inline int default_half_width(double s) { return static_cast<int>(std::ceil(4.0 * s)); }

/// Raw 1-D Gaussian samples exp(-(d/s)^2/2), d = -half_width..half_width.
/// Throws InvalidSpread for s <= 0.
Vector gaussian_kernel_1d(int half_width, double s);

/// Normalized separable 2-D PSF. Throws InvalidSpread for s <= 0.
GaussianPsf gaussian_psf_2d(int half_width, double s);

/// Synthetic test scenes.
enum class SceneKind { H, SinglePixel };

/// p x p scene: a centered block-letter H (stroke width p/8, binary {0,1}),
/// or a single illuminated pixel. The H needs p >= 8 (UnsupportedSize).
Image generate_test_image(SceneKind kind, Index p);

const char* to_string(SceneKind kind);
SceneKind scene_kind_from_string(const std::string& name);

} // namespace deblur

#endif

#ifndef DEBLUR_NOISE_HPP
#define DEBLUR_NOISE_HPP

#include <cstdint>
#include <string>

#include "deblur/image.hpp"

namespace deblur {

/// Measurement-noise description, parseable from CLI strings such as
/// "gaussian:0.001", "poisson:1e5", "saltpepper:0.05".
struct NoiseSpec {
  enum class Kind { GaussianWhite, Poisson, SaltPepper };
  Kind kind = Kind::GaussianWhite;
  double level = 0.001;    // eta for Gaussian, peak count for Poisson, fraction for salt/pepper
  std::uint64_t seed = 0;

  std::string to_string() const;
  static NoiseSpec parse(const std::string& text, std::uint64_t seed);
};

/// White Gaussian noise rescaled to hit ||e||_2 = eta * ||b||_2 exactly, so
/// that the discrepancy principle can be tested without estimation error.
/// Returns (b + e, e). Throws ZeroSignal when ||b|| == 0.
std::pair<Vector, Vector> add_gaussian_white(const Vector& b, double eta, std::uint64_t seed);

/// Photon-count noise: entries sampled Poisson(c * b_i) / c with
/// c = peak / max(b). Requires b >= 0 entrywise (NegativeIntensity).
Vector add_poisson(const Vector& b, double peak, std::uint64_t seed);

/// Transmission noise: floor(fraction * m) distinct pixels forced to min(b)
/// or max(b) with equal probability. Requires 0 < fraction < 1 (BadFraction).
Vector add_salt_pepper(const Vector& b, double fraction, std::uint64_t seed);

/// Dispatch on the spec.
std::pair<Vector, Vector> apply_noise(const Vector& b, const NoiseSpec& spec);

} // namespace deblur

#endif

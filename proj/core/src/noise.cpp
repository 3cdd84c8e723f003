#include "deblur/noise.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

namespace deblur {

std::string NoiseSpec::to_string() const {
  char buf[64];
  const char* name = kind == Kind::GaussianWhite ? "gaussian"
                     : kind == Kind::Poisson     ? "poisson"
                                                 : "saltpepper";
  std::snprintf(buf, sizeof(buf), "%s:%.17g", name, level);
  return buf;
}

NoiseSpec NoiseSpec::parse(const std::string& text, std::uint64_t seed) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw BadFraction("noise spec must look like kind:value, got '" + text + "'");
  }
  const std::string name = text.substr(0, colon);
  double value = 0.0;
  try {
    value = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw BadFraction("bad noise level in '" + text + "'");
  }
  NoiseSpec spec;
  spec.seed = seed;
  spec.level = value;
  if (name == "gaussian") {
    spec.kind = Kind::GaussianWhite;
    if (!(value > 0.0)) throw BadFraction("gaussian noise level must be > 0");
  } else if (name == "poisson") {
    spec.kind = Kind::Poisson;
    if (!(value > 0.0)) throw BadFraction("poisson peak must be > 0");
  } else if (name == "saltpepper") {
    spec.kind = Kind::SaltPepper;
    if (!(value > 0.0 && value < 1.0)) throw BadFraction("salt/pepper fraction must be in (0,1)");
  } else {
    throw BadFraction("unknown noise kind '" + name + "'");
  }
  return spec;
}

std::pair<Vector, Vector> add_gaussian_white(const Vector& b, double eta, std::uint64_t seed) {
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    throw ZeroSignal("add_gaussian_white: zero signal");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector g(b.size());
  for (Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
  Vector e = (eta * b_norm / g.norm()) * g;
  return {b + e, std::move(e)};
}

Vector add_poisson(const Vector& b, double peak, std::uint64_t seed) {
  if ((b.array() < 0.0).any()) {
    throw NegativeIntensity("add_poisson: negative intensity");
  }
  const double b_max = b.maxCoeff();
  if (b_max == 0.0) return b;  // Poisson(0) is identically zero
  const double c = peak / b_max;
  std::mt19937_64 rng(seed);
  Vector out(b.size());
  for (Index i = 0; i < b.size(); ++i) {
    if (b(i) == 0.0) {
      out(i) = 0.0;
    } else {
      std::poisson_distribution<long long> poisson(c * b(i));
      out(i) = static_cast<double>(poisson(rng)) / c;
    }
  }
  return out;
}

Vector add_salt_pepper(const Vector& b, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw BadFraction("add_salt_pepper: fraction must be in (0,1)");
  }
  const Index m = b.size();
  const auto count = static_cast<Index>(fraction * static_cast<double>(m));
  Vector out = b;
  if (count == 0) return out;

  std::mt19937_64 rng(seed);
  std::vector<Index> idx(m);
  for (Index i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  // Partial Fisher-Yates: the first `count` slots end up a uniform sample
  // of distinct pixels.
  for (Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Index> pick(i, m - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  const double lo = b.minCoeff();
  const double hi = b.maxCoeff();
  std::bernoulli_distribution coin(0.5);
  for (Index i = 0; i < count; ++i) {
    out(idx[static_cast<std::size_t>(i)]) = coin(rng) ? hi : lo;
  }
  return out;
}

std::pair<Vector, Vector> apply_noise(const Vector& b, const NoiseSpec& spec) {
  switch (spec.kind) {
    case NoiseSpec::Kind::GaussianWhite:
      return add_gaussian_white(b, spec.level, spec.seed);
    case NoiseSpec::Kind::Poisson: {
      Vector noisy = add_poisson(b, spec.level, spec.seed);
      Vector e = noisy - b;
      return {std::move(noisy), std::move(e)};
    }
    case NoiseSpec::Kind::SaltPepper: {
      Vector noisy = add_salt_pepper(b, spec.level, spec.seed);
      Vector e = noisy - b;
      return {std::move(noisy), std::move(e)};
    }
  }
  throw BadFraction("apply_noise: unknown kind");
}

} // namespace deblur

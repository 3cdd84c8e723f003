#include "deblur/multilevel.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

#include "deblur/param_select.hpp"
#include "deblur/svd_filter.hpp"

namespace deblur {

namespace {

bool is_power_of_two(Index p) { return p >= 1 && (p & (p - 1)) == 0; }

std::uint64_t fnv1a64(const double* data, Index n) {
  std::uint64_t h = 1469598103934665603ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(data);
  for (Index i = 0; i < n * static_cast<Index>(sizeof(double)); ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace

Matrix HaarRestriction::full() const {
  Matrix W = Matrix::Zero(p, p);
  const double r = 1.0 / std::sqrt(2.0);
  W.topRows(p / 2) = W1;
  for (Index i = 0; i < p / 2; ++i) {
    W(p / 2 + i, 2 * i) = r;
    W(p / 2 + i, 2 * i + 1) = -r;
  }
  return W;
}

HaarRestriction haar_w1(Index p) {
  if (p < 2 || p % 2 != 0) {
    throw OddDimension("haar_w1: dimension must be even, got " + std::to_string(p));
  }
  HaarRestriction h;
  h.p = p;
  h.W1 = Matrix::Zero(p / 2, p);
  const double r = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < p / 2; ++i) {
    h.W1(i, 2 * i) = r;
    h.W1(i, 2 * i + 1) = r;
  }
  return h;
}

Image restrict_image(const Image& X) {
  if (X.rows() % 2 != 0 || X.cols() % 2 != 0) {
    throw OddDimension("restrict_image: dimensions must be even");
  }
  Image out(X.rows() / 2, X.cols() / 2);
  for (Index j = 0; j < out.cols(); ++j) {
    for (Index i = 0; i < out.rows(); ++i) {
      out(i, j) = 0.5 * (X(2 * i, 2 * j) + X(2 * i + 1, 2 * j) + X(2 * i, 2 * j + 1) +
                         X(2 * i + 1, 2 * j + 1));
    }
  }
  return out;
}

Image prolong_image(const Image& X) {
  Image out(2 * X.rows(), 2 * X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    for (Index i = 0; i < X.rows(); ++i) {
      const double v = 0.5 * X(i, j);
      out(2 * i, 2 * j) = v;
      out(2 * i + 1, 2 * j) = v;
      out(2 * i, 2 * j + 1) = v;
      out(2 * i + 1, 2 * j + 1) = v;
    }
  }
  return out;
}

Vector coarsen_toeplitz(const Vector& t, Index p) {
  if (!is_power_of_two(p) || p < 2) {
    throw NotPowerOfTwo("coarsen_toeplitz: p must be a power of two >= 2");
  }
  if (t.size() != 2 * p - 1) {
    throw DimensionMismatch("coarsen_toeplitz: Toeplitz vector length");
  }
  // t~ = T~ t with T~ the Toeplitz matrix whose only nonzero coefficients
  // are t_0 = t_{-2} = 1/2 and t_{-1} = 1; entries beyond the vector are
  // zero. Keeping every second entry yields the coarse Toeplitz vector.
  const Index n = 2 * p - 1;
  const auto at = [&](Index k) { return (k >= 0 && k < n) ? t(k) : 0.0; };
  Vector coarse(p - 1);
  for (Index j = 0; j < p - 1; ++j) {
    const Index k = 2 * j;  // 1-based slice 1:2:2p-3
    coarse(j) = 0.5 * at(k) + at(k + 1) + 0.5 * at(k + 2);
  }
  return coarse;
}

Vector coarsen_circulant(const Vector& c, Index p) {
  if (!is_power_of_two(p) || p < 2) {
    throw NotPowerOfTwo("coarsen_circulant: p must be a power of two >= 2");
  }
  if (c.size() != p) {
    throw DimensionMismatch("coarsen_circulant: first-row length");
  }
  Vector coarse(p / 2);
  for (Index d = 0; d < p / 2; ++d) {
    coarse(d) = c((2 * d) % p) + 0.5 * c((2 * d + 1) % p) + 0.5 * c((2 * d - 1 + p) % p);
  }
  return coarse;
}

LevelHierarchy build_hierarchy(const BlurOperator& op, const Image& b, Index depth) {
  if (!op.is_separable()) {
    throw NotSeparable("build_hierarchy: operator must be separable");
  }
  const Index p = op.p();
  if (p != op.q() || b.rows() != p || b.cols() != p) {
    throw DimensionMismatch("build_hierarchy: square operator and matching image required");
  }
  if (!is_power_of_two(p)) {
    throw NotPowerOfTwo("build_hierarchy: p must be a power of two");
  }
  if (depth < 0 || (p >> depth) < 4) {
    throw TooDeep("build_hierarchy: depth " + std::to_string(depth) +
                  " leaves fewer than 4x4 pixels");
  }

  LevelHierarchy h;
  h.levels.push_back({op, b, p});
  for (Index n = 0; n < depth; ++n) {
    const auto& fine = h.levels.back();
    const Index fp = fine.p;
    if (fine.op.kind() == OperatorKind::SeparableToeplitz) {
      ToeplitzMatrix row{fp / 2, coarsen_toeplitz(fine.op.toeplitz_row_factor().t, fp)};
      ToeplitzMatrix col{fp / 2, coarsen_toeplitz(fine.op.toeplitz_col_factor().t, fp)};
      h.levels.push_back({BlurOperator::separable_toeplitz(std::move(row), std::move(col)),
                          restrict_image(fine.b), fp / 2});
    } else {
      CirculantMatrix row{fp / 2, coarsen_circulant(fine.op.circulant_row_factor().c, fp)};
      CirculantMatrix col{fp / 2, coarsen_circulant(fine.op.circulant_col_factor().c, fp)};
      h.levels.push_back({BlurOperator::separable_circulant(std::move(row), std::move(col)),
                          restrict_image(fine.b), fp / 2});
    }
  }
  return h;
}

MultilevelSolveResult multilevel_solve(const LevelHierarchy& h, Index level,
                                       CoarseMethod method, const LevelSelector& selector,
                                       const IrlsOptions& tv_opts) {
  if (level < 0 || level > h.depth()) {
    throw TooDeep("multilevel_solve: level " + std::to_string(level) + " outside hierarchy");
  }
  const auto& lvl = h.levels[static_cast<std::size_t>(level)];
  const Vector b = vec(lvl.b);

  MultilevelSolveResult result;
  if (selector.kind == LevelSelector::Kind::Discrepancy) {
    if (selector.noise != nullptr) {
      Image e = *selector.noise;
      for (Index n = 0; n < level; ++n) e = restrict_image(e);
      result.delta = e.norm();
    } else {
      result.delta = selector.value / std::pow(2.0, static_cast<double>(level));
    }
  }

  if (method == CoarseMethod::Tikhonov) {
    const SvdFactorization svd = svd_of(lvl.op);
    double lambda;
    if (selector.kind == LevelSelector::Kind::Discrepancy) {
      lambda = discrepancy_lambda(svd, b, result.delta, selector.tau);
    } else {
      lambda = std::sqrt(selector.value);
    }
    result.mu = lambda * lambda;
    result.x = unvec(filtered_solve(svd, b, FilterSpec::tikhonov(lambda)), lvl.p, lvl.p);
  } else {
    const RegularizerL L = derivative_operator(lvl.p);
    double lambda_tv;
    if (selector.kind == LevelSelector::Kind::Discrepancy) {
      lambda_tv = discrepancy_lambda_tv(lvl.op, b, L, result.delta, selector.tau, tv_opts);
    } else {
      lambda_tv = selector.value;
    }
    result.mu = lambda_tv;
    const TvResult tv = tv_irls_solve(lvl.op, b, L, lambda_tv, tv_opts);
    result.tv_converged = tv.converged;
    result.x = unvec(tv.x, lvl.p, lvl.p);
  }
  return result;
}

std::string hierarchy_manifest(const LevelHierarchy& h) {
  std::string out;
  for (std::size_t n = 0; n < h.levels.size(); ++n) {
    const auto& lvl = h.levels[n];
    std::uint64_t checksum = 0;
    if (lvl.op.kind() == OperatorKind::SeparableToeplitz) {
      const auto& row = lvl.op.toeplitz_row_factor().t;
      const auto& col = lvl.op.toeplitz_col_factor().t;
      checksum = fnv1a64(row.data(), row.size()) ^ (fnv1a64(col.data(), col.size()) << 1);
    } else if (lvl.op.kind() == OperatorKind::SeparableCirculant) {
      const auto& row = lvl.op.circulant_row_factor().c;
      const auto& col = lvl.op.circulant_col_factor().c;
      checksum = fnv1a64(row.data(), row.size()) ^ (fnv1a64(col.data(), col.size()) << 1);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "level=%zu p=%lld structure=%s checksum=%016llx\n", n,
                  static_cast<long long>(lvl.p), to_string(lvl.op.kind()),
                  static_cast<unsigned long long>(checksum));
    out += buf;
  }
  return out;
}

} // namespace deblur

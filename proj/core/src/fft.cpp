#include "deblur/fft.hpp"

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace deblur::fft {

namespace {

// fftw_plan creation is not thread-safe; execution via the new-array
// interface is. Plans are created once per (n0, n1, sign) with
// FFTW_UNALIGNED so they are valid for any caller buffer.
class PlanCache {
public:
  fftw_plan get(int n0, int n1, int sign) {
    const auto key = std::make_tuple(n0, n1, sign);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n0) *
                                              static_cast<std::size_t>(std::max(n1, 1)));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = (n1 == 0)
        ? fftw_plan_dft_1d(n0, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
        : fftw_plan_dft_2d(n0, n1, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

} // namespace

void dft_1d_inplace(CVector& v, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(v.data());
  fftw_execute_dft(cache().get(static_cast<int>(v.size()), 0, sign), buf, buf);
}

void dft_2d_inplace(CMatrix& M, int sign) {
  // Column-major (p, q) storage is a row-major (q, p) array; the 2-D DFT
  // factorizes per axis, so transforming the transpose is the transpose of
  // the transform and stays elementwise consistent across this library.
  auto* buf = reinterpret_cast<fftw_complex*>(M.data());
  fftw_execute_dft(cache().get(static_cast<int>(M.cols()), static_cast<int>(M.rows()), sign),
                   buf, buf);
}

CMatrix dft2(const Matrix& X) {
  CMatrix M = X.cast<std::complex<double>>();
  dft_2d_inplace(M, FFTW_FORWARD);
  return M;
}

Matrix idft2_real(const CMatrix& Xhat) {
  CMatrix M = Xhat;
  dft_2d_inplace(M, FFTW_BACKWARD);
  return M.real() / static_cast<double>(M.size());
}

} // namespace deblur::fft

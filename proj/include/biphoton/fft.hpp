#pragma once

// Minimal RAII wrapper over a 1-D complex FFTW transform.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>

namespace biphoton::fft {

namespace detail {

// FFTW's planner is not reentrant; execution of distinct plans is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace detail

enum class Direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

/// Unnormalized in-place DFT, out[m] = sum_k in[k] exp(-+2 pi i k m / n).
class Transform {
 public:
  Transform(std::size_t n, Direction dir) : n_(n) {
    if (n == 0) throw std::invalid_argument("fft::Transform: empty transform");
    data_.reset(static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n)));
    if (!data_) throw std::bad_alloc();
    auto* buf = reinterpret_cast<fftw_complex*>(data_.get());
    std::lock_guard lock(detail::planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, static_cast<int>(dir), FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("fft::Transform: FFTW planning failed");
  }

  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  ~Transform() {
    if (plan_ != nullptr) {
      std::lock_guard lock(detail::planner_mutex());
      fftw_destroy_plan(plan_);
    }
  }

  std::span<std::complex<double>> data() { return {data_.get(), n_}; }
  std::size_t size() const { return n_; }
  void execute() { fftw_execute(plan_); }

 private:
  std::size_t n_;
  std::unique_ptr<std::complex<double>, detail::FftwFree> data_;
  fftw_plan plan_ = nullptr;
};

}  // namespace biphoton::fft

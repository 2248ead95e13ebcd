#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace qhd::detail {

// In-place d-dimensional complex FFT over an fftw-allocated buffer.
class FftBuffer {
 public:
  FftBuffer(int dim, int n) : size_(1) {
    std::vector<int> dims(dim, n);
    for (int k = 0; k < dim; ++k) size_ *= static_cast<std::size_t>(n);
    data_ = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * size_));
    auto* raw = reinterpret_cast<fftw_complex*>(data_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft(dim, dims.data(), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(dim, dims.data(), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftBuffer() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(data_);
  }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  std::complex<double>* data() { return data_; }
  std::size_t size() const { return size_; }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }
  std::size_t size_;
  std::complex<double>* data_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

}  // namespace qhd::detail

#include "lora/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <stdexcept>

namespace lora {

struct FftPlan::Impl {
  fftw_complex* buffer = nullptr;
  fftw_plan plan = nullptr;
};

FftPlan::FftPlan(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n == 0) throw std::invalid_argument("FFT size must be positive");
  impl_->buffer = fftw_alloc_complex(n);
  if (impl_->buffer == nullptr) throw std::bad_alloc();
  impl_->plan = fftw_plan_dft_1d(static_cast<int>(n), impl_->buffer, impl_->buffer,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
  if (impl_) {
    if (impl_->plan) fftw_destroy_plan(impl_->plan);
    if (impl_->buffer) fftw_free(impl_->buffer);
  }
}

FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::execute(std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() > n_ || out.size() != n_) {
    throw std::invalid_argument("FFT buffer size mismatch");
  }
  auto* buf = reinterpret_cast<cplx*>(impl_->buffer);
  std::copy(in.begin(), in.end(), buf);
  std::fill(buf + in.size(), buf + n_, cplx{});
  fftw_execute(impl_->plan);
  std::copy(buf, buf + n_, out.begin());
}

std::vector<cplx> fft(std::span<const cplx> in, std::size_t n) {
  FftPlan plan(n);
  std::vector<cplx> out(n);
  plan.execute(in, out);
  return out;
}

}  // namespace lora

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "lora/params.hpp"

namespace lora {

// Forward DFT X_q = sum_k x_k exp(-j 2 pi k q / N), backed by FFTW. A plan is
// tied to one size; execute() may be called repeatedly. Not thread-safe.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return n_; }

  // Input shorter than size() is zero-padded; longer input is an error.
  void execute(std::span<const cplx> in, std::span<cplx> out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

std::vector<cplx> fft(std::span<const cplx> in, std::size_t n);

}  // namespace lora

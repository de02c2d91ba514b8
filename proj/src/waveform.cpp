#include "lora/waveform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lora {
namespace {

void check_oversample(int oversample) {
  if (oversample < 1) {
    throw std::invalid_argument("oversample must be >= 1, got " +
                                std::to_string(oversample));
  }
}

// Phase in cycles. x = B t is the time in chips.
double phase_cycles(const LoraParams& p, Symbol a, double x) {
  const auto m = static_cast<double>(p.m());
  const auto av = static_cast<double>(a.value);
  const double wrapped = x >= m - av ? 1.0 : 0.0;
  return av * x / m + x * x / (2.0 * m) - (x - (m - av)) * wrapped;
}

std::int64_t positive_mod(std::int64_t v, std::int64_t q) {
  const std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

// Writes one symbol at t_k = k / (os B). The centred phase in cycles is
// (k^2 + k os (2a - M - 2M u)) / (2 M os^2): an integer over an integer, so
// it is reduced exactly before scaling by 2 pi.
void synthesize_symbol(const LoraParams& p, Symbol a, int oversample,
                       double gamma, std::span<cplx> out) {
  const std::int64_t m = p.m();
  const std::int64_t os = oversample;
  const std::int64_t denom = 2 * m * os * os;
  const std::int64_t wrap_index = (m - a.value) * os;
  for (std::int64_t k = 0; k < m * os; ++k) {
    const std::int64_t u = k >= wrap_index ? 1 : 0;
    const std::int64_t num =
        positive_mod(k * k, denom) +
        positive_mod(k * os * (2 * a.value - m - 2 * m * u), denom);
    const double cycles =
        static_cast<double>(positive_mod(num, denom)) / static_cast<double>(denom);
    out[static_cast<std::size_t>(k)] = std::polar(gamma, kTwoPi * cycles);
  }
}

}  // namespace

double instantaneous_frequency(const LoraParams& p, Symbol a, double t) {
  const double ts = p.symbol_duration();
  if (!(t >= 0.0 && t < ts)) {
    throw std::domain_error("instantaneous_frequency: t outside [0, Ts)");
  }
  const double b = p.bandwidth();
  const auto m = static_cast<double>(p.m());
  const auto av = static_cast<double>(a.value);
  const double tau = ts * (1.0 - av / m);
  const double f = av * b / m + (b / ts) * t - (t >= tau ? b : 0.0);
  return f < 0.0 ? 0.0 : f;
}

double phase(const LoraParams& p, Symbol a, double t) {
  const double ts = p.symbol_duration();
  if (!(t >= 0.0 && t <= ts)) {
    throw std::domain_error("phase: t outside [0, Ts]");
  }
  return kTwoPi * phase_cycles(p, a, p.bandwidth() * t);
}

cplx baseband_sample(const LoraParams& p, Symbol a, double t) {
  const double ts = p.symbol_duration();
  if (!(t >= 0.0 && t <= ts)) {
    throw std::domain_error("baseband_sample: t outside [0, Ts]");
  }
  const double x = p.bandwidth() * t;
  // Centring shift of -B/2 contributes -x/2 cycles.
  double cycles = phase_cycles(p, a, x) - 0.5 * x;
  cycles -= std::floor(cycles);
  return std::polar(p.amplitude(), kTwoPi * cycles);
}

IqBuffer baseband_waveform(const LoraParams& p, Symbol a, int oversample) {
  check_oversample(oversample);
  IqBuffer buf;
  buf.fs = oversample * p.bandwidth();
  buf.samples.resize(static_cast<std::size_t>(p.m() * oversample));
  synthesize_symbol(p, a, oversample, p.amplitude(), buf.samples);
  return buf;
}

IqBuffer modulate(const LoraParams& p, std::span<const Symbol> symbols,
                  int oversample) {
  check_oversample(oversample);
  if (symbols.empty()) {
    throw std::invalid_argument("modulate: empty symbol sequence");
  }
  const auto per_symbol = static_cast<std::size_t>(p.m() * oversample);
  IqBuffer buf;
  buf.fs = oversample * p.bandwidth();
  buf.samples.resize(per_symbol * symbols.size());
  const double gamma = p.amplitude();
  for (std::size_t n = 0; n < symbols.size(); ++n) {
    const Symbol a = make_symbol(p, symbols[n].value);
    synthesize_symbol(p, a, oversample, gamma,
                      std::span<cplx>(buf.samples).subspan(n * per_symbol, per_symbol));
  }
  return buf;
}

double mean_envelope_magnitude(const LoraParams& p, double t) {
  const double ts = p.symbol_duration();
  if (!(t >= 0.0 && t < ts)) {
    throw std::domain_error("mean_envelope_magnitude: t outside [0, Ts)");
  }
  const auto m = static_cast<double>(p.m());
  double x = p.bandwidth() * t;
  // |sin(pi x)/sin(pi x/M)| is symmetric about x = M/2.
  if (x > 0.5 * m) x = m - x;
  if (x == 0.0) return 1.0;
  return std::abs(std::sin(kPi * x) / std::sin(kPi * x / m)) / m;
}

}  // namespace lora

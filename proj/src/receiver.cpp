#include "lora/receiver.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "lora/fft.hpp"

namespace lora {
namespace {

std::int64_t positive_mod(std::int64_t v, std::int64_t q) {
  const std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

cplx unit_cycles(std::int64_t num, std::int64_t den) {
  return std::polar(1.0, kTwoPi * static_cast<double>(positive_mod(num, den)) /
                             static_cast<double>(den));
}

void check_length(const ChipVector& c) {
  if (static_cast<std::int64_t>(c.chips.size()) != c.params.m()) {
    throw std::invalid_argument("chip vector length " + std::to_string(c.chips.size()) +
                                " != M = " + std::to_string(c.params.m()));
  }
}

}  // namespace

ChipVector chip_samples(const LoraParams& p, Symbol a) {
  a = make_symbol(p, a.value);
  const std::int64_t m = p.m();
  const double gamma = p.amplitude();
  ChipVector c{std::vector<cplx>(static_cast<std::size_t>(m)), p};
  // Cycles k(a/M - 1/2 + k/(2M)) = (k^2 + 2ak - Mk) / (2M).
  for (std::int64_t k = 0; k < m; ++k) {
    const std::int64_t num = positive_mod(k * k, 2 * m) + positive_mod(k * (2 * a.value - m), 2 * m);
    c.chips[static_cast<std::size_t>(k)] = gamma * unit_cycles(num, 2 * m);
  }
  return c;
}

DechirpedVector dechirp(const ChipVector& c) {
  check_length(c);
  const std::int64_t m = c.params.m();
  DechirpedVector d{std::vector<cplx>(c.chips.size())};
  // -k^2/(2M) + k/2 cycles = (Mk - k^2) / (2M).
  for (std::int64_t k = 0; k < m; ++k) {
    const std::int64_t num = positive_mod(m * k, 2 * m) - positive_mod(k * k, 2 * m);
    d.values[static_cast<std::size_t>(k)] =
        c.chips[static_cast<std::size_t>(k)] * unit_cycles(num, 2 * m);
  }
  return d;
}

std::vector<cplx> dechirped_spectrum(const ChipVector& c) {
  const DechirpedVector d = dechirp(c);
  return fft(d.values, d.values.size());
}

Symbol demodulate_symbol(const ChipVector& c) {
  const std::vector<cplx> spec = dechirped_spectrum(c);
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t q = 0; q < spec.size(); ++q) {
    const double mag = std::norm(spec[q]);
    if (mag > best_mag) {
      best_mag = mag;
      best = q;
    }
  }
  return Symbol{static_cast<std::int64_t>(best)};
}

std::vector<Symbol> demodulate_stream(const IqBuffer& iq, const LoraParams& p) {
  if (iq.samples.empty()) throw std::invalid_argument("demodulate_stream: empty buffer");
  const double ratio = iq.fs / p.bandwidth();
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw std::invalid_argument("demodulate_stream: sample rate must be an integer multiple of B");
  }
  const auto step = static_cast<std::size_t>(rounded);
  const std::size_t chips = (iq.samples.size() + step - 1) / step;
  const auto m = static_cast<std::size_t>(p.m());
  if (chips % m != 0) {
    throw std::invalid_argument("demodulate_stream: " + std::to_string(chips % m) +
                                " trailing chips do not form a whole symbol");
  }
  FftPlan plan(m);
  std::vector<Symbol> out;
  out.reserve(chips / m);
  ChipVector c{std::vector<cplx>(m), p};
  std::vector<cplx> spec(m);
  for (std::size_t s = 0; s < chips / m; ++s) {
    for (std::size_t k = 0; k < m; ++k) c.chips[k] = iq.samples[(s * m + k) * step];
    const DechirpedVector d = dechirp(c);
    plan.execute(d.values, spec);
    std::size_t best = 0;
    for (std::size_t q = 1; q < m; ++q) {
      if (std::norm(spec[q]) > std::norm(spec[best])) best = q;
    }
    out.push_back(Symbol{static_cast<std::int64_t>(best)});
  }
  return out;
}

IqBuffer awgn(const IqBuffer& iq, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw std::invalid_argument("awgn: snr must be finite");
  IqBuffer out = iq;
  if (iq.samples.empty()) return out;
  double power = 0.0;
  for (const cplx& s : iq.samples) power += std::norm(s);
  power /= static_cast<double>(iq.samples.size());
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (cplx& s : out.samples) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = sigma * std::sqrt(-std::log(u1));
    s += std::polar(r, kTwoPi * u2);
  }
  return out;
}

}  // namespace lora

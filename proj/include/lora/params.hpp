#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace lora {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Modulation configuration. The symbol duration is always derived as M/B so
// that B*Ts == M holds exactly.
class LoraParams {
 public:
  // Throws std::invalid_argument on sf outside [1, 16], bandwidth <= 0,
  // negative carrier or non-positive passband power.
  LoraParams(int sf, double bandwidth_hz, double carrier_hz = 0.0,
             double passband_power_w = 0.5);

  int sf() const { return sf_; }
  std::int64_t m() const { return std::int64_t{1} << sf_; }
  double bandwidth() const { return bandwidth_; }
  double symbol_duration() const { return static_cast<double>(m()) / bandwidth_; }
  double chip_duration() const { return 1.0 / bandwidth_; }
  double carrier() const { return carrier_; }
  double passband_power() const { return passband_power_; }
  // gamma = sqrt(2 Ps); 1 for the default Ps = 0.5 W.
  double amplitude() const;

 private:
  int sf_;
  double bandwidth_;
  double carrier_;
  double passband_power_;
};

// A modulation symbol in [0, M-1].
struct Symbol {
  std::int64_t value = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

// Throws std::out_of_range if the symbol is outside the alphabet of p.
Symbol make_symbol(const LoraParams& p, std::int64_t value);

// Uniformly sampled complex baseband signal.
struct IqBuffer {
  std::vector<cplx> samples;
  double fs = 1.0;
  double t0 = 0.0;
};

}  // namespace lora

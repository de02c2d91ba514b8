#include "lora/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lora {

LoraParams::LoraParams(int sf, double bandwidth_hz, double carrier_hz,
                       double passband_power_w)
    : sf_(sf),
      bandwidth_(bandwidth_hz),
      carrier_(carrier_hz),
      passband_power_(passband_power_w) {
  if (sf < 1 || sf > 16) {
    throw std::invalid_argument("spreading factor must be in [1, 16], got " +
                                std::to_string(sf));
  }
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
    throw std::invalid_argument("bandwidth must be positive and finite");
  }
  if (!(carrier_hz >= 0.0) || !std::isfinite(carrier_hz)) {
    throw std::invalid_argument("carrier frequency must be >= 0");
  }
  if (!(passband_power_w > 0.0) || !std::isfinite(passband_power_w)) {
    throw std::invalid_argument("passband power must be positive");
  }
}

double LoraParams::amplitude() const { return std::sqrt(2.0 * passband_power_); }

Symbol make_symbol(const LoraParams& p, std::int64_t value) {
  if (value < 0 || value >= p.m()) {
    throw std::out_of_range("symbol " + std::to_string(value) +
                            " outside [0, " + std::to_string(p.m() - 1) + "]");
  }
  return Symbol{value};
}

}  // namespace lora

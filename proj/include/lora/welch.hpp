#pragma once

#include <string_view>
#include <vector>

#include "lora/params.hpp"
#include "lora/spectrum.hpp"

namespace lora {

enum class Window { Rectangular, Hann, Hamming, Blackman };

Window parse_window(std::string_view name);
std::string_view window_name(Window w);

// Periodic (DFT-even) window of length n.
std::vector<double> make_window(Window w, std::size_t n);

struct WelchEstimate {
  std::vector<double> grid;  // Hz, ascending, two-sided
  std::vector<double> psd;   // power per Hz
  std::size_t segments = 0;
};

// Averaged windowed periodogram. Scaled by 1/(fs sum w^2), so the integral
// over the grid equals the windowed mean power (the time-domain mean power for
// constant-envelope or stationary input). Throws when the buffer is shorter
// than one segment or overlap is outside [0, 1).
WelchEstimate welch_psd(const IqBuffer& iq, std::size_t segment_len, double overlap,
                        Window window);

// The estimate as a continuous-only SpectrumResult, for binning. Frequencies
// are taken as baseband and the estimate divided by mean_power, so bins become
// fractions of total power.
SpectrumResult welch_as_spectrum(const WelchEstimate& w, const LoraParams& p, double mean_power);

}  // namespace lora

#pragma once

#include <vector>

#include "lora/params.hpp"
#include "lora/spectrum.hpp"

namespace lora {

// R_b = B SF / 2^SF.
double bit_rate(const LoraParams& p);
// R_c = M / Ts = B.
double chip_rate(const LoraParams& p);
// 1/eta = SF / 2^SF in bit/s/Hz.
double spectral_efficiency(int sf);

// Default closed-form spectrum used for bandwidth and table work: grid step
// B/(64M) over |f| <= 8B, lines for |n| <= 4M.
SpectrumResult reference_spectrum(const LoraParams& p);

struct OccupiedBandwidth {
  double width_hz = 0.0;
  double captured = 0.0;  // power inside the computed span (continuous + lines)
};

// Smallest W with (continuous integral + lines) over [-W/2, W/2] >= fraction
// of the unit total power, by bisection to tolerance_hz. Throws
// std::runtime_error if the span does not hold that much power.
OccupiedBandwidth occupied_bandwidth(const SpectrumResult& s, double fraction,
                                     double tolerance_hz);
OccupiedBandwidth occupied_bandwidth(const LoraParams& p, double fraction);

struct TableRow {
  int sf = 0;
  double eff = 0.0;        // bit/s/Hz
  double max_re_c = 0.0;
  double b99 = 0.0;        // Hz
  double b99_over_b = 0.0;
  double pd = 0.0;         // fraction, analytic 2^-SF
  double pd_numeric = 0.0; // summed line powers
  double delta_max = 0.0;  // dB
};

// Every value computed from the model; bandwidth only scales b99.
std::vector<TableRow> reproduce_table(const std::vector<int>& sf_list,
                                      double bandwidth_hz = 125e3);

// Power per bin of width delta_f, bins centred on integer multiples of
// delta_f and half-open [c - df/2, c + df/2) so a line on an edge is counted
// once. Only bins fully inside the spectrum grid are produced.
struct BinnedSpectrum {
  std::vector<double> bin_centers;    // Hz, baseband
  std::vector<double> bin_fraction;   // fraction of total power
  std::vector<double> bin_power_dbm;  // at transmit power ps_dbm
  double delta_f = 0.0;
  double ps_dbm = 0.0;
  double residual_fraction = 0.0;     // 1 - sum of bins
};

BinnedSpectrum binned_power(const SpectrumResult& s, double delta_f, double ps_dbm);

double watts_to_dbm(double w);
double dbm_to_watts(double dbm);

}  // namespace lora

#include "lora/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lora/correlation.hpp"

namespace lora {

double bit_rate(const LoraParams& p) {
  return p.bandwidth() * static_cast<double>(p.sf()) / static_cast<double>(p.m());
}

double chip_rate(const LoraParams& p) { return p.bandwidth(); }

double spectral_efficiency(int sf) {
  if (sf < 1 || sf > 62) throw std::invalid_argument("spectral_efficiency: sf out of range");
  return static_cast<double>(sf) / std::ldexp(1.0, sf);
}

SpectrumResult reference_spectrum(const LoraParams& p) {
  return psd_fresnel(p, 64, 8.0, 4 * p.m());
}

OccupiedBandwidth occupied_bandwidth(const SpectrumResult& s, double fraction,
                                     double tolerance_hz) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("occupied_bandwidth: fraction must be in (0, 1)");
  }
  if (s.grid.empty()) throw std::invalid_argument("occupied_bandwidth: empty spectrum");
  const CumulativeSpectrum cum(s);
  const auto power_within = [&](double w) {
    const double h = 0.5 * w;
    return cum.continuous(-h, h) + cum.lines(-h, std::nextafter(h, std::numeric_limits<double>::infinity()));
  };
  const double span = 2.0 * std::min(-s.grid.front(), s.grid.back());
  OccupiedBandwidth out;
  out.captured = cum.total_continuous() + cum.total_lines();
  if (power_within(span) < fraction) {
    throw std::runtime_error("occupied_bandwidth: only " + std::to_string(power_within(span)) +
                             " of the power lies in the computed span");
  }
  double lo = 0.0;
  double hi = span;
  while (hi - lo > tolerance_hz) {
    const double mid = 0.5 * (lo + hi);
    if (power_within(mid) >= fraction) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.width_hz = hi;
  return out;
}

OccupiedBandwidth occupied_bandwidth(const LoraParams& p, double fraction) {
  return occupied_bandwidth(reference_spectrum(p), fraction, 1e-6 * p.bandwidth());
}

std::vector<TableRow> reproduce_table(const std::vector<int>& sf_list, double bandwidth_hz) {
  std::vector<TableRow> rows;
  for (const int sf : sf_list) {
    if (sf < 3 || sf > 12) throw std::invalid_argument("reproduce_table: SF must be in [3, 12]");
    const LoraParams p(sf, bandwidth_hz);
    const SpectrumResult spec = reference_spectrum(p);
    TableRow row;
    row.sf = sf;
    row.eff = spectral_efficiency(sf);
    row.max_re_c = max_cross_correlation(p).max_abs_real;
    row.b99 = occupied_bandwidth(spec, 0.99, 1e-6 * bandwidth_hz).width_hz;
    row.b99_over_b = row.b99 / bandwidth_hz;
    row.pd = 1.0 / static_cast<double>(p.m());
    for (const SpectralLine& l : spec.lines) row.pd_numeric += l.power;
    row.delta_max = -10.0 * std::log10(1.0 - row.max_re_c);
    rows.push_back(row);
  }
  return rows;
}

double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

BinnedSpectrum binned_power(const SpectrumResult& s, double delta_f, double ps_dbm) {
  if (!(delta_f > 0.0)) throw std::invalid_argument("binned_power: delta_f must be > 0");
  if (s.grid.size() < 2) throw std::invalid_argument("binned_power: spectrum grid too small");
  const CumulativeSpectrum cum(s);
  BinnedSpectrum out;
  out.delta_f = delta_f;
  out.ps_dbm = ps_dbm;
  const auto first = static_cast<std::int64_t>(std::ceil(s.grid.front() / delta_f + 0.5));
  const auto last = static_cast<std::int64_t>(std::floor(s.grid.back() / delta_f - 0.5));
  double total = 0.0;
  for (std::int64_t i = first; i <= last; ++i) {
    const double c = static_cast<double>(i) * delta_f;
    const double lo = c - 0.5 * delta_f;
    const double hi = c + 0.5 * delta_f;
    const double frac = cum.continuous(lo, hi) + cum.lines(lo, hi);
    out.bin_centers.push_back(c);
    out.bin_fraction.push_back(frac);
    out.bin_power_dbm.push_back(frac > 0.0 ? ps_dbm + 10.0 * std::log10(frac) : -300.0);
    total += frac;
  }
  out.residual_fraction = 1.0 - total;
  return out;
}

}  // namespace lora

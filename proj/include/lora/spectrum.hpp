#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lora/params.hpp"

namespace lora {

struct SpectralLine {
  double frequency = 0.0;  // Hz, an integer multiple of B/M
  double power = 0.0;      // fraction of total signal power
};

// Power spectrum of the randomly modulated complex envelope, normalised to
// unit signal power (gamma = 1). Frequencies are baseband, two-sided.
struct SpectrumResult {
  std::vector<double> grid;        // Hz, ascending
  std::vector<double> continuous;  // 1/Hz
  std::vector<SpectralLine> lines;
  LoraParams params;
};

// W(a; b; t1; t2) = integral over [t1, t2] of exp(j 2 pi (a t + b t^2)) dt in
// closed form via Fresnel functions. Throws std::invalid_argument if b <= 0
// or t1 > t2.
cplx w_integral(double a, double b, double t1, double t2);

// X(f; l), Fourier transform of the unit-amplitude waveform of symbol l.
cplx waveform_fourier_transform(const LoraParams& p, Symbol l, double f);

// Continuous part at arbitrary frequencies; O(M) Fresnel evaluations per point.
std::vector<double> continuous_psd(const LoraParams& p, std::span<const double> grid);

// Line powers |sum_l X(nB/M; l)|^2 / (Ts M)^2 for n in [-n_max, n_max].
// Requires n_max >= M.
std::vector<SpectralLine> discrete_spectrum_lines(const LoraParams& p, std::int64_t n_max);

// Closed-form spectrum on the uniform grid f = i B / (k M), |f| <= span B,
// plus lines for |n| <= n_max. Every Fresnel argument of the grid lies on one
// lattice, so sums over symbols reduce to prefix-sum differences.
SpectrumResult psd_fresnel(const LoraParams& p, int k, double span, std::int64_t n_max);

// Zero-padded DFT route: N samples per symbol (N a multiple of M, N >= 8M),
// padded by a factor k, giving X(f; l) at step B/(kM). Grid covers the DFT
// band [-F/2, F/2) with F = N B / M; lines are the bins at multiples of B/M.
SpectrumResult psd_via_dft(const LoraParams& p, int k, std::int64_t samples_per_symbol);

struct DiscretePower {
  double analytic = 0.0;    // 1/M
  double line_sum = 0.0;    // sum of discrete_spectrum_lines over |n| <= n_max
  double envelope = 0.0;    // (1/Ts) integral of |E x(t;A)|^2 by quadrature
  std::int64_t n_max = 0;
};

DiscretePower discrete_power_total(const LoraParams& p, std::int64_t n_max);

// Trapezoidal integral of the continuous part over [f1, f2], interpolating
// linearly inside grid cells. Outside the grid the density is taken as 0.
double integrate_continuous(const SpectrumResult& s, double f1, double f2);

double line_power_between(const SpectrumResult& s, double f1, double f2);

}  // namespace lora

namespace lora {

// Running integrals of one SpectrumResult, for repeated band queries.
class CumulativeSpectrum {
 public:
  explicit CumulativeSpectrum(const SpectrumResult& s);

  double continuous(double f1, double f2) const;
  double lines(double f1, double f2) const;  // lines with f1 <= f < f2
  double total_continuous() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  double total_lines() const { return line_cumulative_.empty() ? 0.0 : line_cumulative_.back(); }

 private:
  double continuous_below(double f) const;

  std::vector<double> grid_;
  std::vector<double> density_;
  std::vector<double> cumulative_;
  std::vector<double> line_freq_;
  std::vector<double> line_cumulative_;
};

}  // namespace lora

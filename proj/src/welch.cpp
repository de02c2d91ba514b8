#include "lora/welch.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lora/fft.hpp"

namespace lora {

Window parse_window(std::string_view name) {
  if (name == "rect" || name == "rectangular" || name == "boxcar") return Window::Rectangular;
  if (name == "hann" || name == "hanning") return Window::Hann;
  if (name == "hamming") return Window::Hamming;
  if (name == "blackman") return Window::Blackman;
  throw std::invalid_argument("unknown window '" + std::string(name) + "'");
}

std::string_view window_name(Window w) {
  switch (w) {
    case Window::Rectangular: return "rectangular";
    case Window::Hann: return "hann";
    case Window::Hamming: return "hamming";
    case Window::Blackman: return "blackman";
  }
  return "unknown";
}

std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> out(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    switch (w) {
      case Window::Rectangular: break;
      case Window::Hann: out[i] = 0.5 - 0.5 * std::cos(x); break;
      case Window::Hamming: out[i] = 0.54 - 0.46 * std::cos(x); break;
      case Window::Blackman: out[i] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x); break;
    }
  }
  return out;
}

WelchEstimate welch_psd(const IqBuffer& iq, std::size_t segment_len, double overlap,
                        Window window) {
  if (segment_len == 0) throw std::invalid_argument("welch: segment length must be > 0");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("welch: overlap must be in [0, 1)");
  if (!(iq.fs > 0.0)) throw std::invalid_argument("welch: sample rate must be > 0");
  if (iq.samples.size() < segment_len) {
    throw std::invalid_argument("welch: buffer of " + std::to_string(iq.samples.size()) +
                                " samples is shorter than one segment (" + std::to_string(segment_len) + ")");
  }
  const auto step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(segment_len) * (1.0 - overlap))));
  const std::vector<double> win = make_window(window, segment_len);
  double u = 0.0;
  for (const double v : win) u += v * v;

  FftPlan plan(segment_len);
  std::vector<cplx> seg(segment_len);
  std::vector<cplx> spec(segment_len);
  std::vector<double> acc(segment_len, 0.0);
  WelchEstimate out;
  for (std::size_t start = 0; start + segment_len <= iq.samples.size(); start += step) {
    for (std::size_t i = 0; i < segment_len; ++i) seg[i] = iq.samples[start + i] * win[i];
    plan.execute(seg, spec);
    for (std::size_t i = 0; i < segment_len; ++i) acc[i] += std::norm(spec[i]);
    ++out.segments;
  }
  const double scale = 1.0 / (iq.fs * u * static_cast<double>(out.segments));
  const auto n = static_cast<std::int64_t>(segment_len);
  const std::int64_t half = n / 2;
  out.grid.resize(segment_len);
  out.psd.resize(segment_len);
  for (std::int64_t i = -half; i < n - half; ++i) {
    const auto bin = static_cast<std::size_t>((i % n + n) % n);
    const auto o = static_cast<std::size_t>(i + half);
    out.grid[o] = static_cast<double>(i) * iq.fs / static_cast<double>(n);
    out.psd[o] = acc[bin] * scale;
  }
  return out;
}

SpectrumResult welch_as_spectrum(const WelchEstimate& w, const LoraParams& p, double mean_power) {
  if (!(mean_power > 0.0)) throw std::invalid_argument("welch_as_spectrum: mean power must be > 0");
  SpectrumResult s{w.grid, w.psd, {}, p};
  for (double& v : s.continuous) v /= mean_power;
  return s;
}

}  // namespace lora

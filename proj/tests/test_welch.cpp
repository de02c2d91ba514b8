#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "lora/welch.hpp"

using namespace lora;

namespace {

IqBuffer tone(double f, double fs, std::size_t n, double amplitude) {
  IqBuffer b{std::vector<cplx>(n), fs, 0.0};
  for (std::size_t k = 0; k < n; ++k) b.samples[k] = std::polar(amplitude, kTwoPi * f * static_cast<double>(k) / fs);
  return b;
}

IqBuffer white(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma / std::sqrt(2.0));
  IqBuffer b{std::vector<cplx>(n), 1.0, 0.0};
  for (cplx& v : b.samples) v = cplx(g(rng), g(rng));
  return b;
}

double integral(const WelchEstimate& w) {
  const double df = w.grid[1] - w.grid[0];
  return std::accumulate(w.psd.begin(), w.psd.end(), 0.0) * df;
}

double mean_power(const IqBuffer& b) {
  double p = 0.0;
  for (const cplx& v : b.samples) p += std::norm(v);
  return p / static_cast<double>(b.samples.size());
}

}  // namespace

TEST_CASE("windows") {
  const auto hann = make_window(Window::Hann, 8);
  CHECK(hann[0] == 0.0);
  CHECK(hann[4] == doctest::Approx(1.0));
  CHECK(hann[1] == doctest::Approx(hann[7]));
  CHECK(make_window(Window::Rectangular, 5) == std::vector<double>(5, 1.0));
  CHECK(make_window(Window::Hamming, 4)[0] == doctest::Approx(0.08));
  CHECK(make_window(Window::Blackman, 4)[0] == doctest::Approx(0.0).epsilon(1e-12));
  for (const Window w : {Window::Rectangular, Window::Hann, Window::Hamming, Window::Blackman}) {
    CHECK(parse_window(window_name(w)) == w);
  }
  CHECK_THROWS(parse_window("kaiser"));
}

TEST_CASE("tone lands in one bin at its power") {
  const double b = 125e3, fs = 4 * b;
  const IqBuffer x = tone(b / 8.0, fs, 1 << 14, std::sqrt(2.0));
  const WelchEstimate r = welch_psd(x, 512, 0.5, Window::Rectangular);
  const auto peak = static_cast<std::size_t>(std::max_element(r.psd.begin(), r.psd.end()) - r.psd.begin());
  CHECK(r.grid[peak] == doctest::Approx(b / 8.0));
  const double df = r.grid[1] - r.grid[0];
  CHECK(std::abs(10.0 * std::log10(r.psd[peak] * df / 2.0)) < 0.2);
  for (std::size_t i = 0; i < r.psd.size(); ++i) {
    if (i != peak) CHECK(r.psd[i] * df < 1e-20);
  }
  // With a Hann window the power spreads over the main lobe.
  const WelchEstimate h = welch_psd(x, 512, 0.5, Window::Hann);
  double lobe = 0.0;
  for (std::size_t i = peak - 2; i <= peak + 2; ++i) lobe += h.psd[i] * df;
  CHECK(std::abs(10.0 * std::log10(lobe / 2.0)) < 0.2);
}

TEST_CASE("integral equals mean power") {
  IqBuffer x = white(20000, 0.7, 3);
  const IqBuffer t = tone(0.123, 1.0, 20000, 1.3);
  for (std::size_t k = 0; k < x.samples.size(); ++k) x.samples[k] += t.samples[k];
  for (const Window w : {Window::Rectangular, Window::Hann, Window::Hamming, Window::Blackman}) {
    for (const double ov : {0.0, 0.5, 0.75}) {
      CHECK(integral(welch_psd(x, 1000, ov, w)) == doctest::Approx(mean_power(x)).epsilon(0.01));
    }
  }
}

TEST_CASE("white noise gives a flat estimate whose spread shrinks with averaging") {
  const auto rel_spread = [](const WelchEstimate& w) {
    const double m = std::accumulate(w.psd.begin(), w.psd.end(), 0.0) / static_cast<double>(w.psd.size());
    double v = 0.0;
    for (const double x : w.psd) v += (x - m) * (x - m);
    return std::make_pair(m, std::sqrt(v / static_cast<double>(w.psd.size())) / m);
  };
  const IqBuffer x = white(256 * 256, 1.0, 9);
  const auto [mean_few, few] = rel_spread(welch_psd(IqBuffer{{x.samples.begin(), x.samples.begin() + 4 * 256}, 1.0, 0.0}, 256, 0.0, Window::Rectangular));
  const auto [mean_many, many] = rel_spread(welch_psd(x, 256, 0.0, Window::Rectangular));
  CHECK(mean_many == doctest::Approx(1.0).epsilon(0.02));
  CHECK(few == doctest::Approx(1.0 / std::sqrt(4.0)).epsilon(0.2));
  CHECK(many == doctest::Approx(1.0 / std::sqrt(256.0)).epsilon(0.2));
  (void)mean_few;
}

TEST_CASE("argument checks") {
  const IqBuffer x = white(100, 1.0, 1);
  CHECK_THROWS_AS(welch_psd(x, 101, 0.5, Window::Hann), std::invalid_argument);
  CHECK_THROWS_AS(welch_psd(x, 50, 1.0, Window::Hann), std::invalid_argument);
  CHECK_THROWS_AS(welch_psd(x, 50, -0.1, Window::Hann), std::invalid_argument);
  CHECK_THROWS_AS(welch_psd(x, 0, 0.0, Window::Hann), std::invalid_argument);
  CHECK(welch_psd(x, 100, 0.0, Window::Hann).segments == 1);
  CHECK(welch_psd(x, 50, 0.5, Window::Hann).segments == 3);
}

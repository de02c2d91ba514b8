#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lora/fresnel.hpp"
#include "lora/spectrum.hpp"
#include "lora/waveform.hpp"
#include "oracles.hpp"

using namespace lora;

namespace {

double peak(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// G_c from transforms computed by quadrature, B = 1.
double oracle_continuous(int sf, double f) {
  const std::int64_t m = std::int64_t{1} << sf;
  long double sum2 = 0.0L;
  oracle::lcplx sum{};
  for (std::int64_t l = 0; l < m; ++l) {
    const oracle::lcplx x = oracle::waveform_ft(sf, 1.0L, l, f);
    sum += x;
    sum2 += std::norm(x);
  }
  return static_cast<double>((sum2 - std::norm(sum) / m) / (static_cast<long double>(m) * m));
}

}  // namespace

TEST_CASE("chirp integral against quadrature") {
  CHECK(w_integral(3.0, 2.0, 0.4, 0.4) == cplx(0.0, 0.0));
  CHECK_THROWS_AS(w_integral(0.0, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(w_integral(0.0, -1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(w_integral(0.0, 1.0, 1.0, 0.5), std::invalid_argument);

  for (const double t : {0.3, 1.0, 2.5}) {
    const cplx w = w_integral(0.0, 0.5, 0.0, t);
    CHECK(std::abs(w - fresnel_k(std::sqrt(2.0) * t) / std::sqrt(2.0)) < 1e-14);
  }

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ua(-300.0, 300.0), ub(0.01, 50.0), ut(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double a = ua(rng), b = ub(rng);
    double t1 = ut(rng), t2 = ut(rng);
    if (t1 > t2) std::swap(t1, t2);
    const oracle::lcplx q = oracle::chirp_integral(a, b, t1, t2);
    CHECK(std::abs(w_integral(a, b, t1, t2) - cplx(q)) < 1e-7);
  }
}

TEST_CASE("waveform transform against quadrature") {
  for (const int sf : {3, 5, 8}) {
    const LoraParams p(sf, 1.0);
    for (const std::int64_t l : {std::int64_t{0}, std::int64_t{1}, p.m() / 2, p.m() - 1}) {
      for (const double f : {-3.1, -1.0, -0.5, -0.02, 0.0, 0.25, 0.5, 0.77, 4.0}) {
        const oracle::lcplx q = oracle::waveform_ft(sf, 1.0L, l, f);
        CHECK(std::abs(waveform_fourier_transform(p, Symbol{l}, f) - cplx(q)) / p.symbol_duration() < 1e-9);
      }
    }
  }
  // Physical units: X scales with 1/B for a fixed normalised frequency.
  const LoraParams hz(5, 125e3);
  const cplx unit = waveform_fourier_transform(LoraParams(5, 1.0), Symbol{7}, 0.3);
  CHECK(std::abs(waveform_fourier_transform(hz, Symbol{7}, 0.3 * 125e3) * 125e3 - unit) < 1e-10);
}

TEST_CASE("waveform transform against a direct DFT of the samples") {
  const int sf = 3;
  const LoraParams p(sf, 1.0);
  const std::int64_t n = 256 * p.m();
  const long double dt = p.symbol_duration() / static_cast<long double>(n);
  for (const std::int64_t l : {0, 3, 7}) {
    double scale = 0.0, worst = 0.0;
    for (std::int64_t bin = -16; bin <= 16; ++bin) {
      oracle::lcplx s{};
      for (std::int64_t k = 0; k < n; ++k) {
        s += oracle::chirp(sf, 1.0L, l, k * dt) * oracle::expj_cycles(-static_cast<long double>(bin * k) / n);
      }
      s *= dt;
      const cplx x = waveform_fourier_transform(p, Symbol{l}, static_cast<double>(bin) / 8.0);
      scale = std::max(scale, std::abs(x));
      worst = std::max(worst, std::abs(x - cplx(s)));
    }
    CHECK(worst / scale < 1e-4);
  }
}

TEST_CASE("Parseval for single waveforms") {
  const LoraParams p(3, 1.0);
  double e0 = 0.0, e4 = 0.0;
  bool differ = false;
  const double step = 1.0 / 32.0;
  for (int i = -64 * 32; i <= 64 * 32; ++i) {
    const double f = i * step;
    const double a = std::norm(waveform_fourier_transform(p, Symbol{0}, f));
    const double b = std::norm(waveform_fourier_transform(p, Symbol{4}, f));
    e0 += a * step;
    e4 += b * step;
    differ = differ || std::abs(a - b) > 1e-3 * p.symbol_duration() * p.symbol_duration();
  }
  CHECK(e0 == doctest::Approx(p.symbol_duration()).epsilon(1e-3));
  CHECK(e4 == doctest::Approx(p.symbol_duration()).epsilon(1e-3));
  CHECK(differ);
}

TEST_CASE("continuous part against the quadrature oracle") {
  for (const int sf : {3, 5}) {
    const LoraParams p(sf, 1.0);
    const std::vector<double> f{-2.2, -0.6, -0.5, 0.0, 0.13, 0.5, 1.0, 1.9};
    const std::vector<double> g = continuous_psd(p, f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(std::abs(g[i] - oracle_continuous(sf, f[i])) < 1e-10);
    }
  }
}

TEST_CASE("lattice evaluation matches the direct per-point sum") {
  for (const int sf : {3, 6, 9}) {
    const LoraParams p(sf, 125e3);
    const SpectrumResult s = psd_fresnel(p, 8, 3.0, p.m());
    const double pk = peak(s.continuous);
    std::vector<double> f;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.grid.size(); i += 97) {
      f.push_back(s.grid[i]);
      idx.push_back(i);
    }
    const std::vector<double> g = continuous_psd(p, f);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(g[i] - s.continuous[idx[i]]) < 1e-9 * pk);
    const auto lines = discrete_spectrum_lines(p, p.m());
    REQUIRE(lines.size() == s.lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      CHECK(lines[i].frequency == s.lines[i].frequency);
      CHECK(std::abs(lines[i].power - s.lines[i].power) < 1e-15);
    }
  }
}

TEST_CASE("spectrum invariants") {
  for (const int sf : {3, 5, 7, 10}) {
    const LoraParams p(sf, 125e3);
    const SpectrumResult s = psd_fresnel(p, 16, 8.0, 4 * p.m());
    const double pk = peak(s.continuous);
    // Symmetric grid.
    REQUIRE(s.grid.size() % 2 == 1);
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      const std::size_t j = s.grid.size() - 1 - i;
      CHECK(s.grid[i] == -s.grid[j]);
      CHECK(s.continuous[i] >= 0.0);
      CHECK(std::abs(s.continuous[i] - s.continuous[j]) <= 1e-9 * s.continuous[i] + 1e-13 * pk);
    }
    double line_total = 0.0;
    const double spacing = p.bandwidth() / static_cast<double>(p.m());
    for (const SpectralLine& l : s.lines) {
      const double n = l.frequency / spacing;
      CHECK(n == std::round(n));
      line_total += l.power;
    }
    const double continuous = integrate_continuous(s, s.grid.front(), s.grid.back());
    const double md = static_cast<double>(p.m());
    CHECK(continuous == doctest::Approx(1.0 - 1.0 / md).epsilon(0.005));
    CHECK(continuous + line_total == doctest::Approx(1.0).epsilon(0.005));
    CHECK(std::abs(line_total - 1.0 / md) < 1e-4);
  }
}

TEST_CASE("normalised in-band level is about 0 dB") {
  const LoraParams p(7, 125e3);
  const std::vector<double> f{0.0, 0.25 * 125e3, -0.3 * 125e3};
  for (const double g : continuous_psd(p, f)) CHECK(std::abs(10.0 * std::log10(g * p.bandwidth())) < 1.0);
  const std::vector<double> far{2.0 * 125e3};
  CHECK(10.0 * std::log10(continuous_psd(p, far)[0] * p.bandwidth()) < -30.0);
}

TEST_CASE("discrete power totals") {
  const DiscretePower d3 = discrete_power_total(LoraParams(3, 1.0), 32);
  CHECK(d3.analytic == 0.125);
  CHECK(std::abs(d3.line_sum - 0.125) < 1e-4);
  CHECK(std::abs(d3.envelope - 0.125) < 1e-6);
  const DiscretePower d10 = discrete_power_total(LoraParams(10, 1.0), 4096);
  CHECK(100.0 * d10.line_sum == doctest::Approx(0.098).epsilon(0.005 / 0.098));
  const DiscretePower d12 = discrete_power_total(LoraParams(12, 1.0), 4096);
  CHECK(100.0 * d12.analytic == doctest::Approx(0.024).epsilon(0.0005 / 0.024));
  CHECK(std::abs(d12.envelope - 1.0 / 4096) < 1e-6);
  CHECK_THROWS_AS(discrete_spectrum_lines(LoraParams(5, 1.0), 31), std::invalid_argument);
}

TEST_CASE("DFT route agrees with the closed form") {
  const LoraParams p(5, 125e3);
  const SpectrumResult dft = psd_via_dft(p, 2, std::int64_t{1} << 17);
  const SpectrumResult fr = psd_fresnel(p, 2, 2.0, 2 * p.m());
  const double df = dft.grid[1] - dft.grid[0];
  CHECK(df == doctest::Approx(125e3 / 64.0));
  const double pk = peak(fr.continuous);
  const auto zero = static_cast<std::size_t>(std::find(dft.grid.begin(), dft.grid.end(), 0.0) - dft.grid.begin());
  const auto fzero = static_cast<std::size_t>(std::find(fr.grid.begin(), fr.grid.end(), 0.0) - fr.grid.begin());
  double worst = 0.0;
  for (std::size_t i = 0; i < fr.grid.size(); ++i) {
    const std::size_t j = zero + i - fzero;
    CHECK(dft.grid[j] == doctest::Approx(fr.grid[i]));
    worst = std::max(worst, std::abs(dft.continuous[j] - fr.continuous[i]));
  }
  CHECK(10.0 * std::log10(worst / pk) < -60.0);

  const auto line_at_zero = [](const SpectrumResult& s) {
    return std::find_if(s.lines.begin(), s.lines.end(), [](const SpectralLine& l) { return l.frequency == 0.0; })->power;
  };
  CHECK(line_at_zero(dft) == doctest::Approx(line_at_zero(fr)).epsilon(1e-6));

  const SpectrumResult k1 = psd_via_dft(p, 1, 8 * p.m());
  CHECK(k1.grid[1] - k1.grid[0] == 125e3 / 32.0);
  CHECK_THROWS_AS(psd_via_dft(p, 1, 7 * p.m()), std::invalid_argument);
  CHECK_THROWS_AS(psd_via_dft(p, 1, 8 * p.m() + 1), std::invalid_argument);
  CHECK_THROWS_AS(psd_via_dft(p, 0, 8 * p.m()), std::invalid_argument);
}

TEST_CASE("cumulative queries") {
  SpectrumResult s{{-2.0, -1.0, 0.0, 1.0, 2.0}, {0.0, 1.0, 2.0, 1.0, 0.0}, {{-1.0, 0.25}, {1.0, 0.5}}, LoraParams(3, 1.0)};
  const CumulativeSpectrum c(s);
  CHECK(c.total_continuous() == doctest::Approx(4.0));
  CHECK(c.total_lines() == doctest::Approx(0.75));
  CHECK(c.continuous(-0.5, 0.5) == doctest::Approx(1.75));
  CHECK(c.continuous(-3.0, 3.0) == doctest::Approx(4.0));
  CHECK(c.lines(-1.0, 1.0) == doctest::Approx(0.25));  // lower edge in, upper edge out
  CHECK(c.lines(1.0, 1.5) == doctest::Approx(0.5));
  CHECK(integrate_continuous(s, -1.0, 0.0) == doctest::Approx(1.5));
  CHECK(line_power_between(s, -5.0, 5.0) == doctest::Approx(0.75));
}

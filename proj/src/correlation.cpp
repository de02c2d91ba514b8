#include "lora/correlation.hpp"

#include <cmath>
#include <stdexcept>

#include "lora/waveform.hpp"

namespace lora {
namespace {

// 2 pi (n / M) reduced to [0, 2 pi) with the integer numerator reduced first.
double angle_over_m(std::int64_t n, std::int64_t m) {
  std::int64_t r = n % m;
  if (r < 0) r += m;
  return kTwoPi * static_cast<double>(r) / static_cast<double>(m);
}

}  // namespace

cplx cross_correlation(const LoraParams& p, Symbol l, Symbol m) {
  if (l == m) return {1.0, 0.0};
  const std::int64_t mm = p.m();
  const std::int64_t d = m.value - l.value;
  const std::int64_t ad = d < 0 ? -d : d;
  const cplx e1 = std::polar(1.0, angle_over_m(l.value * d, mm));
  const cplx e2 = std::polar(1.0, angle_over_m(m.value * d, mm));
  const cplx denom(0.0, kTwoPi * static_cast<double>((mm - ad) * ad));
  return static_cast<double>(mm) * (e1 - e2) / denom;
}

double cross_correlation_real(const LoraParams& p, Symbol l, Symbol m) {
  if (l == m) return 1.0;
  const std::int64_t mm = p.m();
  const std::int64_t d = m.value - l.value;
  const std::int64_t ad = d < 0 ? -d : d;
  const double num = std::sin(angle_over_m(l.value * d, mm)) -
                     std::sin(angle_over_m(m.value * d, mm));
  return static_cast<double>(mm) * num /
         (kTwoPi * static_cast<double>((mm - ad) * ad));
}

double cross_correlation_magnitude(const LoraParams& p, std::int64_t offset) {
  const std::int64_t mm = p.m();
  const std::int64_t d = offset < 0 ? -offset : offset;
  if (d == 0) return 1.0;
  if (d >= mm) throw std::out_of_range("offset must be < M");
  // pi d^2 / M, with d^2 reduced mod 2M.
  const double s = std::sin(angle_over_m(d * d, 2 * mm));
  return static_cast<double>(mm) * std::abs(s) /
         (kPi * static_cast<double>((mm - d) * d));
}

cplx numeric_cross_correlation(const LoraParams& p, Symbol l, Symbol m,
                               std::int64_t steps) {
  if (steps < 64 * p.m()) {
    throw std::invalid_argument("numeric_cross_correlation: steps must be >= 64 M");
  }
  const double ts = p.symbol_duration();
  const double h = ts / static_cast<double>(steps);
  cplx acc{0.0, 0.0};
  for (std::int64_t n = 0; n <= steps; ++n) {
    const double t = n == steps ? ts : static_cast<double>(n) * h;
    const cplx v = baseband_sample(p, l, t) * std::conj(baseband_sample(p, m, t));
    acc += (n == 0 || n == steps) ? 0.5 * v : v;
  }
  const double g2 = p.amplitude() * p.amplitude();
  return acc * h / (ts * g2);
}

std::vector<std::vector<cplx>> numeric_correlation_matrix(const LoraParams& p,
                                                          std::int64_t steps) {
  if (steps < 64 * p.m()) {
    throw std::invalid_argument("numeric_correlation_matrix: steps must be >= 64 M");
  }
  const std::int64_t mm = p.m();
  const double ts = p.symbol_duration();
  const double h = ts / static_cast<double>(steps);
  const auto count = static_cast<std::size_t>(steps + 1);
  std::vector<std::vector<cplx>> wave(static_cast<std::size_t>(mm));
  for (std::int64_t a = 0; a < mm; ++a) {
    auto& w = wave[static_cast<std::size_t>(a)];
    w.resize(count);
    for (std::int64_t n = 0; n <= steps; ++n) {
      const double t = n == steps ? ts : static_cast<double>(n) * h;
      w[static_cast<std::size_t>(n)] = baseband_sample(p, Symbol{a}, t);
    }
  }
  const double scale = h / (ts * p.amplitude() * p.amplitude());
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(mm),
                                     std::vector<cplx>(static_cast<std::size_t>(mm)));
  for (std::size_t i = 0; i < wave.size(); ++i) {
    for (std::size_t j = i; j < wave.size(); ++j) {
      const auto& a = wave[i];
      const auto& b = wave[j];
      cplx acc = 0.5 * (a.front() * std::conj(b.front()) + a.back() * std::conj(b.back()));
      for (std::size_t n = 1; n + 1 < count; ++n) acc += a[n] * std::conj(b[n]);
      out[i][j] = acc * scale;
      out[j][i] = std::conj(out[i][j]);
    }
  }
  return out;
}

CorrelationMaxima max_cross_correlation(const LoraParams& p) {
  const std::int64_t mm = p.m();
  CorrelationMaxima r;
  for (std::int64_t d = 1; d < mm; ++d) {
    const double mag = cross_correlation_magnitude(p, d);
    if (mag > r.max_abs) {
      r.max_abs = mag;
      r.argmax_offset = d;
    }
    // |Re C| <= |C| for every l at this offset.
    if (mag <= r.max_abs_real) continue;
    for (std::int64_t l = 0; l + d < mm; ++l) {
      const double re = std::abs(cross_correlation_real(p, Symbol{l}, Symbol{l + d}));
      if (re > r.max_abs_real) {
        r.max_abs_real = re;
        r.argmax_pair = {l, l + d};
      }
    }
  }
  return r;
}

double max_cross_correlation_first_lobe(const LoraParams& p) {
  const auto limit = static_cast<std::int64_t>(
      std::floor(std::sqrt(static_cast<double>(p.m()) / 2.0)));
  double best = 0.0;
  for (std::int64_t d = 1; d <= limit; ++d) {
    best = std::max(best, cross_correlation_magnitude(p, d));
  }
  return best;
}

double correlation_bound(const LoraParams& p) {
  return 1.0 / (std::sqrt(2.0 * static_cast<double>(p.m())) - 1.0);
}

double snr_penalty_db(const LoraParams& p) {
  return -10.0 * std::log10(1.0 - max_cross_correlation(p).max_abs_real);
}

std::vector<std::int64_t> orthogonality_offsets(const LoraParams& p) {
  std::vector<std::int64_t> out;
  const int sf = p.sf();
  for (int q = sf % 2; (q + sf) / 2 < sf; q += 2) {
    out.push_back(std::int64_t{1} << ((q + sf) / 2));
  }
  return out;
}

std::vector<std::int64_t> zero_correlation_offsets(const LoraParams& p) {
  // d^2 divisible by 2^SF  <=>  d divisible by 2^ceil(SF/2).
  const std::int64_t step = std::int64_t{1} << ((p.sf() + 1) / 2);
  std::vector<std::int64_t> out;
  for (std::int64_t d = step; d < p.m(); d += step) out.push_back(d);
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> real_orthogonal_pairs(
    const LoraParams& p) {
  const std::int64_t mm = p.m();
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t l = 0; l < mm; ++l) {
    for (std::int64_t m = l + 1; m < mm; ++m) {
      const std::int64_t d = m - l;
      const bool square_term = (d * d) % mm == 0;
      // (m^2 - l^2)/M - 1/2 integer  <=>  2 (m^2 - l^2) = M * odd.
      const std::int64_t twice = 2 * d * (m + l);
      const bool mirror_term = twice % mm == 0 && ((twice / mm) % 2) != 0;
      if (square_term || mirror_term) out.emplace_back(l, m);
    }
  }
  return out;
}

CorrelationReport correlation_report(const LoraParams& p, bool full_matrix) {
  CorrelationReport rep;
  if (full_matrix) {
    if (p.sf() > 8) {
      throw std::invalid_argument("full correlation matrix is limited to SF <= 8");
    }
    const std::int64_t mm = p.m();
    std::vector<std::vector<cplx>> mat(static_cast<std::size_t>(mm),
                                       std::vector<cplx>(static_cast<std::size_t>(mm)));
    for (std::int64_t l = 0; l < mm; ++l) {
      for (std::int64_t m = 0; m < mm; ++m) {
        mat[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)] =
            cross_correlation(p, Symbol{l}, Symbol{m});
      }
    }
    rep.matrix = std::move(mat);
  }
  const CorrelationMaxima mx = max_cross_correlation(p);
  rep.max_abs = mx.max_abs;
  rep.max_abs_real = mx.max_abs_real;
  rep.argmax_pair = mx.argmax_pair;
  rep.bound = correlation_bound(p);
  rep.penalty_db = -10.0 * std::log10(1.0 - mx.max_abs_real);
  return rep;
}

}  // namespace lora

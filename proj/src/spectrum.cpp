#include "lora/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lora/fft.hpp"
#include "lora/fresnel.hpp"
#include "lora/waveform.hpp"

namespace lora {
namespace {

using lcplx = std::complex<long double>;

const cplx kHalfOnePlusJ(0.5, 0.5);

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::int64_t positive_mod(std::int64_t v, std::int64_t q) {
  const std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

double frac(double x) { return x - std::floor(x); }

// Chip-normalised transform (B = 1, Ts = M). With q = l - M/2 - nu M and
// r = sqrt(2/M):
//   X(nu; l) = sqrt(M/2) e^{-j pi q^2 / M} [K(A) - K(r q) + rho (K(r q) - K(D))]
// where A = r (M/2 - nu M), D = r (-M/2 - nu M), rho = e^{-j 2 pi nu M}. This is
// the sum of the two W terms of the waveform after collecting common factors.
// If A and D share a sign, K may be replaced by its tail throughout because
// the constant (1+j)/2 cancels inside the bracket.
struct NormalizedTransform {
  std::int64_t m;
  double nu_m;  // nu * M
  double r;
  bool use_tail;
  cplx ka, kd, rho;

  NormalizedTransform(std::int64_t m_, double nu) : m(m_) {
    const auto md = static_cast<double>(m);
    nu_m = nu * md;
    r = std::sqrt(2.0 / md);
    const double a = r * (0.5 * md - nu_m);
    const double d = r * (-0.5 * md - nu_m);
    use_tail = d > 0.0 || a < 0.0;
    ka = k_at(a);
    kd = k_at(d);
    rho = std::polar(1.0, -kTwoPi * frac(nu_m));
  }

  cplx k_at(double z) const { return use_tail ? fresnel_k_tail(z) : fresnel_k(z); }

  cplx operator()(std::int64_t l) const {
    const auto md = static_cast<double>(m);
    const double q = static_cast<double>(l - m / 2) - nu_m;
    const cplx kz = k_at(r * q);
    const cplx e = std::polar(1.0, -kTwoPi * frac(q * q / (2.0 * md)));
    return std::sqrt(0.5 * md) * e * (ka - kz + rho * (kz - kd));
  }
};

// Sums over symbols for grid frequencies nu M = j / k with j in one residue
// class mod k. Lattice point n carries q = n / k.
struct ClassResult {
  std::vector<double> gc_hat;  // G_c * B
  std::vector<double> line;    // line power, filled only for class 0
};

ClassResult evaluate_class(std::int64_t m, int k, std::int64_t j0, std::int64_t count,
                           bool want_lines) {
  ClassResult out;
  out.gc_hat.resize(static_cast<std::size_t>(count));
  if (want_lines) out.line.resize(static_cast<std::size_t>(count));
  if (count == 0) return out;

  const auto md = static_cast<double>(m);
  const double r = std::sqrt(2.0 / md);
  const std::int64_t kk = k;
  const std::int64_t base = -kk * m / 2 - (j0 + kk * (count - 1));
  const std::int64_t len = count + m + 1;
  const std::int64_t e_mod = 2 * kk * kk * m;  // E = exp(-j 2 pi n^2 / e_mod)

  std::vector<cplx> kfull(static_cast<std::size_t>(len));
  std::vector<cplx> ktail(static_cast<std::size_t>(len));
  std::vector<lcplx> pe(len + 1), pekf(len + 1), pekt(len + 1), pkf(len + 1), pkt(len + 1);
  std::vector<long double> pk2f(len + 1), pk2t(len + 1);
  for (std::int64_t i = 0; i < len; ++i) {
    const std::int64_t n = base + kk * i;
    const double z = r * static_cast<double>(n) / static_cast<double>(kk);
    const cplx kt = fresnel_k_tail(z);
    const cplx kf = kt + sgn(z) * kHalfOnePlusJ;
    const std::int64_t nm = positive_mod(n, e_mod);
    const double cyc = static_cast<double>(positive_mod(nm * nm, e_mod)) / static_cast<double>(e_mod);
    const cplx e = std::polar(1.0, -kTwoPi * cyc);
    const auto u = static_cast<std::size_t>(i);
    kfull[u] = kf;
    ktail[u] = kt;
    pe[u + 1] = pe[u] + lcplx(e);
    pekf[u + 1] = pekf[u] + lcplx(e * kf);
    pekt[u + 1] = pekt[u] + lcplx(e * kt);
    pkf[u + 1] = pkf[u] + lcplx(kf);
    pkt[u + 1] = pkt[u] + lcplx(kt);
    pk2f[u + 1] = pk2f[u] + std::norm(kf);
    pk2t[u + 1] = pk2t[u] + std::norm(kt);
  }

  const std::int64_t cls = positive_mod(j0, kk);
  const cplx rho = std::polar(1.0, -kTwoPi * static_cast<double>(cls) / static_cast<double>(kk));
  const cplx v = rho - 1.0;
  for (std::int64_t t = 0; t < count; ++t) {
    const std::int64_t id = count - 1 - t;
    const std::int64_t ia = id + m;
    const std::int64_t nd = base + kk * id;
    const std::int64_t na = base + kk * ia;
    const bool tail = nd > 0 || na < 0;
    const auto& kv = tail ? ktail : kfull;
    const auto& pek = tail ? pekt : pekf;
    const auto& pk = tail ? pkt : pkf;
    const auto& pk2 = tail ? pk2t : pk2f;
    const auto lo = static_cast<std::size_t>(id);
    const auto hi = static_cast<std::size_t>(id + m);
    const cplx s_e(pe[hi] - pe[lo]);
    const cplx s_ek(pek[hi] - pek[lo]);
    const cplx s_k(pk[hi] - pk[lo]);
    const auto s_k2 = static_cast<double>(pk2[hi] - pk2[lo]);
    const cplx u = kv[static_cast<std::size_t>(ia)] - rho * kv[lo];
    const double sum_br2 =
        md * std::norm(u) + std::norm(v) * s_k2 + 2.0 * std::real(std::conj(u) * v * s_k);
    const cplx sum_ebr = u * s_e + v * s_ek;
    const double g = (sum_br2 - std::norm(sum_ebr) / md) / (2.0 * md);
    out.gc_hat[static_cast<std::size_t>(t)] = std::max(g, 0.0);
    if (want_lines) out.line[static_cast<std::size_t>(t)] = std::norm(sum_ebr) / (2.0 * md * md * md);
  }
  return out;
}

}  // namespace

cplx w_integral(double a, double b, double t1, double t2) {
  if (!(b > 0.0)) throw std::invalid_argument("w_integral: b must be > 0");
  if (t1 > t2) throw std::invalid_argument("w_integral: t1 > t2");
  if (t1 == t2) return {0.0, 0.0};
  const double sb = std::sqrt(b);
  const double shift = a / (2.0 * b);
  const double x1 = 2.0 * sb * (t1 + shift);
  const double x2 = 2.0 * sb * (t2 + shift);
  const bool same_sign = (x1 > 0.0 && x2 > 0.0) || (x1 < 0.0 && x2 < 0.0);
  const cplx dk = same_sign ? fresnel_k_tail(x2) - fresnel_k_tail(x1)
                            : fresnel_k(x2) - fresnel_k(x1);
  const double cycles = frac(a * a / (4.0 * b));
  return std::polar(1.0 / (2.0 * sb), -kTwoPi * cycles) * dk;
}

cplx waveform_fourier_transform(const LoraParams& p, Symbol l, double f) {
  l = make_symbol(p, l.value);
  if (!std::isfinite(f)) throw std::invalid_argument("non-finite frequency");
  const NormalizedTransform xf(p.m(), f / p.bandwidth());
  return xf(l.value) / p.bandwidth();
}

std::vector<double> continuous_psd(const LoraParams& p, std::span<const double> grid) {
  const std::int64_t m = p.m();
  const auto md = static_cast<double>(m);
  std::vector<double> out;
  out.reserve(grid.size());
  for (const double f : grid) {
    if (!std::isfinite(f)) throw std::invalid_argument("non-finite frequency in grid");
    const NormalizedTransform xf(m, f / p.bandwidth());
    double sum2 = 0.0;
    cplx sum{0.0, 0.0};
    for (std::int64_t l = 0; l < m; ++l) {
      const cplx x = xf(l);
      sum2 += std::norm(x);
      sum += x;
    }
    const double g = (sum2 - std::norm(sum) / md) / (md * md);
    out.push_back(std::max(g, 0.0) / p.bandwidth());
  }
  return out;
}

std::vector<SpectralLine> discrete_spectrum_lines(const LoraParams& p, std::int64_t n_max) {
  if (n_max < p.m()) {
    throw std::invalid_argument("discrete_spectrum_lines: n_max must be >= M");
  }
  const ClassResult cr = evaluate_class(p.m(), 1, -n_max, 2 * n_max + 1, true);
  std::vector<SpectralLine> out;
  out.reserve(cr.line.size());
  const double step = p.bandwidth() / static_cast<double>(p.m());
  for (std::int64_t i = 0; i <= 2 * n_max; ++i) {
    out.push_back({static_cast<double>(i - n_max) * step, cr.line[static_cast<std::size_t>(i)]});
  }
  return out;
}

SpectrumResult psd_fresnel(const LoraParams& p, int k, double span, std::int64_t n_max) {
  if (k < 1) throw std::invalid_argument("psd_fresnel: k must be >= 1");
  if (!(span > 0.0)) throw std::invalid_argument("psd_fresnel: span must be > 0");
  if (n_max < 0) throw std::invalid_argument("psd_fresnel: n_max must be >= 0");
  const std::int64_t m = p.m();
  const std::int64_t kk = k;
  const auto jmax = static_cast<std::int64_t>(std::floor(span * static_cast<double>(kk * m)));
  SpectrumResult res{{}, {}, {}, p};
  res.grid.resize(static_cast<std::size_t>(2 * jmax + 1));
  res.continuous.resize(res.grid.size());
  const double step = p.bandwidth() / static_cast<double>(kk * m);
  for (std::int64_t c = 0; c < kk; ++c) {
    // Smallest j >= -jmax in this class.
    const std::int64_t j0 = -jmax + positive_mod(c + jmax, kk);
    if (j0 > jmax) continue;
    const std::int64_t count = (jmax - j0) / kk + 1;
    const ClassResult cr = evaluate_class(m, k, j0, count, false);
    for (std::int64_t t = 0; t < count; ++t) {
      const std::int64_t j = j0 + kk * t;
      const auto idx = static_cast<std::size_t>(j + jmax);
      res.grid[idx] = static_cast<double>(j) * step;
      res.continuous[idx] = cr.gc_hat[static_cast<std::size_t>(t)] / p.bandwidth();
    }
  }
  if (n_max > 0) {
    const ClassResult cr = evaluate_class(m, 1, -n_max, 2 * n_max + 1, true);
    const double line_step = p.bandwidth() / static_cast<double>(m);
    for (std::int64_t i = 0; i <= 2 * n_max; ++i) {
      res.lines.push_back({static_cast<double>(i - n_max) * line_step, cr.line[static_cast<std::size_t>(i)]});
    }
  }
  return res;
}

SpectrumResult psd_via_dft(const LoraParams& p, int k, std::int64_t samples_per_symbol) {
  const std::int64_t m = p.m();
  if (k < 1) throw std::invalid_argument("psd_via_dft: zero-pad factor must be >= 1");
  if (samples_per_symbol < 8 * m || samples_per_symbol % m != 0) {
    throw std::invalid_argument("psd_via_dft: samples per symbol must be a multiple of M and >= 8M, got " +
                                std::to_string(samples_per_symbol));
  }
  const LoraParams unit(p.sf(), p.bandwidth(), p.carrier());
  const auto oversample = static_cast<int>(samples_per_symbol / m);
  const auto n = static_cast<std::size_t>(samples_per_symbol);
  const std::size_t len = n * static_cast<std::size_t>(k);
  const double ts = p.symbol_duration();
  const double dt = ts / static_cast<double>(n);

  FftPlan plan(len);
  std::vector<cplx> spec(len);
  std::vector<cplx> sum(len);
  std::vector<double> sum2(len);
  for (std::int64_t l = 0; l < m; ++l) {
    const IqBuffer w = baseband_waveform(unit, Symbol{l}, oversample);
    plan.execute(w.samples, spec);
    for (std::size_t i = 0; i < len; ++i) {
      const cplx x = spec[i] * dt;
      sum[i] += x;
      sum2[i] += std::norm(x);
    }
  }

  const auto md = static_cast<double>(m);
  const double df = p.bandwidth() / static_cast<double>(static_cast<std::int64_t>(k) * m);
  SpectrumResult res{{}, {}, {}, p};
  res.grid.resize(len);
  res.continuous.resize(len);
  const auto half = static_cast<std::int64_t>(len / 2);
  for (std::int64_t i = -half; i < static_cast<std::int64_t>(len) - half; ++i) {
    const auto bin = static_cast<std::size_t>(positive_mod(i, static_cast<std::int64_t>(len)));
    const auto out = static_cast<std::size_t>(i + half);
    res.grid[out] = static_cast<double>(i) * df;
    const double g = (sum2[bin] - std::norm(sum[bin]) / md) / (ts * md);
    res.continuous[out] = std::max(g, 0.0);
    if (i % k == 0) {
      res.lines.push_back({res.grid[out], std::norm(sum[bin]) / (ts * ts * md * md)});
    }
  }
  return res;
}

DiscretePower discrete_power_total(const LoraParams& p, std::int64_t n_max) {
  DiscretePower out;
  const std::int64_t m = p.m();
  out.analytic = 1.0 / static_cast<double>(m);
  out.n_max = n_max;
  for (const SpectralLine& line : discrete_spectrum_lines(p, n_max)) out.line_sum += line.power;
  // |E x|^2 is a trigonometric polynomial of period Ts, so the periodic
  // rectangle rule with 64 nodes per chip is exact up to rounding.
  const std::int64_t nodes = 64 * m;
  const double ts = p.symbol_duration();
  double acc = 0.0;
  for (std::int64_t i = 0; i < nodes; ++i) {
    const double e = mean_envelope_magnitude(p, ts * static_cast<double>(i) / static_cast<double>(nodes));
    acc += e * e;
  }
  out.envelope = acc / static_cast<double>(nodes);
  return out;
}

CumulativeSpectrum::CumulativeSpectrum(const SpectrumResult& s)
    : grid_(s.grid), density_(s.continuous) {
  if (grid_.size() != density_.size()) throw std::invalid_argument("spectrum grid/value size mismatch");
  cumulative_.resize(grid_.size());
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + 0.5 * (density_[i] + density_[i - 1]) * (grid_[i] - grid_[i - 1]);
  }
  std::vector<SpectralLine> lines = s.lines;
  std::sort(lines.begin(), lines.end(),
            [](const SpectralLine& a, const SpectralLine& b) { return a.frequency < b.frequency; });
  double acc = 0.0;
  line_cumulative_.push_back(0.0);
  for (const SpectralLine& l : lines) {
    line_freq_.push_back(l.frequency);
    acc += l.power;
    line_cumulative_.push_back(acc);
  }
}

double CumulativeSpectrum::continuous_below(double f) const {
  if (grid_.empty() || f <= grid_.front()) return 0.0;
  if (f >= grid_.back()) return cumulative_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), f);
  const auto i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  const double h = grid_[i + 1] - grid_[i];
  const double x = f - grid_[i];
  const double slope = (density_[i + 1] - density_[i]) / h;
  return cumulative_[i] + x * (density_[i] + 0.5 * slope * x);
}

double CumulativeSpectrum::continuous(double f1, double f2) const {
  return continuous_below(f2) - continuous_below(f1);
}

double CumulativeSpectrum::lines(double f1, double f2) const {
  const auto lo = std::lower_bound(line_freq_.begin(), line_freq_.end(), f1) - line_freq_.begin();
  const auto hi = std::lower_bound(line_freq_.begin(), line_freq_.end(), f2) - line_freq_.begin();
  if (hi <= lo) return 0.0;
  return line_cumulative_[static_cast<std::size_t>(hi)] - line_cumulative_[static_cast<std::size_t>(lo)];
}

double integrate_continuous(const SpectrumResult& s, double f1, double f2) {
  return CumulativeSpectrum(s).continuous(f1, f2);
}

double line_power_between(const SpectrumResult& s, double f1, double f2) {
  return CumulativeSpectrum(s).lines(f1, f2);
}

}  // namespace lora

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lora/params.hpp"

namespace lora {

// Normalised cross-correlation (1/Ts) * integral of x(t;l) x*(t;m), closed form.
cplx cross_correlation(const LoraParams& p, Symbol l, Symbol m);

// Re{C_lm} via the sine-difference form; 1 when l == m.
double cross_correlation_real(const LoraParams& p, Symbol l, Symbol m);

// |C_lm| as a function of the offset d = |m - l| only.
double cross_correlation_magnitude(const LoraParams& p, std::int64_t offset);

// Brute-force trapezoidal integration of the defining integral using `steps`
// panels over [0, Ts]. Requires steps >= 64 M.
cplx numeric_cross_correlation(const LoraParams& p, Symbol l, Symbol m,
                               std::int64_t steps);

// All pairs by the same trapezoidal rule, caching the sampled waveforms.
// Entry [l][m]. Memory is M * (steps + 1) complex values.
std::vector<std::vector<cplx>> numeric_correlation_matrix(const LoraParams& p,
                                                          std::int64_t steps);

struct CorrelationMaxima {
  double max_abs = 0.0;
  double max_abs_real = 0.0;
  std::pair<std::int64_t, std::int64_t> argmax_pair{0, 0};  // of |Re C|
  std::int64_t argmax_offset = 0;                            // of |C|
};

// Exhaustive scan over l != m using the offset structure: |C| depends on the
// offset only, |Re C| = |C| |cos(pi (2l + d) d / M)|. O(M^2) cheap trig, no
// matrix.
CorrelationMaxima max_cross_correlation(const LoraParams& p);

// max |C| restricted to offsets 1 .. floor(sqrt(M/2)).
double max_cross_correlation_first_lobe(const LoraParams& p);

// 1 / (sqrt(2M) - 1).
double correlation_bound(const LoraParams& p);

// Worst-case SNR penalty against orthogonal signalling, -10 log10(1 - max|Re C|).
double snr_penalty_db(const LoraParams& p);

// The power-of-two family d = 2^((q+SF)/2) < M, q >= 0 of the same parity as
// SF. C_{l,l+d} vanishes for every l at these offsets.
std::vector<std::int64_t> orthogonality_offsets(const LoraParams& p);

// Every d in [1, M-1] with d^2/M integer: the multiples of 2^ceil(SF/2). The
// power-of-two offsets above are a subset; e.g. d = 12 at SF 4 also gives C = 0.
std::vector<std::int64_t> zero_correlation_offsets(const LoraParams& p);

// Pairs l < m with Re{C_lm} == 0 in exact arithmetic: (m-l)^2/M integer, or
// (m^2 - l^2)/M - 1/2 integer.
std::vector<std::pair<std::int64_t, std::int64_t>> real_orthogonal_pairs(
    const LoraParams& p);

struct CorrelationReport {
  std::optional<std::vector<std::vector<cplx>>> matrix;  // only when requested
  double max_abs = 0.0;
  double max_abs_real = 0.0;
  std::pair<std::int64_t, std::int64_t> argmax_pair{0, 0};
  double bound = 0.0;
  double penalty_db = 0.0;
};

// Full matrices are refused above SF 8 (16M entries at SF 12).
CorrelationReport correlation_report(const LoraParams& p, bool full_matrix);

}  // namespace lora

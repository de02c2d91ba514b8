#pragma once

#include <cstdint>
#include <vector>

#include "lora/params.hpp"

namespace lora {

// M samples of one symbol at the chip rate B.
struct ChipVector {
  std::vector<cplx> chips;
  LoraParams params;
};

// Chips multiplied by the conjugate reference chirp.
struct DechirpedVector {
  std::vector<cplx> values;
};

// x(k Tc; a) = gamma exp{j 2 pi k (a/M - 1/2 + k/(2M))}, k = 0 .. M-1.
ChipVector chip_samples(const LoraParams& p, Symbol a);

// values[k] = chips[k] exp{-j 2 pi k^2/(2M) + j pi k}. Throws on length != M.
DechirpedVector dechirp(const ChipVector& c);

// argmax_q |DFT(dechirp(c))[q]|; ties resolve to the lowest index.
Symbol demodulate_symbol(const ChipVector& c);

// Size-M DFT of the dechirped chips.
std::vector<cplx> dechirped_spectrum(const ChipVector& c);

// Decimates to the chip rate by keeping every (fs/B)-th sample from index 0
// (no anti-alias filter), then demodulates one symbol per M chips.
std::vector<Symbol> demodulate_stream(const IqBuffer& iq, const LoraParams& p);

// Adds circularly-symmetric complex Gaussian noise with per-sample variance
// P / 10^(snr_db/10), where P is the mean power of the input buffer.
// Uniforms come from std::mt19937_64(seed) as (x >> 11) * 2^-53 and are
// turned into Gaussian pairs by Box-Muller, so output is reproducible.
IqBuffer awgn(const IqBuffer& iq, double snr_db, std::uint64_t seed);

}  // namespace lora

#pragma once

#include <span>

#include "lora/params.hpp"

namespace lora {

// Instantaneous frequency of symbol a at 0 <= t < Ts, swept over [0, B) and
// wrapped by -B at tau_a = Ts(1 - a/M). The step is right-continuous, so the
// wrap already applies at t == tau_a. Throws std::domain_error outside [0, Ts).
double instantaneous_frequency(const LoraParams& p, Symbol a, double t);

// Accumulated phase (radians, not reduced) of symbol a for 0 <= t <= Ts.
// phase(0) == 0 and phase(Ts) is an integer multiple of 2*pi.
double phase(const LoraParams& p, Symbol a, double t);

// Complex envelope centred on zero frequency, x(t; a), for 0 <= t <= Ts.
// At t == Ts this returns the left limit, which equals x(0; a).
cplx baseband_sample(const LoraParams& p, Symbol a, double t);

// One symbol sampled at fs = oversample * B on the left-closed grid
// t_k = k Ts / (oversample M), k = 0 .. oversample*M - 1.
IqBuffer baseband_waveform(const LoraParams& p, Symbol a, int oversample);

// Concatenated, phase-continuous symbol stream. Throws on empty input.
IqBuffer modulate(const LoraParams& p, std::span<const Symbol> symbols,
                  int oversample);

// |E[x(t; A)]| for equiprobable symbols: (1/M) |sin(pi B t) / sin(pi B t / M)|.
double mean_envelope_magnitude(const LoraParams& p, double t);

}  // namespace lora

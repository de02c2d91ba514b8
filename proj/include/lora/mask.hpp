#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lora/analysis.hpp"

namespace lora {

struct MaskSegment {
  double f_start_hz = 0.0;
  double f_stop_hz = 0.0;
  double limit_dbm = 0.0;  // per resolution bandwidth
  double rbw_hz = 0.0;
};

// Piecewise emission limit. Segments are sorted and non-overlapping.
struct MaskSpec {
  std::string label;
  std::vector<MaskSegment> segments;
};

// Throws std::invalid_argument describing the first violated invariant.
void validate(const MaskSpec& mask);

// JSON document {label, segments: [{f_start_hz, f_stop_hz, limit_dbm, rbw_hz}]}.
MaskSpec mask_from_json(const std::string& text);
std::string mask_to_json(const MaskSpec& mask);
MaskSpec load_mask(const std::string& path);

// Copy with every limit lowered by db.
MaskSpec tightened(const MaskSpec& mask, double db);

struct SegmentVerdict {
  std::size_t index = 0;
  std::size_t bins = 0;                // bins whose centre fell in the segment
  std::size_t expected_bins = 0;       // segment width / rbw; more than `bins` means partial coverage
  std::optional<double> worst_margin;  // limit - level, dB; empty if no bins
  std::optional<double> worst_freq_hz;
};

struct MaskReport {
  bool pass = true;
  std::string label;
  std::vector<SegmentVerdict> segments;
  std::optional<double> worst_margin;
};

// Bin centres are placed at f0 + baseband centre. Throws if a segment that
// covers evaluated bins has an rbw different from the bin width.
MaskReport mask_check(const BinnedSpectrum& binned, const MaskSpec& mask, double f0);

// Re-bins the spectrum at each segment's rbw before comparing.
MaskReport mask_check(const SpectrumResult& s, const MaskSpec& mask, double f0, double ps_dbm);

std::string report_to_json(const MaskReport& r);

}  // namespace lora

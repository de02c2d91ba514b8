#include "lora/mask.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lora {

using nlohmann::json;

void validate(const MaskSpec& mask) {
  for (std::size_t i = 0; i < mask.segments.size(); ++i) {
    const MaskSegment& s = mask.segments[i];
    const std::string where = "mask segment " + std::to_string(i);
    if (!(s.f_stop_hz > s.f_start_hz)) throw std::invalid_argument(where + ": f_stop <= f_start");
    if (!(s.rbw_hz > 0.0)) throw std::invalid_argument(where + ": rbw must be > 0");
    if (!std::isfinite(s.limit_dbm)) throw std::invalid_argument(where + ": limit not finite");
    if (i > 0 && s.f_start_hz < mask.segments[i - 1].f_stop_hz) {
      throw std::invalid_argument(where + ": overlaps or precedes the previous segment");
    }
  }
}

MaskSpec mask_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("mask JSON: ") + e.what());
  }
  MaskSpec mask;
  try {
    mask.label = doc.value("label", std::string{});
    for (const json& seg : doc.at("segments")) {
      mask.segments.push_back({seg.at("f_start_hz").get<double>(), seg.at("f_stop_hz").get<double>(),
                               seg.at("limit_dbm").get<double>(), seg.at("rbw_hz").get<double>()});
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("mask JSON: ") + e.what());
  }
  validate(mask);
  return mask;
}

std::string mask_to_json(const MaskSpec& mask) {
  json doc;
  doc["label"] = mask.label;
  doc["segments"] = json::array();
  for (const MaskSegment& s : mask.segments) {
    doc["segments"].push_back({{"f_start_hz", s.f_start_hz},
                               {"f_stop_hz", s.f_stop_hz},
                               {"limit_dbm", s.limit_dbm},
                               {"rbw_hz", s.rbw_hz}});
  }
  return doc.dump(2);
}

MaskSpec load_mask(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mask file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return mask_from_json(ss.str());
}

MaskSpec tightened(const MaskSpec& mask, double db) {
  MaskSpec out = mask;
  out.label += " (tightened " + std::to_string(db) + " dB)";
  for (MaskSegment& s : out.segments) s.limit_dbm -= db;
  return out;
}

namespace {

void compare_segment(const BinnedSpectrum& binned, const MaskSegment& seg, double f0,
                     SegmentVerdict& v) {
  v.expected_bins = static_cast<std::size_t>(std::floor((seg.f_stop_hz - seg.f_start_hz) / seg.rbw_hz + 1e-9));
  for (std::size_t i = 0; i < binned.bin_centers.size(); ++i) {
    const double f = f0 + binned.bin_centers[i];
    if (f < seg.f_start_hz || f >= seg.f_stop_hz) continue;
    if (std::abs(binned.delta_f - seg.rbw_hz) > 1e-9 * seg.rbw_hz) {
      throw std::invalid_argument("mask rbw " + std::to_string(seg.rbw_hz) +
                                  " Hz differs from bin width " + std::to_string(binned.delta_f) + " Hz");
    }
    ++v.bins;
    const double margin = seg.limit_dbm - binned.bin_power_dbm[i];
    if (!v.worst_margin || margin < *v.worst_margin) {
      v.worst_margin = margin;
      v.worst_freq_hz = f;
    }
  }
}

void finish(MaskReport& r) {
  for (const SegmentVerdict& v : r.segments) {
    if (!v.worst_margin) continue;
    if (!r.worst_margin || *v.worst_margin < *r.worst_margin) r.worst_margin = v.worst_margin;
    if (*v.worst_margin < 0.0) r.pass = false;
  }
}

}  // namespace

MaskReport mask_check(const BinnedSpectrum& binned, const MaskSpec& mask, double f0) {
  validate(mask);
  MaskReport r;
  r.label = mask.label;
  for (std::size_t i = 0; i < mask.segments.size(); ++i) {
    SegmentVerdict v;
    v.index = i;
    compare_segment(binned, mask.segments[i], f0, v);
    r.segments.push_back(v);
  }
  finish(r);
  return r;
}

MaskReport mask_check(const SpectrumResult& s, const MaskSpec& mask, double f0, double ps_dbm) {
  validate(mask);
  MaskReport r;
  r.label = mask.label;
  std::map<double, BinnedSpectrum> by_rbw;
  for (std::size_t i = 0; i < mask.segments.size(); ++i) {
    const MaskSegment& seg = mask.segments[i];
    auto it = by_rbw.find(seg.rbw_hz);
    if (it == by_rbw.end()) it = by_rbw.emplace(seg.rbw_hz, binned_power(s, seg.rbw_hz, ps_dbm)).first;
    SegmentVerdict v;
    v.index = i;
    compare_segment(it->second, seg, f0, v);
    r.segments.push_back(v);
  }
  finish(r);
  return r;
}

std::string report_to_json(const MaskReport& r) {
  json doc;
  doc["verdict"] = r.pass ? "pass" : "fail";
  doc["label"] = r.label;
  doc["worst_margin_db"] = r.worst_margin ? json(*r.worst_margin) : json(nullptr);
  doc["segments"] = json::array();
  for (const SegmentVerdict& v : r.segments) {
    doc["segments"].push_back({{"index", v.index},
                               {"bins", v.bins},
                               {"expected_bins", v.expected_bins},
                               {"worst_margin_db", v.worst_margin ? json(*v.worst_margin) : json(nullptr)},
                               {"worst_freq_hz", v.worst_freq_hz ? json(*v.worst_freq_hz) : json(nullptr)}});
  }
  return doc.dump(2);
}

}  // namespace lora

#pragma once

#include <string>

#include "lora/params.hpp"

namespace lora {

enum class IqFormat { InterleavedF32Le, Csv };

// JSON sidecar describing an IQ payload.
struct IqFileHeader {
  IqFormat format = IqFormat::InterleavedF32Le;
  double fs = 0.0;
  double center_freq = 0.0;
  std::string description;
  std::int64_t sample_count = -1;  // -1 when the sidecar does not state it
};

std::string format_name(IqFormat f);
IqFormat parse_format(const std::string& name);

// Sidecar path convention: payload path + ".json".
std::string default_header_path(const std::string& payload_path);

IqFileHeader read_header(const std::string& header_path);
void write_header(const IqFileHeader& h, const std::string& header_path);

// Reads the payload described by the sidecar. Binary payloads are I,Q pairs
// of little-endian float32; CSV payloads have an "i,q" header row. Throws
// std::runtime_error on truncated or inconsistent files.
IqBuffer read_iq(const std::string& path, const std::string& header_path);

// Writes payload and sidecar {format, fs_hz, center_freq_hz, sample_count}.
void write_iq(const IqBuffer& buf, const std::string& path, const std::string& header_path,
              IqFormat format = IqFormat::InterleavedF32Le, double center_freq = 0.0,
              const std::string& description = {});

}  // namespace lora

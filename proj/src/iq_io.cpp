#include "lora/iq_io.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lora/csv.hpp"

namespace lora {

using nlohmann::json;

namespace {

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
}

void put_f32(std::ostream& out, float f) {
  const std::uint32_t le = to_le(std::bit_cast<std::uint32_t>(f));
  char bytes[4];
  std::memcpy(bytes, &le, 4);
  out.write(bytes, 4);
}

float get_f32(const char* bytes) {
  std::uint32_t le;
  std::memcpy(&le, bytes, 4);
  return std::bit_cast<float>(to_le(le));
}

}  // namespace

std::string format_name(IqFormat f) {
  return f == IqFormat::Csv ? "csv" : "interleaved-f32-le";
}

IqFormat parse_format(const std::string& name) {
  if (name == "interleaved-f32-le" || name == "cf32" || name == "f32") return IqFormat::InterleavedF32Le;
  if (name == "csv") return IqFormat::Csv;
  throw std::invalid_argument("unknown IQ format '" + name + "'");
}

std::string default_header_path(const std::string& payload_path) { return payload_path + ".json"; }

IqFileHeader read_header(const std::string& header_path) {
  std::ifstream in(header_path);
  if (!in) throw std::runtime_error("cannot open IQ header " + header_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad IQ header " + header_path + ": " + e.what());
  }
  IqFileHeader h;
  try {
    h.fs = doc.at("fs_hz").get<double>();
    h.center_freq = doc.value("center_freq_hz", 0.0);
    h.description = doc.value("description", std::string{});
    h.format = parse_format(doc.value("format", std::string("interleaved-f32-le")));
    h.sample_count = doc.value("sample_count", std::int64_t{-1});
  } catch (const std::exception& e) {
    throw std::runtime_error("bad IQ header " + header_path + ": " + e.what());
  }
  if (!(h.fs > 0.0) || !std::isfinite(h.fs)) {
    throw std::runtime_error("bad IQ header " + header_path + ": fs_hz must be > 0");
  }
  return h;
}

void write_header(const IqFileHeader& h, const std::string& header_path) {
  json doc;
  doc["format"] = format_name(h.format);
  doc["fs_hz"] = h.fs;
  doc["center_freq_hz"] = h.center_freq;
  doc["sample_count"] = h.sample_count;
  if (!h.description.empty()) doc["description"] = h.description;
  std::ofstream out(header_path);
  if (!out) throw std::runtime_error("cannot write IQ header " + header_path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + header_path);
}

IqBuffer read_iq(const std::string& path, const std::string& header_path) {
  const IqFileHeader h = read_header(header_path);
  IqBuffer buf;
  buf.fs = h.fs;
  if (h.format == IqFormat::InterleavedF32Le) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open IQ file " + path);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % 8 != 0) {
      throw std::runtime_error("IQ file " + path + " has " + std::to_string(bytes.size()) +
                               " bytes, not a whole number of f32 I/Q pairs");
    }
    buf.samples.resize(bytes.size() / 8);
    for (std::size_t i = 0; i < buf.samples.size(); ++i) {
      buf.samples[i] = {get_f32(bytes.data() + 8 * i), get_f32(bytes.data() + 8 * i + 4)};
    }
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open IQ file " + path);
    csv::Table t;
    try {
      t = csv::read(in);
    } catch (const std::exception& e) {
      throw std::runtime_error("IQ CSV " + path + ": " + e.what());
    }
    if (t.header.size() != 2 || t.header[0] != "i" || t.header[1] != "q") {
      throw std::runtime_error("IQ CSV " + path + ": header must be 'i,q'");
    }
    buf.samples.reserve(t.rows.size());
    for (const auto& row : t.rows) buf.samples.emplace_back(row[0], row[1]);
  }
  if (h.sample_count >= 0 && static_cast<std::size_t>(h.sample_count) != buf.samples.size()) {
    throw std::runtime_error("IQ file " + path + " holds " + std::to_string(buf.samples.size()) +
                             " samples but the header states " + std::to_string(h.sample_count));
  }
  return buf;
}

void write_iq(const IqBuffer& buf, const std::string& path, const std::string& header_path,
              IqFormat format, double center_freq, const std::string& description) {
  if (!(buf.fs > 0.0)) throw std::invalid_argument("write_iq: fs must be > 0");
  if (format == IqFormat::InterleavedF32Le) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write IQ file " + path);
    for (const cplx& s : buf.samples) {
      put_f32(out, static_cast<float>(s.real()));
      put_f32(out, static_cast<float>(s.imag()));
    }
    if (!out) throw std::runtime_error("write failed for " + path);
  } else {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write IQ file " + path);
    out << "i,q\n";
    for (const cplx& s : buf.samples) {
      out << csv::format_double(static_cast<float>(s.real())) << ','
          << csv::format_double(static_cast<float>(s.imag())) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
  }
  IqFileHeader h;
  h.format = format;
  h.fs = buf.fs;
  h.center_freq = center_freq;
  h.description = description;
  h.sample_count = static_cast<std::int64_t>(buf.samples.size());
  write_header(h, header_path);
}

}  // namespace lora

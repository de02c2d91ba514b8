#include "lora/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "lora/analysis.hpp"
#include "lora/correlation.hpp"
#include "lora/csv.hpp"
#include "lora/iq_io.hpp"
#include "lora/mask.hpp"
#include "lora/receiver.hpp"
#include "lora/spectrum.hpp"
#include "lora/waveform.hpp"
#include "lora/welch.hpp"

namespace lora {

using nlohmann::json;

std::vector<std::uint8_t> parse_hex(const std::string& hex) {
  std::string_view text = hex;
  if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) text.remove_prefix(2);
  std::string digits;
  for (const char c : text) {
    if (c == ' ' || c == '_' || c == ':') continue;
    if (!std::isxdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("payload: invalid hex digit '" + std::string(1, c) + "'");
    }
    digits.push_back(c);
  }
  if (digits.empty() || digits.size() % 2 != 0) {
    throw std::invalid_argument("payload: hex string must have an even, non-zero number of digits");
  }
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < digits.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoi(digits.substr(i, 2), nullptr, 16)));
  }
  return out;
}

std::vector<Symbol> payload_to_symbols(const std::vector<std::uint8_t>& payload, int sf) {
  if (sf < 1 || sf > 16) throw std::invalid_argument("payload_to_symbols: sf must be in [1, 16]");
  const std::size_t bits = payload.size() * 8;
  std::vector<Symbol> out;
  for (std::size_t start = 0; start < bits; start += static_cast<std::size_t>(sf)) {
    std::int64_t v = 0;
    for (int b = 0; b < sf; ++b) {
      const std::size_t pos = start + static_cast<std::size_t>(b);
      int bit = 0;
      if (pos < bits) bit = (payload[pos / 8] >> (7 - pos % 8)) & 1;
      v = (v << 1) | bit;
    }
    out.push_back(Symbol{v});
  }
  return out;
}

namespace {

std::vector<Symbol> parse_symbol_list(const std::string& text, const LoraParams& p) {
  std::vector<Symbol> out;
  for (const std::string& f : csv::split(text, ',')) {
    if (f.empty()) continue;
    std::size_t used = 0;
    const long long v = std::stoll(f, &used);
    if (used != f.size()) throw std::invalid_argument("bad symbol '" + f + "'");
    out.push_back(make_symbol(p, v));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& f : csv::split(text, ',')) {
    if (f.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(f, &used);
    if (used != f.size()) throw std::invalid_argument("bad integer '" + f + "'");
    out.push_back(v);
  }
  return out;
}

// Writes to the named file, or to `fallback` when the name is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

SpectrumResult read_spectrum_csv(const std::string& continuous_path, const std::string& lines_path,
                                 const LoraParams& p) {
  std::ifstream in(continuous_path);
  if (!in) throw std::runtime_error("cannot open " + continuous_path);
  const csv::Table t = csv::read(in);
  const auto col = [&](const csv::Table& tab, const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < tab.header.size(); ++i) {
      if (tab.header[i] == name) return i;
    }
    throw std::runtime_error(path + ": missing column '" + name + "'");
  };
  const std::size_t cf = col(t, "f_hz", continuous_path);
  const std::size_t cg = col(t, "psd_per_hz", continuous_path);
  SpectrumResult s{{}, {}, {}, p};
  for (const auto& row : t.rows) {
    s.grid.push_back(row[cf]);
    s.continuous.push_back(row[cg]);
  }
  if (!lines_path.empty()) {
    std::ifstream lin(lines_path);
    if (!lin) throw std::runtime_error("cannot open " + lines_path);
    const csv::Table lt = csv::read(lin);
    const std::size_t lf = col(lt, "f_hz", lines_path);
    const std::size_t lp = col(lt, "power_fraction", lines_path);
    for (const auto& row : lt.rows) s.lines.push_back({row[lf], row[lp]});
  }
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"LoRa chirp modulation: synthesis, demodulation, correlation and spectrum analysis"};
  app.require_subcommand(1);

  // modulate
  auto* mod = app.add_subcommand("modulate", "synthesize a symbol stream to an IQ file");
  int mod_sf = 7;
  double mod_bw = 125e3;
  std::string mod_symbols, mod_payload, mod_out, mod_format = "interleaved-f32-le";
  int mod_os = 1;
  double mod_f0 = 0.0;
  std::optional<double> mod_snr;
  std::uint64_t mod_seed = 1;
  mod->add_option("--sf", mod_sf, "spreading factor")->required()->check(CLI::Range(1, 16));
  mod->add_option("--bw", mod_bw, "bandwidth B in Hz")->check(CLI::PositiveNumber);
  auto* sym_opt = mod->add_option("--symbols", mod_symbols, "comma-separated symbols");
  auto* pay_opt = mod->add_option("--payload-hex", mod_payload, "payload bytes as hex");
  sym_opt->excludes(pay_opt);
  mod->add_option("--oversample", mod_os, "samples per chip")->check(CLI::PositiveNumber);
  mod->add_option("--out", mod_out, "IQ payload path (sidecar gets .json)")->required();
  mod->add_option("--format", mod_format, "interleaved-f32-le or csv");
  mod->add_option("--f0", mod_f0, "centre frequency recorded in the sidecar");
  mod->add_option("--snr-db", mod_snr, "add complex AWGN at this SNR");
  mod->add_option("--seed", mod_seed, "noise seed");

  // demod
  auto* dem = app.add_subcommand("demod", "demodulate an IQ file to symbols (JSON)");
  int dem_sf = 7;
  double dem_bw = 125e3;
  std::string dem_in, dem_header;
  dem->add_option("--sf", dem_sf)->required()->check(CLI::Range(1, 16));
  dem->add_option("--bw", dem_bw)->check(CLI::PositiveNumber);
  dem->add_option("--in", dem_in, "IQ payload path")->required();
  dem->add_option("--header", dem_header, "sidecar path (default <in>.json)");

  // xcorr
  auto* xc = app.add_subcommand("xcorr", "cross-correlation maxima, bound and SNR penalty");
  int xc_sf = 7;
  std::string xc_matrix;
  xc->add_option("--sf", xc_sf)->required()->check(CLI::Range(1, 16));
  xc->add_option("--full-matrix", xc_matrix, "write the M x M matrix as CSV (SF <= 8)");

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "continuous PSD and spectral lines as CSV");
  int sp_sf = 7;
  double sp_bw = 125e3, sp_span = 2.0, sp_ps = 14.0, sp_step = 0.0;
  int sp_k = 8;
  std::int64_t sp_nps = 0;
  std::string sp_method = "fresnel", sp_prefix = "spectrum";
  sp->add_option("--sf", sp_sf)->required()->check(CLI::Range(1, 16));
  sp->add_option("--bw", sp_bw)->check(CLI::PositiveNumber);
  sp->add_option("--method", sp_method, "fresnel or dft")->check(CLI::IsMember({"fresnel", "dft"}));
  sp->add_option("--grid-k", sp_k, "grid step B/(k M)")->check(CLI::PositiveNumber);
  sp->add_option("--grid-step", sp_step, "grid step in Hz; must divide B/M");
  sp->add_option("--span", sp_span, "half-width of the written band, in units of B");
  sp->add_option("--ps-dbm", sp_ps, "transmit power for the dBm line column");
  sp->add_option("--samples-per-symbol", sp_nps, "DFT method: samples per symbol (default 2^18)");
  sp->add_option("--out-prefix", sp_prefix, "writes <prefix>.continuous.csv and <prefix>.lines.csv");

  // table
  auto* tb = app.add_subcommand("table", "per-SF metrics table");
  std::string tb_list = "3,5,7,10,12", tb_format = "csv";
  double tb_bw = 125e3;
  tb->add_option("--sf-list", tb_list);
  tb->add_option("--bw", tb_bw)->check(CLI::PositiveNumber);
  tb->add_option("--format", tb_format)->check(CLI::IsMember({"csv", "json"}));

  // welch
  auto* wl = app.add_subcommand("welch", "Welch PSD estimate of an IQ file");
  std::string wl_in, wl_header, wl_window = "hann", wl_out;
  std::size_t wl_seg = 512;
  double wl_overlap = 0.5;
  wl->add_option("--in", wl_in)->required();
  wl->add_option("--header", wl_header);
  wl->add_option("--segment", wl_seg, "segment length in samples")->check(CLI::PositiveNumber);
  wl->add_option("--overlap", wl_overlap, "fractional overlap in [0, 1)");
  wl->add_option("--window", wl_window, "rectangular, hann, hamming, blackman");
  wl->add_option("--out", wl_out, "CSV path (default stdout)");

  // mask-check
  auto* mc = app.add_subcommand("mask-check", "compare the binned spectrum with an emission mask");
  int mc_sf = 7;
  double mc_bw = 125e3, mc_ps = 14.0, mc_f0 = 0.0, mc_tighten = 0.0;
  std::string mc_mask, mc_csv, mc_lines;
  mc->add_option("--sf", mc_sf)->check(CLI::Range(1, 16));
  mc->add_option("--bw", mc_bw)->check(CLI::PositiveNumber);
  mc->add_option("--ps-dbm", mc_ps);
  mc->add_option("--mask", mc_mask, "mask JSON")->required();
  mc->add_option("--f0", mc_f0, "carrier frequency in Hz")->required();
  mc->add_option("--spectrum-csv", mc_csv, "continuous CSV from the spectrum subcommand");
  mc->add_option("--lines-csv", mc_lines, "lines CSV from the spectrum subcommand");
  mc->add_option("--tighten-db", mc_tighten, "lower every mask limit by this many dB");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*mod) {
      const LoraParams p(mod_sf, mod_bw, mod_f0);
      std::vector<Symbol> symbols;
      if (!mod_payload.empty()) {
        symbols = payload_to_symbols(parse_hex(mod_payload), mod_sf);
      } else if (!mod_symbols.empty()) {
        symbols = parse_symbol_list(mod_symbols, p);
      } else {
        throw std::invalid_argument("modulate: give --symbols or --payload-hex");
      }
      IqBuffer buf = modulate(p, symbols, mod_os);
      if (mod_snr) buf = awgn(buf, *mod_snr, mod_seed);
      write_iq(buf, mod_out, default_header_path(mod_out), parse_format(mod_format), mod_f0,
               "LoRa SF" + std::to_string(mod_sf) + " baseband, " + std::to_string(symbols.size()) + " symbols");
      json doc;
      doc["out"] = mod_out;
      doc["samples"] = buf.samples.size();
      doc["symbols"] = json::array();
      for (const Symbol& s : symbols) doc["symbols"].push_back(s.value);
      out << doc.dump() << '\n';
    } else if (*dem) {
      const LoraParams p(dem_sf, dem_bw);
      const IqBuffer buf = read_iq(dem_in, dem_header.empty() ? default_header_path(dem_in) : dem_header);
      json doc;
      doc["sf"] = dem_sf;
      doc["symbols"] = json::array();
      for (const Symbol& s : demodulate_stream(buf, p)) doc["symbols"].push_back(s.value);
      out << doc.dump() << '\n';
    } else if (*xc) {
      const LoraParams p(xc_sf, 1.0);
      const CorrelationReport rep = correlation_report(p, !xc_matrix.empty());
      json doc;
      doc["sf"] = xc_sf;
      doc["max_abs_real"] = rep.max_abs_real;
      doc["max_abs"] = rep.max_abs;
      doc["argmax_pair"] = {rep.argmax_pair.first, rep.argmax_pair.second};
      doc["bound"] = rep.bound;
      doc["delta_max_db"] = rep.penalty_db;
      doc["orthogonal_offsets"] = orthogonality_offsets(p);
      doc["zero_correlation_offsets"] = zero_correlation_offsets(p);
      if (rep.matrix) {
        Sink sink(xc_matrix, out);
        *sink << "l,m,re,im\n";
        for (std::size_t l = 0; l < rep.matrix->size(); ++l) {
          for (std::size_t m = 0; m < rep.matrix->size(); ++m) {
            const cplx c = (*rep.matrix)[l][m];
            *sink << l << ',' << m << ',' << csv::format_double(c.real()) << ',' << csv::format_double(c.imag())
                  << '\n';
          }
        }
        doc["matrix_csv"] = xc_matrix;
      }
      out << doc.dump(2) << '\n';
    } else if (*sp) {
      const LoraParams p(sp_sf, sp_bw);
      int k = sp_k;
      if (sp_step > 0.0) {
        const double ratio = sp_bw / (static_cast<double>(p.m()) * sp_step);
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0) {
          throw std::invalid_argument("--grid-step must be B/(k M) for an integer k");
        }
        k = static_cast<int>(std::round(ratio));
      }
      SpectrumResult s = [&] {
        if (sp_method == "dft") {
          const std::int64_t n = sp_nps > 0 ? sp_nps : std::max<std::int64_t>(8 * p.m(), std::int64_t{1} << 18);
          return psd_via_dft(p, k, n);
        }
        return psd_fresnel(p, k, sp_span, static_cast<std::int64_t>(std::ceil(sp_span * static_cast<double>(p.m()))));
      }();
      const double limit = sp_span * sp_bw * (1.0 + 1e-12);
      std::vector<double> f, g, db, lf, lp, ldbm;
      for (std::size_t i = 0; i < s.grid.size(); ++i) {
        if (std::abs(s.grid[i]) > limit) continue;
        f.push_back(s.grid[i]);
        g.push_back(s.continuous[i]);
        db.push_back(s.continuous[i] > 0.0 ? 10.0 * std::log10(s.continuous[i] * sp_bw) : -300.0);
      }
      for (const SpectralLine& l : s.lines) {
        if (std::abs(l.frequency) > limit) continue;
        lf.push_back(l.frequency);
        lp.push_back(l.power);
        ldbm.push_back(l.power > 0.0 ? sp_ps + 10.0 * std::log10(l.power) : -300.0);
      }
      const std::string cpath = sp_prefix + ".continuous.csv";
      const std::string lpath = sp_prefix + ".lines.csv";
      {
        Sink sink(cpath, out);
        csv::write_columns(*sink, {"f_hz", "psd_per_hz", "psd_norm_db"}, {f, g, db});
      }
      {
        Sink sink(lpath, out);
        csv::write_columns(*sink, {"f_hz", "power_fraction", "power_dbm"}, {lf, lp, ldbm});
      }
      json doc;
      doc["method"] = sp_method;
      doc["grid_step_hz"] = sp_bw / (static_cast<double>(k) * static_cast<double>(p.m()));
      doc["points"] = f.size();
      doc["lines"] = lf.size();
      doc["continuous_csv"] = cpath;
      doc["lines_csv"] = lpath;
      out << doc.dump() << '\n';
    } else if (*tb) {
      const std::vector<TableRow> rows = reproduce_table(parse_int_list(tb_list), tb_bw);
      if (tb_format == "json") {
        json doc = json::array();
        for (const TableRow& r : rows) {
          doc.push_back({{"sf", r.sf},
                         {"m", std::int64_t{1} << r.sf},
                         {"eff_bps_per_hz", r.eff},
                         {"max_abs_re_c", r.max_re_c},
                         {"b99_hz", r.b99},
                         {"b99_over_b", r.b99_over_b},
                         {"pd_fraction", r.pd},
                         {"pd_line_sum", r.pd_numeric},
                         {"delta_max_db", r.delta_max}});
        }
        out << doc.dump(2) << '\n';
      } else {
        out << "sf,m,eff_bps_per_hz,max_abs_re_c,b99_hz,b99_over_b,pd_fraction,pd_line_sum,delta_max_db\n";
        for (const TableRow& r : rows) {
          out << r.sf << ',' << (std::int64_t{1} << r.sf) << ',' << csv::format_double(r.eff) << ','
              << csv::format_double(r.max_re_c) << ',' << csv::format_double(r.b99) << ','
              << csv::format_double(r.b99_over_b) << ',' << csv::format_double(r.pd) << ','
              << csv::format_double(r.pd_numeric) << ',' << csv::format_double(r.delta_max) << '\n';
        }
      }
    } else if (*wl) {
      const IqBuffer buf = read_iq(wl_in, wl_header.empty() ? default_header_path(wl_in) : wl_header);
      const WelchEstimate w = welch_psd(buf, wl_seg, wl_overlap, parse_window(wl_window));
      Sink sink(wl_out, out);
      csv::write_columns(*sink, {"f_hz", "psd_per_hz"}, {w.grid, w.psd});
    } else if (*mc) {
      MaskSpec mask = load_mask(mc_mask);
      if (mc_tighten != 0.0) mask = tightened(mask, mc_tighten);
      const LoraParams p(mc_sf, mc_bw, mc_f0);
      const SpectrumResult s = [&] {
        if (!mc_csv.empty()) return read_spectrum_csv(mc_csv, mc_lines, p);
        // Cover every segment edge plus one bandwidth of margin, never less than the reference span.
        double reach = 8.0;
        for (const MaskSegment& seg : mask.segments) {
          reach = std::max({reach, std::abs(seg.f_start_hz - mc_f0) / mc_bw + 1.0,
                            std::abs(seg.f_stop_hz - mc_f0) / mc_bw + 1.0});
        }
        const double span = std::ceil(reach);
        return psd_fresnel(p, 64, span, static_cast<std::int64_t>(span) * p.m());
      }();
      const MaskReport rep = mask_check(s, mask, mc_f0, mc_ps);
      out << report_to_json(rep) << '\n';
      return rep.pass ? 0 : 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lora

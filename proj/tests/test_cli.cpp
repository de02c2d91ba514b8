#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "lora/cli.hpp"
#include "lora/csv.hpp"

using namespace lora;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lorachirp");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("lorachirp_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

csv::Table read_csv(const std::string& path) {
  std::ifstream in(path);
  return csv::read(in);
}

}  // namespace

TEST_CASE("payload mapping") {
  CHECK(parse_hex("DEADbeef") == std::vector<std::uint8_t>{0xDE, 0xAD, 0xBE, 0xEF});
  CHECK(parse_hex("0x0102") == std::vector<std::uint8_t>{1, 2});
  CHECK_THROWS(parse_hex("ABC"));
  CHECK_THROWS(parse_hex("zz"));
  using S = std::vector<Symbol>;
  CHECK(payload_to_symbols({0xDE, 0xAD}, 8) == S{{0xDE}, {0xAD}});
  // 1111 1111 -> 1111111 | 1000000 (zero padded).
  CHECK(payload_to_symbols({0xFF}, 7) == S{{127}, {64}});
  CHECK(payload_to_symbols({0xA5}, 4) == S{{0xA}, {0x5}});
  CHECK(payload_to_symbols(std::vector<std::uint8_t>(16, 0), 7).size() == 19);
}

TEST_CASE("modulate then demod") {
  TempDir dir;
  const std::string iq = dir / "s.f32";
  Run m = run({"modulate", "--sf", "7", "--bw", "125e3", "--symbols", "3,1,4,127,0", "--oversample", "4", "--out", iq});
  REQUIRE(m.code == 0);
  CHECK(fs::file_size(iq) == 5u * 128u * 4u * 8u);
  Run d = run({"demod", "--sf", "7", "--bw", "125e3", "--in", iq});
  REQUIRE(d.code == 0);
  CHECK(json::parse(d.out)["symbols"] == json::array({3, 1, 4, 127, 0}));

  const std::string hex = dir / "p.csv";
  REQUIRE(run({"modulate", "--sf", "8", "--payload-hex", "CAFE01", "--out", hex, "--format", "csv"}).code == 0);
  CHECK(json::parse(run({"demod", "--sf", "8", "--in", hex}).out)["symbols"] == json::array({0xCA, 0xFE, 0x01}));

  const std::string noisy = dir / "n.f32";
  REQUIRE(run({"modulate", "--sf", "9", "--symbols", "5,500,77", "--snr-db", "0", "--seed", "3", "--out", noisy}).code == 0);
  CHECK(json::parse(run({"demod", "--sf", "9", "--in", noisy}).out)["symbols"] == json::array({5, 500, 77}));
}

TEST_CASE("errors give nonzero exit codes") {
  CHECK(run({}).code != 0);
  CHECK(run({"frobnicate"}).code != 0);
  CHECK(run({"table", "--bogus"}).code != 0);
  CHECK(run({"xcorr", "--sf", "17"}).code != 0);
  CHECK(run({"modulate", "--sf", "7", "--symbols", "128", "--out", "/nonexistent/x"}).code == 1);
  Run missing = run({"demod", "--sf", "7", "--in", "/nonexistent/file.f32"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("/nonexistent/file.f32") != std::string::npos);
  CHECK(run({"table", "--sf-list", "3,14"}).code == 1);
}

TEST_CASE("table output") {
  Run t = run({"table", "--sf-list", "3,7"});
  REQUIRE(t.code == 0);
  std::istringstream in(t.out);
  const csv::Table tab = csv::read(in);
  REQUIRE(tab.rows.size() == 2);
  CHECK(tab.header[0] == "sf");
  CHECK(tab.rows[0][2] == 0.375);
  CHECK(std::abs(tab.rows[1][3] - 0.045) <= 0.001);
  CHECK(std::abs(tab.rows[1][5] - 1.045) <= 0.005);
  CHECK(std::abs(tab.rows[1][8] - 0.20) <= 0.01);
  Run j = run({"table", "--sf-list", "5", "--format", "json"});
  REQUIRE(j.code == 0);
  CHECK(std::abs(json::parse(j.out)[0]["b99_over_b"].get<double>() - 1.185) <= 0.005);
}

TEST_CASE("xcorr") {
  TempDir dir;
  Run x = run({"xcorr", "--sf", "4", "--full-matrix", dir / "m.csv"});
  REQUIRE(x.code == 0);
  const json doc = json::parse(x.out);
  CHECK(doc["orthogonal_offsets"] == json::array({4, 8}));
  CHECK(doc["zero_correlation_offsets"] == json::array({4, 8, 12}));
  CHECK(doc["max_abs"].get<double>() <= doc["bound"].get<double>());
  const csv::Table m = read_csv(dir / "m.csv");
  CHECK(m.rows.size() == 256);
  CHECK(m.rows[0][2] == 1.0);
  CHECK(run({"xcorr", "--sf", "10", "--full-matrix", dir / "big.csv"}).code == 1);
}

TEST_CASE("spectrum methods agree and feed mask-check") {
  TempDir dir;
  const std::string fr = dir / "fr";
  const std::string dft = dir / "dft";
  REQUIRE(run({"spectrum", "--sf", "3", "--bw", "125e3", "--grid-k", "4", "--span", "2", "--out-prefix", fr}).code == 0);
  REQUIRE(run({"spectrum", "--sf", "3", "--bw", "125e3", "--method", "dft", "--grid-k", "4", "--samples-per-symbol",
               "65536", "--span", "2", "--out-prefix", dft})
              .code == 0);
  const csv::Table a = read_csv(fr + ".continuous.csv");
  const csv::Table b = read_csv(dft + ".continuous.csv");
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(a.header == std::vector<std::string>{"f_hz", "psd_per_hz", "psd_norm_db"});
  double peak = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i][0] == b.rows[i][0]);
    peak = std::max(peak, a.rows[i][1]);
    dev = std::max(dev, std::abs(a.rows[i][1] - b.rows[i][1]));
  }
  CHECK(10.0 * std::log10(dev / peak) < -60.0);
  const csv::Table lines = read_csv(fr + ".lines.csv");
  CHECK(lines.header == std::vector<std::string>{"f_hz", "power_fraction", "power_dbm"});
  CHECK(lines.rows.size() == 33);  // |n| <= span * M = 16

  CHECK(run({"spectrum", "--sf", "3", "--grid-step", "1000", "--out-prefix", fr}).code == 1);
  CHECK(run({"spectrum", "--sf", "3", "--bw", "8000", "--grid-step", "250", "--out-prefix", fr}).code == 0);

  // A wide analytic spectrum round-trips through CSV into the mask check.
  const std::string wide = dir / "wide";
  REQUIRE(run({"spectrum", "--sf", "7", "--grid-k", "64", "--span", "12", "--out-prefix", wide}).code == 0);
  Run from_csv = run({"mask-check", "--spectrum-csv", wide + ".continuous.csv", "--lines-csv", wide + ".lines.csv",
                      "--ps-dbm", "14", "--mask", LORA_DATA_DIR "/g1_example_mask.json", "--f0", "868.3e6"});
  Run direct = run({"mask-check", "--sf", "7", "--bw", "125e3", "--ps-dbm", "14", "--mask",
                    LORA_DATA_DIR "/g1_example_mask.json", "--f0", "868.3e6"});
  REQUIRE(from_csv.code == 0);
  REQUIRE(direct.code == 0);
  CHECK(json::parse(from_csv.out)["worst_margin_db"].get<double>() ==
        doctest::Approx(json::parse(direct.out)["worst_margin_db"].get<double>()).epsilon(1e-9));
}

TEST_CASE("mask-check exit codes") {
  const std::string mask = LORA_DATA_DIR "/g1_example_mask.json";
  Run pass = run({"mask-check", "--sf", "7", "--ps-dbm", "14", "--mask", mask, "--f0", "868.3e6"});
  CHECK(pass.code == 0);
  CHECK(json::parse(pass.out)["verdict"] == "pass");
  Run fail = run({"mask-check", "--sf", "7", "--ps-dbm", "14", "--mask", mask, "--f0", "868.3e6", "--tighten-db", "40"});
  CHECK(fail.code == 2);
  CHECK(json::parse(fail.out)["worst_margin_db"].get<double>() < 0.0);
  CHECK(run({"mask-check", "--sf", "7", "--mask", "/nonexistent.json", "--f0", "868.3e6"}).code == 1);
}

TEST_CASE("welch subcommand") {
  TempDir dir;
  const std::string iq = dir / "w.f32";
  REQUIRE(run({"modulate", "--sf", "5", "--symbols", "1,2,3,4,5,6,7,8", "--oversample", "4", "--out", iq}).code == 0);
  Run w = run({"welch", "--in", iq, "--segment", "128", "--overlap", "0.5", "--window", "hann", "--out", dir / "w.csv"});
  REQUIRE(w.code == 0);
  const csv::Table t = read_csv(dir / "w.csv");
  REQUIRE(t.rows.size() == 128);
  double integral = 0.0;
  for (const auto& r : t.rows) integral += r[1] * (t.rows[1][0] - t.rows[0][0]);
  CHECK(integral == doctest::Approx(1.0).epsilon(0.01));
  CHECK(run({"welch", "--in", iq, "--segment", "100000"}).code == 1);
  CHECK(run({"welch", "--in", iq, "--window", "kaiser"}).code == 1);
}

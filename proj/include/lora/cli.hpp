#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "lora/params.hpp"

namespace lora {

// Big-endian bit stream chunked into SF-bit groups; the last group is
// zero-padded on the right.
std::vector<Symbol> payload_to_symbols(const std::vector<std::uint8_t>& payload, int sf);
std::vector<std::uint8_t> parse_hex(const std::string& hex);

// Exit codes: 0 success, 1 runtime/input error, 2 mask-check failure verdict,
// CLI11 parse errors keep CLI11's nonzero codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lora

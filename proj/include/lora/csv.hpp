#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace lora::csv {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

double parse_double(const std::string& field);

void write_columns(std::ostream& out, const std::vector<std::string>& header,
                   const std::vector<std::span<const double>>& columns);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Comma-separated numeric table with one header line.
Table read(std::istream& in);

std::vector<std::string> split(const std::string& line, char sep = ',');

}  // namespace lora::csv

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace blendnet {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

// Fixed-precision form for plot coordinates and report tables.
std::string format_fixed(double v, int digits);

bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, int& out);

std::string_view trim(std::string_view s);

// Plain comma split; the dataset schema has no quoted or embedded commas.
std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace blendnet

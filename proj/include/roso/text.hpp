#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the data-file, config and CSV readers.
namespace roso::text {

std::string_view trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

int parse_int(std::string_view s);
long long parse_int64(std::string_view s);
unsigned long long parse_uint64(std::string_view s);
double parse_double(std::string_view s);

// Shortest representation that round-trips exactly.
std::string format_double(double v);
// Fixed-point with the given number of decimals.
std::string format_fixed(double v, int decimals);

std::string lower(std::string_view s);

} // namespace roso::text

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dcc::text {

std::vector<std::string> split(std::string_view line, char sep);
std::vector<std::string> split_ws(std::string_view line);
std::string_view trim(std::string_view s);

// %.9g; enough for a stable text round trip of stored weights.
std::string format_number(double x);
double parse_number(std::string_view s);

std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace dcc::text

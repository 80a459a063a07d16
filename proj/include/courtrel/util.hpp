#ifndef COURTREL_UTIL_HPP
#define COURTREL_UTIL_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace courtrel {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool is_ascii_space(char c);

// Locale-independent shortest round-trip formatting (std::to_chars).
// -inf renders as "-inf", +inf as "inf".
std::string format_double(double value);

std::uint64_t fnv1a64(std::string_view data);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Minimal CSV: quotes a field iff it contains comma, quote or newline.
std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);
std::vector<std::string> csv_parse_line(std::string_view line);

}  // namespace courtrel

#endif

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace exwa::io {

struct CsvRow {
    std::size_t line = 0;  // 1-based line number in the source text
    std::vector<std::string> fields;
};

/// Splits comma-separated text into rows. Double-quoted fields may contain
/// commas and doubled quotes; blank lines are skipped; CR before LF is dropped.
std::vector<CsvRow> parse_csv(std::string_view text);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_integer(std::string_view s);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double v, int decimals);

/// Quotes a field if it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

std::string read_file(const std::string& path);

}  // namespace exwa::io

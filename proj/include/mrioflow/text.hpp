#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mrioflow::text {

/// Split one record on `delim`, honouring RFC 4180 double-quote escaping.
/// `fields` is cleared and refilled so callers can reuse its capacity.
void split_record(std::string_view line, char delim, std::vector<std::string>& fields);
std::vector<std::string> split_record(std::string_view line, char delim);

/// Quote a field when it contains the delimiter, a quote, or a line break.
std::string escape_field(std::string_view field, char delim = ',');

/// Strip a trailing '\r' left by CRLF line endings.
std::string_view chomp(std::string_view line);

struct NumberFormat {
    bool decimal_comma = false;
    bool allow_exponent = false;
};

/// Strict decimal parse: optional sign, digits, one decimal separator, optional exponent only
/// when allowed. No locale guessing, no inf/nan, no surrounding junk (whitespace is trimmed).
std::optional<double> parse_decimal(std::string_view cell, NumberFormat format = {});

/// Shortest fixed-notation text that parses back to exactly `value`.
std::string format_decimal(double value);

/// Fixed-precision text with thousands separators, e.g. 54293750 -> "54,293,750".
std::string group_thousands(double value, int decimals = 0);

std::size_t edit_distance(std::string_view a, std::string_view b);

} // namespace mrioflow::text

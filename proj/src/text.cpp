#include "mrioflow/text.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <system_error>

namespace mrioflow::text {

void split_record(std::string_view line, char delim, std::vector<std::string>& fields)
{
    fields.clear();
    std::string current;
    bool quoted = false;
    bool field_started_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == delim) {
            fields.push_back(std::move(current));
            current.clear();
            field_started_quoted = false;
        } else if (c == '"' && current.empty() && !field_started_quoted) {
            quoted = true;
            field_started_quoted = true;
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
}

std::vector<std::string> split_record(std::string_view line, char delim)
{
    std::vector<std::string> fields;
    split_record(line, delim, fields);
    return fields;
}

std::string escape_field(std::string_view field, char delim)
{
    const bool needs_quotes = field.find_first_of(std::string{delim} + "\"\r\n") != std::string_view::npos;
    if (!needs_quotes)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += "\"\"";
        else
            out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string_view chomp(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    return line;
}

std::optional<double> parse_decimal(std::string_view cell, NumberFormat format)
{
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
        cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t'))
        cell.remove_suffix(1);
    if (cell.empty())
        return std::nullopt;

    const char separator = format.decimal_comma ? ',' : '.';
    std::string buffer;
    buffer.reserve(cell.size());
    std::size_t i = 0;
    if (cell[i] == '+' || cell[i] == '-') {
        if (cell[i] == '-')
            buffer.push_back('-');
        ++i;
    }
    bool digits = false;
    bool seen_separator = false;
    for (; i < cell.size(); ++i) {
        const char c = cell[i];
        if (c >= '0' && c <= '9') {
            buffer.push_back(c);
            digits = true;
        } else if (c == separator && !seen_separator) {
            buffer.push_back('.');
            seen_separator = true;
        } else {
            break;
        }
    }
    if (!digits)
        return std::nullopt;
    if (i < cell.size()) {
        if (!format.allow_exponent || (cell[i] != 'e' && cell[i] != 'E'))
            return std::nullopt;
        buffer.push_back('e');
        ++i;
        if (i < cell.size() && (cell[i] == '+' || cell[i] == '-'))
            buffer.push_back(cell[i++]);
        bool exp_digits = false;
        for (; i < cell.size(); ++i) {
            if (cell[i] < '0' || cell[i] > '9')
                return std::nullopt;
            buffer.push_back(cell[i]);
            exp_digits = true;
        }
        if (!exp_digits)
            return std::nullopt;
    }

    double value = 0;
    const auto [ptr, ec] = std::from_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{} || ptr != buffer.data() + buffer.size() || !std::isfinite(value))
        return std::nullopt;
    return value;
}

std::string format_decimal(double value)
{
    if (value == 0)
        return "0";
    std::array<char, 512> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
    if (ec != std::errc{})
        return fmt::format("{}", value);
    return std::string(buf.data(), ptr);
}

std::string group_thousands(double value, int decimals)
{
    std::string raw = fmt::format("{:.{}f}", std::abs(value), decimals);
    const auto dot = raw.find('.');
    std::string int_part = raw.substr(0, dot);
    const std::string frac_part = dot == std::string::npos ? "" : raw.substr(dot);
    std::string grouped;
    for (std::size_t i = 0; i < int_part.size(); ++i) {
        if (i > 0 && (int_part.size() - i) % 3 == 0)
            grouped.push_back(',');
        grouped.push_back(int_part[i]);
    }
    const bool negative = value < 0 && raw.find_first_not_of("0.") != std::string::npos;
    return (negative ? "-" : "") + grouped + frac_part;
}

std::size_t edit_distance(std::string_view a, std::string_view b)
{
    std::vector<std::size_t> prev(b.size() + 1), curr(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        curr[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, subst});
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

} // namespace mrioflow::text

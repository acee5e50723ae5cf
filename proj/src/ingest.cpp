#include "mrioflow/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

namespace mrioflow {

namespace {

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IOError("cannot open '" + path.string() + "'");
    return in;
}

bool is_blank(std::string_view line)
{
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::optional<int> parse_int(std::string_view s)
{
    s = text::chomp(s);
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return value;
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return normalize_label(s);
}

} // namespace

std::optional<int> year_from_filename(const std::string& file_name, const std::string& pattern)
{
    const auto at = pattern.find("{year}");
    if (at == std::string::npos)
        return std::nullopt;
    const std::string prefix = pattern.substr(0, at);
    const std::string suffix = pattern.substr(at + 6);
    if (file_name.size() != prefix.size() + 4 + suffix.size())
        return std::nullopt;
    if (file_name.compare(0, prefix.size(), prefix) != 0 ||
        file_name.compare(file_name.size() - suffix.size(), suffix.size(), suffix) != 0)
        return std::nullopt;
    const std::string digits = file_name.substr(prefix.size(), 4);
    if (!std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    return std::stoi(digits);
}

TransactionTable parse_mrio(const MrioFileSpec& spec)
{
    if (spec.header_rows < 1 || spec.label_cols < 1)
        throw InvalidInput("header_rows and label_cols must both be at least 1");

    int year = 0;
    if (spec.year) {
        year = *spec.year;
    } else if (spec.year_pattern) {
        auto y = year_from_filename(spec.path.filename().string(), *spec.year_pattern);
        if (!y)
            throw MissingYear("'" + spec.path.filename().string() + "' does not match pattern '" +
                              *spec.year_pattern + "'");
        year = *y;
    } else {
        throw MissingYear("no explicit year and no file-name pattern for '" + spec.path.string() + "'");
    }

    auto in = open_input(spec.path);
    const auto label_cols = static_cast<std::size_t>(spec.label_cols);
    const bool has_region_row = spec.header_rows >= 2;
    const bool has_region_col = spec.label_cols >= 2;

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> region_row;
    std::vector<std::string> sector_row;
    for (int h = 0; h < spec.header_rows; ++h) {
        if (!std::getline(in, line)) {
            if (h == 0)
                throw EmptyFile("'" + spec.path.string() + "' is empty");
            throw MalformedHeader("file ends inside the header");
        }
        ++line_no;
        if (h == 0 && is_blank(line))
            throw EmptyFile("'" + spec.path.string() + "' starts with a blank line");
        if (has_region_row && h == 0)
            region_row = text::split_record(text::chomp(line), spec.delimiter);
        else if ((has_region_row && h == 1) || (!has_region_row && h == 0))
            sector_row = text::split_record(text::chomp(line), spec.delimiter);
    }

    if (sector_row.size() <= label_cols)
        throw MalformedHeader("header declares no data columns");
    if (has_region_row && region_row.size() != sector_row.size())
        throw MalformedHeader("region header has " + std::to_string(region_row.size()) + " fields, sector header " +
                              std::to_string(sector_row.size()));

    const std::size_t n = sector_row.size() - label_cols;
    std::vector<RegionSector> columns;
    columns.reserve(n);
    try {
        for (std::size_t k = 0; k < n; ++k) {
            RegionCode region{has_region_row ? std::string_view(region_row[label_cols + k])
                                             : std::string_view(spec.single_region)};
            columns.push_back({std::move(region), SectorLabel{sector_row[label_cols + k]}});
        }
    } catch (const InvalidInput& e) {
        throw MalformedHeader(std::string("blank header cell: ") + e.what());
    }
    auto index = std::make_shared<const RegionSectorIndex>(std::move(columns));

    std::vector<TransactionTable::Triplet> cells;
    std::vector<std::string> fields;
    std::size_t row = 0;
    const std::size_t expected_fields = label_cols + n;
    while (std::getline(in, line)) {
        ++line_no;
        const auto record = text::chomp(line);
        if (is_blank(record))
            continue;
        text::split_record(record, spec.delimiter, fields);
        if (fields.size() != expected_fields)
            throw MalformedHeader("ragged row at line " + std::to_string(line_no) + ": " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(expected_fields));
        if (row >= n)
            throw MalformedHeader("more data rows than header columns (line " + std::to_string(line_no) + ")");

        const auto& expected = (*index)[row];
        const std::string sector = normalize_label(fields[label_cols - 1]);
        const std::string region = has_region_col ? normalize_label(fields[0]) : expected.region.str();
        if (region != expected.region.str() || sector != expected.sector.str())
            throw MalformedHeader("row order differs from column order at line " + std::to_string(line_no) + ": got (" +
                                  region + ", " + sector + "), header has (" + expected.region.str() + ", " +
                                  expected.sector.str() + ")");

        for (std::size_t k = 0; k < n; ++k) {
            const auto value = text::parse_decimal(fields[label_cols + k], spec.number_format);
            if (!value)
                throw NonNumericCell(line_no, label_cols + k + 1, fields[label_cols + k]);
            if (*value != 0.0)
                cells.emplace_back(static_cast<int>(row), static_cast<int>(k), *value);
        }
        ++row;
    }
    if (row != n)
        throw MalformedHeader("found " + std::to_string(row) + " data rows for " + std::to_string(n) + " columns");

    TableMeta meta;
    meta.source = spec.path.string();
    meta.unit = spec.unit;
    return TransactionTable(year, std::move(index), cells, std::move(meta));
}

void write_mrio(const TransactionTable& table, const MrioFileSpec& spec)
{
    if (spec.header_rows < 1 || spec.label_cols < 1)
        throw InvalidInput("header_rows and label_cols must both be at least 1");
    std::ofstream out(spec.path, std::ios::binary);
    if (!out)
        throw IOError("cannot write '" + spec.path.string() + "'");

    const char d = spec.delimiter;
    const auto label_cols = static_cast<std::size_t>(spec.label_cols);
    const auto& index = table.index();
    const std::size_t n = index.size();

    auto label_prefix = [&](std::string_view first) {
        std::string s(first);
        for (std::size_t c = 1; c < label_cols; ++c)
            s.push_back(d);
        return s;
    };

    if (spec.header_rows >= 2) {
        out << label_prefix("region");
        for (const auto& e : index.entries())
            out << d << text::escape_field(e.region.str(), d);
        out << '\n';
    }
    out << label_prefix("sector");
    for (const auto& e : index.entries())
        out << d << text::escape_field(e.sector.str(), d);
    out << '\n';
    for (int h = 2; h < spec.header_rows; ++h) {
        out << label_prefix("");
        for (std::size_t k = 0; k < n; ++k)
            out << d;
        out << '\n';
    }

    const auto& z = table.cells();
    std::vector<std::string> row_text(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = index[i];
        if (label_cols >= 2) {
            out << text::escape_field(e.region.str(), d);
            for (std::size_t c = 1; c + 1 < label_cols; ++c)
                out << d;
            out << d;
        }
        out << text::escape_field(e.sector.str(), d);

        std::fill(row_text.begin(), row_text.end(), std::string("0"));
        for (TransactionTable::Matrix::InnerIterator it(z, static_cast<Eigen::Index>(i)); it; ++it) {
            std::string v = text::format_decimal(it.value());
            if (spec.number_format.decimal_comma)
                std::replace(v.begin(), v.end(), '.', ',');
            row_text[static_cast<std::size_t>(it.col())] = text::escape_field(v, d);
        }
        for (const auto& v : row_text)
            out << d << v;
        out << '\n';
    }
    if (!out)
        throw IOError("write failed for '" + spec.path.string() + "'");
}

ExtensionVector parse_extension(const std::filesystem::path& path, const RegionSectorIndex& index, MatchMode mode)
{
    auto in = open_input(path);
    ExtensionVector result;
    result.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(index.size()));
    std::vector<bool> seen(index.size(), false);

    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto record = text::chomp(line);
        if (is_blank(record))
            continue;
        text::split_record(record, ',', fields);
        if (fields.size() != 3)
            throw MalformedHeader("line " + std::to_string(line_no) + " of '" + path.string() +
                                  "': expected region,sector,value");
        if (line_no == 1 && lower(fields[2]) == "value")
            continue;
        const auto value = text::parse_decimal(fields[2], {.decimal_comma = false, .allow_exponent = true});
        if (!value)
            throw NonNumericCell(line_no, 3, fields[2]);

        std::optional<std::size_t> pos;
        if (!normalize_label(fields[0]).empty() && !normalize_label(fields[1]).empty())
            pos = index.find({RegionCode{fields[0]}, SectorLabel{fields[1]}});
        if (!pos) {
            if (mode == MatchMode::Strict)
                throw UnknownRegionSector("line " + std::to_string(line_no) + ": (" + fields[0] + ", " + fields[1] +
                                          ") is not in the table index");
            ++result.unknown;
            continue;
        }
        if (seen[*pos])
            throw DuplicateEntry("line " + std::to_string(line_no) + ": (" + fields[0] + ", " + fields[1] +
                                 ") listed twice");
        seen[*pos] = true;
        result.values[static_cast<Eigen::Index>(*pos)] = *value;
    }
    result.missing = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), false));
    return result;
}

PriceSeries parse_price_series(const std::filesystem::path& path, std::string name)
{
    auto in = open_input(path);
    PriceSeries series;
    series.name = name.empty() ? path.stem().string() : std::move(name);

    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    bool first_record = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto record = text::chomp(line);
        if (is_blank(record))
            continue;
        text::split_record(record, ',', fields);
        if (fields.size() != 2)
            throw MalformedHeader("line " + std::to_string(line_no) + " of '" + path.string() + "': expected year,price");
        const auto year = parse_int(fields[0]);
        if (!year) {
            if (first_record) {
                first_record = false;
                continue;
            }
            throw NonNumericCell(line_no, 1, fields[0]);
        }
        first_record = false;
        const auto price = text::parse_decimal(fields[1]);
        if (!price)
            throw NonNumericCell(line_no, 2, fields[1]);
        if (!(*price > 0))
            throw NonPositivePrice("year " + std::to_string(*year) + " has price " + fields[1]);
        if (!series.points.emplace(*year, *price).second)
            throw DuplicateYear("year " + std::to_string(*year) + " appears twice in '" + path.string() + "'");
    }
    return series;
}

} // namespace mrioflow

#pragma once

#include "mrioflow/core.hpp"
#include "mrioflow/text.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace mrioflow {

/// Layout of a delimited transaction-table file.
///
/// Defaults follow the industry-by-industry transaction layout: tab separated, header row 1
/// holds region codes, header row 2 sector labels, and every data row starts with a region
/// column and a sector column. Extra header rows (e.g. a row of index names) are skipped.
/// With a single header row or a single label column the table is read as single-region and
/// every entry gets `single_region`.
struct MrioFileSpec {
    std::filesystem::path path;
    char delimiter = '\t';
    int header_rows = 2;
    int label_cols = 2;
    std::string unit = "M€";
    text::NumberFormat number_format{};
    std::optional<int> year;               // explicit year wins over the pattern
    std::optional<std::string> year_pattern; // file name with a "{year}" placeholder
    std::string single_region = "GLOBAL";
};

/// Year encoded in `file_name` according to a pattern like "Z_{year}.txt".
std::optional<int> year_from_filename(const std::string& file_name, const std::string& pattern);

/// Stream a transaction table from disk. Zeros are dropped while reading, so memory grows
/// with the index and the nonzero count only.
TransactionTable parse_mrio(const MrioFileSpec& spec);

/// Write `table` in the layout described by `spec` (path, delimiter, header/label counts).
void write_mrio(const TransactionTable& table, const MrioFileSpec& spec);

struct ExtensionVector {
    Eigen::VectorXd values;   // aligned to index order
    std::size_t missing = 0;  // index positions with no row in the file
    std::size_t unknown = 0;  // file rows skipped in lenient mode
};

/// Per region-sector vector from a `region,sector,value` CSV. A leading header line whose
/// value column reads "value" is skipped. Used for intensities and demand vectors.
ExtensionVector parse_extension(const std::filesystem::path& path, const RegionSectorIndex& index,
                                MatchMode mode = MatchMode::Strict);

struct PriceSeries {
    std::string name;
    std::map<int, double> points; // year -> currency units per barrel
};

/// Two-column `year,price` CSV with optional header line.
PriceSeries parse_price_series(const std::filesystem::path& path, std::string name = {});

} // namespace mrioflow

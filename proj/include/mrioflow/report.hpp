#pragma once

#include "mrioflow/flows.hpp"
#include "mrioflow/ingest.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mrioflow::report {

/// RFC 4180 table: header row, ',' separator, '.' decimal, '\n' line ends.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// year,from,to,value,share
CsvTable flows_csv(const std::vector<FlowValue>& flows, const std::vector<std::optional<double>>& shares = {});
CsvTable series_csv(const FlowSeries& series);
CsvTable overlay_csv(const std::vector<OverlayRow>& rows, const std::string& price_name);
CsvTable ranking_csv(const ContributorRanking& ranking);

struct SankeyNode {
    int id = 0;
    std::string name;
    std::string label;
    std::string side; // "source" or "target"
};

struct SankeyLink {
    int source = 0;
    int target = 0;
    double value = 0; // M€
    bool flagged = false; // negative flow
};

struct SankeyDocument {
    std::vector<SankeyNode> nodes;
    std::vector<SankeyLink> links;
    std::string unit = "M€";

    double total() const;
    void validate() const; // throws DanglingLink
    std::string to_json() const;
};

/// One source node per distinct from-group, one target node per distinct to-group, one link per flow.
/// `labels` maps group names to display labels.
SankeyDocument to_sankey(const std::vector<FlowValue>& flows, const std::map<std::string, std::string>& labels = {});

struct ChartOptions {
    std::string title;
    std::string y_label = "M€";
    std::string overlay_label = "USD/bbl";
    int width = 800;
    int height = 480;
};

/// Static SVG line chart of the series values; the price overlay gets a secondary right axis.
/// Coordinates are fixed to two decimals and element order is stable.
std::string render_line_chart(const FlowSeries& series, const std::optional<PriceSeries>& overlay = std::nullopt,
                              const ChartOptions& options = {});

std::string render_sankey(const SankeyDocument& doc, const ChartOptions& options = {});

} // namespace mrioflow::report

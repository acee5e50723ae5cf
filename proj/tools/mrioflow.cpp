#include "mrioflow/concordance.hpp"
#include "mrioflow/eeioa.hpp"
#include "mrioflow/flows.hpp"
#include "mrioflow/ingest.hpp"
#include "mrioflow/report.hpp"
#include "mrioflow/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mrioflow;

namespace {

enum Exit { Ok = 0, Usage = 2, ParseFailure = 3, ConcordanceFailure = 4, NumericFailure = 5, IOFailure = 6 };

struct Options {
    std::string data_dir;
    std::string pattern = "Z_{year}.txt";
    std::string years;
    std::string concordance = MRIOFLOW_SHARE_DIR "/concordance/default.json";
    std::string out;
    bool lenient = false;
    bool as_json = false;
    std::string delimiter = "\\t";
    int header_rows = 2;
    int label_cols = 2;
    bool decimal_comma = false;
    bool allow_exponent = false;
    std::string unit = "M€";

    MatchMode mode() const { return lenient ? MatchMode::Lenient : MatchMode::Strict; }
};

struct FlowsArgs {
    std::string from;
    std::string to;
    std::string mode = "share";
    std::string to_b;
    std::optional<std::size_t> limit;
    std::optional<int> year;
    std::string granularity = "region";
    std::string prices;
};

struct FootprintArgs {
    std::optional<int> year;
    std::string intensity;
    std::string demand;
    std::string total_output;
};

struct ExportArgs {
    std::string kind;
    std::string from;
    std::string to;
    std::optional<int> year;
    bool by_label = false;
    std::string prices;
};

char delimiter_char(const std::string& text)
{
    if (text == "\\t" || text == "tab")
        return '\t';
    if (text.size() != 1)
        throw InvalidInput("delimiter must be a single character or \\t");
    return text[0];
}

std::set<int> parse_years(const std::string& text)
{
    std::set<int> years;
    if (text.empty())
        return years;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        try {
            if (dash == std::string::npos) {
                years.insert(std::stoi(item));
            } else {
                const int lo = std::stoi(item.substr(0, dash));
                const int hi = std::stoi(item.substr(dash + 1));
                if (hi < lo)
                    throw InvalidInput("empty year range '" + item + "'");
                for (int y = lo; y <= hi; ++y)
                    years.insert(y);
            }
        } catch (const std::logic_error&) {
            throw InvalidInput("cannot read year selection '" + item + "'");
        }
    }
    return years;
}

MrioFileSpec base_spec(const Options& o)
{
    MrioFileSpec spec;
    spec.delimiter = delimiter_char(o.delimiter);
    spec.header_rows = o.header_rows;
    spec.label_cols = o.label_cols;
    spec.unit = o.unit;
    spec.number_format.decimal_comma = o.decimal_comma;
    spec.number_format.allow_exponent = o.allow_exponent;
    spec.year_pattern = o.pattern;
    return spec;
}

fs::path dataset_dir(const Options& o)
{
    if (!o.data_dir.empty())
        return o.data_dir;
    if (const char* env = std::getenv("MRIOFLOW_DATA"))
        return env;
    throw IOError("no dataset directory: pass --data-dir or set MRIOFLOW_DATA");
}

/// Year -> file for every file in the dataset directory matching the pattern.
std::map<int, fs::path> discover(const Options& o)
{
    const fs::path dir = dataset_dir(o);
    if (!fs::is_directory(dir))
        throw IOError("dataset directory '" + dir.string() + "' does not exist");
    const auto wanted = parse_years(o.years);
    std::map<int, fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        const auto year = year_from_filename(entry.path().filename().string(), o.pattern);
        if (!year || (!wanted.empty() && !wanted.count(*year)))
            continue;
        if (files.count(*year))
            throw DuplicateYear("two files for year " + std::to_string(*year));
        files.emplace(*year, entry.path());
    }
    for (int y : wanted)
        if (!files.count(y))
            throw IOError("no file for year " + std::to_string(y) + " matching '" + o.pattern + "' in " + dir.string());
    if (files.empty())
        throw IOError("no files matching '" + o.pattern + "' in " + dir.string());
    return files;
}

struct LoadOutcome {
    std::vector<TransactionTable> tables;
    std::vector<std::pair<int, std::string>> failures;
    std::optional<ErrorCategory> first_category;
};

LoadOutcome load_tables(const Options& o)
{
    const auto files = discover(o);
    const MrioFileSpec spec = base_spec(o);
    std::vector<std::pair<int, std::future<TransactionTable>>> jobs;
    for (const auto& [year, path] : files) {
        MrioFileSpec s = spec;
        s.path = path;
        s.year = year;
        jobs.emplace_back(year, std::async(std::launch::async, [s] { return parse_mrio(s); }));
    }
    LoadOutcome out;
    for (auto& [year, job] : jobs) {
        try {
            out.tables.push_back(job.get());
        } catch (const Error& e) {
            out.failures.emplace_back(year, e.what());
            if (!out.first_category)
                out.first_category = e.category();
        }
    }
    return out;
}

std::vector<TransactionTable> load_all(const Options& o)
{
    auto outcome = load_tables(o);
    if (!outcome.failures.empty()) {
        for (const auto& [year, msg] : outcome.failures)
            std::cerr << "error: " << year << ": " << msg << '\n';
        throw MalformedHeader(std::to_string(outcome.failures.size()) + " of " +
                              std::to_string(outcome.failures.size() + outcome.tables.size()) +
                              " tables failed to parse");
    }
    return std::move(outcome.tables);
}

const TransactionTable& pick_year(const std::vector<TransactionTable>& tables, std::optional<int> year)
{
    if (!year)
        return tables.back();
    for (const auto& t : tables)
        if (t.year() == *year)
            return t;
    throw IOError("year " + std::to_string(*year) + " was not loaded");
}

fs::path out_dir(const Options& o)
{
    fs::path dir = o.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IOError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

void write_text(const fs::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IOError("cannot write '" + path.string() + "'");
    f << content;
    if (!f)
        throw IOError("write failed for '" + path.string() + "'");
}

/// Inputs and parameters of one invocation; no clock values so reruns are byte-identical.
void write_manifest(const Options& o, const std::string& command, const json& parameters,
                    const std::vector<TransactionTable>& tables, const std::vector<std::string>& outputs)
{
    if (o.out.empty())
        return;
    json m;
    m["tool"] = "mrioflow";
    m["version"] = MRIOFLOW_VERSION;
    m["command"] = command;
    m["parameters"] = parameters;
    m["match_mode"] = o.lenient ? "lenient" : "strict";
    if (!tables.empty()) {
        m["dataset"] = {{"directory", dataset_dir(o).string()},
                        {"pattern", o.pattern},
                        {"delimiter", o.delimiter},
                        {"header_rows", o.header_rows},
                        {"label_cols", o.label_cols},
                        {"decimal_comma", o.decimal_comma},
                        {"allow_exponent", o.allow_exponent},
                        {"unit", o.unit}};
        json years = json::array();
        for (const auto& t : tables)
            years.push_back({{"year", t.year()},
                             {"file", fs::path(t.meta().source).filename().string()},
                             {"dimension", t.dimension()},
                             {"nonzeros", t.nonzeros()},
                             {"negative_cells", t.meta().negative_cells}});
        m["dataset"]["years"] = years;
        m["concordance"] = o.concordance;
    }
    m["outputs"] = outputs;
    write_text(out_dir(o) / ("manifest_" + command + ".json"), m.dump(2) + "\n");
}

std::string csv_text(const report::CsvTable& table)
{
    std::ostringstream ss;
    report::write_csv(ss, table);
    return ss.str();
}

void print_table(const report::CsvTable& table)
{
    std::vector<std::size_t> width(table.header.size(), 0);
    for (std::size_t c = 0; c < table.header.size(); ++c)
        width[c] = table.header[c].size();
    for (const auto& row : table.rows)
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c)
                s += "  ";
            s += fmt::format("{:<{}}", cells[c], width[c]);
        }
        while (!s.empty() && s.back() == ' ')
            s.pop_back();
        std::cout << s << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows)
        line(row);
}

json csv_json(const report::CsvTable& table)
{
    json rows = json::array();
    for (const auto& r : table.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < table.header.size() && c < r.size(); ++c)
            obj[table.header[c]] = r[c];
        rows.push_back(obj);
    }
    return rows;
}

// ---------------------------------------------------------------------------------------------

int run_ingest(const Options& o)
{
    auto outcome = load_tables(o);
    report::CsvTable summary{{"year", "file", "regions", "sectors", "dimension", "nonzeros", "negative_cells", "status"},
                             {}};
    std::map<int, std::vector<std::string>> rows;
    for (const auto& t : outcome.tables)
        rows[t.year()] = {std::to_string(t.year()),
                          fs::path(t.meta().source).filename().string(),
                          std::to_string(t.index().regions().size()),
                          std::to_string(t.index().sectors().size()),
                          std::to_string(t.dimension()),
                          std::to_string(t.nonzeros()),
                          std::to_string(t.meta().negative_cells),
                          "ok"};
    for (const auto& [year, msg] : outcome.failures)
        rows[year] = {std::to_string(year), "", "", "", "", "", "", msg};
    for (auto& [year, row] : rows)
        summary.rows.push_back(std::move(row));

    json coverage = json::array();
    if (!outcome.tables.empty() && !o.concordance.empty()) {
        const auto cfg = load_concordance(o.concordance);
        const auto rep = validate_against(cfg, outcome.tables.back().index());
        for (const auto& lc : rep.unmatched())
            coverage.push_back({{"group", lc.group}, {"label", lc.label.str()}, {"suggestions", lc.suggestions}});
    }

    if (o.as_json) {
        std::cout << json{{"tables", csv_json(summary)}, {"unmatched_labels", coverage}}.dump(2) << '\n';
    } else {
        print_table(summary);
        for (const auto& c : coverage) {
            std::cout << fmt::format("warning: {} label '{}' matches no index entry",
                                     c["group"].get<std::string>(), c["label"].get<std::string>());
            if (!c["suggestions"].empty())
                std::cout << fmt::format(" (closest: '{}')", c["suggestions"][0].get<std::string>());
            std::cout << '\n';
        }
    }
    if (!o.out.empty()) {
        write_text(out_dir(o) / "ingest_summary.csv", csv_text(summary));
        write_manifest(o, "ingest", json::object(), outcome.tables, {"ingest_summary.csv"});
    }
    for (const auto& [year, msg] : outcome.failures)
        std::cerr << "error: " << year << ": " << msg << '\n';
    if (!outcome.failures.empty()) {
        switch (*outcome.first_category) {
        case ErrorCategory::Concordance: return ConcordanceFailure;
        case ErrorCategory::Numeric: return NumericFailure;
        case ErrorCategory::IO: return IOFailure;
        case ErrorCategory::Parse: return ParseFailure;
        }
    }
    return Ok;
}

int run_flows(const Options& o, const FlowsArgs& a)
{
    const auto cfg = load_concordance(o.concordance);
    const auto tables = load_all(o);
    const auto from = cfg.sector_group(a.from);
    const auto to = cfg.sector_group(a.to);
    const std::string stem = "flows_" + a.mode;
    report::CsvTable table;
    json summary = json::object();
    std::optional<report::CsvTable> overlay;

    if (a.mode == "share" || a.mode == "series") {
        const auto series = flow_series(tables, from, to, o.mode());
        table = report::series_csv(series);
        if (const auto m = series.mean_share())
            summary["mean_share"] = *m;
        if (const auto w = series.weighted_mean_share())
            summary["weighted_mean_share"] = *w;
        if (!a.prices.empty()) {
            const auto prices = parse_price_series(a.prices, fs::path(a.prices).stem().string());
            overlay = report::overlay_csv(overlay_prices(series, prices), prices.name);
        }
    } else if (a.mode == "top") {
        const auto g = a.granularity == "sector" ? Granularity::Sector : Granularity::Region;
        if (a.granularity != "sector" && a.granularity != "region")
            throw InvalidInput("granularity must be region or sector");
        const auto ranking = top_contributors(pick_year(tables, a.year), from, to, g, a.limit, o.mode());
        table = report::ranking_csv(ranking);
    } else if (a.mode == "ratio") {
        if (a.to_b.empty())
            throw InvalidInput("--mode ratio needs --to-b");
        const auto to_b = cfg.sector_group(a.to_b);
        table.header = {"year", "from", "to_a", "to_b", "flow_a", "flow_b", "ratio"};
        for (const auto& t : tables) {
            const auto fa = group_flow(t, from, to, o.mode());
            const auto fb = group_flow(t, from, to_b, o.mode());
            std::string ratio;
            if (fb.value != 0)
                ratio = text::format_decimal(fa.value / fb.value);
            table.rows.push_back({std::to_string(t.year()), a.from, a.to, a.to_b, text::format_decimal(fa.value),
                                  text::format_decimal(fb.value), ratio});
        }
    } else if (a.mode == "endogenous") {
        std::vector<FlowValue> flows;
        for (const auto& t : tables)
            flows.push_back(endogenous_flow(t, from, o.mode()));
        table = report::flows_csv(flows);
    } else {
        throw InvalidInput("unknown mode '" + a.mode + "' (share, series, top, ratio, endogenous)");
    }

    if (o.as_json) {
        json doc{{"rows", csv_json(table)}, {"summary", summary}};
        if (overlay)
            doc["overlay"] = csv_json(*overlay);
        std::cout << doc.dump(2) << '\n';
    } else {
        print_table(table);
        if (summary.contains("mean_share"))
            std::cout << fmt::format("mean annual share {:.4f}%\n", 100 * summary["mean_share"].get<double>());
        if (summary.contains("weighted_mean_share"))
            std::cout << fmt::format("weighted mean share {:.4f}%\n",
                                     100 * summary["weighted_mean_share"].get<double>());
        if (overlay) {
            std::cout << '\n';
            print_table(*overlay);
        }
    }
    if (!o.out.empty()) {
        std::vector<std::string> outputs{stem + ".csv"};
        write_text(out_dir(o) / (stem + ".csv"), csv_text(table));
        if (!summary.empty()) {
            write_text(out_dir(o) / (stem + ".json"), summary.dump(2) + "\n");
            outputs.push_back(stem + ".json");
        }
        if (overlay) {
            write_text(out_dir(o) / (stem + "_overlay.csv"), csv_text(*overlay));
            outputs.push_back(stem + "_overlay.csv");
        }
        json params{{"from", a.from}, {"to", a.to}, {"mode", a.mode}};
        if (!a.to_b.empty())
            params["to_b"] = a.to_b;
        if (a.mode == "top") {
            params["granularity"] = a.granularity;
            params["year"] = pick_year(tables, a.year).year();
            if (a.limit)
                params["limit"] = *a.limit;
        }
        if (!a.prices.empty())
            params["prices"] = a.prices;
        write_manifest(o, stem, params, tables, outputs);
    }
    return Ok;
}

int run_footprint(const Options& o, const FootprintArgs& a)
{
    const auto tables = load_all(o);
    const auto& table = pick_year(tables, a.year);
    const auto& index = table.index();
    const auto s = parse_extension(a.intensity, index, o.mode());
    const auto y = parse_extension(a.demand, index, o.mode());
    Eigen::VectorXd x;
    if (a.total_output.empty())
        x = total_output_from<double>(table, y.values);
    else
        x = parse_extension(a.total_output, index, o.mode()).values;
    const auto tc = technical_coefficients<double>(table, x);
    const auto fp = footprint<double>(s.values, tc, y.values);

    report::CsvTable breakdown{{"region", "sector", "kgCO2e"}, {}};
    for (std::size_t i = 0; i < index.size(); ++i)
        breakdown.rows.push_back({index[i].region.str(), index[i].sector.str(),
                                  text::format_decimal(fp.breakdown[static_cast<Eigen::Index>(i)])});
    json totals{{"year", table.year()},
                {"total_kgCO2e", fp.total},
                {"total_ktCO2e", fp.total_kt()},
                {"method", fp.solve.method == SolveMethod::SparseLU ? "sparse_lu" : "power_series"},
                {"iterations", fp.solve.iterations},
                {"residual", fp.solve.residual},
                {"zero_output_columns", tc.zero_output_columns.size()},
                {"max_abs_column_sum", tc.max_abs_column_sum},
                {"warnings", fp.solve.warnings}};

    if (o.as_json) {
        std::cout << json{{"totals", totals}, {"breakdown", csv_json(breakdown)}}.dump(2) << '\n';
    } else {
        for (const auto& w : fp.solve.warnings)
            std::cerr << "warning: " << w << '\n';
        std::cout << fmt::format("year {}: {} kgCO2e ({} ktCO2e), {} after {} iterations, residual {:.3g}\n",
                                 table.year(), text::group_thousands(fp.total, 2),
                                 text::group_thousands(fp.total_kt(), 3), totals["method"].get<std::string>(),
                                 fp.solve.iterations, fp.solve.residual);
    }
    if (!o.out.empty()) {
        write_text(out_dir(o) / "footprint.csv", csv_text(breakdown));
        write_text(out_dir(o) / "footprint.json", totals.dump(2) + "\n");
        json params{{"year", table.year()}, {"intensity", a.intensity}, {"demand", a.demand}};
        if (!a.total_output.empty())
            params["total_output"] = a.total_output;
        write_manifest(o, "footprint", params, tables, {"footprint.csv", "footprint.json"});
    }
    return Ok;
}

int run_case(const Options& o, const std::string& scenario_path)
{
    const auto scenario = emissions::load_scenario(scenario_path);
    const auto report = emissions::evaluate(scenario);
    if (o.as_json)
        std::cout << report.to_json() << '\n';
    else
        std::cout << report.to_text();
    if (!o.out.empty()) {
        const std::string stem = "case_" + report.name;
        write_text(out_dir(o) / (stem + ".json"), report.to_json() + "\n");
        write_text(out_dir(o) / (stem + ".txt"), report.to_text());
        write_manifest(o, stem, {{"scenario", scenario_path}}, {}, {stem + ".json", stem + ".txt"});
    }
    return Ok;
}

std::vector<std::string> split_names(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

int run_export(const Options& o, const ExportArgs& a)
{
    if (o.out.empty())
        throw IOError("export needs --out");
    const auto cfg = load_concordance(o.concordance);
    const auto tables = load_all(o);
    std::vector<std::string> outputs;
    json params{{"kind", a.kind}, {"from", a.from}, {"to", a.to}};

    if (a.kind == "sankey") {
        const auto& table = pick_year(tables, a.year);
        params["year"] = table.year();
        params["by_label"] = a.by_label;
        std::vector<SectorGroup> sources;
        if (a.by_label)
            sources = cfg.label_groups(a.from);
        else
            sources.push_back(cfg.sector_group(a.from));
        std::vector<FlowValue> flows;
        std::map<std::string, std::string> labels;
        for (const auto& target : split_names(a.to)) {
            const auto to = cfg.sector_group(target);
            labels[target] = cfg.group(target).description.empty() ? target : cfg.group(target).description;
            for (const auto& src : sources)
                flows.push_back(group_flow(table, src, to, o.mode()));
        }
        auto doc = report::to_sankey(flows, labels);
        doc.unit = o.unit;
        doc.validate();
        report::ChartOptions chart;
        chart.title = fmt::format("{} to {} ({}, {})", a.from, a.to, table.year(), o.unit);
        chart.y_label = o.unit;
        write_text(out_dir(o) / "sankey.json", doc.to_json() + "\n");
        write_text(out_dir(o) / "sankey.svg", report::render_sankey(doc, chart));
        outputs = {"sankey.json", "sankey.svg"};
        if (!o.as_json)
            std::cout << fmt::format("{} links, total {} {}\n", doc.links.size(), text::format_decimal(doc.total()),
                                     o.unit);
    } else if (a.kind == "chart") {
        const auto series = flow_series(tables, cfg.sector_group(a.from), cfg.sector_group(a.to), o.mode());
        std::optional<PriceSeries> prices;
        if (!a.prices.empty()) {
            prices = parse_price_series(a.prices, fs::path(a.prices).stem().string());
            params["prices"] = a.prices;
        }
        report::ChartOptions chart;
        chart.title = fmt::format("{} to {} ({})", a.from, a.to, o.unit);
        chart.y_label = o.unit;
        write_text(out_dir(o) / "chart.svg", report::render_line_chart(series, prices, chart));
        write_text(out_dir(o) / "chart.csv", csv_text(report::series_csv(series)));
        outputs = {"chart.svg", "chart.csv"};
        if (!o.as_json)
            std::cout << fmt::format("{} points written\n", series.points.size());
    } else {
        throw InvalidInput("unknown export kind '" + a.kind + "' (sankey, chart)");
    }
    if (o.as_json)
        std::cout << json{{"outputs", outputs}}.dump(2) << '\n';
    write_manifest(o, "export_" + a.kind, params, tables, outputs);
    return Ok;
}

int exit_code(ErrorCategory c)
{
    switch (c) {
    case ErrorCategory::Parse: return ParseFailure;
    case ErrorCategory::Concordance: return ConcordanceFailure;
    case ErrorCategory::Numeric: return NumericFailure;
    case ErrorCategory::IO: return IOFailure;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sector-group flows and emission estimates from multi-regional input-output tables"};
    app.set_version_flag("--version", MRIOFLOW_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--data-dir", o.data_dir, "Directory with one transaction table per year (env MRIOFLOW_DATA)");
    app.add_option("--pattern", o.pattern, "File name pattern with a {year} placeholder")->capture_default_str();
    app.add_option("--years", o.years, "Years to load, e.g. 2000-2022 or 2019,2021 (default: all files)");
    app.add_option("--concordance", o.concordance, "Sector-group concordance JSON")->capture_default_str();
    app.add_option("--out", o.out, "Output directory");
    auto* lenient = app.add_flag("--lenient", o.lenient, "Skip unmatched labels instead of failing");
    app.add_flag("--strict", "Fail on any unmatched label (default)")->excludes(lenient);
    app.add_flag("--json", o.as_json, "Machine-readable output on stdout");
    app.add_option("--delimiter", o.delimiter, "Field delimiter (\\t for tab)")->capture_default_str();
    app.add_option("--header-rows", o.header_rows, "Header rows before the data")->check(CLI::Range(1, 16))
        ->capture_default_str();
    app.add_option("--label-cols", o.label_cols, "Label columns before the data")->check(CLI::Range(1, 16))
        ->capture_default_str();
    app.add_flag("--decimal-comma", o.decimal_comma, "Numbers use ',' as the decimal separator");
    app.add_flag("--allow-exponent", o.allow_exponent, "Accept scientific notation in cells");
    app.add_option("--unit", o.unit, "Monetary unit of the tables")->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "Parse every year and report dimensions and nonzeros");

    FlowsArgs fa;
    auto* flows = app.add_subcommand("flows", "Inter-group flows, shares, rankings and ratios");
    flows->add_option("--from", fa.from, "Source group")->required();
    flows->add_option("--to", fa.to, "Destination group")->required();
    flows->add_option("--mode", fa.mode, "share | series | top | ratio | endogenous")->capture_default_str();
    flows->add_option("--to-b", fa.to_b, "Second destination group for --mode ratio");
    flows->add_option("--limit", fa.limit, "Rows kept by --mode top");
    flows->add_option("--year", fa.year, "Year for --mode top (default: latest)");
    flows->add_option("--granularity", fa.granularity, "region | sector for --mode top")->capture_default_str();
    flows->add_option("--prices", fa.prices, "year,price CSV to overlay on the series");

    FootprintArgs fp;
    auto* foot = app.add_subcommand("footprint", "Demand footprint through the Leontief inverse");
    foot->add_option("--year", fp.year, "Table year (default: latest)");
    foot->add_option("--intensity", fp.intensity, "region,sector,value CSV of kgCO2e per unit output")->required();
    foot->add_option("--demand", fp.demand, "region,sector,value CSV of final demand")->required();
    foot->add_option("--total-output", fp.total_output, "region,sector,value CSV of total output (default: row sums + demand)");

    std::string scenario;
    auto* cases = app.add_subcommand("case", "Evaluate a case-study scenario file");
    cases->add_option("scenario", scenario, "Scenario JSON")->required();

    ExportArgs ea;
    auto* exp = app.add_subcommand("export", "Write Sankey or line-chart SVG and JSON");
    exp->add_option("kind", ea.kind, "sankey | chart")->required();
    exp->add_option("--from", ea.from, "Source group")->required();
    exp->add_option("--to", ea.to, "Destination group(s), comma separated for sankey")->required();
    exp->add_option("--year", ea.year, "Sankey year (default: latest)");
    exp->add_flag("--by-label", ea.by_label, "One Sankey source node per label of the source group");
    exp->add_option("--prices", ea.prices, "year,price CSV overlay for the chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }

    try {
        if (*ingest)
            return run_ingest(o);
        if (*flows)
            return run_flows(o, fa);
        if (*foot)
            return run_footprint(o, fp);
        if (*cases)
            return run_case(o, scenario);
        if (*exp)
            return run_export(o, ea);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.category());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return IOFailure;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ParseFailure;
    }
    return Usage;
}

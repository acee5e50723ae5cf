#include "mrioflow/report.hpp"

#include "mrioflow/text.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mrioflow::report {

using nlohmann::json;

void write_csv(std::ostream& out, const CsvTable& table)
{
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out << ',';
            out << text::escape_field(row[i]);
        }
        out << '\n';
    };
    write_row(table.header);
    for (const auto& row : table.rows)
        write_row(row);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IOError("cannot write '" + path.string() + "'");
    write_csv(out, table);
    if (!out)
        throw IOError("write failed for '" + path.string() + "'");
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    std::string record;
    bool first = true;
    while (std::getline(in, line)) {
        record += text::chomp(line);
        if (std::count(record.begin(), record.end(), '"') % 2 == 1) {
            record.push_back('\n');
            continue;
        }
        auto fields = text::split_record(record, ',');
        record.clear();
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IOError("cannot open '" + path.string() + "'");
    return read_csv(in);
}

namespace {

std::string optional_number(const std::optional<double>& v)
{
    return v ? text::format_decimal(*v) : std::string();
}

} // namespace

CsvTable flows_csv(const std::vector<FlowValue>& flows, const std::vector<std::optional<double>>& shares)
{
    CsvTable t{{"year", "from", "to", "value", "share"}, {}};
    for (std::size_t i = 0; i < flows.size(); ++i) {
        const auto& f = flows[i];
        t.rows.push_back({std::to_string(f.year), f.from_group, f.to_group, text::format_decimal(f.value),
                          i < shares.size() ? optional_number(shares[i]) : std::string()});
    }
    return t;
}

CsvTable series_csv(const FlowSeries& series)
{
    return flows_csv(series.points, series.shares);
}

CsvTable overlay_csv(const std::vector<OverlayRow>& rows, const std::string& price_name)
{
    CsvTable t{{"year", "flow", "share", price_name.empty() ? "price" : price_name}, {}};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.year), text::format_decimal(r.flow), optional_number(r.share),
                          optional_number(r.price)});
    return t;
}

CsvTable ranking_csv(const ContributorRanking& ranking)
{
    CsvTable t{{"year", "from", "to", ranking.granularity == Granularity::Region ? "region" : "sector", "value"}, {}};
    for (const auto& r : ranking.rows)
        t.rows.push_back({std::to_string(ranking.year), ranking.from_group, ranking.to_group, r.key,
                          text::format_decimal(r.value)});
    return t;
}

// ---------------------------------------------------------------------------------------------

double SankeyDocument::total() const
{
    CompensatedSum<double> acc;
    for (const auto& l : links)
        acc += l.value;
    return acc.value();
}

void SankeyDocument::validate() const
{
    auto exists = [&](int id) {
        return std::any_of(nodes.begin(), nodes.end(), [&](const SankeyNode& n) { return n.id == id; });
    };
    for (const auto& l : links)
        if (!exists(l.source) || !exists(l.target))
            throw DanglingLink("link " + std::to_string(l.source) + " -> " + std::to_string(l.target) +
                               " references a missing node");
}

std::string SankeyDocument::to_json() const
{
    validate();
    json doc;
    doc["unit"] = unit;
    doc["nodes"] = json::array();
    for (const auto& n : nodes)
        doc["nodes"].push_back({{"id", n.id}, {"name", n.name}, {"label", n.label}, {"side", n.side}});
    doc["links"] = json::array();
    for (const auto& l : links) {
        json link{{"source", l.source}, {"target", l.target}, {"value", l.value}};
        if (l.flagged)
            link["flagged"] = true;
        doc["links"].push_back(std::move(link));
    }
    return doc.dump(2) + "\n";
}

SankeyDocument to_sankey(const std::vector<FlowValue>& flows, const std::map<std::string, std::string>& labels)
{
    if (flows.empty())
        throw InvalidInput("cannot build a Sankey document from no flows");
    SankeyDocument doc;
    std::vector<std::string> sources;
    std::vector<std::string> targets;
    for (const auto& f : flows) {
        if (std::find(sources.begin(), sources.end(), f.from_group) == sources.end())
            sources.push_back(f.from_group);
        if (std::find(targets.begin(), targets.end(), f.to_group) == targets.end())
            targets.push_back(f.to_group);
    }
    auto label_of = [&](const std::string& name) {
        auto it = labels.find(name);
        return it == labels.end() ? name : it->second;
    };
    int id = 0;
    for (const auto& s : sources)
        doc.nodes.push_back({id++, s, label_of(s), "source"});
    for (const auto& t : targets)
        doc.nodes.push_back({id++, t, label_of(t), "target"});
    const int target_base = static_cast<int>(sources.size());
    for (const auto& f : flows) {
        const int s = static_cast<int>(std::find(sources.begin(), sources.end(), f.from_group) - sources.begin());
        const int t = static_cast<int>(std::find(targets.begin(), targets.end(), f.to_group) - targets.begin());
        doc.links.push_back({s, target_base + t, f.value, f.value < 0});
    }
    doc.validate();
    return doc;
}

// ---------------------------------------------------------------------------------------------

namespace {

std::string f2(double v)
{
    // -0.00 would differ from 0.00 across platforms
    const double r = std::round(v * 100.0) / 100.0;
    return fmt::format("{:.2f}", r == 0 ? 0.0 : r);
}

std::string escape_xml(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

/// Round `v` up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v)
{
    if (v <= 0)
        return 1.0;
    const double magnitude = std::pow(10.0, std::floor(std::log10(v)));
    for (double step : {1.0, 2.0, 5.0, 10.0})
        if (step * magnitude >= v)
            return step * magnitude;
    return 10.0 * magnitude;
}

std::string tick_label(double v)
{
    if (std::abs(v) >= 1000)
        return text::group_thousands(v, 0);
    if (v == std::round(v))
        return fmt::format("{:.0f}", v);
    return fmt::format("{:.2f}", v);
}

struct Frame {
    double left = 80, right = 80, top = 50, bottom = 60;
    double width, height;

    double plot_w() const { return width - left - right; }
    double plot_h() const { return height - top - bottom; }
};

} // namespace

std::string render_line_chart(const FlowSeries& series, const std::optional<PriceSeries>& overlay,
                              const ChartOptions& options)
{
    if (series.points.size() < 2)
        throw TooFewPoints("a line chart needs at least 2 points, got " + std::to_string(series.points.size()));

    Frame fr;
    fr.width = options.width;
    fr.height = options.height;
    const int first_year = series.points.front().year;
    const int last_year = series.points.back().year;
    const double span = std::max(1, last_year - first_year);

    double lo = 0, hi = 0;
    for (const auto& p : series.points) {
        lo = std::min(lo, p.value);
        hi = std::max(hi, p.value);
    }
    const double y_max = nice_ceiling(hi);
    const double y_min = lo < 0 ? -nice_ceiling(-lo) : 0.0;

    auto x_of = [&](int year) { return fr.left + fr.plot_w() * (year - first_year) / span; };
    auto y_of = [&](double v, double vmin, double vmax) {
        return fr.top + fr.plot_h() * (1.0 - (v - vmin) / (vmax - vmin));
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"#ffffff\"/>\n";
    const std::string title =
        options.title.empty() ? series.from_group + " to " + series.to_group : options.title;
    svg << "<text class=\"title\" x=\"" << f2(fr.width / 2) << "\" y=\"28.00\" text-anchor=\"middle\" font-size=\"16\">"
        << escape_xml(title) << "</text>\n";

    // primary axis
    svg << "<g class=\"axis primary\" stroke=\"#333333\" font-size=\"11\">\n";
    svg << "<line x1=\"" << f2(fr.left) << "\" y1=\"" << f2(fr.top) << "\" x2=\"" << f2(fr.left) << "\" y2=\""
        << f2(fr.top + fr.plot_h()) << "\"/>\n";
    svg << "<line x1=\"" << f2(fr.left) << "\" y1=\"" << f2(fr.top + fr.plot_h()) << "\" x2=\""
        << f2(fr.left + fr.plot_w()) << "\" y2=\"" << f2(fr.top + fr.plot_h()) << "\"/>\n";
    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double v = y_min + (y_max - y_min) * i / ticks;
        const double y = y_of(v, y_min, y_max);
        svg << "<text x=\"" << f2(fr.left - 6) << "\" y=\"" << f2(y + 4) << "\" text-anchor=\"end\" stroke=\"none\">"
            << tick_label(v) << "</text>\n";
    }
    for (const auto& p : series.points)
        svg << "<text x=\"" << f2(x_of(p.year)) << "\" y=\"" << f2(fr.top + fr.plot_h() + 16)
            << "\" text-anchor=\"middle\" stroke=\"none\">" << p.year << "</text>\n";
    svg << "<text x=\"16.00\" y=\"" << f2(fr.top + fr.plot_h() / 2) << "\" transform=\"rotate(-90 16.00 "
        << f2(fr.top + fr.plot_h() / 2) << ")\" text-anchor=\"middle\" stroke=\"none\">" << escape_xml(options.y_label)
        << "</text>\n";
    svg << "</g>\n";

    svg << "<polyline class=\"flow\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const auto& p = series.points[i];
        svg << (i ? " " : "") << f2(x_of(p.year)) << ',' << f2(y_of(p.value, y_min, y_max));
    }
    svg << "\"/>\n";

    if (overlay) {
        double p_hi = 0;
        std::vector<std::pair<int, double>> pts;
        for (const auto& [year, price] : overlay->points)
            if (year >= first_year && year <= last_year) {
                pts.emplace_back(year, price);
                p_hi = std::max(p_hi, price);
            }
        const double p_max = nice_ceiling(p_hi);
        const double axis_x = fr.left + fr.plot_w();
        svg << "<g class=\"axis secondary\" stroke=\"#333333\" font-size=\"11\">\n";
        svg << "<line x1=\"" << f2(axis_x) << "\" y1=\"" << f2(fr.top) << "\" x2=\"" << f2(axis_x) << "\" y2=\""
            << f2(fr.top + fr.plot_h()) << "\"/>\n";
        for (int i = 0; i <= ticks; ++i) {
            const double v = p_max * i / ticks;
            svg << "<text x=\"" << f2(axis_x + 6) << "\" y=\"" << f2(y_of(v, 0, p_max) + 4)
                << "\" text-anchor=\"start\" stroke=\"none\">" << tick_label(v) << "</text>\n";
        }
        const double lx = fr.width - 16;
        svg << "<text x=\"" << f2(lx) << "\" y=\"" << f2(fr.top + fr.plot_h() / 2) << "\" transform=\"rotate(90 "
            << f2(lx) << ' ' << f2(fr.top + fr.plot_h() / 2) << ")\" text-anchor=\"middle\" stroke=\"none\">"
            << escape_xml(overlay->name.empty() ? options.overlay_label : overlay->name + " (" + options.overlay_label + ")")
            << "</text>\n";
        svg << "</g>\n";
        svg << "<polyline class=\"price\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6 3\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
            svg << (i ? " " : "") << f2(x_of(pts[i].first)) << ',' << f2(y_of(pts[i].second, 0, p_max));
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render_sankey(const SankeyDocument& doc, const ChartOptions& options)
{
    doc.validate();
    if (doc.links.empty())
        throw InvalidInput("Sankey document has no links");

    Frame fr;
    fr.left = 260;
    fr.right = 220;
    fr.width = options.width;
    fr.height = options.height;
    constexpr double node_w = 14;
    constexpr double gap = 8;

    std::map<int, double> node_value_out;
    std::map<int, double> node_value_in;
    for (const auto& l : doc.links) {
        node_value_out[l.source] += std::abs(l.value);
        node_value_in[l.target] += std::abs(l.value);
    }
    std::vector<const SankeyNode*> left;
    std::vector<const SankeyNode*> right;
    for (const auto& n : doc.nodes)
        (n.side == "source" ? left : right).push_back(&n);

    auto column_scale = [&](const std::vector<const SankeyNode*>& col, const std::map<int, double>& values) {
        double total = 0;
        for (auto* n : col) {
            auto it = values.find(n->id);
            total += it == values.end() ? 0.0 : it->second;
        }
        const double usable = fr.plot_h() - gap * static_cast<double>(col.size() > 0 ? col.size() - 1 : 0);
        return total > 0 ? usable / total : 0.0;
    };
    const double scale = std::min(column_scale(left, node_value_out), column_scale(right, node_value_in));

    struct Box {
        double x, y, h, cursor;
    };
    std::map<int, Box> boxes;
    auto place = [&](const std::vector<const SankeyNode*>& col, const std::map<int, double>& values, double x) {
        double y = fr.top;
        for (auto* n : col) {
            auto it = values.find(n->id);
            const double h = (it == values.end() ? 0.0 : it->second) * scale;
            boxes[n->id] = {x, y, h, y};
            y += h + gap;
        }
    };
    place(left, node_value_out, fr.left - node_w);
    place(right, node_value_in, fr.left + fr.plot_w());

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"#ffffff\"/>\n";
    if (!options.title.empty())
        svg << "<text class=\"title\" x=\"" << f2(fr.width / 2)
            << "\" y=\"28.00\" text-anchor=\"middle\" font-size=\"16\">" << escape_xml(options.title) << "</text>\n";

    std::map<int, double> target_cursor;
    for (const auto& [id, box] : boxes)
        target_cursor[id] = box.y;
    svg << "<g class=\"links\" fill=\"none\" stroke-opacity=\"0.45\">\n";
    for (const auto& l : doc.links) {
        auto& s = boxes[l.source];
        const double w = std::abs(l.value) * scale;
        const double y0 = s.cursor + w / 2;
        s.cursor += w;
        const double y1 = target_cursor[l.target] + w / 2;
        target_cursor[l.target] += w;
        const double x0 = s.x + node_w;
        const double x1 = boxes[l.target].x;
        const double mx = (x0 + x1) / 2;
        svg << "<path d=\"M" << f2(x0) << ',' << f2(y0) << " C" << f2(mx) << ',' << f2(y0) << ' ' << f2(mx) << ','
            << f2(y1) << ' ' << f2(x1) << ',' << f2(y1) << "\" stroke=\"" << (l.flagged ? "#d62728" : "#7f7f7f")
            << "\" stroke-width=\"" << f2(std::max(w, 0.5)) << "\"><title>" << f2(l.value) << ' '
            << escape_xml(doc.unit) << "</title></path>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"nodes\" font-size=\"11\">\n";
    for (const auto& n : doc.nodes) {
        const auto& b = boxes[n.id];
        const double value = n.side == "source" ? node_value_out[n.id] : node_value_in[n.id];
        svg << "<rect x=\"" << f2(b.x) << "\" y=\"" << f2(b.y) << "\" width=\"" << f2(node_w) << "\" height=\""
            << f2(std::max(b.h, 0.5)) << "\" fill=\"#1f77b4\"/>\n";
        const bool is_source = n.side == "source";
        svg << "<text x=\"" << f2(is_source ? b.x - 6 : b.x + node_w + 6) << "\" y=\"" << f2(b.y + b.h / 2 + 4)
            << "\" text-anchor=\"" << (is_source ? "end" : "start") << "\">" << escape_xml(n.label) << " ("
            << text::group_thousands(value, 0) << ")</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace mrioflow::report

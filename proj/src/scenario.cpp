#include "mrioflow/scenario.hpp"

#include "mrioflow/text.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mrioflow::emissions {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key))
        throw ScenarioError(where + ": missing \"" + key + "\"");
    return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where)
{
    const auto& v = require(obj, key, where);
    if (!v.is_number())
        throw ScenarioError(where + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& where)
{
    const auto& v = require(obj, key, where);
    if (!v.is_number_integer())
        throw ScenarioError(where + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

std::string string_or(const json& obj, const char* key, std::string fallback)
{
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_string())
        throw ScenarioError(std::string("\"") + key + "\" must be a string");
    return obj.at(key).get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* key)
{
    std::vector<std::string> out;
    if (!obj.contains(key))
        return out;
    const auto& v = obj.at(key);
    if (!v.is_array())
        throw ScenarioError(std::string("taxonomy \"") + key + "\" must be a list of strings");
    for (const auto& s : v) {
        if (!s.is_string())
            throw ScenarioError(std::string("taxonomy \"") + key + "\" must be a list of strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

PhysicalEmissionFactor physical_factor(const json& est)
{
    PhysicalEmissionFactor ef;
    if (est.contains("emission_factor_kg_per_barrel"))
        ef.kg_per_barrel = number(est, "emission_factor_kg_per_barrel", "estimator");
    ef.validate();
    return ef;
}

std::string tonnes(double t)
{
    return text::group_thousands(display_round(t), 0);
}

} // namespace

CaseScenario parse_scenario(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ScenarioError("scenario must be a JSON object");

    CaseScenario sc;
    const auto& name = require(doc, "name", "scenario");
    if (!name.is_string() || name.get<std::string>().empty())
        throw ScenarioError("scenario \"name\" must be a non-empty string");
    sc.name = name.get<std::string>();
    sc.title = string_or(doc, "title", sc.name);
    sc.notes = string_or(doc, "notes", "");

    if (doc.contains("taxonomy")) {
        const auto& tax = doc.at("taxonomy");
        if (!tax.is_object())
            throw ScenarioError("\"taxonomy\" must be an object");
        for (const auto& [key, value] : tax.items())
            if (key != "activity" && key != "sub_activity" && key != "function" && key != "service" && key != "effect")
                throw ScenarioError("unknown taxonomy category \"" + key + "\"");
        TaxonomyTags raw{string_list(tax, "activity"), string_list(tax, "sub_activity"), string_list(tax, "function"),
                         string_list(tax, "service"), string_list(tax, "effect")};
        sc.tags = classify_scenario(raw);
    }

    const auto& est = require(doc, "estimator", "scenario");
    const auto& kind_node = require(est, "kind", "estimator");
    if (!kind_node.is_string())
        throw ScenarioError("estimator \"kind\" must be a string");
    const auto kind = kind_node.get<std::string>();
    if (kind == "ramp") {
        RampEstimator r;
        const auto& s = require(est, "schedule", "ramp estimator");
        r.schedule.start_year = integer(s, "start_year", "schedule");
        r.schedule.end_year = integer(s, "end_year", "schedule");
        r.schedule.final_rate = number(s, "final_rate", "schedule");
        r.schedule.origin_rate = s.contains("origin_rate") ? number(s, "origin_rate", "schedule") : 0.0;
        r.schedule.downtime_fraction = s.contains("downtime_fraction") ? number(s, "downtime_fraction", "schedule") : 0.0;
        r.schedule.validate();
        r.factor = physical_factor(est);
        if (est.contains("headline_year"))
            r.headline_year = integer(est, "headline_year", "ramp estimator");
        if (est.contains("references")) {
            for (const auto& ref : est.at("references"))
                r.references.push_back({string_or(ref, "label", "reference"), number(ref, "tonnes", "reference")});
        }
        sc.estimator = std::move(r);
    } else if (kind == "monetary") {
        MonetaryEstimator m;
        m.emissions_t = number(est, "emissions_t", "monetary estimator");
        m.profit = number(est, "profit", "monetary estimator");
        m.currency = string_or(est, "currency", "USD");
        m.year = est.contains("year") ? integer(est, "year", "monetary estimator") : 0;
        m.scopes = string_or(est, "scopes", "");
        const auto& ranges = require(est, "savings", "monetary estimator");
        if (!ranges.is_array() || ranges.empty())
            throw ScenarioError("monetary estimator needs a non-empty \"savings\" list");
        for (const auto& r : ranges)
            m.savings.push_back({string_or(r, "label", "savings"), {number(r, "low", "savings"), number(r, "high", "savings")}});
        sc.estimator = std::move(m);
    } else if (kind == "wedge") {
        WedgeEstimator w;
        w.barrels = {number(est, "barrels_low", "wedge estimator"), number(est, "barrels_high", "wedge estimator")};
        w.horizon_years = number(est, "horizon_years", "wedge estimator");
        w.factor = physical_factor(est);
        sc.estimator = std::move(w);
    } else {
        throw ScenarioError("unknown estimator kind \"" + kind + "\" (expected ramp, monetary or wedge)");
    }
    return sc;
}

CaseScenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IOError("cannot open scenario '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

const Figure& CaseReport::figure(const std::string& key) const
{
    auto it = std::find_if(trace.begin(), trace.end(), [&](const Figure& f) { return f.key == key; });
    if (it == trace.end())
        throw InvalidInput("report '" + name + "' has no figure '" + key + "'");
    return *it;
}

namespace {

struct ReportBuilder {
    CaseReport& report;

    void add(std::string key, std::string label, double value, std::string unit, std::string display)
    {
        report.trace.push_back({std::move(key), std::move(label), value, std::move(unit), std::move(display)});
    }
};

void evaluate_ramp(const RampEstimator& r, CaseReport& report)
{
    ReportBuilder b{report};
    const auto& s = r.schedule;
    b.add("ramp_start_year", "Ramp start year (origin rate)", s.start_year, "year", std::to_string(s.start_year));
    b.add("ramp_end_year", "Ramp end year (final rate)", s.end_year, "year", std::to_string(s.end_year));
    b.add("origin_rate", "Origin rate", s.origin_rate, "bbl/day", text::group_thousands(s.origin_rate, 0));
    b.add("final_rate", "Final rate", s.final_rate, "bbl/day", text::group_thousands(s.final_rate, 0));
    b.add("downtime_fraction", "Average downtime", s.downtime_fraction, "fraction",
          fmt::format("{:.1f}%", 100.0 * s.downtime_fraction));
    b.add("effective_days", "Effective producing days per year", s.effective_days(), "days",
          text::format_decimal(s.effective_days()));
    for (int y = s.start_year; y <= s.end_year; ++y) {
        const double rate = s.rate(y);
        const double bbl = ramp_year_barrels(s, y);
        b.add("rate_" + std::to_string(y), "Rate in " + std::to_string(y), rate, "bbl/day",
              text::group_thousands(rate, 2));
        b.add("barrels_" + std::to_string(y), "Barrels in " + std::to_string(y), bbl, "bbl",
              text::group_thousands(bbl, 2));
    }
    const double total = ramp_total_barrels(s);
    b.add("total_barrels", "Total added barrels", total, "bbl", text::group_thousands(total, 0));
    b.add("emission_factor", "Emission factor", r.factor.kg_per_barrel, "kgCO2/bbl",
          text::format_decimal(r.factor.kg_per_barrel));
    const double total_t = barrels_to_emissions(total, r.factor);
    b.add("total_emissions_t", "Total added emissions", total_t, "tCO2", tonnes(total_t));

    const int hy = r.headline_year.value_or(s.end_year);
    const double year_bbl = ramp_year_barrels(s, hy);
    const double year_t = barrels_to_emissions(year_bbl, r.factor);
    b.add("headline_year", "Headline year", hy, "year", std::to_string(hy));
    b.add("headline_barrels", "Added barrels in headline year", year_bbl, "bbl", text::group_thousands(year_bbl, 0));
    b.add("headline_emissions_t", "Added emissions in headline year", year_t, "tCO2", tonnes(year_t));
    for (std::size_t i = 0; i < r.references.size(); ++i) {
        const auto& ref = r.references[i];
        const double pct = footprint_share(year_t, ref.tonnes);
        b.add("reference_" + std::to_string(i + 1) + "_t", ref.label, ref.tonnes, "tCO2e", tonnes(ref.tonnes));
        b.add("reference_" + std::to_string(i + 1) + "_share", "Headline-year emissions as share of " + ref.label, pct,
              "%", fmt::format("{:.1f}%", display_round(pct, 1)));
    }
    report.headline = fmt::format("{:.1f} MtCO2/yr", display_round(year_t / 1e6, 1));
}

void evaluate_monetary(const MonetaryEstimator& m, CaseReport& report)
{
    ReportBuilder b{report};
    const auto ef = monetary_ef(m.emissions_t, m.profit, m.currency, m.year, m.scopes);
    b.add("reported_emissions_t", "Reported emissions" + (m.scopes.empty() ? "" : " (" + m.scopes + ")"), m.emissions_t,
          "tCO2e", tonnes(m.emissions_t));
    b.add("profit", "Profit" + (m.year ? " " + std::to_string(m.year) : std::string()), m.profit, m.currency,
          text::group_thousands(m.profit, 0));
    b.add("monetary_ef", "Monetary emission factor", ef.kg_per_thousand, "kgCO2e/k" + m.currency,
          text::group_thousands(display_round(ef.kg_per_thousand), 0));
    double lowest = 0;
    double highest = 0;
    for (std::size_t i = 0; i < m.savings.size(); ++i) {
        const auto& s = m.savings[i];
        const auto kt = savings_to_emissions(s.amount, ef);
        const std::string id = "range_" + std::to_string(i + 1);
        b.add(id + "_savings_low", s.label + ": savings low", s.amount.low, m.currency + "/yr",
              text::group_thousands(s.amount.low, 0));
        b.add(id + "_savings_high", s.label + ": savings high", s.amount.high, m.currency + "/yr",
              text::group_thousands(s.amount.high, 0));
        b.add(id + "_kt_low", s.label + ": added emissions low", kt.low, "ktCO2e/yr",
              text::group_thousands(display_round(kt.low), 0));
        b.add(id + "_kt_high", s.label + ": added emissions high", kt.high, "ktCO2e/yr",
              text::group_thousands(display_round(kt.high), 0));
        lowest = i == 0 ? kt.low : std::min(lowest, kt.low);
        highest = i == 0 ? kt.high : std::max(highest, kt.high);
    }
    report.headline = text::format_decimal(display_round(lowest) / 1000.0) + "–" +
                      text::format_decimal(display_round(highest) / 1000.0) + " MtCO2e/yr";
}

void evaluate_wedge(const WedgeEstimator& w, CaseReport& report)
{
    ReportBuilder b{report};
    const auto result = wedge_annualize(w.barrels, w.horizon_years, w.factor);
    const auto gt = result.gigatonnes_per_year();
    b.add("barrels_low", "Cumulative added barrels, low", w.barrels.low, "bbl", text::group_thousands(w.barrels.low, 0));
    b.add("barrels_high", "Cumulative added barrels, high", w.barrels.high, "bbl",
          text::group_thousands(w.barrels.high, 0));
    b.add("horizon_years", "Horizon", w.horizon_years, "years", text::format_decimal(w.horizon_years));
    b.add("annual_barrels_low", "Annual added barrels, low", result.barrels_per_year.low, "bbl/yr",
          fmt::format("{:.0f} billion", result.barrels_per_year.low / 1e9));
    b.add("annual_barrels_high", "Annual added barrels, high", result.barrels_per_year.high, "bbl/yr",
          fmt::format("{:.0f} billion", result.barrels_per_year.high / 1e9));
    b.add("emission_factor", "Emission factor", w.factor.kg_per_barrel, "kgCO2/bbl",
          text::format_decimal(w.factor.kg_per_barrel));
    b.add("annual_gt_low", "Annual added emissions, low", gt.low, "GtCO2e/yr", fmt::format("{:.1f}", display_round(gt.low, 1)));
    b.add("annual_gt_high", "Annual added emissions, high", gt.high, "GtCO2e/yr",
          fmt::format("{:.1f}", display_round(gt.high, 1)));
    report.headline = fmt::format("{:.1f}–{:.1f} GtCO2e/yr", display_round(gt.low, 1), display_round(gt.high, 1));
}

json tags_json(const TaxonomyTags& t)
{
    return json{{"activity", t.activities},
                {"sub_activity", t.sub_activities},
                {"function", t.functions},
                {"service", t.services},
                {"effect", t.effects}};
}

} // namespace

CaseReport evaluate(const CaseScenario& scenario)
{
    CaseReport report;
    report.name = scenario.name;
    report.title = scenario.title;
    report.tags = classify_scenario(scenario.tags);
    std::visit(
        [&](const auto& est) {
            using T = std::decay_t<decltype(est)>;
            if constexpr (std::is_same_v<T, RampEstimator>) {
                report.kind = "ramp";
                evaluate_ramp(est, report);
            } else if constexpr (std::is_same_v<T, MonetaryEstimator>) {
                report.kind = "monetary";
                evaluate_monetary(est, report);
            } else {
                report.kind = "wedge";
                evaluate_wedge(est, report);
            }
        },
        scenario.estimator);
    return report;
}

std::string CaseReport::to_json() const
{
    json trace_json = json::array();
    for (const auto& f : trace)
        trace_json.push_back({{"key", f.key}, {"label", f.label}, {"value", f.value}, {"unit", f.unit}, {"display", f.display}});
    json doc{{"name", name},   {"title", title},  {"estimator", kind},
             {"taxonomy", tags_json(tags)}, {"trace", trace_json}, {"headline", headline}};
    return doc.dump(2) + "\n";
}

std::string CaseReport::to_text() const
{
    std::string out = title + " [" + name + "]\n";
    auto tag_line = [&](TagKind kind, const std::vector<std::string>& values) {
        if (values.empty())
            return;
        std::string joined;
        for (const auto& v : values)
            joined += (joined.empty() ? "" : "; ") + v;
        out += fmt::format("  {:<18} {}\n", to_string(kind), joined);
    };
    tag_line(TagKind::Activity, tags.activities);
    tag_line(TagKind::SubActivity, tags.sub_activities);
    tag_line(TagKind::Function, tags.functions);
    tag_line(TagKind::Service, tags.services);
    tag_line(TagKind::Effect, tags.effects);
    out += "\n";
    std::size_t width = 0;
    for (const auto& f : trace)
        width = std::max(width, f.label.size());
    for (const auto& f : trace) {
        std::string line = fmt::format("  {:<{}}  {:>22}", f.label, width, f.display);
        if (!f.display.ends_with('%'))
            line += " " + f.unit;
        out += line + "\n";
    }
    out += "\n  Potential added emissions per year: " + headline + "\n";
    return out;
}

} // namespace mrioflow::emissions

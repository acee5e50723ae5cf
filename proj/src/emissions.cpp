#include "mrioflow/emissions.hpp"

#include "mrioflow/core.hpp"
#include "mrioflow/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace mrioflow::emissions {

void RampSchedule::validate() const
{
    if (end_year <= start_year)
        throw InvalidSchedule("end year " + std::to_string(end_year) + " must follow start year " +
                              std::to_string(start_year));
    if (!(origin_rate >= 0) || !(final_rate >= origin_rate))
        throw InvalidSchedule("rates must satisfy final >= origin >= 0");
    if (!(downtime_fraction >= 0) || !(downtime_fraction < 1))
        throw InvalidSchedule("downtime fraction must lie in [0, 1)");
}

double RampSchedule::effective_days() const
{
    return days_per_year * (1.0 - downtime_fraction);
}

double RampSchedule::rate(int year) const
{
    validate();
    if (year < start_year || year > end_year)
        throw YearOutOfRange("year " + std::to_string(year) + " outside " + std::to_string(start_year) + "-" +
                             std::to_string(end_year));
    // origin in the first year, final rate in the last: end - start intervals
    return origin_rate + (final_rate - origin_rate) * static_cast<double>(year - start_year) /
                             static_cast<double>(end_year - start_year);
}

double ramp_year_barrels(const RampSchedule& schedule, int year)
{
    return schedule.rate(year) * schedule.effective_days();
}

double ramp_total_barrels(const RampSchedule& schedule)
{
    schedule.validate();
    CompensatedSum<double> total;
    for (int year = schedule.start_year; year <= schedule.end_year; ++year)
        total += ramp_year_barrels(schedule, year);
    return total.value();
}

void PhysicalEmissionFactor::validate() const
{
    if (!(kg_per_barrel > 0) || !std::isfinite(kg_per_barrel))
        throw InvalidInput("physical emission factor must be positive");
}

double barrels_to_emissions(double barrels, const PhysicalEmissionFactor& ef)
{
    ef.validate();
    if (!(barrels >= 0))
        throw InvalidInput("barrels must be non-negative");
    return barrels * ef.kg_per_barrel / 1000.0;
}

double footprint_share(double added_t, double reference_t)
{
    if (!(reference_t > 0))
        throw ZeroDenominator("reference footprint must be positive");
    return 100.0 * added_t / reference_t;
}

MonetaryEmissionFactor monetary_ef(double emissions_t, double profit, std::string currency, int year, std::string scopes)
{
    if (!(profit > 0))
        throw ZeroDenominator("profit must be positive");
    if (!(emissions_t >= 0))
        throw InvalidInput("emissions must be non-negative");
    MonetaryEmissionFactor ef;
    ef.kg_per_thousand = (emissions_t * 1000.0) / (profit / 1000.0);
    ef.currency = std::move(currency);
    ef.emissions_t = emissions_t;
    ef.profit = profit;
    ef.year = year;
    ef.scopes = std::move(scopes);
    return ef;
}

Range savings_to_emissions(Range savings, const MonetaryEmissionFactor& ef)
{
    if (!(savings.low >= 0) || !(savings.high >= savings.low))
        throw InvalidRange("savings range must satisfy 0 <= low <= high");
    auto kt = [&](double amount) { return amount / 1000.0 * ef.kg_per_thousand / 1e6; };
    return {kt(savings.low), kt(savings.high)};
}

WedgeResult wedge_annualize(Range total_barrels, double horizon_years, const PhysicalEmissionFactor& ef)
{
    if (!(horizon_years > 0))
        throw InvalidRange("horizon must be positive");
    if (!(total_barrels.low >= 0) || !(total_barrels.high >= total_barrels.low))
        throw InvalidRange("barrel range must satisfy 0 <= low <= high");
    WedgeResult w;
    w.barrels_per_year = {total_barrels.low / horizon_years, total_barrels.high / horizon_years};
    w.tonnes_per_year = {barrels_to_emissions(w.barrels_per_year.low, ef),
                         barrels_to_emissions(w.barrels_per_year.high, ef)};
    return w;
}

double display_round(double value, int decimals)
{
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

// ---------------------------------------------------------------------------------------------

namespace {

struct Term {
    std::string canonical;
    std::vector<std::string> aliases;
};

const std::vector<Term>& terms(TagKind kind)
{
    static const std::vector<Term> activities = {
        {"Upstream", {}}, {"Midstream", {}}, {"Downstream", {}}, {"Operations", {}}};
    static const std::vector<Term> sub_activities = {
        {"Exploration", {}}, {"Production", {}}, {"Transportation", {"Transport"}}, {"Refining", {}}};
    static const std::vector<Term> functions = {
        {"Seismic imaging and interpretation", {}},
        {"Reservoir simulation", {}},
        {"Drilling optimisation", {}},
        {"Production forecasting", {}},
        {"Predictive maintenance", {}},
        {"Transport optimisation", {}},
        {"Pipeline surveillance", {}},
        {"Production optimisation", {}},
        {"Supply chain monitoring", {}},
        {"Data management", {}},
        {"Business Process Management (BPM)", {"Business Process Management", "BPM"}},
        {"Social collaboration", {}},
        {"Remote Operations Centers (ROC)", {"Remote Operations Centers", "Remote Operations Centres", "ROC"}},
        // used by the refinery case classification, absent from the base catalog rows
        {"Advanced process control optimisation", {"Advanced process control", "APC"}},
    };
    static const std::vector<Term> services = {
        {"HPC", {"High-Performance Computing"}},
        {"DL", {"Deep Learning"}},
        {"Sensors", {}},
        {"Actuators", {}},
        {"Networks", {}},
        {"Cloud", {"Cloud computing"}},
        {"Robotics", {}},
        {"UAV", {"Drones"}},
        {"Mobile", {"Mobile devices"}},
    };
    static const std::vector<Term> effects = {
        {"Inc. Prod", {"Increased Production"}},
        {"Imp. Rec", {"Improved Recovery"}},
        {"Cost", {"Cost reduction"}},
        {"Downtime", {"Downtime reduction"}},
        {"HSE", {"Improved Health, Safety, Environment"}},
        {"Decision", {"Improved Decision-Making"}},
    };
    switch (kind) {
    case TagKind::Activity: return activities;
    case TagKind::SubActivity: return sub_activities;
    case TagKind::Function: return functions;
    case TagKind::Service: return services;
    case TagKind::Effect: return effects;
    }
    return activities;
}

std::string match_key(std::string_view tag)
{
    std::string s;
    for (char c : tag) {
        if (c == '.')
            continue;
        s.push_back(c == '-' ? ' ' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    s = normalize_label(s);
    for (std::size_t at = s.find("isation"); at != std::string::npos; at = s.find("isation", at))
        s.replace(at, 7, "ization");
    return s;
}

} // namespace

std::string to_string(TagKind kind)
{
    switch (kind) {
    case TagKind::Activity: return "activity";
    case TagKind::SubActivity: return "sub-activity";
    case TagKind::Function: return "function";
    case TagKind::Service: return "service/hardware";
    case TagKind::Effect: return "intended effect";
    }
    return "tag";
}

const std::vector<TaxonomyRow>& taxonomy_rows()
{
    static const std::vector<TaxonomyRow> rows = {
        {"Upstream", "Exploration", "Seismic imaging and interpretation", {"HPC", "DL"}, {"Inc. Prod", "Imp. Rec"}},
        {"Upstream", "Exploration", "Reservoir simulation", {"HPC", "DL"}, {"Inc. Prod", "Imp. Rec", "Cost"}},
        {"Upstream", "Production", "Drilling optimisation", {"Sensors", "Actuators", "Networks", "Cloud", "Robotics"},
         {"Inc. Prod", "Imp. Rec", "Cost", "HSE"}},
        {"Upstream", "Production", "Production forecasting", {"HPC", "DL"}, {"Inc. Prod", "Imp. Rec"}},
        {"Upstream", "Production", "Predictive maintenance", {"Sensors", "Networks", "Cloud", "UAV", "Mobile"},
         {"Cost", "Downtime", "HSE"}},
        {"Midstream", "Transportation", "Transport optimisation", {"Sensors", "Networks", "Cloud"}, {"Cost"}},
        {"Midstream", "Transportation", "Pipeline surveillance", {"UAV"}, {"Cost", "HSE"}},
        {"Midstream", "Transportation", "Predictive maintenance", {"Sensors", "Networks", "Cloud", "UAV", "Mobile"},
         {"Cost", "Downtime", "HSE"}},
        {"Downstream", "Refining", "Production optimisation", {"Sensors", "Networks", "Cloud", "UAV", "Mobile"},
         {"Inc. Prod", "Cost", "Downtime", "HSE"}},
        {"Downstream", "Refining", "Supply chain monitoring", {"Sensors", "Networks", "Cloud"},
         {"Inc. Prod", "Cost", "Downtime", "HSE"}},
        {"Downstream", "Refining", "Predictive maintenance", {"Sensors", "Networks", "Cloud", "UAV", "Mobile"},
         {"Cost", "Downtime", "HSE"}},
        {"Operations", "", "Data management", {"Cloud"}, {"Cost", "Decision"}},
        {"Operations", "", "Business Process Management (BPM)", {"Cloud"}, {"Cost", "Decision"}},
        {"Operations", "", "Social collaboration", {"Cloud"}, {"Cost", "Decision"}},
        {"Operations", "", "Remote Operations Centers (ROC)", {"Cloud"}, {"Cost", "Decision"}},
    };
    return rows;
}

std::vector<std::string> vocabulary(TagKind kind)
{
    std::vector<std::string> out;
    for (const auto& t : terms(kind))
        out.push_back(t.canonical);
    return out;
}

std::string canonical_tag(TagKind kind, const std::string& tag)
{
    const std::string key = match_key(tag);
    const Term* nearest = nullptr;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const auto& t : terms(kind)) {
        std::vector<std::string> spellings = t.aliases;
        spellings.push_back(t.canonical);
        for (const auto& s : spellings) {
            const std::size_t d = text::edit_distance(key, match_key(s));
            if (d == 0)
                return t.canonical;
            if (d < best) {
                best = d;
                nearest = &t;
            }
        }
    }
    std::string msg = "'" + tag + "' is not a known " + to_string(kind) + " tag";
    if (nearest)
        msg += "; did you mean '" + nearest->canonical + "'?";
    throw UnknownTag(msg);
}

TaxonomyTags classify_scenario(const TaxonomyTags& tags)
{
    auto canon = [](TagKind kind, const std::vector<std::string>& in) {
        std::vector<std::string> out;
        for (const auto& tag : in) {
            auto c = canonical_tag(kind, tag);
            if (std::find(out.begin(), out.end(), c) == out.end())
                out.push_back(std::move(c));
        }
        return out;
    };
    return {canon(TagKind::Activity, tags.activities), canon(TagKind::SubActivity, tags.sub_activities),
            canon(TagKind::Function, tags.functions), canon(TagKind::Service, tags.services),
            canon(TagKind::Effect, tags.effects)};
}

} // namespace mrioflow::emissions

#pragma once

#include "mrioflow/errors.hpp"

#include <string>
#include <vector>

namespace mrioflow::emissions {

inline constexpr double days_per_year = 365.0; // leap years ignored

/// Linear production build-up. The rate equals `origin_rate` in `start_year` and reaches
/// `final_rate` in `end_year`; each year counts 365 * (1 - downtime_fraction) producing days.
struct RampSchedule {
    int start_year = 0;
    int end_year = 0;
    double final_rate = 0;  // barrels/day
    double origin_rate = 0; // barrels/day
    double downtime_fraction = 0;

    void validate() const; // throws InvalidSchedule
    double effective_days() const;
    double rate(int year) const; // barrels/day; throws YearOutOfRange
};

double ramp_year_barrels(const RampSchedule& schedule, int year);

/// Sum of ramp_year_barrels over [start_year, end_year].
double ramp_total_barrels(const RampSchedule& schedule);

struct PhysicalEmissionFactor {
    static constexpr double conventional_barrel_kg = 431.87; // kgCO2 per 42-gallon barrel

    double kg_per_barrel = conventional_barrel_kg;

    void validate() const;
};

/// Tonnes CO2 for `barrels`, full precision.
double barrels_to_emissions(double barrels, const PhysicalEmissionFactor& ef = {});

/// 100 * added / reference.
double footprint_share(double added_t, double reference_t);

struct MonetaryEmissionFactor {
    double kg_per_thousand = 0; // kgCO2e per thousand currency units
    std::string currency;       // tag only, never converted
    double emissions_t = 0;
    double profit = 0;
    int year = 0;
    std::string scopes;
};

/// kgCO2e per thousand currency units from reported emissions (tCO2e) and profit.
MonetaryEmissionFactor monetary_ef(double emissions_t, double profit, std::string currency = "USD", int year = 0,
                                   std::string scopes = {});

struct Range {
    double low = 0;
    double high = 0;
};

/// Savings (currency/year) times the monetary factor, in ktCO2e/year.
Range savings_to_emissions(Range savings, const MonetaryEmissionFactor& ef);

struct WedgeResult {
    Range barrels_per_year;
    Range tonnes_per_year;

    Range gigatonnes_per_year() const { return {tonnes_per_year.low / 1e9, tonnes_per_year.high / 1e9}; }
};

/// Spread a cumulative barrel range evenly over `horizon_years`.
WedgeResult wedge_annualize(Range total_barrels, double horizon_years, const PhysicalEmissionFactor& ef = {});

/// Round half away from zero to `decimals` places, for display only.
double display_round(double value, int decimals = 0);

// ---------------------------------------------------------------------------------------------
// Classification of digital activities in oil and gas.

enum class TagKind { Activity, SubActivity, Function, Service, Effect };

std::string to_string(TagKind kind);

struct TaxonomyTags {
    std::vector<std::string> activities;
    std::vector<std::string> sub_activities;
    std::vector<std::string> functions;
    std::vector<std::string> services;
    std::vector<std::string> effects;

    bool operator==(const TaxonomyTags&) const = default;
};

/// One row of the catalog: which services serve a function and what effects it targets.
struct TaxonomyRow {
    std::string activity;
    std::string sub_activity; // empty for cross-cutting operations
    std::string function;
    std::vector<std::string> services;
    std::vector<std::string> effects;
};

const std::vector<TaxonomyRow>& taxonomy_rows();

/// Canonical vocabulary for one tag kind.
std::vector<std::string> vocabulary(TagKind kind);

/// Canonical spelling of `tag`, accepting documented aliases and -isation/-ization variants.
/// Throws UnknownTag naming the nearest canonical term.
std::string canonical_tag(TagKind kind, const std::string& tag);

/// Every tag replaced by its canonical spelling.
TaxonomyTags classify_scenario(const TaxonomyTags& tags);

} // namespace mrioflow::emissions

#pragma once

#include "mrioflow/emissions.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mrioflow::emissions {

struct ReferenceFootprint {
    std::string label;
    double tonnes = 0;
};

/// Added barrels from a production ramp, converted with a physical factor.
struct RampEstimator {
    RampSchedule schedule;
    PhysicalEmissionFactor factor;
    std::optional<int> headline_year; // defaults to the end year
    std::vector<ReferenceFootprint> references;
};

struct SavingsRange {
    std::string label;
    Range amount; // currency/year
};

/// Savings re-spent at the company's monetary emission factor.
struct MonetaryEstimator {
    double emissions_t = 0;
    double profit = 0;
    std::string currency = "USD";
    int year = 0;
    std::string scopes;
    std::vector<SavingsRange> savings;
};

/// Cumulative barrel range spread over a horizon.
struct WedgeEstimator {
    Range barrels;
    double horizon_years = 0;
    PhysicalEmissionFactor factor;
};

using Estimator = std::variant<RampEstimator, MonetaryEstimator, WedgeEstimator>;

struct CaseScenario {
    std::string name;
    std::string title;
    std::string notes;
    TaxonomyTags tags;
    Estimator estimator;
};

/// Parse a scenario JSON document. Tags are validated against the taxonomy vocabulary.
///
///   { "name": "...", "title": "...", "notes": "...",
///     "taxonomy": { "activity": [...], "sub_activity": [...], "function": [...],
///                   "service": [...], "effect": [...] },
///     "estimator": { "kind": "ramp" | "monetary" | "wedge", ... } }
CaseScenario parse_scenario(const std::string& json_text);
CaseScenario load_scenario(const std::filesystem::path& path);

/// One line of a derivation trace.
struct Figure {
    std::string key;
    std::string label;
    double value = 0;   // full precision
    std::string unit;
    std::string display; // rounded to printed precision
};

struct CaseReport {
    std::string name;
    std::string title;
    std::string kind;
    TaxonomyTags tags;
    std::vector<Figure> trace;
    std::string headline;

    const Figure& figure(const std::string& key) const; // throws InvalidInput
    std::string to_json() const;
    std::string to_text() const;
};

CaseReport evaluate(const CaseScenario& scenario);

} // namespace mrioflow::emissions

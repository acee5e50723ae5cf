#pragma once

#include "mrioflow/core.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mrioflow {

struct GroupConfig {
    std::string name;
    std::string description;
    std::optional<std::vector<RegionCode>> regions; // nullopt: all regions
    std::vector<SectorLabel> labels;
    std::vector<std::string> activities; // classification prose per label, may be empty
};

/// Sector-group classification loaded from a JSON document.
///
/// Schema:
///   { "groups": [ { "name": "ICT",
///                   "description": "...",                 (optional)
///                   "regions": "all" | ["US", "CN", ...],  (optional, default "all")
///                   "labels": [ "label" | {"label": "...", "activity": "..."}, ... ] } ] }
class ConcordanceConfig {
public:
    ConcordanceConfig() = default;
    explicit ConcordanceConfig(std::vector<GroupConfig> groups);

    const std::vector<GroupConfig>& groups() const noexcept { return groups_; }
    bool contains(const std::string& name) const;
    const GroupConfig& group(const std::string& name) const; // throws UnknownGroup

    /// Materialize a group as selectors, one per label.
    SectorGroup sector_group(const std::string& name) const;

    /// One sub-group per label of `name`, each named after its label.
    std::vector<SectorGroup> label_groups(const std::string& name) const;

    std::vector<std::string> names() const;

private:
    std::vector<GroupConfig> groups_;
};

ConcordanceConfig load_concordance(const std::filesystem::path& path);
ConcordanceConfig parse_concordance(const std::string& json_text);

struct LabelCoverage {
    std::string group;
    SectorLabel label;
    std::size_t matches = 0;
    std::vector<std::string> suggestions; // index labels within edit distance 3, never applied
};

struct CoverageReport {
    std::vector<LabelCoverage> labels;
    std::vector<LabelCoverage> unmatched() const;
    bool complete() const;
};

CoverageReport validate_against(const ConcordanceConfig& config, const RegionSectorIndex& index);

} // namespace mrioflow

#include "mrioflow/concordance.hpp"

#include "mrioflow/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace mrioflow {

using nlohmann::json;

ConcordanceConfig::ConcordanceConfig(std::vector<GroupConfig> groups) : groups_(std::move(groups))
{
    std::set<std::string> seen;
    for (const auto& g : groups_) {
        if (g.name.empty())
            throw SchemaError("group with empty name");
        if (!seen.insert(g.name).second)
            throw DuplicateGroup("group '" + g.name + "' defined more than once");
        if (g.labels.empty())
            throw SchemaError("group '" + g.name + "' has an empty label list");
        if (g.regions && g.regions->empty())
            throw SchemaError("group '" + g.name + "' has an empty region list");
    }
}

bool ConcordanceConfig::contains(const std::string& name) const
{
    return std::any_of(groups_.begin(), groups_.end(), [&](const auto& g) { return g.name == name; });
}

std::vector<std::string> ConcordanceConfig::names() const
{
    std::vector<std::string> out;
    for (const auto& g : groups_)
        out.push_back(g.name);
    return out;
}

const GroupConfig& ConcordanceConfig::group(const std::string& name) const
{
    for (const auto& g : groups_)
        if (g.name == name)
            return g;
    std::string known;
    for (const auto& g : groups_)
        known += (known.empty() ? "" : ", ") + g.name;
    throw UnknownGroup("no group '" + name + "'; known groups: " + known);
}

SectorGroup ConcordanceConfig::sector_group(const std::string& name) const
{
    const auto& g = group(name);
    SectorGroup out{g.name, {}};
    for (const auto& label : g.labels)
        out.selectors.push_back({g.regions, label});
    return out;
}

std::vector<SectorGroup> ConcordanceConfig::label_groups(const std::string& name) const
{
    const auto& g = group(name);
    std::vector<SectorGroup> out;
    for (const auto& label : g.labels)
        out.push_back({label.str(), {{g.regions, label}}});
    return out;
}

ConcordanceConfig parse_concordance(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("groups") || !doc["groups"].is_array())
        throw SchemaError("top level must be an object with a \"groups\" array");

    std::vector<GroupConfig> groups;
    for (const auto& entry : doc["groups"]) {
        if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string())
            throw SchemaError("every group needs a string \"name\"");
        GroupConfig g;
        g.name = entry["name"].get<std::string>();
        if (entry.contains("description")) {
            if (!entry["description"].is_string())
                throw SchemaError("group '" + g.name + "': \"description\" must be a string");
            g.description = entry["description"].get<std::string>();
        }
        if (entry.contains("regions")) {
            const auto& r = entry["regions"];
            if (r.is_string()) {
                if (r.get<std::string>() != "all")
                    throw SchemaError("group '" + g.name + "': \"regions\" must be \"all\" or a list");
            } else if (r.is_array()) {
                g.regions.emplace();
                for (const auto& code : r) {
                    if (!code.is_string() || normalize_label(code.get<std::string>()).empty())
                        throw SchemaError("group '" + g.name + "': region codes must be non-empty strings");
                    g.regions->emplace_back(code.get<std::string>());
                }
            } else {
                throw SchemaError("group '" + g.name + "': \"regions\" must be \"all\" or a list");
            }
        }
        if (!entry.contains("labels") || !entry["labels"].is_array())
            throw SchemaError("group '" + g.name + "' needs a \"labels\" array");
        for (const auto& label : entry["labels"]) {
            std::string text;
            std::string activity;
            if (label.is_string()) {
                text = label.get<std::string>();
            } else if (label.is_object() && label.contains("label") && label["label"].is_string()) {
                text = label["label"].get<std::string>();
                if (label.contains("activity") && label["activity"].is_string())
                    activity = label["activity"].get<std::string>();
            } else {
                throw SchemaError("group '" + g.name + "': labels must be strings or {\"label\": ...} objects");
            }
            if (normalize_label(text).empty())
                throw SchemaError("group '" + g.name + "' contains a blank label");
            g.labels.emplace_back(text);
            g.activities.push_back(std::move(activity));
        }
        groups.push_back(std::move(g));
    }
    return ConcordanceConfig(std::move(groups));
}

ConcordanceConfig load_concordance(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IOError("cannot open concordance '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_concordance(buf.str());
}

std::vector<LabelCoverage> CoverageReport::unmatched() const
{
    std::vector<LabelCoverage> out;
    std::copy_if(labels.begin(), labels.end(), std::back_inserter(out), [](const auto& l) { return l.matches == 0; });
    return out;
}

bool CoverageReport::complete() const
{
    return std::all_of(labels.begin(), labels.end(), [](const auto& l) { return l.matches > 0; });
}

CoverageReport validate_against(const ConcordanceConfig& config, const RegionSectorIndex& index)
{
    CoverageReport report;
    for (const auto& g : config.groups()) {
        for (const auto& label : g.labels) {
            LabelCoverage cov{g.name, label, 0, {}};
            for (std::size_t pos : index.positions_of(label)) {
                if (!g.regions || std::find(g.regions->begin(), g.regions->end(), index[pos].region) != g.regions->end())
                    ++cov.matches;
            }
            if (cov.matches == 0) {
                for (const auto& candidate : index.sectors())
                    if (text::edit_distance(candidate.str(), label.str()) <= 3)
                        cov.suggestions.push_back(candidate.str());
            }
            report.labels.push_back(std::move(cov));
        }
    }
    return report;
}

} // namespace mrioflow

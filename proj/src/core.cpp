#include "mrioflow/core.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace mrioflow {

std::string normalize_label(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

RegionCode::RegionCode(std::string_view code) : code_(normalize_label(code))
{
    if (code_.empty())
        throw InvalidInput("empty region code");
}

SectorLabel::SectorLabel(std::string_view label) : label_(normalize_label(label))
{
    if (label_.empty())
        throw InvalidInput("empty sector label");
}

RegionSectorIndex::RegionSectorIndex(std::vector<RegionSector> entries) : entries_(std::move(entries))
{
    std::set<RegionCode> seen_regions;
    std::set<SectorLabel> seen_sectors;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!lookup_.emplace(e, i).second)
            throw MalformedHeader("duplicate index entry (" + e.region.str() + ", " + e.sector.str() + ")");
        by_sector_[e.sector].push_back(i);
        if (seen_regions.insert(e.region).second)
            regions_.push_back(e.region);
        if (seen_sectors.insert(e.sector).second)
            sectors_.push_back(e.sector);
    }
}

std::optional<std::size_t> RegionSectorIndex::find(const RegionSector& key) const
{
    auto it = lookup_.find(key);
    if (it == lookup_.end())
        return std::nullopt;
    return it->second;
}

const std::vector<std::size_t>& RegionSectorIndex::positions_of(const SectorLabel& label) const
{
    static const std::vector<std::size_t> none;
    auto it = by_sector_.find(label);
    return it == by_sector_.end() ? none : it->second;
}

GroupResolution resolve_group(const SectorGroup& group, const RegionSectorIndex& index, MatchMode mode)
{
    if (group.selectors.empty())
        throw SchemaError("group '" + group.name + "' has no selectors");
    if (index.empty())
        throw InvalidInput("cannot resolve group '" + group.name + "' against an empty index");

    GroupResolution result;
    result.selector_matches.reserve(group.selectors.size());
    std::vector<std::string> unmatched;
    for (const auto& sel : group.selectors) {
        std::size_t count = 0;
        for (std::size_t pos : index.positions_of(sel.sector)) {
            if (sel.regions) {
                const auto& region = index[pos].region;
                if (std::find(sel.regions->begin(), sel.regions->end(), region) == sel.regions->end())
                    continue;
            }
            result.positions.push_back(pos);
            ++count;
        }
        result.selector_matches.push_back(count);
        if (count == 0)
            unmatched.push_back(sel.sector.str());
    }
    std::sort(result.positions.begin(), result.positions.end());
    result.positions.erase(std::unique(result.positions.begin(), result.positions.end()), result.positions.end());

    if (mode == MatchMode::Strict && !unmatched.empty()) {
        std::string msg = "group '" + group.name + "': no index entry matches";
        for (const auto& label : unmatched)
            msg += " '" + label + "'";
        throw UnmatchedSelector(msg);
    }
    return result;
}

std::vector<bool> membership_mask(const std::vector<std::size_t>& positions, std::size_t size)
{
    std::vector<bool> mask(size, false);
    for (std::size_t p : positions)
        mask.at(p) = true;
    return mask;
}

} // namespace mrioflow

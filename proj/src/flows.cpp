#include "mrioflow/flows.hpp"

#include <algorithm>
#include <map>

namespace mrioflow {

namespace {

struct Resolved {
    std::vector<std::size_t> rows;
    std::vector<bool> col_mask;
};

Resolved resolve_pair(const TransactionTable& table, const SectorGroup& from, const SectorGroup& to, MatchMode mode)
{
    auto rows = resolve_group(from, table.index(), mode).positions;
    auto cols = resolve_group(to, table.index(), mode).positions;
    return {std::move(rows), membership_mask(cols, table.dimension())};
}

} // namespace

std::optional<double> FlowSeries::mean_share() const
{
    CompensatedSum<double> acc;
    std::size_t count = 0;
    for (const auto& s : shares)
        if (s) {
            acc += *s;
            ++count;
        }
    if (count == 0)
        return std::nullopt;
    return acc.value() / static_cast<double>(count);
}

std::optional<double> FlowSeries::weighted_mean_share() const
{
    CompensatedSum<double> flows;
    CompensatedSum<double> totals;
    for (std::size_t i = 0; i < points.size(); ++i) {
        flows += points[i].value;
        totals += outgoing[i];
    }
    if (totals.value() == 0)
        return std::nullopt;
    return flows.value() / totals.value();
}

FlowValue group_flow(const TransactionTable& table, const SectorGroup& from, const SectorGroup& to, MatchMode mode)
{
    const auto r = resolve_pair(table, from, to, mode);
    return {table.year(), from.name, to.name, block_sum(table.cells(), r.rows, r.col_mask)};
}

double group_share(const TransactionTable& table, const SectorGroup& from, const SectorGroup& to, MatchMode mode)
{
    const auto r = resolve_pair(table, from, to, mode);
    const double outgoing = row_total(table.cells(), r.rows);
    if (outgoing == 0)
        throw ZeroDenominator("group '" + from.name + "' has zero total output in " + std::to_string(table.year()));
    return block_sum(table.cells(), r.rows, r.col_mask) / outgoing;
}

FlowValue endogenous_flow(const TransactionTable& table, const SectorGroup& group, MatchMode mode)
{
    return group_flow(table, group, group, mode);
}

FlowSeries flow_series(std::span<const TransactionTable> tables, const SectorGroup& from, const SectorGroup& to,
                       MatchMode mode)
{
    if (tables.empty())
        throw InvalidInput("flow series needs at least one table");
    std::vector<const TransactionTable*> ordered;
    for (const auto& t : tables)
        ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->year() < b->year(); });
    for (std::size_t i = 1; i < ordered.size(); ++i)
        if (ordered[i]->year() == ordered[i - 1]->year())
            throw DuplicateYear("two tables for year " + std::to_string(ordered[i]->year()));

    FlowSeries series{from.name, to.name, {}, {}, {}};
    for (const auto* table : ordered) {
        // resolved per table: label sets may differ between vintages
        const auto r = resolve_pair(*table, from, to, mode);
        const double flow = block_sum(table->cells(), r.rows, r.col_mask);
        const double outgoing = row_total(table->cells(), r.rows);
        series.points.push_back({table->year(), from.name, to.name, flow});
        series.outgoing.push_back(outgoing);
        series.shares.push_back(outgoing == 0 ? std::nullopt : std::optional<double>(flow / outgoing));
    }
    return series;
}

ContributorRanking top_contributors(const TransactionTable& table, const SectorGroup& from, const SectorGroup& to,
                                    Granularity granularity, std::optional<std::size_t> limit, MatchMode mode)
{
    const auto r = resolve_pair(table, from, to, mode);
    std::map<std::string, std::vector<std::size_t>> rows_by_key;
    for (std::size_t pos : r.rows) {
        const auto& entry = table.index()[pos];
        rows_by_key[granularity == Granularity::Region ? entry.region.str() : entry.sector.str()].push_back(pos);
    }

    ContributorRanking ranking{table.year(), from.name, to.name, granularity, {}};
    for (const auto& [key, rows] : rows_by_key)
        ranking.rows.push_back({key, block_sum(table.cells(), rows, r.col_mask)});
    std::stable_sort(ranking.rows.begin(), ranking.rows.end(), [](const auto& a, const auto& b) {
        if (a.value != b.value)
            return a.value > b.value;
        return a.key < b.key;
    });
    if (limit && ranking.rows.size() > *limit)
        ranking.rows.resize(*limit);
    return ranking;
}

double comparison_ratio(const TransactionTable& table, const SectorGroup& from, const SectorGroup& to_a,
                        const SectorGroup& to_b, MatchMode mode)
{
    const double denominator = group_flow(table, from, to_b, mode).value;
    if (denominator == 0)
        throw ZeroDenominator("flow " + from.name + " -> " + to_b.name + " is zero in " + std::to_string(table.year()));
    return group_flow(table, from, to_a, mode).value / denominator;
}

std::vector<OverlayRow> overlay_prices(const FlowSeries& series, const PriceSeries& prices)
{
    std::vector<OverlayRow> rows;
    rows.reserve(series.points.size());
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const auto& p = series.points[i];
        OverlayRow row{p.year, p.value, i < series.shares.size() ? series.shares[i] : std::nullopt, std::nullopt};
        if (auto it = prices.points.find(p.year); it != prices.points.end())
            row.price = it->second;
        rows.push_back(row);
    }
    return rows;
}

} // namespace mrioflow

#pragma once

#include "mrioflow/core.hpp"
#include "mrioflow/ingest.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mrioflow {

/// Compensated sum of z(i, j) over rows i in `rows` and columns j with `col_mask[j]`.
/// Rows are visited in the given order and columns in storage order, so the result is
/// bit-stable for a given table.
template <typename Scalar>
Scalar block_sum(const Eigen::SparseMatrix<Scalar, Eigen::RowMajor>& z, const std::vector<std::size_t>& rows,
                 const std::vector<bool>& col_mask)
{
    CompensatedSum<Scalar> acc;
    for (std::size_t r : rows)
        for (typename Eigen::SparseMatrix<Scalar, Eigen::RowMajor>::InnerIterator it(z, static_cast<Eigen::Index>(r));
             it; ++it)
            if (col_mask[static_cast<std::size_t>(it.col())])
                acc += it.value();
    return acc.value();
}

/// Compensated sum of whole rows.
template <typename Scalar>
Scalar row_total(const Eigen::SparseMatrix<Scalar, Eigen::RowMajor>& z, const std::vector<std::size_t>& rows)
{
    CompensatedSum<Scalar> acc;
    for (std::size_t r : rows)
        for (typename Eigen::SparseMatrix<Scalar, Eigen::RowMajor>::InnerIterator it(z, static_cast<Eigen::Index>(r));
             it; ++it)
            acc += it.value();
    return acc.value();
}

struct FlowValue {
    int year = 0;
    std::string from_group;
    std::string to_group;
    double value = 0; // M€

    bool negative() const noexcept { return value < 0; }
};

struct FlowSeries {
    std::string from_group;
    std::string to_group;
    std::vector<FlowValue> points;             // strictly increasing years
    std::vector<std::optional<double>> shares; // parallel to points; absent when the outgoing total is 0
    std::vector<double> outgoing;              // from-group row totals, parallel to points

    /// Unweighted mean of the annual shares (the headline figure).
    std::optional<double> mean_share() const;
    /// Sum of flows over sum of outgoing totals.
    std::optional<double> weighted_mean_share() const;
};

enum class Granularity { Region, Sector };

struct ContributorRanking {
    int year = 0;
    std::string from_group;
    std::string to_group;
    Granularity granularity = Granularity::Region;
    struct Row {
        std::string key; // region code or sector label
        double value = 0;
    };
    std::vector<Row> rows; // descending by value, ties by key ascending
};

FlowValue group_flow(const TransactionTable& table, const SectorGroup& from, const SectorGroup& to,
                     MatchMode mode = MatchMode::Strict);

/// Share of the from-group's total row output (all destinations, itself included) going to `to`.
double group_share(const TransactionTable& table, const SectorGroup& from, const SectorGroup& to,
                   MatchMode mode = MatchMode::Strict);

FlowValue endogenous_flow(const TransactionTable& table, const SectorGroup& group, MatchMode mode = MatchMode::Strict);

FlowSeries flow_series(std::span<const TransactionTable> tables, const SectorGroup& from, const SectorGroup& to,
                       MatchMode mode = MatchMode::Strict);

/// Flows from `from` to `to` split by source region (or source sector label).
/// `limit` truncates after sorting; nullopt keeps every row.
ContributorRanking top_contributors(const TransactionTable& table, const SectorGroup& from, const SectorGroup& to,
                                    Granularity granularity = Granularity::Region,
                                    std::optional<std::size_t> limit = std::nullopt,
                                    MatchMode mode = MatchMode::Strict);

/// flow(from, to_a) / flow(from, to_b).
double comparison_ratio(const TransactionTable& table, const SectorGroup& from, const SectorGroup& to_a,
                        const SectorGroup& to_b, MatchMode mode = MatchMode::Strict);

struct OverlayRow {
    int year = 0;
    double flow = 0;
    std::optional<double> share;
    std::optional<double> price; // absent when the price series has no entry for the year
};

std::vector<OverlayRow> overlay_prices(const FlowSeries& series, const PriceSeries& prices);

} // namespace mrioflow

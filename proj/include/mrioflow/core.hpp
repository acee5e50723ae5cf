#pragma once

#include "mrioflow/errors.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mrioflow {

/// Trim leading/trailing whitespace and collapse internal whitespace runs to a single space.
/// Case is preserved.
std::string normalize_label(std::string_view text);

class RegionCode {
public:
    RegionCode() = default;
    explicit RegionCode(std::string_view code);

    const std::string& str() const noexcept { return code_; }
    auto operator<=>(const RegionCode&) const = default;

private:
    std::string code_;
};

class SectorLabel {
public:
    SectorLabel() = default;
    explicit SectorLabel(std::string_view label);

    const std::string& str() const noexcept { return label_; }
    auto operator<=>(const SectorLabel&) const = default;

private:
    std::string label_;
};

struct RegionSector {
    RegionCode region;
    SectorLabel sector;

    auto operator<=>(const RegionSector&) const = default;
};

/// Ordered (region, sector) axis shared by rows and columns of a transaction table.
class RegionSectorIndex {
public:
    RegionSectorIndex() = default;
    explicit RegionSectorIndex(std::vector<RegionSector> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const RegionSector& operator[](std::size_t pos) const { return entries_.at(pos); }
    const std::vector<RegionSector>& entries() const noexcept { return entries_; }

    std::optional<std::size_t> find(const RegionSector& key) const;

    /// Positions carrying `label`, in index order.
    const std::vector<std::size_t>& positions_of(const SectorLabel& label) const;

    /// Distinct regions / sectors in first-appearance order.
    const std::vector<RegionCode>& regions() const noexcept { return regions_; }
    const std::vector<SectorLabel>& sectors() const noexcept { return sectors_; }

    bool operator==(const RegionSectorIndex& other) const { return entries_ == other.entries_; }

private:
    std::vector<RegionSector> entries_;
    std::map<RegionSector, std::size_t> lookup_;
    std::map<SectorLabel, std::vector<std::size_t>> by_sector_;
    std::vector<RegionCode> regions_;
    std::vector<SectorLabel> sectors_;
};

/// Neumaier-compensated accumulator.
template <typename Scalar>
class CompensatedSum {
public:
    void add(Scalar value) noexcept
    {
        const Scalar t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value))
            compensation_ += (sum_ - t) + value;
        else
            compensation_ += (value - t) + sum_;
        sum_ = t;
    }

    CompensatedSum& operator+=(Scalar value) noexcept
    {
        add(value);
        return *this;
    }

    Scalar value() const noexcept { return sum_ + compensation_; }

private:
    Scalar sum_ = 0;
    Scalar compensation_ = 0;
};

struct TableMeta {
    std::string source;
    std::string unit = "M€";
    std::size_t negative_cells = 0;
};

/// One year's region×sector transaction matrix Z. Rows supply, columns purchase.
template <typename Scalar>
class BasicTransactionTable {
public:
    using Matrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;
    using Triplet = Eigen::Triplet<Scalar>;

    BasicTransactionTable(int year, std::shared_ptr<const RegionSectorIndex> index,
                          const std::vector<Triplet>& cells, TableMeta meta = {})
        : year_(year), index_(std::move(index)), meta_(std::move(meta))
    {
        if (!index_)
            throw InvalidInput("transaction table requires an index");
        const auto n = static_cast<Eigen::Index>(index_->size());
        std::vector<Triplet> kept;
        kept.reserve(cells.size());
        for (const auto& t : cells) {
            if (t.row() < 0 || t.col() < 0 || t.row() >= n || t.col() >= n)
                throw DimensionMismatch("cell (" + std::to_string(t.row()) + ", " + std::to_string(t.col()) +
                                        ") outside a " + std::to_string(n) + "-entry index");
            if (!std::isfinite(static_cast<double>(t.value())))
                throw InvalidInput("non-finite cell value");
            if (t.value() != Scalar(0))
                kept.push_back(t);
        }
        cells_.resize(n, n);
        cells_.setFromTriplets(kept.begin(), kept.end());
        cells_.prune(Scalar(0));
        cells_.makeCompressed();
        meta_.negative_cells = 0;
        for (Eigen::Index r = 0; r < cells_.outerSize(); ++r)
            for (typename Matrix::InnerIterator it(cells_, r); it; ++it)
                if (it.value() < Scalar(0))
                    ++meta_.negative_cells;
    }

    int year() const noexcept { return year_; }
    const RegionSectorIndex& index() const noexcept { return *index_; }
    const std::shared_ptr<const RegionSectorIndex>& shared_index() const noexcept { return index_; }
    const Matrix& cells() const noexcept { return cells_; }
    const TableMeta& meta() const noexcept { return meta_; }
    std::size_t dimension() const noexcept { return index_->size(); }
    std::size_t nonzeros() const noexcept { return static_cast<std::size_t>(cells_.nonZeros()); }

    Scalar at(std::size_t row, std::size_t col) const
    {
        return cells_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

private:
    int year_;
    std::shared_ptr<const RegionSectorIndex> index_;
    Matrix cells_;
    TableMeta meta_;
};

using TransactionTable = BasicTransactionTable<double>;

/// One membership rule: a sector label, restricted to a region set or open to all regions.
struct GroupSelector {
    std::optional<std::vector<RegionCode>> regions; // nullopt: all regions
    SectorLabel sector;
};

struct SectorGroup {
    std::string name;
    std::vector<GroupSelector> selectors;
};

enum class MatchMode { Strict, Lenient };

struct GroupResolution {
    std::vector<std::size_t> positions;        // sorted, unique
    std::vector<std::size_t> selector_matches; // parallel to group.selectors
};

/// Positions of `index` matched by any selector of `group`.
/// Throws UnmatchedSelector in strict mode when a selector matches nothing.
GroupResolution resolve_group(const SectorGroup& group, const RegionSectorIndex& index,
                              MatchMode mode = MatchMode::Strict);

/// Membership mask of length index.size().
std::vector<bool> membership_mask(const std::vector<std::size_t>& positions, std::size_t size);

} // namespace mrioflow

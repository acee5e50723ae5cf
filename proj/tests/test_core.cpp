#include "mrioflow/concordance.hpp"
#include "mrioflow/core.hpp"
#include "mrioflow/ingest.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace mrioflow;
using namespace testsupport;

namespace {

RegionSectorIndex make_index(const std::vector<std::string>& regions, const std::vector<std::string>& sectors)
{
    std::vector<RegionSector> entries;
    for (const auto& r : regions)
        for (const auto& s : sectors)
            entries.push_back({RegionCode{r}, SectorLabel{s}});
    return RegionSectorIndex(std::move(entries));
}

SectorGroup all_regions(const std::string& name, const std::vector<std::string>& labels)
{
    SectorGroup g{name, {}};
    for (const auto& l : labels)
        g.selectors.push_back({std::nullopt, SectorLabel{l}});
    return g;
}

} // namespace

TEST_CASE("labels are trimmed and whitespace-collapsed but keep case")
{
    CHECK(normalize_label("  Petroleum   Refinery\t") == "Petroleum Refinery");
    CHECK(normalize_label("a\t\tb") == "a b");
    CHECK(SectorLabel{"petroleum refinery"} != SectorLabel{"Petroleum Refinery"});
    CHECK(SectorLabel{" Petroleum Refinery "} == SectorLabel{"Petroleum Refinery"});
    CHECK_THROWS_AS(RegionCode{"   "}, InvalidInput);
    CHECK_THROWS_AS(SectorLabel{""}, InvalidInput);
}

TEST_CASE("index keeps first-appearance order and rejects duplicates")
{
    const auto idx = make_index({"US", "CN"}, {"B", "A"});
    CHECK(idx.size() == 4);
    REQUIRE(idx.regions().size() == 2);
    CHECK(idx.regions()[0].str() == "US");
    CHECK(idx.sectors()[0].str() == "B");
    CHECK(idx.find({RegionCode{"CN"}, SectorLabel{"A"}}) == std::optional<std::size_t>(3));
    CHECK_FALSE(idx.find({RegionCode{"FR"}, SectorLabel{"A"}}).has_value());
    CHECK(idx.positions_of(SectorLabel{"A"}) == std::vector<std::size_t>{1, 3});
    CHECK(idx.positions_of(SectorLabel{"Z"}).empty());

    std::vector<RegionSector> dup{{RegionCode{"US"}, SectorLabel{"A"}}, {RegionCode{"US"}, SectorLabel{" A"}}};
    CHECK_THROWS_AS(RegionSectorIndex{dup}, MalformedHeader);
}

TEST_CASE("transaction table storage")
{
    auto idx = std::make_shared<const RegionSectorIndex>(make_index({"US"}, {"A", "B"}));
    using T = TransactionTable::Triplet;

    SUBCASE("zeros dropped, duplicates summed, negatives counted")
    {
        TransactionTable t(2020, idx, {T(0, 0, 1.5), T(0, 1, 0.0), T(1, 0, -2.0), T(0, 0, 0.5)});
        CHECK(t.year() == 2020);
        CHECK(t.dimension() == 2);
        CHECK(t.nonzeros() == 2);
        CHECK(t.at(0, 0) == 2.0);
        CHECK(t.at(1, 0) == -2.0);
        CHECK(t.at(1, 1) == 0.0);
        CHECK(t.meta().negative_cells == 1);
        CHECK(t.meta().unit == "M€");
    }
    SUBCASE("bounds and finiteness")
    {
        CHECK_THROWS_AS(TransactionTable(2020, idx, {T(2, 0, 1.0)}), DimensionMismatch);
        CHECK_THROWS_AS(TransactionTable(2020, idx, {T(0, 0, std::nan(""))}), InvalidInput);
        CHECK_THROWS_AS(TransactionTable(2020, nullptr, {}), InvalidInput);
    }
}

TEST_CASE("compensated sum recovers cancelled low-order terms")
{
    CompensatedSum<double> s;
    for (double v : {1.0, 1e100, 1.0, -1e100})
        s += v;
    CHECK(s.value() == 2.0);

    CompensatedSum<double> tenth;
    for (int i = 0; i < 1000000; ++i)
        tenth += 0.1;
    CHECK(tenth.value() == doctest::Approx(100000.0).epsilon(1e-15));
}

TEST_CASE("resolve_group examples")
{
    SUBCASE("one all-regions selector over two regions")
    {
        const auto idx = make_index({"US", "CN"}, {"Petroleum Refinery", "Construction"});
        const auto r = resolve_group(all_regions("OG", {"Petroleum Refinery"}), idx);
        CHECK(r.positions == std::vector<std::size_t>{0, 2});
        CHECK(r.selector_matches == std::vector<std::size_t>{2});
    }
    SUBCASE("ICT against the synthetic fixture")
    {
        MrioFileSpec spec;
        spec.path = synthetic_dir / "Z_2020.txt";
        spec.year = 2020;
        const auto table = parse_mrio(spec);
        const auto cfg = load_concordance(data_dir / "concordance" / "default.json");
        const auto r = resolve_group(cfg.sector_group("ICT"), table.index());
        CHECK(r.positions.size() == 15);
        CHECK(r.selector_matches == std::vector<std::size_t>(5, 3));
    }
    SUBCASE("absent label")
    {
        const auto idx = make_index({"US"}, {"A"});
        const auto g = all_regions("X", {"A", "Mining of coal and lignite"});
        CHECK_THROWS_AS(resolve_group(g, idx, MatchMode::Strict), UnmatchedSelector);
        const auto r = resolve_group(g, idx, MatchMode::Lenient);
        CHECK(r.positions == std::vector<std::size_t>{0});
        CHECK(r.selector_matches == std::vector<std::size_t>{1, 0});
    }
    SUBCASE("region filter")
    {
        const auto idx = make_index({"US", "CN", "FR"}, {"A", "B"});
        SectorGroup g{"G", {{std::vector<RegionCode>{RegionCode{"FR"}, RegionCode{"US"}}, SectorLabel{"B"}}}};
        CHECK(resolve_group(g, idx).positions == std::vector<std::size_t>{1, 5});
    }
    SUBCASE("precondition failures")
    {
        CHECK_THROWS_AS(resolve_group(all_regions("G", {"A"}), RegionSectorIndex{}), InvalidInput);
        CHECK_THROWS_AS(resolve_group(SectorGroup{"G", {}}, make_index({"US"}, {"A"})), SchemaError);
    }
}

TEST_CASE("resolve_group is idempotent and independent of selector order")
{
    std::vector<std::string> sectors;
    for (int i = 0; i < 12; ++i)
        sectors.push_back("S" + std::to_string(i));
    const auto idx = make_index({"AA", "BB", "CC", "DD"}, sectors);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> labels = sectors;
        std::shuffle(labels.begin(), labels.end(), rng);
        labels.resize(1 + rng() % labels.size());
        auto g = all_regions("G", labels);
        const auto first = resolve_group(g, idx);
        CHECK(resolve_group(g, idx).positions == first.positions);
        std::shuffle(g.selectors.begin(), g.selectors.end(), rng);
        CHECK(resolve_group(g, idx).positions == first.positions);
        CHECK(first.positions.size() == 4 * labels.size());
        CHECK(std::is_sorted(first.positions.begin(), first.positions.end()));
    }
}

TEST_CASE("disjoint label sets resolve to disjoint positions")
{
    const auto idx = make_index({"AA", "BB"}, {"a", "b", "c", "d", "e"});
    const auto x = resolve_group(all_regions("X", {"a", "c"}), idx).positions;
    const auto y = resolve_group(all_regions("Y", {"b", "d", "e"}), idx).positions;
    std::vector<std::size_t> common;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
    CHECK(common.empty());
    CHECK(x.size() + y.size() == idx.size());
}

TEST_CASE("matching ignores surrounding whitespace in header labels")
{
    const auto padded = make_index({" US "}, {"  Petroleum  Refinery "});
    const auto plain = make_index({"US"}, {"Petroleum Refinery"});
    const auto g = all_regions("OG", {"Petroleum Refinery"});
    CHECK(resolve_group(g, padded).positions == resolve_group(g, plain).positions);
    CHECK(padded == plain);
}

TEST_CASE("membership mask")
{
    const auto m = membership_mask({0, 3}, 5);
    CHECK(m == std::vector<bool>{true, false, false, true, false});
}

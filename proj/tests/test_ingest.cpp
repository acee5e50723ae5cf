#include "mrioflow/flows.hpp"
#include "mrioflow/ingest.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <tuple>

using namespace mrioflow;
using namespace testsupport;

namespace {

TransactionTable parse_file(const fs::path& path, int year = 2020)
{
    MrioFileSpec spec;
    spec.path = path;
    spec.year = year;
    return parse_mrio(spec);
}

using Cell = std::tuple<std::string, std::string, std::string, std::string, double>;

std::vector<Cell> cell_multiset(const TransactionTable& t)
{
    std::vector<Cell> out;
    const auto& z = t.cells();
    for (Eigen::Index r = 0; r < z.outerSize(); ++r)
        for (TransactionTable::Matrix::InnerIterator it(z, r); it; ++it) {
            const auto& a = t.index()[static_cast<std::size_t>(r)];
            const auto& b = t.index()[static_cast<std::size_t>(it.col())];
            out.emplace_back(a.region.str(), a.sector.str(), b.region.str(), b.sector.str(), it.value());
        }
    std::sort(out.begin(), out.end());
    return out;
}

SectorGroup group_of(const std::string& name, const std::set<std::string>& labels)
{
    SectorGroup g{name, {}};
    for (const auto& l : labels)
        g.selectors.push_back({std::nullopt, SectorLabel{l}});
    return g;
}

const std::string header2x2 = "region\t\tR1\tR1\tR2\tR2\nsector\t\tAlpha\tBeta\tAlpha\tBeta\n";

} // namespace

TEST_CASE("2x2 fixture parses to hand-summed values")
{
    const auto t = parse_file(fixture_dir / "mini_2x2.txt");
    CHECK(t.dimension() == 4);
    CHECK(t.nonzeros() == 13);
    CHECK(t.meta().negative_cells == 1);
    CHECK(t.at(1, 1) == -1.5);
    CHECK(t.at(0, 3) == 4.25);

    // hand sums over the 16 cells
    const auto alpha = group_of("A", {"Alpha"});
    const auto beta = group_of("B", {"Beta"});
    CHECK(group_flow(t, alpha, beta).value == 22.25);
    CHECK(group_flow(t, beta, alpha).value == 3 + 6 + 10 + 11);
    CHECK(group_flow(t, alpha, alpha).value == 1.5 + 0 + 0 + 8.75);
    const auto all = group_of("All", {"Alpha", "Beta"});
    CHECK(group_flow(t, all, all).value == 73.5);
}

TEST_CASE("header and row layout errors")
{
    TempDir dir("ingest_err");

    SUBCASE("row order differs from column order")
    {
        write_file(dir / "z.txt", header2x2 + "R1\tBeta\t1\t2\t3\t4\nR1\tAlpha\t1\t2\t3\t4\n"
                                              "R2\tAlpha\t1\t2\t3\t4\nR2\tBeta\t1\t2\t3\t4\n");
        CHECK_THROWS_AS(parse_file(dir / "z.txt"), MalformedHeader);
    }
    SUBCASE("ragged row")
    {
        write_file(dir / "z.txt", header2x2 + "R1\tAlpha\t1\t2\t3\t4\nR1\tBeta\t1\t2\t3\n"
                                              "R2\tAlpha\t1\t2\t3\t4\nR2\tBeta\t1\t2\t3\t4\n");
        CHECK_THROWS_AS(parse_file(dir / "z.txt"), MalformedHeader);
    }
    SUBCASE("missing rows")
    {
        write_file(dir / "z.txt", header2x2 + "R1\tAlpha\t1\t2\t3\t4\n");
        CHECK_THROWS_AS(parse_file(dir / "z.txt"), MalformedHeader);
    }
    SUBCASE("region and sector headers of different length")
    {
        write_file(dir / "z.txt", "region\t\tR1\tR1\nsector\t\tAlpha\tBeta\tGamma\n");
        CHECK_THROWS_AS(parse_file(dir / "z.txt"), MalformedHeader);
    }
    SUBCASE("duplicate column header")
    {
        write_file(dir / "z.txt", "region\t\tR1\tR1\nsector\t\tAlpha\tAlpha\nR1\tAlpha\t1\t2\nR1\tAlpha\t1\t2\n");
        CHECK_THROWS_AS(parse_file(dir / "z.txt"), MalformedHeader);
    }
    SUBCASE("non-numeric cell reports coordinates")
    {
        write_file(dir / "z.txt", header2x2 + "R1\tAlpha\t1\t2\t3\t4\nR1\tBeta\t1\tx\t3\t4\n"
                                              "R2\tAlpha\t1\t2\t3\t4\nR2\tBeta\t1\t2\t3\t4\n");
        try {
            parse_file(dir / "z.txt");
            FAIL("expected NonNumericCell");
        } catch (const NonNumericCell& e) {
            CHECK(e.line() == 4);
            CHECK(e.field() == 4);
        }
    }
    SUBCASE("scientific notation is rejected unless enabled")
    {
        write_file(dir / "z.txt", header2x2 + "R1\tAlpha\t1e3\t0\t0\t0\nR1\tBeta\t0\t0\t0\t0\n"
                                              "R2\tAlpha\t0\t0\t0\t0\nR2\tBeta\t0\t0\t0\t0\n");
        CHECK_THROWS_AS(parse_file(dir / "z.txt"), NonNumericCell);
        MrioFileSpec spec;
        spec.path = dir / "z.txt";
        spec.year = 2020;
        spec.number_format.allow_exponent = true;
        CHECK(parse_mrio(spec).at(0, 0) == 1000.0);
    }
    SUBCASE("empty file")
    {
        write_file(dir / "z.txt", "");
        CHECK_THROWS_AS(parse_file(dir / "z.txt"), EmptyFile);
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_AS(parse_file(dir / "absent.txt"), IOError);
    }
    SUBCASE("year is required")
    {
        write_file(dir / "z.txt", header2x2);
        MrioFileSpec spec;
        spec.path = dir / "z.txt";
        CHECK_THROWS_AS(parse_mrio(spec), MissingYear);
        spec.year_pattern = "Z_{year}.txt";
        CHECK_THROWS_AS(parse_mrio(spec), MissingYear);
    }
}

TEST_CASE("all-zero table keeps its dimensions")
{
    TempDir dir("ingest_zero");
    write_file(dir / "z.txt", header2x2 + "R1\tAlpha\t0\t0\t0\t0\nR1\tBeta\t0\t0\t0\t0\n"
                                          "R2\tAlpha\t0\t0.0\t0\t0\nR2\tBeta\t-0\t0\t0\t0\n");
    const auto t = parse_file(dir / "z.txt");
    CHECK(t.nonzeros() == 0);
    CHECK(t.dimension() == 4);
    CHECK(t.cells().rows() == 4);
    CHECK(t.cells().cols() == 4);
}

TEST_CASE("file name year patterns")
{
    CHECK(year_from_filename("Z_2022.txt", "Z_{year}.txt") == std::optional<int>(2022));
    CHECK(year_from_filename("IOT_2000_ixi.tsv", "IOT_{year}_ixi.tsv") == std::optional<int>(2000));
    CHECK_FALSE(year_from_filename("Z_22.txt", "Z_{year}.txt").has_value());
    CHECK_FALSE(year_from_filename("Z_20a2.txt", "Z_{year}.txt").has_value());
    CHECK_FALSE(year_from_filename("Y_2022.txt", "Z_{year}.txt").has_value());
    CHECK_FALSE(year_from_filename("Z_2022.txt", "Z.txt").has_value());

    MrioFileSpec spec;
    spec.path = synthetic_dir / "Z_2021.txt";
    spec.year_pattern = "Z_{year}.txt";
    CHECK(parse_mrio(spec).year() == 2021);
    spec.year = 1999;
    CHECK(parse_mrio(spec).year() == 1999);
}

TEST_CASE("layout knobs")
{
    TempDir dir("ingest_layout");

    SUBCASE("semicolon delimiter with decimal comma and CRLF")
    {
        write_file(dir / "z.txt", "region;;R1;R2\r\nsector;;A;A\r\nR1;A;1,5;-2\r\nR2;A;\"3,25\";0\r\n");
        MrioFileSpec spec;
        spec.path = dir / "z.txt";
        spec.year = 2020;
        spec.delimiter = ';';
        spec.number_format.decimal_comma = true;
        const auto t = parse_mrio(spec);
        CHECK(t.at(0, 0) == 1.5);
        CHECK(t.at(0, 1) == -2.0);
        CHECK(t.at(1, 0) == 3.25);
        CHECK(t.nonzeros() == 3);

        spec.number_format.decimal_comma = false;
        CHECK_THROWS_AS(parse_mrio(spec), NonNumericCell);
    }
    SUBCASE("single region, one header row, one label column")
    {
        write_file(dir / "z.txt", "sector\tA\tB\nA\t1\t2\nB\t3\t4\n");
        MrioFileSpec spec;
        spec.path = dir / "z.txt";
        spec.year = 2020;
        spec.header_rows = 1;
        spec.label_cols = 1;
        spec.single_region = "WORLD";
        const auto t = parse_mrio(spec);
        CHECK(t.dimension() == 2);
        CHECK(t.index()[1].region.str() == "WORLD");
        CHECK(t.index()[1].sector.str() == "B");
        CHECK(t.at(1, 0) == 3.0);
    }
    SUBCASE("extra header row is skipped")
    {
        write_file(dir / "z.txt", "region\t\tR1\tR2\nsector\t\tA\tA\nregion\tsector\t\t\nR1\tA\t1\t2\nR2\tA\t3\t4\n");
        MrioFileSpec spec;
        spec.path = dir / "z.txt";
        spec.year = 2020;
        spec.header_rows = 3;
        const auto t = parse_mrio(spec);
        CHECK(t.nonzeros() == 4);
        CHECK(t.at(1, 1) == 4.0);
    }
    SUBCASE("quoted labels with embedded delimiters")
    {
        write_file(dir / "z.csv", "region,,R1,R1\nsector,,\"Post, telecom\",B\nR1,\"Post, telecom\",1,2\nR1,B,3,4\n");
        MrioFileSpec spec;
        spec.path = dir / "z.csv";
        spec.year = 2020;
        spec.delimiter = ',';
        const auto t = parse_mrio(spec);
        CHECK(t.index()[0].sector.str() == "Post, telecom");
        CHECK(t.at(0, 1) == 2.0);
    }
    SUBCASE("invalid counts")
    {
        MrioFileSpec spec;
        spec.path = fixture_dir / "mini_2x2.txt";
        spec.year = 2020;
        spec.header_rows = 0;
        CHECK_THROWS_AS(parse_mrio(spec), InvalidInput);
    }
}

TEST_CASE("sum preservation against a line-by-line scan")
{
    for (int year : {2020, 2021, 2022}) {
        const auto path = synthetic_dir / ("Z_" + std::to_string(year) + ".txt");
        const auto dense = read_dense(path);
        const auto t = parse_file(path, year);
        CAPTURE(year);
        CHECK(t.nonzeros() == oracle_nonzeros(dense));
        CompensatedSum<double> total;
        std::size_t negatives = 0;
        for (std::size_t i = 0; i < dense.size(); ++i) {
            CHECK(t.index()[i].sector.str() == dense.row_sector[i]);
            for (std::size_t j = 0; j < dense.size(); ++j) {
                REQUIRE(t.at(i, j) == dense.cells[i][j]);
                total += t.at(i, j);
                negatives += dense.cells[i][j] < 0;
            }
        }
        CHECK(close_rel(total.value(), oracle_total(dense), 1e-12));
        CHECK(t.meta().negative_cells == negatives);
    }
}

TEST_CASE("write then parse reproduces index, year and cells")
{
    TempDir dir("ingest_rt");

    SUBCASE("synthetic fixtures")
    {
        for (int year : {2020, 2021, 2022}) {
            const auto t = parse_file(synthetic_dir / ("Z_" + std::to_string(year) + ".txt"), year);
            MrioFileSpec out;
            out.path = dir / ("Z_" + std::to_string(year) + ".txt");
            write_mrio(t, out);
            out.year_pattern = "Z_{year}.txt";
            const auto back = parse_mrio(out);
            CHECK(back.year() == t.year());
            CHECK(back.index() == t.index());
            CHECK(cell_multiset(back) == cell_multiset(t));
            CHECK(back.meta().negative_cells == t.meta().negative_cells);
        }
    }
    SUBCASE("random tables with negatives, zero rows and awkward labels")
    {
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> value(-1e6, 1e6);
        for (int trial = 0; trial < 40; ++trial) {
            const int regions = 1 + static_cast<int>(rng() % 3);
            const int sectors = 1 + static_cast<int>(rng() % 6);
            std::vector<RegionSector> entries;
            for (int r = 0; r < regions; ++r)
                for (int s = 0; s < sectors; ++s)
                    entries.push_back({RegionCode{"R" + std::to_string(r)},
                                       SectorLabel{"Sector " + std::to_string(s) + (s % 2 ? ", \"quoted\"" : "")}});
            auto idx = std::make_shared<const RegionSectorIndex>(std::move(entries));
            const int n = static_cast<int>(idx->size());
            const int zero_row = static_cast<int>(rng() % n);
            std::vector<TransactionTable::Triplet> cells;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != zero_row && rng() % 3 == 0)
                        cells.emplace_back(i, j, value(rng));
            const TransactionTable t(2000 + trial, idx, cells);

            for (char delim : {'\t', ';'}) {
                MrioFileSpec spec;
                spec.path = dir / "rt.txt";
                spec.year = t.year();
                spec.delimiter = delim;
                spec.number_format.decimal_comma = delim == ';';
                write_mrio(t, spec);
                const auto back = parse_mrio(spec);
                CHECK(back.index() == t.index());
                CHECK(cell_multiset(back) == cell_multiset(t));
            }
        }
    }
}

TEST_CASE("extension vectors")
{
    const auto t = parse_file(fixture_dir / "mini_2x2.txt");
    TempDir dir("ingest_ext");

    SUBCASE("all four positions")
    {
        const auto e = parse_extension(fixture_dir / "ext_2x2.csv", t.index());
        REQUIRE(e.values.size() == 4);
        CHECK(e.values[0] == 10.0);
        CHECK(e.values[1] == 20.5);
        CHECK(e.values[2] == 0.0);
        CHECK(e.values[3] == 5.0);
        CHECK(e.missing == 0);
        CHECK(e.unknown == 0);
    }
    SUBCASE("empty file in lenient mode")
    {
        write_file(dir / "e.csv", "");
        const auto e = parse_extension(dir / "e.csv", t.index(), MatchMode::Lenient);
        CHECK(e.values.size() == 4);
        CHECK(e.values.isZero());
        CHECK(e.missing == 4);
    }
    SUBCASE("unknown sector")
    {
        write_file(dir / "e.csv", "region,sector,value\nR1,Gamma,1\nR2,Beta,2\n");
        CHECK_THROWS_AS(parse_extension(dir / "e.csv", t.index(), MatchMode::Strict), UnknownRegionSector);
        const auto e = parse_extension(dir / "e.csv", t.index(), MatchMode::Lenient);
        CHECK(e.unknown == 1);
        CHECK(e.missing == 3);
        CHECK(e.values[3] == 2.0);
    }
    SUBCASE("duplicates, exponents, junk")
    {
        write_file(dir / "e.csv", "R1,Alpha,1.5e2\nR1,Alpha,2\n");
        CHECK_THROWS_AS(parse_extension(dir / "e.csv", t.index()), DuplicateEntry);
        write_file(dir / "e.csv", "R1,Alpha,1.5e2\n");
        CHECK(parse_extension(dir / "e.csv", t.index()).values[0] == 150.0);
        write_file(dir / "e.csv", "R1,Alpha,abc\n");
        CHECK_THROWS_AS(parse_extension(dir / "e.csv", t.index()), NonNumericCell);
        write_file(dir / "e.csv", "R1,Alpha\n");
        CHECK_THROWS_AS(parse_extension(dir / "e.csv", t.index()), MalformedHeader);
    }
}

TEST_CASE("price series")
{
    TempDir dir("ingest_price");

    SUBCASE("pass-through")
    {
        write_file(dir / "p.csv", "year,price\n2000,28.5\n2014,98.9\n");
        const auto p = parse_price_series(dir / "p.csv", "Brent");
        CHECK(p.name == "Brent");
        REQUIRE(p.points.size() == 2);
        CHECK(p.points.at(2000) == 28.5);
        CHECK(p.points.at(2014) == 98.9);
        CHECK(parse_price_series(dir / "p.csv").name == "p");
    }
    SUBCASE("errors")
    {
        write_file(dir / "p.csv", "2014,98.9\n2014,99\n");
        CHECK_THROWS_AS(parse_price_series(dir / "p.csv"), DuplicateYear);
        write_file(dir / "p.csv", "2014,-3\n");
        CHECK_THROWS_AS(parse_price_series(dir / "p.csv"), NonPositivePrice);
        write_file(dir / "p.csv", "2014,0\n");
        CHECK_THROWS_AS(parse_price_series(dir / "p.csv"), NonPositivePrice);
    }
    SUBCASE("shipped fixture")
    {
        const auto p = parse_price_series(synthetic_dir / "brent.csv");
        CHECK(p.points.size() == 2);
        CHECK(p.points.at(2021) == 70.86);
    }
}

#pragma once

// Helpers shared by the unit tests and the acceptance runner. The oracle functions here read
// files and sum cells with plain loops so they do not share code paths with the library.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

namespace fs = std::filesystem;

inline const fs::path fixture_dir = MRIOFLOW_FIXTURE_DIR;
inline const fs::path synthetic_dir = fs::path(MRIOFLOW_FIXTURE_DIR) / "synthetic";
inline const fs::path data_dir = MRIOFLOW_SHARE_DIR;

class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static int counter = 0;
        std::random_device rd;
        path_ = fs::temp_directory_path() /
                ("mrioflow_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    f << content;
}

inline std::string read_file(const fs::path& path)
{
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Dense copy of a tab-separated two-header, two-label-column transaction file.
struct DenseTable {
    std::vector<std::string> row_region;
    std::vector<std::string> row_sector;
    std::vector<std::vector<double>> cells;

    std::size_t size() const { return cells.size(); }
};

inline std::vector<std::string> split_tabs(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline DenseTable read_dense(const fs::path& path)
{
    DenseTable t;
    std::ifstream f(path);
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        if (line_no++ < 2)
            continue;
        if (trim(line).empty())
            continue;
        const auto cols = split_tabs(line);
        t.row_region.push_back(trim(cols.at(0)));
        t.row_sector.push_back(trim(cols.at(1)));
        std::vector<double> row;
        for (std::size_t c = 2; c < cols.size(); ++c)
            row.push_back(std::stod(cols[c]));
        t.cells.push_back(std::move(row));
    }
    return t;
}

/// Brute-force block sum over every cell: rows whose sector is in `from`, columns in `to`.
inline double oracle_flow(const DenseTable& t, const std::set<std::string>& from, const std::set<std::string>& to)
{
    long double acc = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            if (from.count(t.row_sector[i]) && to.count(t.row_sector[j]))
                acc += t.cells[i][j];
    return static_cast<double>(acc);
}

inline double oracle_outgoing(const DenseTable& t, const std::set<std::string>& from)
{
    long double acc = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (from.count(t.row_sector[i]))
            for (std::size_t j = 0; j < t.size(); ++j)
                acc += t.cells[i][j];
    return static_cast<double>(acc);
}

inline double oracle_total(const DenseTable& t)
{
    long double acc = 0;
    for (const auto& row : t.cells)
        for (double v : row)
            acc += v;
    return static_cast<double>(acc);
}

inline std::size_t oracle_nonzeros(const DenseTable& t)
{
    std::size_t n = 0;
    for (const auto& row : t.cells)
        for (double v : row)
            n += v != 0;
    return n;
}

inline bool close_rel(double a, double b, double rel)
{
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= rel * scale;
}

// Sector labels of the synthetic fixture, spelled out independently of the concordance file.
inline const std::set<std::string> ict_labels = {
    "Manufacture of office machinery and computers (30)",
    "Manufacture of radio, television and communication equipment and apparatus (32)",
    "Post and telecommunications (64)",
    "Computer and related activities (72)",
    "Publishing, printing and reproduction of recorded media (22)",
};
inline const std::set<std::string> og_labels = {
    "Extraction of crude petroleum and services related to crude oil extraction, excluding surveying",
    "Petroleum Refinery",
};
inline const std::set<std::string> rn_labels = {
    "Production of electricity by nuclear",
    "Production of electricity by wind",
};

} // namespace testsupport

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "moeadstn/errors.hpp"
#include "moeadstn/problems.hpp"
#include "moeadstn/text.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return MOEADSTN_TEST_DATA_DIR; }

// One row of the frozen pymoo evaluations.
struct OracleRow {
    moeadstn::ProblemId problem;
    std::vector<double> x;
    std::vector<double> f;
    std::vector<double> c;
};

inline std::vector<OracleRow> load_oracle() {
    const auto path = data_dir() / "dascmop_t16_oracle.csv";
    std::ifstream in(path);
    if (!in) {
        throw moeadstn::IoError("missing fixture " + path.string());
    }
    std::string line;
    std::getline(in, line);
    std::vector<OracleRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = moeadstn::split_csv(line);
        OracleRow r;
        r.problem = moeadstn::parse_problem_id(cells.at(0));
        for (std::size_t i = 1; i <= 30; ++i) {
            r.x.push_back(*moeadstn::parse_double(cells.at(i)));
        }
        for (std::size_t i = 31; i <= 33; ++i) {
            if (auto v = moeadstn::parse_double(cells.at(i))) {
                r.f.push_back(*v);
            }
        }
        for (std::size_t i = 34; i < cells.size(); ++i) {
            if (auto v = moeadstn::parse_double(cells[i])) {
                r.c.push_back(*v);
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

// Relative tolerance with an absolute floor for values near zero.
inline bool close(double actual, double expected, double rel = 1e-9, double abs_floor = 1e-12) {
    return std::abs(actual - expected) <= std::max(rel * std::abs(expected), abs_floor);
}

} // namespace testing

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "moeadstn/decomposition.hpp"
#include "moeadstn/errors.hpp"

using namespace moeadstn;

namespace {

void check_simplex(const std::vector<WeightVector>& ws, std::size_t m) {
    for (std::size_t i = 0; i < ws.size(); ++i) {
        CHECK(ws[i].index == i);
        REQUIRE(ws[i].weights.size() == m);
        double sum = 0.0;
        for (double v : ws[i].weights) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

void check_rows(const std::vector<WeightVector>& ws, const std::vector<std::vector<double>>& expected) {
    REQUIRE(ws.size() == expected.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        for (std::size_t j = 0; j < expected[i].size(); ++j) {
            CHECK(ws[i].weights[j] == doctest::Approx(expected[i][j]).epsilon(1e-12));
        }
    }
}

} // namespace

TEST_SUITE("decomposition") {

TEST_CASE("uniform design matches the independent oracle") {
    // Values from tests/oracles/uniform_design_oracle.py.
    check_rows(generate_uniform_design(5, 2), {{0.9, 0.1}, {0.7, 0.3}, {0.5, 0.5}, {0.3, 0.7}, {0.1, 0.9}});
    check_rows(generate_uniform_design(5, 3), {{0.683772233983162, 0.22135943621178655, 0.09486832980505137},
                                               {0.4522774424948339, 0.16431676725154984, 0.3834057902536162},
                                               {0.2928932188134524, 0.6363961030678928, 0.07071067811865477},
                                               {0.16333997346592444, 0.4183300132670378, 0.4183300132670378},
                                               {0.05131670194948623, 0.09486832980505136, 0.8538149682454624}});
    check_rows(generate_uniform_design(10, 3), {{0.7763932022500211, 0.16770509831248423, 0.05590169943749474},
                                                {0.6127016653792583, 0.17428425057933375, 0.21301408404140795},
                                                {0.5, 0.07500000000000001, 0.425},
                                                {0.4083920216900384, 0.5028667815634673, 0.08874119674649424},
                                                {0.3291796067500631, 0.36895121628746536, 0.3018691769624716},
                                                {0.2583801512904337, 0.18540496217739158, 0.5562148865321748},
                                                {0.19377422517014498, 0.7659144860883622, 0.04031128874149276},
                                                {0.1339745962155614, 0.562916512459885, 0.3031088913245535},
                                                {0.07804555427071125, 0.322684056005251, 0.5992703897240377},
                                                {0.025320565519103666, 0.04873397172404486, 0.9259454627568515}});
    check_rows(generate_uniform_design(7, 4),
               {{0.5850867333168783, 0.16695516331709276, 0.19482422407330846, 0.05313387929272049},
                {0.40159151941142457, 0.0679760555101843, 0.2652162125391956, 0.2652162125391956},
                {0.29050829401480804, 0.3810608649736879, 0.07037803735960801, 0.25805280365189603},
                {0.2062994740159002, 0.15732436114093484, 0.5909207244972247, 0.04545544034594035},
                {0.1369456260028179, 0.6323933901647452, 0.14828206103513797, 0.08237892279729889},
                {0.0772411555836604, 0.27026980812968343, 0.23303179867380572, 0.41945723761285036},
                {0.024400043652442638, 0.035488315077162234, 0.0671508315193139, 0.8729608097510813}});
}

TEST_CASE("uniform design contracts") {
    const auto a = generate_uniform_design(5, 2);
    CHECK(a == generate_uniform_design(5, 2));
    const auto b = generate_uniform_design(100, 2);
    CHECK(b.size() == 100);
    check_simplex(b, 2);
    const auto c = generate_uniform_design(100, 3);
    CHECK(c.size() == 100);
    check_simplex(c, 3);
    CHECK_THROWS_AS(generate_uniform_design(1, 2), InputError);
    CHECK_THROWS_AS(generate_uniform_design(5, 1), InputError);
}

TEST_CASE("discrepancy of the centered one-point set") {
    // One point at the cube center in s dimensions: (13/12)^s - 2 + 1.
    CHECK(centered_l2_discrepancy_sq({{0.5, 0.5}}) == doctest::Approx(std::pow(13.0 / 12.0, 2) - 1.0));
}

TEST_CASE("simplex-lattice design") {
    check_rows(generate_sld(4, 2), {{0, 1}, {0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}, {1, 0}});
    const auto corners = generate_sld(1, 3);
    REQUIRE(corners.size() == 3);
    std::set<std::vector<double>> got;
    for (const auto& w : corners) got.insert(w.weights);
    CHECK(got == std::set<std::vector<double>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(generate_sld(99, 2).size() == 100);
    CHECK(generate_sld(12, 3).size() == 91);
    check_simplex(generate_sld(13, 3), 3);
    CHECK_THROWS_AS(generate_sld(0, 2), InputError);
}

TEST_CASE("simplex-lattice sizing") {
    CHECK(sld_divisions_for(100, 2) == 99);
    CHECK(sld_divisions_for(300, 2) == 299);
    // C(14, 2) = 91 < 100 <= C(15, 2) = 105
    CHECK(sld_divisions_for(100, 3) == 13);
    CHECK(generate_sld(sld_divisions_for(100, 3), 3).size() == 105);
    CHECK(sld_divisions_for(300, 3) == 23);
}

TEST_CASE("sobol design") {
    const auto a = generate_sobol(10, 2);
    CHECK(a.size() == 10);
    check_simplex(a, 2);
    std::set<std::vector<double>> distinct;
    for (const auto& w : a) distinct.insert(w.weights);
    CHECK(distinct.size() == 10);
    const auto b = generate_sobol(10, 3);
    CHECK(b == generate_sobol(10, 3));
    check_simplex(b, 3);
    CHECK_THROWS_AS(generate_sobol(0, 2), InputError);
}

TEST_CASE("neighborhoods") {
    const auto ws = generate_sld(4, 2);
    SUBCASE("T = 1 is self only") {
        const auto t = build_neighborhood(ws, 1);
        for (std::size_t i = 0; i < ws.size(); ++i) CHECK(t.neighbors[i] == std::vector<std::size_t>{i});
    }
    SUBCASE("interior vectors see both sides") {
        const auto t = build_neighborhood(ws, 3);
        for (std::size_t i = 1; i + 1 < ws.size(); ++i) {
            CHECK(t.neighbors[i][0] == i);
            std::set<std::size_t> rest(t.neighbors[i].begin() + 1, t.neighbors[i].end());
            CHECK(rest == std::set<std::size_t>{i - 1, i + 1});
        }
        // Edge vector 0: itself, then 1, then 2.
        CHECK(t.neighbors[0] == std::vector<std::size_t>{0, 1, 2});
    }
    SUBCASE("T = N covers everyone") {
        const auto t = build_neighborhood(ws, ws.size());
        for (const auto& list : t.neighbors) {
            CHECK(std::set<std::size_t>(list.begin(), list.end()).size() == ws.size());
        }
    }
    SUBCASE("ties go to the lower index") {
        const auto t = build_neighborhood(ws, 2);
        CHECK(t.neighbors[2] == std::vector<std::size_t>{2, 1});
    }
    CHECK_THROWS_AS(build_neighborhood(ws, 0), InputError);
    CHECK_THROWS_AS(build_neighborhood(ws, 6), InputError);
    CHECK_THROWS_AS(build_neighborhood(ws, 2, 1.5), InputError);
}

TEST_CASE("neighbor lists are sorted by distance") {
    const auto ws = generate_uniform_design(60, 3);
    const auto t = build_neighborhood(ws, 15);
    auto dist = [&](std::size_t a, std::size_t b) {
        double d = 0.0;
        for (std::size_t k = 0; k < 3; ++k) d += std::pow(ws[a].weights[k] - ws[b].weights[k], 2);
        return d;
    };
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto& list = t.neighbors[i];
        REQUIRE(list.size() == 15);
        CHECK(list[0] == i);
        for (std::size_t k = 1; k + 1 < list.size(); ++k) {
            CHECK(dist(i, list[k]) <= dist(i, list[k + 1]));
        }
        // Nobody outside the list is strictly closer than the last member.
        const std::set<std::size_t> in(list.begin(), list.end());
        for (std::size_t j = 0; j < ws.size(); ++j) {
            if (!in.count(j)) CHECK(dist(i, j) >= dist(i, list.back()));
        }
    }
}

} // TEST_SUITE

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "moeadstn/errors.hpp"
#include "moeadstn/metrics.hpp"
#include "oracles.hpp"

using namespace moeadstn;

using oracle::hv_grid;
using oracle::hv_inclusion_exclusion;
using oracle::random_points;

TEST_SUITE("metrics") {

TEST_CASE("hypervolume examples") {
    CHECK(hypervolume(Matrix::from_rows({{0, 0}}), uniform_reference(2, 11)) == 121.0);
    CHECK(hypervolume(Matrix::from_rows({{0, 0, 0}}), uniform_reference(3, 11)) == 1331.0);
    CHECK(hypervolume(Matrix::from_rows({{1, 1}}), uniform_reference(2, 11)) == 100.0);
    CHECK(hypervolume(Matrix::from_rows({{1, 1}, {2, 2}}), uniform_reference(2, 11)) == 100.0);
    CHECK(hypervolume(Matrix::from_rows({{12, 0}}), uniform_reference(2, 11)) == 0.0);
    CHECK(hypervolume(Matrix(0, 2), uniform_reference(2, 11)) == 0.0);
    CHECK(hypervolume(Matrix::from_rows({{11, 0}}), uniform_reference(2, 11)) == 0.0);
    CHECK_THROWS_AS(hypervolume(Matrix::from_rows({{0, 0, 0, 0}}), uniform_reference(4, 11)), InputError);
    CHECK_THROWS_AS(hypervolume(Matrix::from_rows({{0, 0}}), uniform_reference(3, 11)), InputError);
}

TEST_CASE("hypervolume matches inclusion-exclusion on small sets") {
    std::mt19937_64 gen(21);
    for (std::size_t m : {2u, 3u}) {
        const auto ref = uniform_reference(m, 11.0);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = 1 + trial % 5;
            // Integer grid coordinates force ties and shared faces.
            const auto pts = random_points(gen, n, m, 0.0, 12.0, trial % 2 == 0);
            CHECK(hypervolume(Matrix::from_rows(pts), ref) ==
                  doctest::Approx(hv_inclusion_exclusion(pts, ref)).epsilon(1e-12));
        }
    }
}

TEST_CASE("hypervolume matches a grid oracle on larger sets") {
    std::mt19937_64 gen(22);
    for (std::size_t m : {2u, 3u}) {
        const auto ref = uniform_reference(m, 1.1);
        for (int trial = 0; trial < 40; ++trial) {
            const auto pts = random_points(gen, 20, m, 0.0, 1.2, trial % 3 == 0);
            CHECK(hypervolume(Matrix::from_rows(pts), ref) == doctest::Approx(hv_grid(pts, ref)).epsilon(1e-12));
        }
    }
}

TEST_CASE("2D hypervolume agrees with Monte-Carlo") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 11.0);
    const auto ref = uniform_reference(2, 11.0);
    for (int trial = 0; trial < 3; ++trial) {
        const auto pts = random_points(gen, 20, 2, 0.0, 11.0);
        const int samples = 1000000;
        int hits = 0;
        for (int s = 0; s < samples; ++s) {
            const double a = u(gen), b = u(gen);
            for (const auto& p : pts) {
                if (p[0] <= a && p[1] <= b) {
                    ++hits;
                    break;
                }
            }
        }
        const double estimate = 121.0 * hits / samples;
        CHECK(hypervolume(Matrix::from_rows(pts), ref) == doctest::Approx(estimate).epsilon(0.01));
    }
}

TEST_CASE("hypervolume monotonicity and bounds") {
    std::mt19937_64 gen(24);
    for (std::size_t m : {2u, 3u}) {
        const auto ref = uniform_reference(m, 11.0);
        const double cap = std::pow(11.0, static_cast<double>(m));
        Matrix pts(0, m);
        double last = 0.0;
        for (const auto& p : random_points(gen, 60, m, 0.0, 10.0)) {
            pts.append_row(p);
            const double hv = hypervolume(pts, ref);
            CHECK(hv >= last * (1.0 - 1e-12));
            CHECK(hv <= cap);
            last = hv;
            // A dominated copy changes nothing.
            Matrix with = pts;
            std::vector<double> worse = p;
            for (double& v : worse) v += 0.5;
            with.append_row(worse);
            CHECK(hypervolume(with, ref) == doctest::Approx(hv).epsilon(1e-12));
        }
    }
}

TEST_CASE("anytime accumulated hypervolume") {
    RunTrace trace;
    for (std::size_t k = 1; k <= 100; ++k) trace.checkpoints.push_back({k * 1000, Matrix(0, 2), 0});
    CHECK(anytime_accumulated_hv(trace) == 0.0);
    for (auto& cp : trace.checkpoints) {
        cp.objectives = Matrix::from_rows({{1, 1}});
        cp.size = 1;
    }
    CHECK(anytime_accumulated_hv(trace) == doctest::Approx(100.0 * 100.0));
    trace.checkpoints.resize(7);
    CHECK(anytime_accumulated_hv(trace) == doctest::Approx(700.0));
}

TEST_CASE("anytime hypervolume of a full-budget run has 100 summands") {
    Config c;
    c.population_size = 50;
    c.neighborhood_size = 10;
    c.budget = 100000;
    RunOptions opts;
    opts.record_iterations = false;
    const auto trace = run(c, ProblemInstance(ProblemId::DASCMOP2), 3, opts);
    CHECK(trace.checkpoints.size() == 100);
    double sum = 0.0;
    for (const auto& cp : trace.checkpoints) {
        if (!cp.objectives.empty()) sum += hypervolume(cp.objectives, uniform_reference(2, 11.0));
    }
    CHECK(anytime_accumulated_hv(trace) == doctest::Approx(sum));
}

TEST_CASE("igd") {
    const Matrix ref = Matrix::from_rows({{0, 1}, {1, 0}});
    CHECK(igd(ref, ref) == 0.0);
    CHECK(igd(Matrix::from_rows({{0, 1}}), ref) == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(std::isinf(igd(Matrix(0, 2), ref)));
    CHECK_THROWS_AS(igd(ref, Matrix(0, 2)), InputError);
    std::mt19937_64 gen(25);
    const auto front = random_points(gen, 30, 3, 0.0, 1.0);
    Matrix approx = Matrix::from_rows(random_points(gen, 5, 3, 0.0, 1.0));
    double last = igd(approx, Matrix::from_rows(front));
    for (const auto& p : front) {
        approx.append_row(p);
        const double now = igd(approx, Matrix::from_rows(front));
        CHECK(now <= last);
        last = now;
    }
    CHECK(last == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("population variance") {
    CHECK(population_variance(Matrix::from_rows({{0.3, 0.2}, {0.3, 0.2}, {0.3, 0.2}})) == 0.0);
    CHECK(population_variance(Matrix::from_rows({{0, 5, 5}, {1, 5, 5}})) == doctest::Approx(0.5 / 3.0));
    const Matrix x = Matrix::from_rows({{0.1, 0.9}, {0.4, 0.3}, {0.8, 0.5}, {0.2, 0.2}});
    Matrix scaled = x;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t d = 0; d < x.cols(); ++d) scaled(i, d) *= 3.0;
    }
    CHECK(population_variance(scaled) == doctest::Approx(9.0 * population_variance(x)));
    CHECK_THROWS_AS(population_variance(Matrix::from_rows({{0.1, 0.2}})), InputError);
}

TEST_CASE("scaling frames") {
    const std::vector<Matrix> fronts{Matrix::from_rows({{1, 4}, {2, 3}}), Matrix::from_rows({{3, 3}}), Matrix(0, 2)};
    const auto frame = scaling_frame(fronts);
    CHECK(frame.lower == std::vector<double>{1, 3});
    CHECK(frame.upper == std::vector<double>{3, 4});
    CHECK(apply_frame(fronts[0], frame) == Matrix::from_rows({{0, 1}, {0.5, 0}}));
}

TEST_CASE("pearson") {
    const std::vector<double> a{1, 2, 3, 4, 7}, neg{-1, -2, -3, -4, -7}, flat{2, 2, 2, 2, 2};
    CHECK(*pearson(a, a) == doctest::Approx(1.0));
    CHECK(*pearson(a, neg) == doctest::Approx(-1.0));
    CHECK_FALSE(pearson(a, flat).has_value());
    const std::vector<double> b{2, 1, 4, 3, 5};
    // Hand value: Sxy = 12, Sxx = 21.2, Syy = 10.
    CHECK(*pearson(a, b) == doctest::Approx(12.0 / std::sqrt(21.2 * 10.0)).epsilon(1e-12));
}

TEST_CASE("correlation matrix") {
    std::vector<MetricsRow> rows;
    for (int i = 0; i < 6; ++i) {
        MetricsRow r;
        r.problem = "DASCMOP1";
        r.variant = "base";
        r.seed = static_cast<std::uint64_t>(i);
        r.hv_over_max = 0.1 * i;
        r.igd = 1.0 - 0.1 * i;
        r.population_variance = 0.5;
        r.stn_nodes = static_cast<std::size_t>(i * i);
        rows.push_back(r);
    }
    rows[0].stn_nodes.reset();
    const auto corr = pearson_matrix(rows, {"hv_over_max", "igd", "population_variance", "stn_nodes"});
    CHECK(corr.rows_used == 5);
    CHECK(*corr.values[0][0] == doctest::Approx(1.0));
    CHECK(*corr.values[0][1] == doctest::Approx(-1.0));
    CHECK_FALSE(corr.values[0][2].has_value());
    CHECK_FALSE(corr.values[2][2].has_value());
    CHECK(*corr.values[3][0] == doctest::Approx(*corr.values[0][3]));
    rows.resize(3);
    CHECK_THROWS_AS(pearson_matrix(rows, {"hv_over_max", "stn_nodes"}), InputError);
    CHECK_THROWS_AS(pearson_matrix(rows, {"nope"}), InputError);
}

TEST_CASE("metrics csv round trip") {
    std::vector<MetricsRow> rows(2);
    rows[0] = {"DASCMOP1", "base", 1, 0.4, 0.3, 1234.5, 0.01, 0.02, 10, 12, std::nullopt};
    rows[1] = {"DASCMOP7", "update", 2, 0.0, 0.0, 0.0, std::nullopt, 1.0 / 3.0, 4, 3, 1};
    const auto path = std::filesystem::temp_directory_path() / "moeadstn_metrics_test.csv";
    write_metrics_csv(path, rows);
    CHECK(read_metrics_csv(path) == rows);
    std::filesystem::remove(path);
}

} // TEST_SUITE

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "moeadstn/errors.hpp"
#include "moeadstn/metrics.hpp"
#include "moeadstn/moead.hpp"

using namespace moeadstn;

namespace {

// Population of one-variable members; x doubles as a row label.
Population make_pop(const std::vector<std::vector<double>>& f, double x0 = 0.0) {
    Population p;
    p.x = Matrix(0, 1);
    p.objectives = Matrix(0, f.front().size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        p.append({{x0 + static_cast<double>(i)}, f[i], 0.0, 0});
    }
    return p;
}

CandidateBatch make_batch(const std::vector<std::vector<double>>& f, std::vector<std::size_t> subproblem,
                          std::vector<std::size_t> pool) {
    CandidateBatch b;
    b.members = make_pop(f, 100.0);
    b.subproblem = subproblem;
    for (std::size_t i = 0; i < f.size(); ++i) b.pool.push_back(pool);
    return b;
}

std::size_t count_from_candidates(const Population& p) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < p.size(); ++i) n += p.x(i, 0) >= 100.0;
    return n;
}

Config small_config(std::size_t budget) {
    Config c;
    c.population_size = 20;
    c.neighborhood_size = 5;
    c.update.nr = 2;
    c.budget = budget;
    return c;
}

} // namespace

TEST_SUITE("moead") {

TEST_CASE("scaling") {
    const Matrix s = scale_objectives(Matrix::from_rows({{2, 3, 0}, {4, 3, 0.5}, {6, 3, 1}}));
    CHECK(s == Matrix::from_rows({{0, 0, 0}, {0.5, 0, 0.5}, {1, 0, 1}}));
}

TEST_CASE("tchebycheff aggregation") {
    const std::vector<double> z{0, 0};
    CHECK(aggregate_wt(z, std::vector<double>{0.3, 0.7}, z) == 0.0);
    CHECK(aggregate_wt(std::vector<double>{0.4, 0.2}, std::vector<double>{0.5, 0.5}, z) == doctest::Approx(0.2));
    CHECK(aggregate_wt(std::vector<double>{0.5, 0.3}, std::vector<double>{1, 0}, z) == doctest::Approx(0.5));
    // The zero weight becomes 1e-6, so the second objective still counts.
    CHECK(aggregate_wt(std::vector<double>{0.0, 0.3}, std::vector<double>{1, 0}, z) == doctest::Approx(0.3e-6));
}

TEST_CASE("adjusted tchebycheff") {
    const auto w = awt_weights(std::vector<double>{0.25, 0.75});
    CHECK(w[0] == doctest::Approx(0.75));
    CHECK(w[1] == doctest::Approx(0.25));
    const auto half = awt_weights(std::vector<double>{0.5, 0.5});
    CHECK(half[0] == doctest::Approx(0.5));
    const std::vector<double> f{0.4, 0.2}, z{0, 0};
    CHECK(aggregate_awt(f, std::vector<double>{0.5, 0.5}, z) == doctest::Approx(aggregate_wt(f, half, z)));
    CHECK(aggregate_awt(z, std::vector<double>{0.25, 0.75}, z) == 0.0);
}

TEST_CASE("dynamic penalty") {
    CHECK(penalize(1.0, 0, 5.0) == 1.0);
    CHECK(penalize(1.0, 50, 0.0) == 1.0);
    CHECK(penalize(1.0, 20, 2.0) == doctest::Approx(3.0));
    double last = penalize(0.3, 0, 0.1);
    for (std::size_t t = 1; t < 200; ++t) {
        const double now = penalize(0.3, t, 0.1);
        CHECK(now >= last);
        last = now;
    }
    for (double v = 0.0; v < 3.0; v += 0.25) CHECK(penalize(0.3, 7, v + 0.25) >= penalize(0.3, 7, v));
}

TEST_CASE("update set selection") {
    Rng rng(3);
    const auto all = select_update_set(100, std::nullopt, rng);
    CHECK(all.size() == 100);
    CHECK(all.front() == 0);
    CHECK(all.back() == 99);
    for (int k = 0; k < 50; ++k) {
        const auto s = select_update_set(100, 0.10, rng);
        CHECK(s.size() == 10);
        CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 10);
        CHECK(s.back() < 100);
    }
    CHECK(select_update_set(4, 0.25, rng).size() == 1);
    CHECK(select_update_set(100, 0.15, rng).size() == 15);
}

TEST_CASE("differential evolution") {
    const std::vector<Bounds> bounds(2, Bounds{0.0, 1.0});
    Population pop;
    pop.x = Matrix::from_rows({{0.2, 0.2}, {0.2, 0.2}, {0.2, 0.2}, {0.2, 0.2}});
    pop.objectives = Matrix(4, 2);
    pop.violation.assign(4, 0.0);
    pop.birth_tick.assign(4, 0);
    Rng rng(1);
    const std::vector<std::size_t> pool{0, 1, 2, 3};
    SUBCASE("identical parents give the base vector") {
        CHECK(variation_de(0, pool, pop, 0.7, bounds, rng) == std::vector<double>{0.2, 0.2});
    }
    SUBCASE("F = 0 returns one of the parents exactly") {
        pop.x = Matrix::from_rows({{0.1, 0.9}, {0.2, 0.8}, {0.3, 0.7}, {0.4, 0.6}});
        for (int k = 0; k < 20; ++k) {
            const auto v = variation_de(0, pool, pop, 0.0, bounds, rng);
            bool found = false;
            for (std::size_t r = 0; r < 4; ++r) found |= std::equal(v.begin(), v.end(), pop.x.row(r).begin());
            CHECK(found);
        }
    }
    SUBCASE("overshoot is clamped") {
        pop.x = Matrix::from_rows({{0.9, 0.1}, {0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}});
        Rng r2(5);
        for (int k = 0; k < 200; ++k) {
            for (double v : variation_de(0, pool, pop, 10.0, bounds, r2)) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }
    SUBCASE("small pool falls back to the population") {
        pop.x = Matrix::from_rows({{0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}, {0.4, 0.4}});
        const std::vector<std::size_t> tiny{0, 0};
        CHECK_NOTHROW(variation_de(0, tiny, pop, 0.5, bounds, rng));
    }
}

TEST_CASE("polynomial mutation") {
    const std::vector<Bounds> bounds{{0.0, 1.0}, {-1.0, 1.0}, {0.0, 1.0}};
    const std::vector<double> x{0.3, 0.0, 0.9};
    Rng rng(8);
    CHECK(variation_polymut(x, 20.0, 0.0, bounds, rng) == x);
    Rng a(9), b(9);
    CHECK(variation_polymut(x, 20.0, 1.0, bounds, a) == variation_polymut(x, 20.0, 1.0, bounds, b));
    Rng corner(10);
    for (const std::vector<double>& start : {std::vector<double>{0.0, -1.0, 0.0}, std::vector<double>{1.0, 1.0, 1.0}}) {
        for (double eta : {1.0, 20.0, 100.0}) {
            for (int k = 0; k < 2000; ++k) {
                const auto y = variation_polymut(start, eta, 1.0, bounds, corner);
                for (std::size_t d = 0; d < y.size(); ++d) {
                    CHECK(y[d] >= bounds[d].lower);
                    CHECK(y[d] <= bounds[d].upper);
                }
            }
        }
    }
}

TEST_CASE("restricted replacement") {
    const std::vector<WeightVector> w{{{0, 1}, 0}, {{0.5, 0.5}, 1}, {{1, 0}, 2}};
    const Population pop = make_pop({{1, 1}, {1, 1}, {1, 1}});
    const PenaltyState pen{};
    Rng rng(2);
    SUBCASE("worse everywhere leaves the population alone") {
        const auto next = update_restricted(make_batch({{2, 2}}, {1}, {0, 1, 2}), pop, w, 3, AggregationKind::wt, pen, rng);
        CHECK(next == pop);
    }
    SUBCASE("cap of one") {
        const auto next = update_restricted(make_batch({{0, 0}}, {1}, {0, 1, 2}), pop, w, 1, AggregationKind::wt, pen, rng);
        CHECK(count_from_candidates(next) == 1);
    }
    SUBCASE("cap at least T replaces the whole neighborhood") {
        const auto next = update_restricted(make_batch({{0, 0}}, {1}, {0, 1, 2}), pop, w, 5, AggregationKind::wt, pen, rng);
        CHECK(count_from_candidates(next) == 3);
    }
    SUBCASE("replacement never leaves the pool") {
        const auto next = update_restricted(make_batch({{0, 0}}, {0}, {0, 1}), pop, w, 5, AggregationKind::wt, pen, rng);
        CHECK(next.x(2, 0) == 2.0);
        CHECK(count_from_candidates(next) == 2);
    }
    SUBCASE("ties keep the incumbent") {
        const auto next = update_restricted(make_batch({{1, 1}}, {1}, {0, 1, 2}), pop, w, 3, AggregationKind::wt, pen, rng);
        CHECK(next == pop);
    }
    SUBCASE("penalty turns an infeasible improvement into a loss") {
        auto batch = make_batch({{0.9, 0.9}}, {1}, {0, 1, 2});
        batch.members.violation[0] = 1.0;
        // At t = 0 the penalty factor is 0 and only the objectives count.
        CHECK(count_from_candidates(update_restricted(batch, pop, w, 3, AggregationKind::wt, {{}, 0}, rng)) == 3);
        CHECK(count_from_candidates(update_restricted(batch, pop, w, 3, AggregationKind::wt, {{}, 100}, rng)) == 0);
    }
}

TEST_CASE("best replacement") {
    const std::vector<WeightVector> w{{{0, 1}, 0}, {{0.5, 0.5}, 1}, {{1, 0}, 2}};
    const Population pop = make_pop({{1, 1}, {1, 1}, {1, 1}});
    const PenaltyState pen{};
    SUBCASE("worse everywhere leaves the population alone") {
        CHECK(update_best(make_batch({{2, 2}}, {0}, {}), pop, w, 3, AggregationKind::wt, pen) == pop);
    }
    SUBCASE("nr = 1 replaces one incumbent") {
        CHECK(count_from_candidates(update_best(make_batch({{0, 0}}, {0}, {}), pop, w, 1, AggregationKind::wt, pen)) == 1);
    }
    SUBCASE("largest improvement wins") {
        // Candidate (0, 1) only helps the subproblem that weights f1.
        const Population mixed = make_pop({{1, 1}, {1, 0}, {0.5, 1}});
        const auto next = update_best(make_batch({{0, 1}}, {0}, {}), mixed, w, 1, AggregationKind::wt, pen);
        CHECK(next.x(2, 0) == 100.0);
        CHECK(count_from_candidates(next) == 1);
    }
    SUBCASE("later candidates face the updated incumbents") {
        // Scaled objectives: incumbents (1, 1), candidates (0.5, 0.5) and
        // (0, 0). The first gains 0.5 on subproblems 0 and 2 and 0.25 on 1;
        // the tie goes to subproblem 0. Against the original incumbents the
        // second would gain 1 on both 0 and 2 and take 0 again. Against the
        // updated incumbent it gains only 0.5 there, so it takes 2.
        const auto next =
            update_best(make_batch({{0.5, 0.5}, {0, 0}}, {0, 1}, {}), pop, w, 1, AggregationKind::wt, pen);
        CHECK(next.x(0, 0) == 100.0);
        CHECK(next.x(1, 0) == 1.0);
        CHECK(next.x(2, 0) == 101.0);
    }
}

TEST_CASE("restart schedule") {
    CHECK(restart_due(20000));
    CHECK_FALSE(restart_due(19999));
    CHECK(restart_due(20050));
    RestartSchedule s(20000);
    CHECK(s.due(20000));
    s.mark(20100);
    CHECK_FALSE(s.due(39999));
    CHECK(s.due(40000));
}

TEST_CASE("config validation") {
    Config c;
    CHECK_NOTHROW(c.validate());
    c.population_size = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = Config{};
    c.delta = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = Config{};
    c.partial_update = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("run contracts") {
    const ProblemInstance p(ProblemId::DASCMOP2);

    SUBCASE("budget below N is rejected") {
        CHECK_THROWS_AS(run(small_config(19), p, 1), ConfigError);
    }

    SUBCASE("budget = N keeps only the initial population") {
        const auto trace = run(small_config(20), p, 4);
        CHECK(trace.iterations.size() == 1);
        CHECK(trace.evaluations == 20);
        Archive expected;
        for (std::size_t i = 0; i < 20; ++i) expected.insert(trace.final_population.solution(i));
        CHECK(trace.archive == expected);
    }

    SUBCASE("determinism") {
        const auto a = run(small_config(2000), p, 77);
        const auto b = run(small_config(2000), p, 77);
        CHECK(a.archive == b.archive);
        CHECK(a.final_population == b.final_population);
        REQUIRE(a.iterations.size() == b.iterations.size());
        for (std::size_t k = 0; k < a.iterations.size(); ++k) {
            CHECK(a.iterations[k].x == b.iterations[k].x);
        }
        const auto c = run(small_config(2000), p, 78);
        CHECK_FALSE(a.final_population == c.final_population);
    }
}

TEST_CASE("run invariants") {
    for (ProblemId id : {ProblemId::DASCMOP1, ProblemId::DASCMOP7}) {
        const ProblemInstance p(id);
        const std::size_t m = p.num_objectives();
        for (bool restart : {false, true}) {
            Config c = small_config(5000);
            c.restart = restart;
            c.restart_period = 1000;
            c.partial_update = restart ? std::nullopt : std::optional<double>(0.25);
            const auto trace = run(c, p, 12);
            const std::size_t N = trace.population_size;
            CHECK(trace.evaluations <= c.budget);
            CHECK((trace.restarts > 0) == restart);

            // Evaluations between snapshots: selected candidates plus restarts.
            const std::size_t per_iteration = c.partial_update ? static_cast<std::size_t>(std::ceil(0.25 * N)) : N;
            std::size_t restarts_seen = 0;
            for (std::size_t k = 1; k < trace.iterations.size(); ++k) {
                const auto& prev = trace.iterations[k - 1];
                const std::size_t step = trace.iterations[k].evaluations - prev.evaluations;
                const std::size_t expected_step = std::min(per_iteration, c.budget - prev.evaluations -
                                                                              (prev.restarted ? N : 0)) +
                                                  (prev.restarted ? N : 0);
                CHECK(step == expected_step);
                restarts_seen += prev.restarted;
            }
            restarts_seen += trace.iterations.back().restarted;
            CHECK(restarts_seen == trace.restarts);
            CHECK(trace.evaluations == trace.iterations.back().evaluations + (trace.iterations.back().restarted ? N : 0));

            for (const auto& snap : trace.iterations) {
                for (std::size_t i = 0; i < snap.x.rows(); ++i) {
                    for (std::size_t d = 0; d < snap.x.cols(); ++d) {
                        CHECK(snap.x(i, d) >= p.bounds()[d].lower);
                        CHECK(snap.x(i, d) <= p.bounds()[d].upper);
                    }
                }
            }

            const auto ref = uniform_reference(m, 11.0);
            double last = -1.0;
            for (const auto& cp : trace.checkpoints) {
                const double hv = cp.objectives.empty() ? 0.0 : hypervolume(cp.objectives, ref);
                CHECK(hv >= last);
                last = hv;
            }
            CHECK(trace.checkpoints.size() == trace.evaluations / 1000);
        }
    }
}

TEST_CASE("restart leaves the archive alone") {
    // Restart populations are never offered to the archive, so every member
    // must come from the initial population or a variation step.
    const ProblemInstance p(ProblemId::DASCMOP2);
    Config c = small_config(3000);
    c.restart = true;
    c.restart_period = 500;
    const auto trace = run(c, p, 5);
    REQUIRE(trace.restarts > 0);
    std::set<std::size_t> restart_ticks;
    for (const auto& snap : trace.iterations) {
        if (snap.restarted) restart_ticks.insert(snap.iteration);
    }
    for (const auto& snap : trace.iterations) {
        if (snap.iteration == 0 || !restart_ticks.count(snap.iteration - 1)) continue;
        // The first snapshot after a restart holds fresh members tagged with
        // the restart tick; none of them may appear in the archive.
        for (std::size_t i = 0; i < snap.x.rows(); ++i) {
            if (snap.birth_tick[i] != snap.iteration - 1) continue;
            for (const auto& a : trace.archive.members()) {
                CHECK_FALSE(std::equal(a.x.begin(), a.x.end(), snap.x.row(i).begin()));
            }
        }
    }
}

} // TEST_SUITE

#include "moeadstn/moead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "moeadstn/errors.hpp"

namespace moeadstn {

namespace {

std::vector<double> epsilon_weights(std::span<const double> w) {
    std::vector<double> out(w.begin(), w.end());
    for (double& v : out) {
        if (v == 0.0) {
            v = weight_epsilon;
        }
    }
    return out;
}

double tchebycheff(std::span<const double> f, std::span<const double> w_eff, std::span<const double> z) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.size(); ++i) {
        best = std::max(best, w_eff[i] * std::abs(f[i] - z[i]));
    }
    return best;
}

void check_dims(std::span<const double> f, std::span<const double> w, std::span<const double> z) {
    if (f.size() != w.size() || f.size() != z.size()) {
        throw InputError("aggregation: objective, weight and ideal point dimensions differ");
    }
}

// Effective weight rows for the chosen aggregation, computed once per call
// of the update routines.
std::vector<std::vector<double>> effective_weights(const std::vector<WeightVector>& weights, AggregationKind kind) {
    std::vector<std::vector<double>> out;
    out.reserve(weights.size());
    for (const auto& w : weights) {
        out.push_back(kind == AggregationKind::awt ? awt_weights(w.weights) : epsilon_weights(w.weights));
    }
    return out;
}

// Population rows followed by candidate rows, scaled together.
struct UnionView {
    Matrix scaled;
    std::vector<double> violation;
    std::size_t pop_size = 0;
};

UnionView make_union(const CandidateBatch& candidates, const Population& pop) {
    Matrix raw = pop.objectives;
    for (std::size_t c = 0; c < candidates.members.size(); ++c) {
        raw.append_row(candidates.members.objectives.row(c));
    }
    UnionView u;
    u.scaled = scale_objectives(raw);
    u.violation = pop.violation;
    u.violation.insert(u.violation.end(), candidates.members.violation.begin(), candidates.members.violation.end());
    u.pop_size = pop.size();
    return u;
}

class Scorer {
public:
    Scorer(const UnionView& u, const std::vector<WeightVector>& weights, AggregationKind kind,
           const PenaltyState& penalty)
        : u_(u), w_(effective_weights(weights, kind)), z_(u.scaled.cols(), 0.0), penalty_(penalty) {}

    // Penalized aggregation of union row r on subproblem j.
    double operator()(std::size_t r, std::size_t j) const {
        return penalize(tchebycheff(u_.scaled.row(r), w_[j], z_), penalty_.iteration, u_.violation[r], penalty_.cht);
    }

private:
    const UnionView& u_;
    std::vector<std::vector<double>> w_;
    std::vector<double> z_;
    PenaltyState penalty_;
};

Population assemble(const CandidateBatch& candidates, const Population& pop, const std::vector<std::size_t>& owner) {
    Population next;
    next.x = Matrix(0, pop.x.cols());
    next.objectives = Matrix(0, pop.objectives.cols());
    for (std::size_t j = 0; j < owner.size(); ++j) {
        const std::size_t r = owner[j];
        const Population& src = r < pop.size() ? pop : candidates.members;
        const std::size_t k = r < pop.size() ? r : r - pop.size();
        next.x.append_row(src.x.row(k));
        next.objectives.append_row(src.objectives.row(k));
        next.violation.push_back(src.violation[k]);
        next.birth_tick.push_back(src.birth_tick[k]);
    }
    return next;
}

void check_batch(const CandidateBatch& candidates, const Population& pop, const std::vector<WeightVector>& weights) {
    if (weights.size() != pop.size()) {
        throw InputError("update: one weight vector per population member is required");
    }
    const std::size_t n = candidates.members.size();
    if (candidates.subproblem.size() != n || candidates.pool.size() != n) {
        throw InputError("update: candidate batch is inconsistent");
    }
}

Population evaluate_rows(const Matrix& x, const ProblemInstance& problem, std::size_t birth_tick) {
    Population pop;
    pop.x = x;
    pop.objectives = Matrix(0, problem.num_objectives());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        Evaluation e = evaluate(problem, x.row(i));
        pop.objectives.append_row(e.objectives);
        pop.violation.push_back(e.violation);
        pop.birth_tick.push_back(birth_tick);
    }
    return pop;
}

Matrix random_decisions(std::size_t n, const ProblemInstance& problem, Rng& rng) {
    const auto& bounds = problem.bounds();
    Matrix x(n, bounds.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < bounds.size(); ++d) {
            x(i, d) = rng.uniform(bounds[d].lower, bounds[d].upper);
        }
    }
    return x;
}

} // namespace

std::string to_string(DecompositionKind k) {
    switch (k) {
    case DecompositionKind::uniform: return "uniform";
    case DecompositionKind::sld: return "sld";
    case DecompositionKind::sobol: return "sobol";
    }
    return "?";
}

std::string to_string(AggregationKind k) { return k == AggregationKind::wt ? "wt" : "awt"; }
std::string to_string(UpdateKind k) { return k == UpdateKind::restricted ? "restricted" : "best"; }

void Config::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("invalid configuration: " + what); };
    if (population_size < 3) {
        fail("population_size must be at least 3");
    }
    if (update.nr < 1 || update.nr > 20) {
        fail("update nr must lie in [1, 20]");
    }
    if (neighborhood_size < 1 || neighborhood_size > 100) {
        fail("neighborhood_size must lie in [1, 100]");
    }
    if (!(delta >= 0.1 && delta <= 1.0)) {
        fail("delta must lie in [0.1, 1]");
    }
    if (!(de_F >= 0.1 && de_F <= 1.0)) {
        fail("de_F must lie in [0.1, 1]");
    }
    if (!(pm_eta >= 1.0 && pm_eta <= 100.0)) {
        fail("pm_eta must lie in [1, 100]");
    }
    if (!(pm_prob >= 0.0 && pm_prob <= 1.0)) {
        fail("pm_prob must lie in [0, 1]");
    }
    if (partial_update) {
        static constexpr double allowed[] = {0.10, 0.15, 0.20, 0.25};
        if (std::none_of(std::begin(allowed), std::end(allowed),
                         [&](double a) { return std::abs(a - *partial_update) < 1e-12; })) {
            fail("partial_update must be one of 0.10, 0.15, 0.20, 0.25");
        }
    }
    if (restart && restart_period == 0) {
        fail("restart_period must be positive");
    }
    if (budget == 0) {
        fail("budget must be positive");
    }
    if (!(cht.C >= 0.0) || !(cht.alpha >= 0.0)) {
        fail("penalty constants must be nonnegative");
    }
}

Solution Population::solution(std::size_t i) const {
    Solution s;
    s.x.assign(x.row(i).begin(), x.row(i).end());
    s.objectives.assign(objectives.row(i).begin(), objectives.row(i).end());
    s.violation = violation[i];
    s.birth_tick = birth_tick[i];
    return s;
}

void Population::append(const Solution& s) {
    x.append_row(s.x);
    objectives.append_row(s.objectives);
    violation.push_back(s.violation);
    birth_tick.push_back(s.birth_tick);
}

Matrix scale_objectives(const Matrix& raw) {
    Matrix out(raw.rows(), raw.cols());
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < raw.rows(); ++r) {
            lo = std::min(lo, raw(r, c));
            hi = std::max(hi, raw(r, c));
        }
        const double range = hi - lo;
        for (std::size_t r = 0; r < raw.rows(); ++r) {
            out(r, c) = range > 0.0 ? (raw(r, c) - lo) / range : 0.0;
        }
    }
    return out;
}

double aggregate_wt(std::span<const double> f_scaled, std::span<const double> w, std::span<const double> z) {
    check_dims(f_scaled, w, z);
    return tchebycheff(f_scaled, epsilon_weights(w), z);
}

std::vector<double> awt_weights(std::span<const double> w) {
    std::vector<double> inv = epsilon_weights(w);
    double sum = 0.0;
    for (double& v : inv) {
        v = 1.0 / v;
        sum += v;
    }
    for (double& v : inv) {
        v /= sum;
    }
    return inv;
}

double aggregate_awt(std::span<const double> f_scaled, std::span<const double> w, std::span<const double> z) {
    check_dims(f_scaled, w, z);
    return tchebycheff(f_scaled, awt_weights(w), z);
}

double penalize(double f_agg, std::size_t iteration, double violation, const DynamicCht& cht) {
    if (violation == 0.0) {
        return f_agg;
    }
    return f_agg + std::pow(cht.C * static_cast<double>(iteration), cht.alpha) * violation;
}

std::vector<std::size_t> select_update_set(std::size_t N, std::optional<double> partial, Rng& rng) {
    if (!partial) {
        std::vector<std::size_t> all(N);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    // The small slack keeps e.g. 0.15 * 100 from rounding up to 16.
    const auto k = static_cast<std::size_t>(std::ceil(*partial * static_cast<double>(N) - 1e-9));
    auto picked = rng.sample_without_replacement(N, std::max<std::size_t>(k, 1));
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::vector<double> variation_de(std::size_t i, std::span<const std::size_t> pool, const Population& pop, double F,
                                 const std::vector<Bounds>& bounds, Rng& rng) {
    (void)i;
    std::vector<std::size_t> members(pool.begin(), pool.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.size() < 3) {
        members.resize(pop.size());
        std::iota(members.begin(), members.end(), std::size_t{0});
    }
    if (members.size() < 3) {
        throw InputError("differential evolution needs a population of at least 3");
    }
    const auto picks = rng.sample_without_replacement(members.size(), 3);
    const auto r1 = pop.x.row(members[picks[0]]);
    const auto r2 = pop.x.row(members[picks[1]]);
    const auto r3 = pop.x.row(members[picks[2]]);
    std::vector<double> v(r1.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
        v[d] = std::clamp(r1[d] + F * (r2[d] - r3[d]), bounds[d].lower, bounds[d].upper);
    }
    return v;
}

std::vector<double> variation_polymut(std::span<const double> x, double eta, double prob,
                                      const std::vector<Bounds>& bounds, Rng& rng) {
    std::vector<double> y(x.begin(), x.end());
    const double mut_pow = 1.0 / (eta + 1.0);
    for (std::size_t d = 0; d < y.size(); ++d) {
        if (!(rng.uniform() < prob)) {
            continue;
        }
        const double lo = bounds[d].lower;
        const double hi = bounds[d].upper;
        const double span = hi - lo;
        const double delta1 = (y[d] - lo) / span;
        const double delta2 = (hi - y[d]) / span;
        const double r = rng.uniform();
        double deltaq = 0.0;
        if (r < 0.5) {
            const double val = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - delta1, eta + 1.0);
            deltaq = std::pow(val, mut_pow) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - delta2, eta + 1.0);
            deltaq = 1.0 - std::pow(val, mut_pow);
        }
        y[d] = std::clamp(y[d] + deltaq * span, lo, hi);
    }
    return y;
}

Population update_restricted(const CandidateBatch& candidates, const Population& pop,
                             const std::vector<WeightVector>& weights, std::size_t nr, AggregationKind aggregation,
                             const PenaltyState& penalty, Rng& rng) {
    check_batch(candidates, pop, weights);
    const UnionView u = make_union(candidates, pop);
    const Scorer score(u, weights, aggregation, penalty);
    std::vector<std::size_t> owner(pop.size());
    std::iota(owner.begin(), owner.end(), std::size_t{0});

    for (std::size_t c = 0; c < candidates.members.size(); ++c) {
        const std::size_t row = pop.size() + c;
        std::vector<std::size_t> order = candidates.pool[c];
        rng.shuffle(order);
        std::size_t replaced = 0;
        for (std::size_t j : order) {
            if (replaced >= nr) {
                break;
            }
            if (score(row, j) < score(owner[j], j)) {
                owner[j] = row;
                ++replaced;
            }
        }
    }
    return assemble(candidates, pop, owner);
}

Population update_best(const CandidateBatch& candidates, const Population& pop,
                       const std::vector<WeightVector>& weights, std::size_t nr, AggregationKind aggregation,
                       const PenaltyState& penalty) {
    check_batch(candidates, pop, weights);
    const UnionView u = make_union(candidates, pop);
    const Scorer score(u, weights, aggregation, penalty);
    std::vector<std::size_t> owner(pop.size());
    std::iota(owner.begin(), owner.end(), std::size_t{0});

    std::vector<std::pair<double, std::size_t>> gains;
    for (std::size_t c = 0; c < candidates.members.size(); ++c) {
        const std::size_t row = pop.size() + c;
        gains.clear();
        for (std::size_t j = 0; j < pop.size(); ++j) {
            const double gain = score(owner[j], j) - score(row, j);
            if (gain > 0.0) {
                gains.emplace_back(-gain, j);
            }
        }
        const std::size_t k = std::min(nr, gains.size());
        std::partial_sort(gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(k), gains.end());
        for (std::size_t i = 0; i < k; ++i) {
            owner[gains[i].second] = row;
        }
    }
    return assemble(candidates, pop, owner);
}

bool restart_due(std::size_t t_evals, std::size_t period) {
    RestartSchedule schedule(period);
    return schedule.due(t_evals);
}

Population restart(const Population& pop, const ProblemInstance& problem, std::size_t birth_tick, Rng& rng) {
    return evaluate_rows(random_decisions(pop.size(), problem, rng), problem, birth_tick);
}

std::vector<WeightVector> make_weights(const Config& config, std::size_t m) {
    switch (config.decomposition) {
    case DecompositionKind::uniform: return generate_uniform_design(config.population_size, m);
    case DecompositionKind::sobol: return generate_sobol(config.population_size, m);
    case DecompositionKind::sld: return generate_sld(sld_divisions_for(config.population_size, m), m);
    }
    throw InputError("unknown decomposition");
}

namespace {

IterationSnapshot snapshot(const Population& pop, std::size_t iteration, std::size_t evaluations) {
    IterationSnapshot s;
    s.iteration = iteration;
    s.evaluations = evaluations;
    s.x = pop.x;
    s.objectives = pop.objectives;
    s.scaled_objectives = scale_objectives(pop.objectives);
    s.violation = pop.violation;
    s.birth_tick = pop.birth_tick;
    return s;
}

} // namespace

RunTrace run(const Config& config, const ProblemInstance& problem, std::uint64_t seed, const RunOptions& options) {
    config.validate();
    const std::size_t m = problem.num_objectives();
    const auto weights = make_weights(config, m);
    const std::size_t N = weights.size();
    if (config.budget < N) {
        throw ConfigError("budget " + std::to_string(config.budget) + " cannot cover the initial population of " +
                          std::to_string(N));
    }
    if (config.neighborhood_size > N) {
        throw ConfigError("neighborhood size exceeds the population size");
    }
    const auto neighborhood = build_neighborhood(weights, config.neighborhood_size, config.delta);
    const auto& bounds = problem.bounds();

    Rng rng(seed);
    RunTrace trace;
    trace.problem = problem.name();
    trace.seed = seed;
    trace.population_size = N;

    std::vector<std::size_t> everyone(N);
    std::iota(everyone.begin(), everyone.end(), std::size_t{0});

    Population pop = evaluate_rows(random_decisions(N, problem, rng), problem, 0);
    std::size_t t_evals = N;
    for (std::size_t i = 0; i < N; ++i) {
        trace.archive.insert(pop.solution(i));
    }

    std::size_t next_checkpoint = options.checkpoint_interval;
    auto take_checkpoints = [&] {
        while (options.checkpoint_interval > 0 && t_evals >= next_checkpoint) {
            trace.checkpoints.push_back({next_checkpoint, trace.archive.objectives(), trace.archive.size()});
            next_checkpoint += options.checkpoint_interval;
        }
    };
    take_checkpoints();
    if (options.record_iterations) {
        trace.iterations.push_back(snapshot(pop, 0, t_evals));
    }

    RestartSchedule schedule(config.restart_period);
    std::size_t t = 0;
    while (t_evals < config.budget) {
        ++t;
        auto selected = select_update_set(N, config.partial_update, rng);
        const std::size_t remaining = config.budget - t_evals;
        if (selected.size() > remaining) {
            selected.resize(remaining);
        }

        CandidateBatch batch;
        batch.members.x = Matrix(0, bounds.size());
        batch.members.objectives = Matrix(0, m);
        for (std::size_t i : selected) {
            const bool local = rng.uniform() < config.delta;
            const auto& pool = local ? neighborhood.neighbors[i] : everyone;
            auto x = variation_de(i, pool, pop, config.de_F, bounds, rng);
            x = variation_polymut(x, config.pm_eta, config.pm_prob, bounds, rng);
            Evaluation e = evaluate(problem, x);
            batch.members.append({std::move(x), std::move(e.objectives), e.violation, t});
            batch.subproblem.push_back(i);
            // Replacement scans the same pool the parents came from.
            batch.pool.push_back(pool);
        }
        t_evals += selected.size();

        const PenaltyState penalty{config.cht, t};
        if (config.update.kind == UpdateKind::restricted) {
            pop = update_restricted(batch, pop, weights, config.update.nr, config.aggregation, penalty, rng);
        } else {
            pop = update_best(batch, pop, weights, config.update.nr, config.aggregation, penalty);
        }

        for (std::size_t c = 0; c < batch.members.size(); ++c) {
            trace.archive.insert(batch.members.solution(c));
        }
        take_checkpoints();
        if (options.record_iterations) {
            trace.iterations.push_back(snapshot(pop, t, t_evals));
        }

        if (config.restart && schedule.due(t_evals)) {
            if (config.budget - t_evals >= N) {
                pop = restart(pop, problem, t, rng);
                t_evals += N;
                ++trace.restarts;
                if (options.record_iterations) {
                    trace.iterations.back().restarted = true;
                }
                take_checkpoints();
            }
            schedule.mark(t_evals);
        }
    }

    trace.evaluations = t_evals;
    trace.final_population = std::move(pop);
    return trace;
}

} // namespace moeadstn

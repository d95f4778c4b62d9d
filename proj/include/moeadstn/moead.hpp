#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moeadstn/archive.hpp"
#include "moeadstn/decomposition.hpp"
#include "moeadstn/matrix.hpp"
#include "moeadstn/problems.hpp"
#include "moeadstn/rng.hpp"

namespace moeadstn {

enum class DecompositionKind { uniform, sld, sobol };
enum class AggregationKind { wt, awt };
enum class UpdateKind { restricted, best };

std::string to_string(DecompositionKind k);
std::string to_string(AggregationKind k);
std::string to_string(UpdateKind k);

struct UpdateStrategy {
    UpdateKind kind = UpdateKind::restricted;
    // Maximum replacements per candidate.
    std::size_t nr = 2;

    bool operator==(const UpdateStrategy&) const = default;
};

// Dynamic penalty: f_agg + (C * t)^alpha * v.
struct DynamicCht {
    double C = 0.05;
    double alpha = 2.0;

    bool operator==(const DynamicCht&) const = default;
};

struct Config {
    static constexpr std::size_t default_budget = 100000;
    static constexpr std::size_t default_restart_period = 20000;

    DecompositionKind decomposition = DecompositionKind::uniform;
    std::size_t population_size = 100;
    AggregationKind aggregation = AggregationKind::wt;
    UpdateStrategy update;
    std::size_t neighborhood_size = 20;
    double delta = 0.9;
    double de_F = 0.5;
    double pm_eta = 20.0;
    double pm_prob = 0.3;
    std::optional<double> partial_update;
    bool restart = false;
    std::size_t restart_period = default_restart_period;
    std::size_t budget = default_budget;
    DynamicCht cht;

    // Throws ConfigError when a field leaves its domain.
    void validate() const;

    bool operator==(const Config&) const = default;
};

// Structure-of-arrays population; row i is the incumbent of subproblem i.
struct Population {
    Matrix x;
    Matrix objectives;
    std::vector<double> violation;
    std::vector<std::size_t> birth_tick;

    std::size_t size() const noexcept { return x.rows(); }
    Solution solution(std::size_t i) const;
    void append(const Solution& s);
    bool operator==(const Population&) const = default;
};

// Candidates from one iteration, each tied to the subproblem that produced
// it and to the pool its parents came from, which replacement also scans.
struct CandidateBatch {
    Population members;
    std::vector<std::size_t> subproblem;
    std::vector<std::vector<std::size_t>> pool;
};

struct PenaltyState {
    DynamicCht cht;
    std::size_t iteration = 0;
};

// Per-column min-max scaling to [0, 1]; constant columns map to 0.
Matrix scale_objectives(const Matrix& raw);

// Zero weights are replaced by this before aggregation.
inline constexpr double weight_epsilon = 1e-6;

double aggregate_wt(std::span<const double> f_scaled, std::span<const double> w, std::span<const double> z);
double aggregate_awt(std::span<const double> f_scaled, std::span<const double> w, std::span<const double> z);
// Weights actually applied by the adjusted Tchebycheff: normalized inverses.
std::vector<double> awt_weights(std::span<const double> w);

double penalize(double f_agg, std::size_t iteration, double violation, const DynamicCht& cht = {});

// All indices, or ceil(p * N) distinct indices drawn uniformly.
std::vector<std::size_t> select_update_set(std::size_t N, std::optional<double> partial, Rng& rng);

// DE/rand/1 from three distinct pool members, truncated to bounds. Pools
// with fewer than three distinct members fall back to the whole population.
std::vector<double> variation_de(std::size_t i, std::span<const std::size_t> pool, const Population& pop, double F,
                                 const std::vector<Bounds>& bounds, Rng& rng);

std::vector<double> variation_polymut(std::span<const double> x, double eta, double prob,
                                      const std::vector<Bounds>& bounds, Rng& rng);

// Sequential replacement: each candidate scans its pool in random order and
// replaces incumbents it strictly improves on, at most nr times.
Population update_restricted(const CandidateBatch& candidates, const Population& pop,
                             const std::vector<WeightVector>& weights, std::size_t nr, AggregationKind aggregation,
                             const PenaltyState& penalty, Rng& rng);

// Each candidate replaces the incumbents of the nr subproblems (whole
// population) where it improves the most; strict improvement only.
Population update_best(const CandidateBatch& candidates, const Population& pop,
                       const std::vector<WeightVector>& weights, std::size_t nr, AggregationKind aggregation,
                       const PenaltyState& penalty);

// Tracks restart marks at multiples of the period.
class RestartSchedule {
public:
    explicit RestartSchedule(std::size_t period = Config::default_restart_period) : period_(period), next_(period) {}

    // True once t_evals has reached the next multiple of the period.
    bool due(std::size_t t_evals) const noexcept { return period_ > 0 && t_evals >= next_; }
    // Moves the mark past t_evals.
    void mark(std::size_t t_evals) noexcept { next_ = (t_evals / period_ + 1) * period_; }

private:
    std::size_t period_;
    std::size_t next_;
};

bool restart_due(std::size_t t_evals, std::size_t period = Config::default_restart_period);

// Fresh uniform decision vectors, evaluated; budget accounting is the caller's.
Population restart(const Population& pop, const ProblemInstance& problem, std::size_t birth_tick, Rng& rng);

struct IterationSnapshot {
    std::size_t iteration = 0;
    std::size_t evaluations = 0;
    Matrix x;
    // Population-wide min-max scaling of `objectives`.
    Matrix scaled_objectives;
    Matrix objectives;
    std::vector<double> violation;
    std::vector<std::size_t> birth_tick;
    // The population was regenerated right after this snapshot.
    bool restarted = false;
};

struct ArchiveCheckpoint {
    std::size_t evaluations = 0;
    Matrix objectives;
    std::size_t size = 0;
};

struct RunTrace {
    std::string problem;
    std::uint64_t seed = 0;
    std::size_t population_size = 0;
    std::size_t evaluations = 0;
    std::size_t restarts = 0;
    std::vector<IterationSnapshot> iterations;
    std::vector<ArchiveCheckpoint> checkpoints;
    Archive archive;
    Population final_population;
};

struct RunOptions {
    std::size_t checkpoint_interval = 1000;
    // Per-iteration population snapshots; off keeps only checkpoints.
    bool record_iterations = true;
};

// Weight vectors for the configured decomposition and population size. SLD
// rounds N up to the next lattice size.
std::vector<WeightVector> make_weights(const Config& config, std::size_t m);

// Throws ConfigError when the budget cannot cover the initial population.
RunTrace run(const Config& config, const ProblemInstance& problem, std::uint64_t seed, const RunOptions& options = {});

} // namespace moeadstn

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moeadstn/archive.hpp"
#include "moeadstn/decomposition.hpp"
#include "moeadstn/matrix.hpp"
#include "moeadstn/moead.hpp"

namespace moeadstn {

inline constexpr double default_stn_precision = 0.1;

// Per-coordinate grid cell: floor(x_d / precision).
using LocationId = std::vector<std::int32_t>;

LocationId locate(std::span<const double> x, double precision = default_stn_precision);

// Colon-separated cell indices, e.g. "1:4:0".
std::string cell_key(const LocationId& cell);
LocationId parse_cell_key(std::string_view key);

// Uniform Design vectors used only for tracking, whatever decomposition the
// algorithm itself uses. n must be at least 2.
std::vector<WeightVector> stn_weights(std::size_t n, std::size_t m);

// For each vector, the row minimizing the weighted Tchebycheff value of
// `scaled` against z. Ties go to the largest birth tick, then the lowest row.
std::vector<std::size_t> select_representatives(const Matrix& scaled, std::span<const std::size_t> birth_tick,
                                                const std::vector<WeightVector>& vectors,
                                                std::span<const double> z);
std::vector<Solution> select_representatives(const std::vector<Solution>& population,
                                             const std::vector<WeightVector>& vectors, std::span<const double> z);

struct TrajectoryStep {
    std::size_t iteration = 0;
    LocationId cell;
    double agg_value = 0.0;
    bool feasible = false;
    // Feasible and within the optimality tolerance of the reference front.
    bool near_front = false;

    bool operator==(const TrajectoryStep&) const = default;
};

struct Trajectory {
    std::size_t run = 0;
    std::size_t vector = 0;
    std::vector<TrajectoryStep> steps;

    bool operator==(const Trajectory&) const = default;
};

struct TrajectoryOptions {
    double precision = default_stn_precision;
    // Euclidean distance, in objective space scaled by the reference front's
    // min-max box, under which a feasible point counts as optimal.
    double optimal_tolerance = 1e-3;
};

// One trajectory per tracking vector, in iteration order. The front, when
// given, drives the near_front flags.
std::vector<Trajectory> extract_trajectories(const RunTrace& trace, const std::vector<WeightVector>& vectors,
                                             std::size_t run, const TrajectoryOptions& options = {},
                                             const Matrix* reference_front = nullptr);

enum class Owner { a, b, shared };
std::string to_string(Owner o);
Owner parse_owner(std::string_view text);

struct StnNode {
    std::size_t visits = 0;
    std::size_t visits_a = 0;
    std::size_t visits_b = 0;
    bool is_start = false;
    bool is_end = false;
    bool is_optimal = false;
    Owner owner = Owner::a;

    bool operator==(const StnNode&) const = default;
};

struct StnEdge {
    std::size_t count = 0;
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    Owner owner = Owner::a;

    bool operator==(const StnEdge&) const = default;
};

struct StnGraph {
    double precision = default_stn_precision;
    std::size_t trajectories = 0;
    std::map<LocationId, StnNode> nodes;
    std::map<std::pair<LocationId, LocationId>, StnEdge> edges;

    bool operator==(const StnGraph&) const = default;
};

// Adds one trajectory to an unmerged graph. Consecutive repeats of a cell
// count as a single visit and produce no edge.
void add_trajectory(StnGraph& g, const Trajectory& t);

// Union of unmerged graphs with visit and traversal counts summed.
void accumulate(StnGraph& into, const StnGraph& from);

// Throws InputError on an empty list.
StnGraph build_stn(std::span<const Trajectory> trajectories, double precision = default_stn_precision);
StnGraph build_stn(std::span<const RunTrace> traces, const std::vector<WeightVector>& vectors,
                   const TrajectoryOptions& options = {}, const Matrix* reference_front = nullptr);

// Node and edge union; intersection items are owned by "shared". Throws
// InputError when the precisions differ.
StnGraph merge_stn(const StnGraph& a, const StnGraph& b);

struct StnMetrics {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t shared = 0;

    bool operator==(const StnMetrics&) const = default;
};

StnMetrics stn_metrics(const StnGraph& g);

void write_graphml(const StnGraph& g, const std::filesystem::path& path);
void write_dot(const StnGraph& g, const std::filesystem::path& path);
// Reads files produced by write_graphml.
StnGraph read_graphml(const std::filesystem::path& path);

// Columns run,vector,iteration,cell_key,agg_value,feasible. A ".gz"
// suffix selects gzip compression.
void write_trajectories_csv(const std::filesystem::path& path, std::span<const Trajectory> trajectories);
std::vector<Trajectory> read_trajectories_csv(const std::filesystem::path& path);

} // namespace moeadstn

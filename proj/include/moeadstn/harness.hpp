#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moeadstn/metrics.hpp"
#include "moeadstn/moead.hpp"
#include "moeadstn/problems.hpp"
#include "moeadstn/stn.hpp"

namespace moeadstn {

// "base" followed by the six single-component variants.
const std::vector<std::string>& variant_names();

struct VariantSpec {
    std::string name;
    Config config;
};

Config base_config();
// Throws InputError for an unknown name.
Config variant_config(std::string_view name);
VariantSpec variant_spec(std::string_view name);

// Names of the configuration groups that differ between a and b.
std::vector<std::string> differing_groups(const Config& a, const Config& b);

// Checkpoint summary rows written as `evals,hv,archive_size`; hv uses the
// (11, ..., 11) reference point on raw objectives.
struct CheckpointRow {
    std::size_t evaluations = 0;
    double hv = 0.0;
    std::size_t archive_size = 0;
};

std::vector<CheckpointRow> checkpoint_rows(const RunTrace& trace, double ref_value = 11.0);
std::string checkpoint_csv(std::span<const CheckpointRow> rows);
// Per-iteration population dump, one row per member.
std::string trace_csv(const RunTrace& trace);

// Everything the grid needs from one run, without the per-iteration snapshots.
struct RunOutcome {
    std::string problem;
    std::string variant;
    std::uint64_t seed = 0;
    std::optional<std::string> error;
    Matrix final_archive;
    std::vector<CheckpointRow> checkpoints;
    double accumulated_hv = 0.0;
    std::optional<double> population_variance;
    std::optional<double> igd;
    StnGraph graph;
    std::vector<Trajectory> trajectories;
};

struct RunSettings {
    std::optional<std::size_t> budget;
    std::size_t stn_vectors = 5;
    TrajectoryOptions trajectory;
    bool keep_trajectories = false;
};

// Runs one configuration and reduces the trace. Errors propagate.
RunOutcome run_and_reduce(const Config& config, const ProblemInstance& problem, std::string_view variant,
                          std::uint64_t seed, const Matrix& reference, const RunSettings& settings = {});

struct DeltaRow {
    std::string problem;
    std::string variant;
    std::optional<double> delta_hv;
    std::optional<double> delta_igd;
    std::optional<double> delta_nodes;
    std::optional<double> delta_variance;
    std::optional<std::size_t> shared;

    bool operator==(const DeltaRow&) const = default;
};

// Median of the present values; missing when none are.
std::optional<double> median(std::vector<double> values);

// Per problem: seed-median of variant minus seed-median of base, for
// hv_over_max, igd, stn_nodes and population_variance. `shared` maps a
// problem to the shared-node count of the merged (variant, base) graph.
std::vector<DeltaRow> delta_table(std::span<const MetricsRow> base_rows, std::span<const MetricsRow> variant_rows,
                                  const std::map<std::string, std::size_t>& shared = {});

void write_delta_csv(const std::filesystem::path& path, std::span<const DeltaRow> rows);

// Graph sizes per (problem, variant); merged counts are against base.
struct StnSummaryRow {
    std::string problem;
    std::string variant;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::optional<std::size_t> merged_nodes;
    std::optional<std::size_t> merged_edges;
    std::optional<std::size_t> shared;

    bool operator==(const StnSummaryRow&) const = default;
};

void write_stn_summary_csv(const std::filesystem::path& path, std::span<const StnSummaryRow> rows);
std::vector<StnSummaryRow> read_stn_summary_csv(const std::filesystem::path& path);

// Metric columns entering the pooled correlation matrix.
const std::vector<std::string>& correlation_columns();

struct ExperimentOptions {
    std::vector<ProblemId> problems;
    std::vector<std::string> variants;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path out_dir;
    std::size_t jobs = 1;
    RunSettings run;
    // Reference fronts directory; empty means default_data_dir().
    std::filesystem::path data_dir;
    bool write_graphs = true;
    bool write_trajectories = false;
    std::function<void(const std::string&)> progress;
};

struct ExperimentResult {
    std::vector<MetricsRow> rows;
    std::vector<StnSummaryRow> stn;
    std::vector<DeltaRow> deltas;
    std::optional<CorrelationMatrix> correlation;
    std::vector<std::string> failures;
};

// Runs the grid problem by problem and writes metrics.csv, stn_summary.csv,
// deltas.csv, correlation.csv, failures.txt, per-run checkpoint CSVs and
// the STN graphs into out_dir.
ExperimentResult run_experiment(const ExperimentOptions& options);

struct Report {
    std::vector<DeltaRow> deltas;
    std::optional<CorrelationMatrix> correlation;
};

// Derives deltas and the correlation matrix from metrics rows and STN sizes.
Report make_report(std::span<const MetricsRow> rows, std::span<const StnSummaryRow> stn);
// Reads metrics.csv and stn_summary.csv from dir; writes deltas.csv and
// correlation.csv back into it.
Report report_directory(const std::filesystem::path& dir);

// Output naming.
std::string run_file_name(std::string_view problem, std::string_view variant, std::uint64_t seed);
std::string graph_file_name(std::string_view problem, std::string_view variant);
std::string merged_graph_file_name(std::string_view problem, std::string_view a, std::string_view b);

// "1..10", "1,3,5" or a mix such as "1..3,7".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

} // namespace moeadstn

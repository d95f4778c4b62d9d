#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moeadstn/matrix.hpp"
#include "moeadstn/moead.hpp"
#include "moeadstn/text.hpp"

namespace moeadstn {

// Exact dominated hypervolume for m in {2, 3}. Points not strictly below the
// reference point in every objective contribute nothing.
double hypervolume(const Matrix& points, std::span<const double> ref);

// Reference point with every component equal to value.
std::vector<double> uniform_reference(std::size_t m, double value);

// Sum of archive hypervolumes over the checkpoints whose evaluation count is
// a multiple of interval. ref_value 11 gives the (11, ..., 11) point.
double anytime_accumulated_hv(const RunTrace& trace, std::size_t interval = 1000, double ref_value = 11.0);

// Mean distance from each reference point to its nearest approximation
// point. Infinity for an empty approximation.
double igd(const Matrix& approx, const Matrix& reference);

// Mean over variables of the per-variable sample variance. Needs two rows.
double population_variance(const Matrix& x);

// Min-max frame used to put several fronts on a common [0, 1] scale.
struct ScalingFrame {
    std::vector<double> lower;
    std::vector<double> upper;

    bool empty() const noexcept { return lower.empty(); }
};

ScalingFrame scaling_frame(std::span<const Matrix> fronts);
// Constant columns map to 0.
Matrix apply_frame(const Matrix& points, const ScalingFrame& frame);

struct MetricsRow {
    std::string problem;
    std::string variant;
    std::uint64_t seed = 0;
    std::optional<double> final_hv;
    std::optional<double> hv_over_max;
    std::optional<double> accumulated_hv;
    std::optional<double> igd;
    std::optional<double> population_variance;
    std::optional<std::size_t> stn_nodes;
    std::optional<std::size_t> stn_edges;
    std::optional<std::size_t> shared_nodes;

    bool operator==(const MetricsRow&) const = default;
};

// Column names accepted by metric_value and pearson_matrix.
const std::vector<std::string>& metric_names();
std::optional<double> metric_value(const MetricsRow& row, const std::string& name);

// Pearson correlation; missing when either side has zero variance or fewer
// than two pairs.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<std::optional<double>>> values;
    // Rows that had every selected column present.
    std::size_t rows_used = 0;
};

// Rows with a missing value in any selected column are dropped first.
// Throws InputError with fewer than three usable rows.
CorrelationMatrix pearson_matrix(std::span<const MetricsRow> rows, const std::vector<std::string>& columns);

void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows);
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);
void write_correlation_csv(const std::filesystem::path& path, const CorrelationMatrix& corr);

} // namespace moeadstn

#include "moeadstn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "moeadstn/errors.hpp"

namespace moeadstn {

namespace {

struct Point3 {
    double x, y, z;
};

double hv2d(std::vector<std::pair<double, double>> pts, double rx, double ry) {
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double best_y = ry;
    for (const auto& [x, y] : pts) {
        if (y < best_y) {
            area += (rx - x) * (best_y - y);
            best_y = y;
        }
    }
    return area;
}

// Two-dimensional nondominated staircase with its dominated area kept up to
// date on every insertion. Keys are x ascending, values y strictly descending.
class Staircase {
public:
    Staircase(double rx, double ry) : rx_(rx), ry_(ry) {}

    void insert(double x, double y) {
        auto q = steps_.lower_bound(x);
        if (q != steps_.end() && q->first == x && q->second <= y) {
            return;
        }
        double cap = ry_;
        if (q != steps_.begin()) {
            const auto prev = std::prev(q);
            if (prev->second <= y) {
                return;
            }
            cap = prev->second;
        }
        double cur_x = x;
        while (q != steps_.end() && q->second >= y) {
            area_ += (q->first - cur_x) * (cap - y);
            cap = q->second;
            cur_x = q->first;
            q = steps_.erase(q);
        }
        const double end_x = q != steps_.end() ? q->first : rx_;
        area_ += (end_x - cur_x) * (cap - y);
        steps_.emplace(x, y);
    }

    double area() const noexcept { return area_; }

private:
    double rx_, ry_;
    double area_ = 0.0;
    std::map<double, double> steps_;
};

double hv3d(std::vector<Point3> pts, const double* ref) {
    std::sort(pts.begin(), pts.end(), [](const Point3& a, const Point3& b) { return a.z < b.z; });
    Staircase front(ref[0], ref[1]);
    double volume = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        front.insert(pts[i].x, pts[i].y);
        const double next_z = i + 1 < pts.size() ? pts[i + 1].z : ref[2];
        volume += front.area() * (next_z - pts[i].z);
    }
    return volume;
}

std::optional<double> cell_number(const std::string& cell, const std::filesystem::path& path, std::size_t line_no) {
    if (cell.empty()) {
        return std::nullopt;
    }
    auto v = parse_double(cell);
    if (!v) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
    }
    return v;
}

std::optional<std::size_t> cell_count(const std::string& cell, const std::filesystem::path& path,
                                      std::size_t line_no) {
    if (cell.empty()) {
        return std::nullopt;
    }
    auto v = parse_integer(cell);
    if (!v || *v < 0) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": not a count: '" + cell + "'");
    }
    return static_cast<std::size_t>(*v);
}

std::string format_count(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); }

const std::vector<std::string> metrics_header = {
    "problem",     "variant",  "seed",      "final_hv",  "hv_over_max", "accumulated_hv",
    "igd",         "population_variance",   "stn_nodes", "stn_edges",   "shared_nodes"};

} // namespace

double hypervolume(const Matrix& points, std::span<const double> ref) {
    const std::size_t m = ref.size();
    if (m != 2 && m != 3) {
        throw InputError("hypervolume supports two or three objectives, got " + std::to_string(m));
    }
    if (!points.empty() && points.cols() != m) {
        throw InputError("hypervolume: point and reference dimensions differ");
    }
    auto inside = [&](std::size_t r) {
        for (std::size_t c = 0; c < m; ++c) {
            if (!(points(r, c) < ref[c])) {
                return false;
            }
        }
        return true;
    };
    if (m == 2) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t r = 0; r < points.rows(); ++r) {
            if (inside(r)) {
                pts.emplace_back(points(r, 0), points(r, 1));
            }
        }
        return hv2d(std::move(pts), ref[0], ref[1]);
    }
    std::vector<Point3> pts;
    for (std::size_t r = 0; r < points.rows(); ++r) {
        if (inside(r)) {
            pts.push_back({points(r, 0), points(r, 1), points(r, 2)});
        }
    }
    return hv3d(std::move(pts), ref.data());
}

std::vector<double> uniform_reference(std::size_t m, double value) { return std::vector<double>(m, value); }

double anytime_accumulated_hv(const RunTrace& trace, std::size_t interval, double ref_value) {
    if (interval == 0) {
        throw InputError("checkpoint interval must be positive");
    }
    double total = 0.0;
    for (const auto& cp : trace.checkpoints) {
        if (cp.evaluations % interval != 0 || cp.objectives.empty()) {
            continue;
        }
        total += hypervolume(cp.objectives, uniform_reference(cp.objectives.cols(), ref_value));
    }
    return total;
}

double igd(const Matrix& approx, const Matrix& reference) {
    if (reference.empty()) {
        throw InputError("igd: empty reference set");
    }
    if (approx.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    if (approx.cols() != reference.cols()) {
        throw InputError("igd: dimension mismatch");
    }
    double total = 0.0;
    for (std::size_t r = 0; r < reference.rows(); ++r) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < approx.rows(); ++a) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < reference.cols(); ++c) {
                const double d = approx(a, c) - reference(r, c);
                d2 += d * d;
            }
            best = std::min(best, d2);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.rows());
}

double population_variance(const Matrix& x) {
    if (x.rows() < 2) {
        throw InputError("population variance needs at least two rows");
    }
    const auto n = static_cast<double>(x.rows());
    double total = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            mean += x(r, c);
        }
        mean /= n;
        // Corrected two-pass sum: the second term cancels the rounding error
        // of the mean, so a constant column gives exactly 0.
        double ss = 0.0;
        double drift = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const double d = x(r, c) - mean;
            ss += d * d;
            drift += d;
        }
        total += std::max(0.0, ss - drift * drift / n) / (n - 1.0);
    }
    return x.cols() > 0 ? total / static_cast<double>(x.cols()) : 0.0;
}

ScalingFrame scaling_frame(std::span<const Matrix> fronts) {
    ScalingFrame frame;
    for (const Matrix& f : fronts) {
        if (f.empty()) {
            continue;
        }
        if (frame.empty()) {
            frame.lower.assign(f.cols(), std::numeric_limits<double>::infinity());
            frame.upper.assign(f.cols(), -std::numeric_limits<double>::infinity());
        }
        if (f.cols() != frame.lower.size()) {
            throw InputError("scaling frame: fronts have different dimensions");
        }
        for (std::size_t r = 0; r < f.rows(); ++r) {
            for (std::size_t c = 0; c < f.cols(); ++c) {
                frame.lower[c] = std::min(frame.lower[c], f(r, c));
                frame.upper[c] = std::max(frame.upper[c], f(r, c));
            }
        }
    }
    return frame;
}

Matrix apply_frame(const Matrix& points, const ScalingFrame& frame) {
    Matrix out(points.rows(), points.cols());
    if (points.empty()) {
        return out;
    }
    if (frame.lower.size() != points.cols()) {
        throw InputError("scaling frame dimension does not match the points");
    }
    for (std::size_t r = 0; r < points.rows(); ++r) {
        for (std::size_t c = 0; c < points.cols(); ++c) {
            const double range = frame.upper[c] - frame.lower[c];
            out(r, c) = range > 0.0 ? (points(r, c) - frame.lower[c]) / range : 0.0;
        }
    }
    return out;
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names(metrics_header.begin() + 3, metrics_header.end());
    return names;
}

std::optional<double> metric_value(const MetricsRow& row, const std::string& name) {
    auto count = [](const std::optional<std::size_t>& v) -> std::optional<double> {
        if (!v) {
            return std::nullopt;
        }
        return static_cast<double>(*v);
    };
    if (name == "final_hv") return row.final_hv;
    if (name == "hv_over_max") return row.hv_over_max;
    if (name == "accumulated_hv") return row.accumulated_hv;
    if (name == "igd") return row.igd;
    if (name == "population_variance") return row.population_variance;
    if (name == "stn_nodes") return count(row.stn_nodes);
    if (name == "stn_edges") return count(row.stn_edges);
    if (name == "shared_nodes") return count(row.shared_nodes);
    throw InputError("unknown metric column: " + name);
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InputError("pearson: columns differ in length");
    }
    if (a.size() < 2) {
        return std::nullopt;
    }
    const auto n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) {
        return std::nullopt;
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CorrelationMatrix pearson_matrix(std::span<const MetricsRow> rows, const std::vector<std::string>& columns) {
    std::vector<std::vector<double>> data(columns.size());
    for (const auto& row : rows) {
        std::vector<double> vals;
        for (const auto& name : columns) {
            auto v = metric_value(row, name);
            if (!v || !std::isfinite(*v)) {
                break;
            }
            vals.push_back(*v);
        }
        if (vals.size() != columns.size()) {
            continue;
        }
        for (std::size_t c = 0; c < columns.size(); ++c) {
            data[c].push_back(vals[c]);
        }
    }
    const std::size_t used = columns.empty() ? 0 : data[0].size();
    if (used < 3) {
        throw InputError("correlation needs at least three complete rows, found " + std::to_string(used));
    }
    CorrelationMatrix corr;
    corr.names = columns;
    corr.rows_used = used;
    corr.values.assign(columns.size(), std::vector<std::optional<double>>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i) {
        for (std::size_t j = i; j < columns.size(); ++j) {
            auto r = pearson(data[i], data[j]);
            if (i == j && r) {
                r = 1.0;
            }
            corr.values[i][j] = r;
            corr.values[j][i] = r;
        }
    }
    return corr;
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricsRow> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << join(metrics_header, ",") << '\n';
    for (const auto& r : rows) {
        out << r.problem << ',' << r.variant << ',' << r.seed << ',' << format_optional(r.final_hv) << ','
            << format_optional(r.hv_over_max) << ',' << format_optional(r.accumulated_hv) << ','
            << format_optional(r.igd) << ',' << format_optional(r.population_variance) << ','
            << format_count(r.stn_nodes) << ',' << format_count(r.stn_edges) << ',' << format_count(r.shared_nodes)
            << '\n';
    }
    if (!out) {
        throw IoError("failed while writing " + path.string());
    }
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || split_csv(line) != metrics_header) {
        throw ConfigError(path.string() + ": unexpected metrics header");
    }
    std::vector<MetricsRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != metrics_header.size()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": wrong column count");
        }
        MetricsRow r;
        r.problem = cells[0];
        r.variant = cells[1];
        auto seed = parse_integer(cells[2]);
        if (!seed || *seed < 0) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad seed");
        }
        r.seed = static_cast<std::uint64_t>(*seed);
        r.final_hv = cell_number(cells[3], path, line_no);
        r.hv_over_max = cell_number(cells[4], path, line_no);
        r.accumulated_hv = cell_number(cells[5], path, line_no);
        r.igd = cell_number(cells[6], path, line_no);
        r.population_variance = cell_number(cells[7], path, line_no);
        r.stn_nodes = cell_count(cells[8], path, line_no);
        r.stn_edges = cell_count(cells[9], path, line_no);
        r.shared_nodes = cell_count(cells[10], path, line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_correlation_csv(const std::filesystem::path& path, const CorrelationMatrix& corr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "metric";
    for (const auto& n : corr.names) {
        out << ',' << n;
    }
    out << '\n';
    for (std::size_t i = 0; i < corr.names.size(); ++i) {
        out << corr.names[i];
        for (std::size_t j = 0; j < corr.names.size(); ++j) {
            out << ',' << format_optional(corr.values[i][j]);
        }
        out << '\n';
    }
}

} // namespace moeadstn

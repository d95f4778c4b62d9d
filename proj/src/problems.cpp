#include "moeadstn/problems.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "moeadstn/errors.hpp"

#ifndef MOEADSTN_DEFAULT_DATA_DIR
#define MOEADSTN_DEFAULT_DATA_DIR "data"
#endif

namespace moeadstn {

namespace {

constexpr double pi = std::numbers::pi;

constexpr std::array<DifficultyTriplet, 16> triplets = {{
    {0.25, 0.0, 0.0}, {0.0, 0.25, 0.0}, {0.0, 0.0, 0.25}, {0.25, 0.25, 0.25},
    {0.5, 0.0, 0.0},  {0.0, 0.5, 0.0},  {0.0, 0.0, 0.5},  {0.5, 0.5, 0.5},
    {0.75, 0.0, 0.0}, {0.0, 0.75, 0.0}, {0.0, 0.0, 0.75}, {0.75, 0.75, 0.75},
    {0.0, 1.0, 0.0},  {0.5, 1.0, 0.0},  {0.0, 1.0, 0.5},  {0.5, 1.0, 0.5},
}};

// Shared constraint parameters derived from the triplet.
struct ConstraintParams {
    double a;  // number of type-I feasible stripes
    double b;  // type-I threshold
    double d;  // type-II band, lower edge
    double e;  // type-II band, upper edge
    double r;  // type-III radius
};

ConstraintParams constraint_params(const DifficultyTriplet& t) {
    ConstraintParams p{};
    p.a = 20.0;
    p.b = 2.0 * t.eta - 1.0;
    p.d = t.zeta != 0.0 ? 0.5 : 0.0;
    p.e = t.zeta > 0.0 ? p.d - std::log(t.zeta) : 1e30;
    p.r = 0.5 * t.gamma;
    return p;
}

// Distance functions over the tail variables x[m-1..D-1].
double g1(std::span<const double> x, std::size_t m) {
    const double s = std::sin(0.5 * pi * x[0]);
    double sum = 0.0;
    for (std::size_t i = m - 1; i < x.size(); ++i) {
        const double diff = x[i] - s;
        sum += diff * diff;
    }
    return sum;
}

double g2(std::span<const double> x, std::size_t m) {
    double sum = 0.0;
    for (std::size_t i = m - 1; i < x.size(); ++i) {
        const double z = x[i] - 0.5;
        sum += z * z - std::cos(20.0 * pi * z);
    }
    return static_cast<double>(x.size() - m + 1) + sum;
}

double g3(std::span<const double> x, std::size_t m) {
    const double n = static_cast<double>(x.size());
    double sum = 0.0;
    for (std::size_t i = m - 1; i < x.size(); ++i) {
        const double j = static_cast<double>(i + 1);
        const double diff = x[i] - std::cos(0.25 * j / n * pi * (x[0] + x[1]));
        sum += diff * diff;
    }
    return sum;
}

// Type-II constraint on the distance value g. At zeta == 1 the feasible
// band collapses to |e - g| <= 1e-4.
double feasibility_band(double g, const DifficultyTriplet& t, const ConstraintParams& p) {
    if (t.zeta == 1.0) {
        return -(1e-4 - std::abs(p.e - g));
    }
    return -((p.e - g) * (g - p.d));
}

// DASCMOP1-6. shape 1: concave, 2: convex, 3: disconnected.
void evaluate_bi(std::span<const double> x, int shape, double g, const DifficultyTriplet& t,
                 const ConstraintParams& p, Evaluation& out) {
    const double x1 = x[0];
    const double f1 = x1 + g;
    double f2 = 0.0;
    switch (shape) {
    case 1: f2 = 1.0 - x1 * x1 + g; break;
    case 2: f2 = 1.0 - std::sqrt(x1) + g; break;
    default: f2 = 1.0 - std::sqrt(x1) + 0.5 * std::abs(std::sin(5.0 * pi * x1)) + g; break;
    }
    out.objectives = {f1, f2};

    static constexpr std::array<double, 9> p_k = {0.0, 1.0, 0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 3.0};
    static constexpr std::array<double, 9> q_k = {1.5, 0.5, 2.5, 1.5, 0.5, 3.5, 2.5, 1.5, 0.5};
    constexpr double a_k2 = 0.3;
    constexpr double b_k2 = 1.2;
    const double theta = -0.25 * pi;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);

    auto& c = out.constraint_values;
    c.resize(11);
    c[0] = -(std::sin(p.a * pi * x1) - p.b);
    c[1] = feasibility_band(g, t, p);
    for (std::size_t k = 0; k < p_k.size(); ++k) {
        const double u = (f1 - p_k[k]) * cos_t - (f2 - q_k[k]) * sin_t;
        const double v = (f1 - p_k[k]) * sin_t + (f2 - q_k[k]) * cos_t;
        c[2 + k] = -(u * u / a_k2 + v * v / b_k2 - p.r);
    }
}

// DASCMOP7-9. shape 7: linear front, otherwise spherical.
void evaluate_tri(std::span<const double> x, int shape, double g, const DifficultyTriplet& t,
                  const ConstraintParams& p, Evaluation& out) {
    const double x1 = x[0];
    const double x2 = x[1];
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    if (shape == 7) {
        f1 = x1 * x2 + g;
        f2 = x2 * (1.0 - x1) + g;
        f3 = 1.0 - x2 + g;
    } else {
        f1 = std::cos(0.5 * pi * x1) * std::cos(0.5 * pi * x2) + g;
        f2 = std::cos(0.5 * pi * x1) * std::sin(0.5 * pi * x2) + g;
        f3 = std::sin(0.5 * pi * x1) + g;
    }
    out.objectives = {f1, f2, f3};

    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    const std::array<double, 4> x_k = {1.0, 0.0, 0.0, inv_sqrt3};
    const std::array<double, 4> y_k = {0.0, 1.0, 0.0, inv_sqrt3};
    const std::array<double, 4> z_k = {0.0, 0.0, 1.0, inv_sqrt3};

    auto& c = out.constraint_values;
    c.resize(7);
    c[0] = -(std::sin(p.a * pi * x1) - p.b);
    c[1] = -(std::cos(p.a * pi * x2) - p.b);
    c[2] = feasibility_band(g, t, p);
    for (std::size_t k = 0; k < x_k.size(); ++k) {
        const double dx = f1 - x_k[k];
        const double dy = f2 - y_k[k];
        const double dz = f3 - z_k[k];
        c[3 + k] = -(dx * dx + dy * dy + dz * dz - p.r * p.r);
    }
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

} // namespace

std::string to_string(ProblemId id) { return "DASCMOP" + std::to_string(static_cast<int>(id)); }

ProblemId parse_problem_id(std::string_view text) {
    std::string s = lowercase(std::string(text));
    if (s.rfind("dascmop", 0) == 0) {
        s = s.substr(7);
    }
    int k = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
    if (ec != std::errc{} || ptr != s.data() + s.size() || k < 1 || k > 9) {
        throw InputError("unknown problem id '" + std::string(text) + "' (expected DASCMOP1..DASCMOP9)");
    }
    return static_cast<ProblemId>(k);
}

DifficultyTriplet difficulty_triplet(int index) {
    if (index < 1 || index > static_cast<int>(triplets.size())) {
        throw InputError("difficulty triplet must be in 1..16, got " + std::to_string(index));
    }
    return triplets[static_cast<std::size_t>(index - 1)];
}

ProblemInstance::ProblemInstance(ProblemId id, int triplet)
    : id_(id),
      triplet_(triplet),
      difficulty_(difficulty_triplet(triplet)),
      bounds_(default_num_variables, Bounds{0.0, 1.0}) {
    const int k = static_cast<int>(id);
    if (k < 1 || k > 9) {
        throw InputError("problem id out of range");
    }
    num_objectives_ = k <= 6 ? 2 : 3;
    num_constraints_ = k <= 6 ? 11 : 7;
}

double violation(std::span<const double> constraint_values) {
    double v = 0.0;
    for (double c : constraint_values) {
        if (c > 0.0) {
            v += c;
        }
    }
    return v;
}

Evaluation evaluate(const ProblemInstance& problem, std::span<const double> x) {
    if (x.size() != problem.num_variables()) {
        throw InputError("decision vector has " + std::to_string(x.size()) + " components, " + problem.name() +
                         " expects " + std::to_string(problem.num_variables()));
    }
    const auto& bounds = problem.bounds();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= bounds[i].lower && x[i] <= bounds[i].upper)) {
            throw InputError("component " + std::to_string(i) + " of the decision vector is out of bounds");
        }
    }

    const ConstraintParams params = constraint_params(problem.difficulty());
    const std::size_t m = problem.num_objectives();
    const int k = static_cast<int>(problem.id());
    Evaluation out;
    if (k <= 6) {
        const double g = k <= 3 ? g1(x, m) : g2(x, m);
        evaluate_bi(x, (k - 1) % 3 + 1, g, problem.difficulty(), params, out);
    } else {
        const double g = k == 9 ? g3(x, m) : g2(x, m);
        evaluate_tri(x, k == 7 ? 7 : 8, g, problem.difficulty(), params, out);
    }
    out.violation = violation(out.constraint_values);
    return out;
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("MOEADSTN_DATA_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return MOEADSTN_DEFAULT_DATA_DIR;
}

std::filesystem::path reference_front_path(const ProblemInstance& problem, const std::filesystem::path& dir) {
    return dir / "reference_fronts" / (lowercase(problem.name()) + "_" + std::to_string(problem.triplet()) + ".csv");
}

Matrix reference_front(const ProblemInstance& problem) { return reference_front(problem, default_data_dir()); }

Matrix reference_front(const ProblemInstance& problem, const std::filesystem::path& dir) {
    return read_front_csv(reference_front_path(problem, dir), problem.num_objectives());
}

Matrix read_front_csv(const std::filesystem::path& path, std::size_t num_objectives) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("reference front not found: expected " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("reference front " + path.string() + " is empty");
    }
    const auto header_cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (header_cols != num_objectives) {
        throw ConfigError("reference front " + path.string() + " has " + std::to_string(header_cols) +
                          " columns, expected " + std::to_string(num_objectives));
    }
    Matrix front(0, num_objectives);
    std::vector<double> row;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        row.clear();
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            while (last != first && (last[-1] == '\r' || last[-1] == ' ')) {
                --last;
            }
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || ptr != last) {
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
            }
            row.push_back(v);
        }
        if (row.size() != num_objectives) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(num_objectives) + " columns, found " + std::to_string(row.size()));
        }
        front.append_row(row);
    }
    if (front.rows() == 0) {
        throw ConfigError("reference front " + path.string() + " contains no points");
    }
    return front;
}

} // namespace moeadstn

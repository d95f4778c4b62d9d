#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moeadstn/matrix.hpp"

namespace moeadstn {

enum class ProblemId { DASCMOP1 = 1, DASCMOP2, DASCMOP3, DASCMOP4, DASCMOP5, DASCMOP6, DASCMOP7, DASCMOP8, DASCMOP9 };

inline constexpr std::array<ProblemId, 9> all_problems = {
    ProblemId::DASCMOP1, ProblemId::DASCMOP2, ProblemId::DASCMOP3, ProblemId::DASCMOP4, ProblemId::DASCMOP5,
    ProblemId::DASCMOP6, ProblemId::DASCMOP7, ProblemId::DASCMOP8, ProblemId::DASCMOP9};

std::string to_string(ProblemId id);
// Accepts "DASCMOP3", "dascmop3" or "3".
ProblemId parse_problem_id(std::string_view text);

// Constraint difficulty parameters (eta: diversity, zeta: feasibility,
// gamma: convergence hardness).
struct DifficultyTriplet {
    double eta = 0.0;
    double zeta = 0.0;
    double gamma = 0.0;
};

// The sixteen standard triplets, indexed 1..16.
DifficultyTriplet difficulty_triplet(int index);

struct Bounds {
    double lower = 0.0;
    double upper = 1.0;
};

class ProblemInstance {
public:
    static constexpr int default_triplet = 16;
    static constexpr std::size_t default_num_variables = 30;

    explicit ProblemInstance(ProblemId id, int triplet = default_triplet);

    ProblemId id() const noexcept { return id_; }
    int triplet() const noexcept { return triplet_; }
    const DifficultyTriplet& difficulty() const noexcept { return difficulty_; }
    std::size_t num_objectives() const noexcept { return num_objectives_; }
    std::size_t num_constraints() const noexcept { return num_constraints_; }
    std::size_t num_variables() const noexcept { return bounds_.size(); }
    const std::vector<Bounds>& bounds() const noexcept { return bounds_; }
    std::string name() const { return to_string(id_); }

private:
    ProblemId id_;
    int triplet_;
    DifficultyTriplet difficulty_;
    std::size_t num_objectives_;
    std::size_t num_constraints_;
    std::vector<Bounds> bounds_;
};

// Constraint values follow the "<= 0 is satisfied" convention.
struct Evaluation {
    std::vector<double> objectives;
    std::vector<double> constraint_values;
    double violation = 0.0;

    bool feasible() const noexcept { return violation == 0.0; }
    bool operator==(const Evaluation&) const = default;
};

// Sum of the positive parts of the constraint values.
double violation(std::span<const double> constraint_values);

// Throws InputError on a wrong-length or out-of-bounds x.
Evaluation evaluate(const ProblemInstance& problem, std::span<const double> x);

// Loads `<dir>/<name lowercase>_<triplet>.csv`. The directory defaults to
// MOEADSTN_DATA_DIR (environment) or the compiled-in data path.
Matrix reference_front(const ProblemInstance& problem);
Matrix reference_front(const ProblemInstance& problem, const std::filesystem::path& dir);
std::filesystem::path reference_front_path(const ProblemInstance& problem, const std::filesystem::path& dir);
std::filesystem::path default_data_dir();

// Parses a reference-front CSV (header f1,f2[,f3]); validates the column count.
Matrix read_front_csv(const std::filesystem::path& path, std::size_t num_objectives);

} // namespace moeadstn

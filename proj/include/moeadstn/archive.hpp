#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moeadstn/matrix.hpp"

namespace moeadstn {

struct Solution {
    std::vector<double> x;
    std::vector<double> objectives;
    double violation = 0.0;
    // Iteration that created the solution; larger is newer.
    std::size_t birth_tick = 0;

    bool feasible() const noexcept { return violation == 0.0; }
    bool operator==(const Solution&) const = default;
};

// Pareto dominance for minimization.
bool dominates(std::span<const double> a, std::span<const double> b);
// a is no worse than b in every objective.
bool weakly_dominates(std::span<const double> a, std::span<const double> b);

// Unbounded external archive. Output only: nothing in here feeds back into
// the search. Members are feasible, mutually nondominated in raw objective
// space, and no two share an objective vector.
class Archive {
public:
    // Returns true when the solution was admitted. Infeasible solutions never are.
    bool insert(const Solution& s);

    const std::vector<Solution>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }

    Matrix objectives() const;

    bool operator==(const Archive&) const = default;

private:
    bool insert_biobjective(const Solution& s);
    bool insert_general(const Solution& s);

    // Two objectives: kept sorted by f1 ascending (f2 strictly descending).
    std::vector<Solution> members_;
};

Archive archive_update(Archive archive, std::span<const Solution> candidates);

// Indices of the mutually nondominated rows (duplicates keep the first).
std::vector<std::size_t> nondominated_indices(const Matrix& points);

} // namespace moeadstn

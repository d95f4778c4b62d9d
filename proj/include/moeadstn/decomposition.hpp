#pragma once

#include <cstddef>
#include <vector>

namespace moeadstn {

struct WeightVector {
    std::vector<double> weights;
    std::size_t index = 0;

    bool operator==(const WeightVector&) const = default;
};

// Uniform Design by the good-lattice-point method: among the power
// generators (1, h, h^2, ...) mod n with gcd(h, n) = 1, the one with the
// smallest centered L2 discrepancy is kept, then mapped onto the simplex.
// Requires n >= m >= 2.
std::vector<WeightVector> generate_uniform_design(std::size_t n, std::size_t m);

// Simplex-lattice design: every vector with components in {0, 1/h, ..., 1}.
// Count is C(h+m-1, m-1). Ordered lexicographically by the first component.
std::vector<WeightVector> generate_sld(std::size_t h, std::size_t m);

// Smallest h whose lattice has at least n vectors.
std::size_t sld_divisions_for(std::size_t n, std::size_t m);

// n Sobol points in m-1 dimensions mapped onto the simplex by sorted
// uniform spacings.
std::vector<WeightVector> generate_sobol(std::size_t n, std::size_t m);

// Centered L2 discrepancy of a point set in [0,1]^s (squared value).
double centered_l2_discrepancy_sq(const std::vector<std::vector<double>>& points);

struct NeighborhoodTable {
    // neighbors[i] lists the T nearest subproblems to i, self first.
    std::vector<std::vector<std::size_t>> neighbors;
    std::size_t T = 0;
    // Probability of restricting mating and replacement to the neighborhood.
    double delta = 1.0;
};

// Euclidean nearest neighbors in weight space; ties go to the lower index.
NeighborhoodTable build_neighborhood(const std::vector<WeightVector>& weights, std::size_t T, double delta = 1.0);

} // namespace moeadstn

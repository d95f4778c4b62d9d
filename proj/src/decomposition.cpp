#include "moeadstn/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/random/sobol.hpp>

#include "moeadstn/errors.hpp"

namespace moeadstn {

namespace {

std::vector<WeightVector> index_vectors(std::vector<std::vector<double>> raw) {
    std::vector<WeightVector> out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out.push_back({std::move(raw[i]), i});
    }
    return out;
}

// Fang-Wang map from the unit cube [0,1]^(m-1) onto the simplex in R^m.
std::vector<double> cube_to_simplex(const std::vector<double>& u, std::size_t m) {
    std::vector<double> w(m, 0.0);
    double prod = 1.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double root = std::pow(u[i], 1.0 / static_cast<double>(m - 1 - i));
        w[i] = prod * (1.0 - root);
        prod *= root;
    }
    w[m - 1] = prod;
    return w;
}

// Good lattice point set for generator h: row k (1-based), column j has
// (k * h^j mod n), with 0 replaced by n, then centered into (0, 1).
std::vector<std::vector<double>> glp_points(std::size_t n, std::size_t s, std::size_t h) {
    std::vector<std::size_t> gen(s);
    std::size_t p = 1;
    for (std::size_t j = 0; j < s; ++j) {
        gen[j] = p;
        p = (p * h) % n;
    }
    std::vector<std::vector<double>> pts(n, std::vector<double>(s));
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 0; j < s; ++j) {
            std::size_t u = (k * gen[j]) % n;
            if (u == 0) {
                u = n;
            }
            pts[k - 1][j] = (2.0 * static_cast<double>(u) - 1.0) / (2.0 * static_cast<double>(n));
        }
    }
    return pts;
}

} // namespace

double centered_l2_discrepancy_sq(const std::vector<std::vector<double>>& points) {
    if (points.empty()) {
        return 0.0;
    }
    const std::size_t n = points.size();
    const std::size_t s = points.front().size();
    double term1 = std::pow(13.0 / 12.0, static_cast<double>(s));
    double term2 = 0.0;
    for (const auto& x : points) {
        double prod = 1.0;
        for (double v : x) {
            const double a = std::abs(v - 0.5);
            prod *= 1.0 + 0.5 * a - 0.5 * a * a;
        }
        term2 += prod;
    }
    double term3 = 0.0;
    for (const auto& x : points) {
        for (const auto& y : points) {
            double prod = 1.0;
            for (std::size_t j = 0; j < s; ++j) {
                prod *= 1.0 + 0.5 * std::abs(x[j] - 0.5) + 0.5 * std::abs(y[j] - 0.5) - 0.5 * std::abs(x[j] - y[j]);
            }
            term3 += prod;
        }
    }
    const double dn = static_cast<double>(n);
    return term1 - 2.0 / dn * term2 + term3 / (dn * dn);
}

std::vector<WeightVector> generate_uniform_design(std::size_t n, std::size_t m) {
    if (m < 2) {
        throw InputError("uniform design needs at least 2 objectives");
    }
    if (n < m) {
        throw InputError("uniform design needs n >= m (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
    }
    const std::size_t s = m - 1;
    std::vector<std::vector<double>> best = glp_points(n, s, 1);
    if (s > 1) {
        // h and its inverse mod n give column-swapped lattices with equal
        // discrepancy, so near-equal scores are ties won by the smaller h.
        double best_cd = centered_l2_discrepancy_sq(best);
        for (std::size_t h = 2; h < n; ++h) {
            if (std::gcd(h, n) != 1) {
                continue;
            }
            auto pts = glp_points(n, s, h);
            const double cd = centered_l2_discrepancy_sq(pts);
            if (cd < best_cd - 1e-12 * std::abs(best_cd)) {
                best_cd = cd;
                best = std::move(pts);
            }
        }
    }
    std::vector<std::vector<double>> raw;
    raw.reserve(n);
    for (const auto& u : best) {
        raw.push_back(cube_to_simplex(u, m));
    }
    return index_vectors(std::move(raw));
}

std::size_t sld_divisions_for(std::size_t n, std::size_t m) {
    if (m < 2 || n == 0) {
        throw InputError("simplex-lattice sizing needs m >= 2 and n >= 1");
    }
    for (std::size_t h = 1;; ++h) {
        // C(h+m-1, m-1) computed incrementally; exact for the sizes used here.
        double count = 1.0;
        for (std::size_t i = 1; i < m; ++i) {
            count = count * static_cast<double>(h + i) / static_cast<double>(i);
        }
        if (std::llround(count) >= static_cast<long long>(n)) {
            return h;
        }
    }
}

std::vector<WeightVector> generate_sld(std::size_t h, std::size_t m) {
    if (h == 0) {
        throw InputError("simplex-lattice design needs h >= 1");
    }
    if (m < 2) {
        throw InputError("simplex-lattice design needs at least 2 objectives");
    }
    std::vector<std::vector<double>> raw;
    std::vector<std::size_t> parts(m, 0);
    // Depth-first over compositions of h into m nonnegative parts.
    auto recurse = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
        if (pos + 1 == m) {
            parts[pos] = remaining;
            std::vector<double> w(m);
            for (std::size_t i = 0; i < m; ++i) {
                w[i] = static_cast<double>(parts[i]) / static_cast<double>(h);
            }
            raw.push_back(std::move(w));
            return;
        }
        for (std::size_t k = 0; k <= remaining; ++k) {
            parts[pos] = k;
            self(self, pos + 1, remaining - k);
        }
    };
    recurse(recurse, 0, h);
    return index_vectors(std::move(raw));
}

std::vector<WeightVector> generate_sobol(std::size_t n, std::size_t m) {
    if (n == 0) {
        throw InputError("sobol design needs n >= 1");
    }
    if (m < 2) {
        throw InputError("sobol design needs at least 2 objectives");
    }
    const std::size_t s = m - 1;
    boost::random::sobol engine(s);
    const double scale = 1.0 / (static_cast<double>(boost::random::sobol::max()) + 1.0);
    std::vector<std::vector<double>> raw;
    raw.reserve(n);
    std::vector<double> u(s);
    std::vector<double> cuts(s + 2);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < s; ++j) {
            u[j] = static_cast<double>(engine()) * scale;
        }
        cuts[0] = 0.0;
        std::copy(u.begin(), u.end(), cuts.begin() + 1);
        cuts[s + 1] = 1.0;
        std::sort(cuts.begin() + 1, cuts.begin() + 1 + static_cast<std::ptrdiff_t>(s));
        std::vector<double> w(m);
        for (std::size_t i = 0; i < m; ++i) {
            w[i] = cuts[i + 1] - cuts[i];
        }
        raw.push_back(std::move(w));
    }
    return index_vectors(std::move(raw));
}

NeighborhoodTable build_neighborhood(const std::vector<WeightVector>& weights, std::size_t T, double delta) {
    const std::size_t n = weights.size();
    if (T < 1 || T > n) {
        throw InputError("neighborhood size T=" + std::to_string(T) + " must lie in [1, " + std::to_string(n) + "]");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw InputError("neighborhood delta must lie in [0, 1]");
    }
    NeighborhoodTable table;
    table.T = T;
    table.delta = delta;
    table.neighbors.resize(n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double d2 = 0.0;
            const auto& a = weights[i].weights;
            const auto& b = weights[j].weights;
            for (std::size_t k = 0; k < a.size(); ++k) {
                d2 += (a[k] - b[k]) * (a[k] - b[k]);
            }
            dist[j] = {d2, j};
        }
        // Self has distance 0; a duplicate weight vector with a lower index
        // must not displace it from the first slot.
        dist[i].first = -1.0;
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(T), dist.end());
        auto& list = table.neighbors[i];
        list.reserve(T);
        for (std::size_t k = 0; k < T; ++k) {
            list.push_back(dist[k].second);
        }
    }
    return table;
}

} // namespace moeadstn

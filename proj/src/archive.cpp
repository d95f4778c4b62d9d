#include "moeadstn/archive.hpp"

#include <algorithm>

namespace moeadstn {

bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        if (a[i] < b[i]) {
            strictly_better = true;
        }
    }
    return strictly_better;
}

bool weakly_dominates(std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
    }
    return true;
}

bool Archive::insert(const Solution& s) {
    if (!s.feasible()) {
        return false;
    }
    if (s.objectives.size() == 2) {
        return insert_biobjective(s);
    }
    return insert_general(s);
}

bool Archive::insert_biobjective(const Solution& s) {
    const double f1 = s.objectives[0];
    const double f2 = s.objectives[1];
    // First member with f1 > s.f1; its predecessor is the only one that can
    // weakly dominate s.
    auto upper = std::upper_bound(members_.begin(), members_.end(), f1,
                                  [](double v, const Solution& m) { return v < m.objectives[0]; });
    if (upper != members_.begin() && std::prev(upper)->objectives[1] <= f2) {
        return false;
    }
    // Members with f1 >= s.f1 and f2 >= s.f2 form a contiguous run.
    auto first = std::lower_bound(members_.begin(), members_.end(), f1,
                                  [](const Solution& m, double v) { return m.objectives[0] < v; });
    auto last = first;
    while (last != members_.end() && last->objectives[1] >= f2) {
        ++last;
    }
    first = members_.erase(first, last);
    members_.insert(first, s);
    return true;
}

bool Archive::insert_general(const Solution& s) {
    for (const auto& m : members_) {
        if (weakly_dominates(m.objectives, s.objectives)) {
            return false;
        }
    }
    std::erase_if(members_, [&](const Solution& m) { return dominates(s.objectives, m.objectives); });
    members_.push_back(s);
    return true;
}

Matrix Archive::objectives() const {
    Matrix out;
    for (const auto& m : members_) {
        out.append_row(m.objectives);
    }
    return out;
}

Archive archive_update(Archive archive, std::span<const Solution> candidates) {
    for (const auto& c : candidates) {
        archive.insert(c);
    }
    return archive;
}

std::vector<std::size_t> nondominated_indices(const Matrix& points) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.rows() && !dominated; ++j) {
            if (j == i) {
                continue;
            }
            if (dominates(points.row(j), points.row(i))) {
                dominated = true;
            } else if (j < i && std::equal(points.row(j).begin(), points.row(j).end(), points.row(i).begin())) {
                dominated = true;
            }
        }
        if (!dominated) {
            keep.push_back(i);
        }
    }
    return keep;
}

} // namespace moeadstn

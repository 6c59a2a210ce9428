#pragma once

#include <functional>

#include <Eigen/Core>

#include "wcbo/kernels.hpp"

namespace wcbo {

/// Deterministic box search: an inclusive lattice scan followed by a
/// coordinate-wise golden-section polish around the best lattice point.
struct SearchConfig {
    /// Lattice points per dimension; 0 selects the default for the dimension
    /// (401 for d=1, 101 for d=2, 41 for d=3, 11 beyond).
    int points_per_dim = 0;
    int polish_iterations = 20;

    int resolution(int dim) const;
};

/// Values of the objective at the columns of a d x m matrix.
using BatchObjective = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

struct SearchResult {
    Point point;
    double value = 0.0;
    /// Lexicographic index of the best lattice point before polishing.
    std::size_t lattice_index = 0;
    bool polished = false;
};

/// Inclusive lattice with n points per coordinate (endpoints included; a
/// single point sits at the center), last coordinate varying fastest.
Eigen::MatrixXd search_lattice(const BoxDomain& domain, int n);

/// Minimizes over the box. Ties on the lattice resolve to the lowest
/// lexicographic index; the polished point replaces the lattice point only on
/// strict improvement.
SearchResult minimize_on_box(const BatchObjective& objective, const BoxDomain& domain,
                             const SearchConfig& config);

/// Same search with the objective negated; `value` is the maximum.
SearchResult maximize_on_box(const BatchObjective& objective, const BoxDomain& domain,
                             const SearchConfig& config);

}  // namespace wcbo

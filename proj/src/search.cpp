#include "wcbo/search.hpp"

#include <cmath>
#include <limits>

#include "wcbo/errors.hpp"
#include "wcbo/interpolate.hpp"

namespace wcbo {

namespace {

constexpr Eigen::Index kChunk = 8192;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

double eval_one(const BatchObjective& objective, const Point& x) {
    Eigen::MatrixXd q = x;
    return objective(q)[0];
}

}  // namespace

int SearchConfig::resolution(int dim) const {
    if (points_per_dim > 0) return points_per_dim;
    switch (dim) {
        case 1: return 401;
        case 2: return 101;
        case 3: return 41;
        default: return 11;
    }
}

Eigen::MatrixXd search_lattice(const BoxDomain& domain, int n) {
    const int d = domain.dim();
    const std::size_t total = lattice_size(n, d, kDefaultGridCap * 4);
    Eigen::MatrixXd out(d, static_cast<Eigen::Index>(total));
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    for (std::size_t col = 0; col < total; ++col) {
        for (int i = 0; i < d; ++i) {
            const double frac = n == 1 ? 0.5 : static_cast<double>(k[static_cast<std::size_t>(i)]) / (n - 1);
            out(i, static_cast<Eigen::Index>(col)) = domain.lower()[i] + frac * domain.width()[i];
        }
        for (int i = d - 1; i >= 0; --i) {
            if (++k[static_cast<std::size_t>(i)] < n) break;
            k[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

SearchResult minimize_on_box(const BatchObjective& objective, const BoxDomain& domain,
                             const SearchConfig& config) {
    const int d = domain.dim();
    const int n = config.resolution(d);
    const Eigen::MatrixXd lattice = search_lattice(domain, n);

    SearchResult best;
    best.value = std::numeric_limits<double>::infinity();
    bool found = false;
    for (Eigen::Index start = 0; start < lattice.cols(); start += kChunk) {
        const Eigen::Index len = std::min(kChunk, lattice.cols() - start);
        const Eigen::VectorXd vals = objective(lattice.middleCols(start, len));
        for (Eigen::Index j = 0; j < len; ++j) {
            if (std::isnan(vals[j])) continue;
            if (!found || vals[j] < best.value) {
                best.value = vals[j];
                best.lattice_index = static_cast<std::size_t>(start + j);
                found = true;
            }
        }
    }
    if (!found) throw IllConditioned("objective is NaN on the whole search lattice");
    best.point = lattice.col(static_cast<Eigen::Index>(best.lattice_index));

    if (config.polish_iterations <= 0 || n < 2) return best;

    Point x = best.point;
    double fx = best.value;
    const Eigen::VectorXd spacing = domain.width() / static_cast<double>(n - 1);
    for (int i = 0; i < d; ++i) {
        double a = std::max(domain.lower()[i], x[i] - spacing[i]);
        double b = std::min(domain.upper()[i], x[i] + spacing[i]);
        Point probe = x;
        auto f = [&](double v) {
            probe[i] = v;
            return eval_one(objective, probe);
        };
        double c = b - kInvPhi * (b - a);
        double e = a + kInvPhi * (b - a);
        double fc = f(c);
        double fe = f(e);
        for (int it = 0; it < config.polish_iterations; ++it) {
            if (fc < fe) {
                b = e;
                e = c;
                fe = fc;
                c = b - kInvPhi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = e;
                fc = fe;
                e = a + kInvPhi * (b - a);
                fe = f(e);
            }
        }
        const double cand = fc < fe ? c : e;
        const double fcand = std::min(fc, fe);
        if (fcand < fx) {
            x[i] = cand;
            fx = fcand;
            best.polished = true;
        }
    }
    best.point = x;
    best.value = fx;
    return best;
}

SearchResult maximize_on_box(const BatchObjective& objective, const BoxDomain& domain,
                             const SearchConfig& config) {
    BatchObjective neg = [&objective](const Eigen::MatrixXd& q) -> Eigen::VectorXd { return -objective(q); };
    SearchResult r = minimize_on_box(neg, domain, config);
    r.value = -r.value;
    return r;
}

}  // namespace wcbo

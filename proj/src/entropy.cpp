#include "wcbo/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wcbo/adversary.hpp"
#include "wcbo/errors.hpp"
#include "wcbo/search.hpp"

namespace wcbo {

std::string to_string(CandidateStrategy s) {
    switch (s) {
        case CandidateStrategy::Translates: return "translates";
        case CandidateStrategy::Interpolants: return "interpolants";
        case CandidateStrategy::Mixed: return "mixed";
    }
    return "unknown";
}

std::string to_string(RowSource s) {
    switch (s) {
        case RowSource::Translate: return "translate";
        case RowSource::Interpolant: return "interpolant";
        case RowSource::Zero: return "zero";
    }
    return "unknown";
}

CandidateStrategy candidate_strategy_from_string(const std::string& s) {
    if (s == "translates") return CandidateStrategy::Translates;
    if (s == "interpolants") return CandidateStrategy::Interpolants;
    if (s == "mixed") return CandidateStrategy::Mixed;
    throw ConfigError("unknown candidate strategy '" + s + "'");
}

int CandidateOptions::resolution(int dim) const {
    if (eval_resolution > 0) return eval_resolution;
    switch (dim) {
        case 1: return 512;
        case 2: return 64;
        default: return 16;
    }
}

double FunctionTable::sup_distance(std::size_t i, std::size_t j) const {
    return (rows.row(static_cast<Eigen::Index>(i)) - rows.row(static_cast<Eigen::Index>(j)))
        .cwiseAbs()
        .maxCoeff();
}

namespace {

std::vector<RkhsFunction> translates(const KernelSpec& kernel, const BoxDomain& domain, double R, int count) {
    const int d = domain.dim();
    const double centers_needed = std::ceil(count / 2.0);
    const int per_dim = std::max(1, static_cast<int>(std::ceil(std::pow(centers_needed, 1.0 / d) - 1e-9)));
    const Eigen::MatrixXd lattice = search_lattice(domain, per_dim);
    std::vector<RkhsFunction> out;
    for (Eigen::Index j = 0; j < lattice.cols() && static_cast<int>(out.size()) < count; ++j) {
        const Point c = lattice.col(j);
        const double w = R / std::sqrt(kernel.diag(c));
        for (double sign : {1.0, -1.0}) {
            if (static_cast<int>(out.size()) >= count) break;
            out.emplace_back(kernel, PointList{c}, Eigen::VectorXd::Constant(1, sign * w));
        }
    }
    return out;
}

}  // namespace

FunctionTable candidate_ball_functions(const KernelSpec& kernel, const BoxDomain& domain, double R,
                                       const CandidateOptions& options) {
    if (options.count < 1) throw ConfigError("candidate count must be at least 1");
    FunctionTable table;
    table.grid_resolution = options.resolution(domain.dim());
    table.eval_grid = search_lattice(domain, table.grid_resolution);

    int n_translates = 0;
    switch (options.strategy) {
        case CandidateStrategy::Translates: n_translates = options.count; break;
        case CandidateStrategy::Interpolants: n_translates = 0; break;
        case CandidateStrategy::Mixed: n_translates = (options.count + 1) / 2; break;
    }
    if (n_translates > 0) {
        for (auto& f : translates(kernel, domain, R, n_translates)) {
            table.sources.push_back(std::move(f));
            table.provenance.push_back(RowSource::Translate);
        }
    }
    for (int i = 0; i < options.count - n_translates; ++i) {
        RkhsSample s = sample_rkhs(kernel, domain, options.n_knots, R, options.seed + static_cast<std::uint64_t>(i),
                                   options.mode);
        table.sources.push_back(std::move(s.function));
        table.provenance.push_back(RowSource::Interpolant);
    }
    if (options.include_zero) {
        table.sources.push_back(RkhsFunction::zero(kernel, domain.dim()));
        table.provenance.push_back(RowSource::Zero);
    }

    table.rows.resize(static_cast<Eigen::Index>(table.sources.size()), table.eval_grid.cols());
    for (std::size_t i = 0; i < table.sources.size(); ++i) {
        const RkhsFunction& f = table.sources[i];
        if (f.norm() > R * (1.0 + 1e-6)) {
            std::ostringstream os;
            os << "candidate " << i << " has norm " << f.norm() << " > R=" << R;
            throw Error(os.str());
        }
        table.norms.push_back(f.norm());
        table.rows.row(static_cast<Eigen::Index>(i)) = f.evaluate(table.eval_grid).transpose();
    }
    return table;
}

PackingEstimate greedy_packing(const FunctionTable& table, double eps, const std::vector<std::size_t>& order) {
    if (!(eps > 0.0)) throw OutOfRegime("packing radius must be positive");
    PackingEstimate est;
    est.eps = eps;
    est.grid_resolution = table.grid_resolution;
    est.candidate_count = table.size();
    for (std::size_t i : order) {
        bool separated = true;
        for (std::size_t j : est.selected_indices) {
            if (!(table.sup_distance(i, j) > eps)) {
                separated = false;
                break;
            }
        }
        if (separated) est.selected_indices.push_back(i);
    }
    est.count = est.selected_indices.size();
    return est;
}

PackingEstimate greedy_packing(const FunctionTable& table, double eps) {
    std::vector<std::size_t> order(table.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return table.norms[a] > table.norms[b]; });
    return greedy_packing(table, eps, order);
}

std::string to_string(RateFamily f) {
    switch (f) {
        case RateFamily::SeLower: return "se_lower";
        case RateFamily::SeUpper: return "se_upper";
        case RateFamily::MaternLower: return "matern_lower";
        case RateFamily::MaternUpper: return "matern_upper";
    }
    return "unknown";
}

RateFamily rate_family_from_string(const std::string& s) {
    if (s == "se_lower") return RateFamily::SeLower;
    if (s == "se_upper") return RateFamily::SeUpper;
    if (s == "matern_lower") return RateFamily::MaternLower;
    if (s == "matern_upper") return RateFamily::MaternUpper;
    throw ConfigError("unknown rate family '" + s + "'");
}

double rate_theoretical(RateFamily family, double R, double eps, int dim, double nu) {
    if (!(eps > 0.0) || !(eps < R)) throw OutOfRegime("rate formulas need 0 < eps < R");
    const double ratio = R / eps;
    const double lg = std::log(ratio);
    const double d = dim;
    switch (family) {
        case RateFamily::SeLower: return std::pow(lg, d / 2.0 - 1.0);
        case RateFamily::SeUpper: return std::pow(lg, d);
        case RateFamily::MaternLower:
            if (!(nu > 0.0)) throw OutOfRegime("Matern rate needs nu > 0");
            return std::pow(ratio, d / (nu + d / 2.0)) / lg;
        case RateFamily::MaternUpper:
            if (!(nu > 0.0)) throw OutOfRegime("Matern rate needs nu > 0");
            return std::pow(ratio, d / nu);
    }
    return 0.0;
}

EntropyReport entropy_report(const KernelSpec& kernel, const BoxDomain& domain, double R,
                             const std::vector<double>& eps_list, const CandidateOptions& options) {
    for (double eps : eps_list) {
        if (!(eps > 0.0) || !(eps < R / 4.0)) {
            std::ostringstream os;
            os << "eps=" << eps << " must lie in (0, R/4)";
            throw OutOfRegime(os.str());
        }
    }
    EntropyReport rep;
    rep.options = options;
    rep.table = candidate_ball_functions(kernel, domain, R, options);
    for (double eps : eps_list) {
        const PackingEstimate p = greedy_packing(rep.table, 8.0 * eps);
        EntropyRow row;
        row.eps = eps;
        row.packing_count = p.count;
        row.log_packing = std::log(static_cast<double>(std::max<std::size_t>(1, p.count)));
        row.lower_bound_steps = lower_bound_steps(row.log_packing, R, eps);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace wcbo

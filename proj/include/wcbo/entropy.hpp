#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wcbo/interpolate.hpp"
#include "wcbo/kernels.hpp"

namespace wcbo {

enum class CandidateStrategy { Translates, Interpolants, Mixed };
enum class RowSource { Translate, Interpolant, Zero };

std::string to_string(CandidateStrategy s);
std::string to_string(RowSource s);
CandidateStrategy candidate_strategy_from_string(const std::string& s);

/// Candidate ball functions tabulated on a common evaluation grid. Sup-norm
/// distances are approximated by the maximum over the grid, which can only
/// under-estimate them.
struct FunctionTable {
    Eigen::MatrixXd eval_grid;  ///< d x m
    Eigen::MatrixXd rows;       ///< n x m
    std::vector<RowSource> provenance;
    std::vector<double> norms;  ///< RKHS norm of each source function
    std::vector<RkhsFunction> sources;
    int grid_resolution = 0;

    std::size_t size() const { return static_cast<std::size_t>(rows.rows()); }
    double sup_distance(std::size_t i, std::size_t j) const;
};

struct CandidateOptions {
    CandidateStrategy strategy = CandidateStrategy::Mixed;
    int count = 200;
    std::uint64_t seed = 0;
    bool include_zero = false;
    /// Evaluation points per dimension; 0 selects 512 (d=1), 64 (d=2), 16 (d>=3).
    int eval_resolution = 0;
    int n_knots = 8;
    SamplingMode mode = SamplingMode::Rescale;

    int resolution(int dim) const;
};

/// Translates emit +-R k(c,.)/sqrt(k(c,c)) over an inclusive lattice of
/// centers (alternating signs, truncated to `count` rows); interpolants emit
/// sample_rkhs draws seeded with seed + i; mixed splits the count between the
/// two, translates first.
FunctionTable candidate_ball_functions(const KernelSpec& kernel, const BoxDomain& domain, double R,
                                       const CandidateOptions& options);

struct PackingEstimate {
    double eps = 0.0;
    std::size_t count = 0;
    std::vector<std::size_t> selected_indices;
    int grid_resolution = 0;
    std::size_t candidate_count = 0;
};

/// Greedy eps-packing: rows are scanned by descending source norm (stable), a
/// row is kept iff its grid sup-distance to every kept row exceeds eps.
PackingEstimate greedy_packing(const FunctionTable& table, double eps);

/// Greedy eps-packing with an explicit scan order.
PackingEstimate greedy_packing(const FunctionTable& table, double eps, const std::vector<std::size_t>& order);

enum class RateFamily { SeLower, SeUpper, MaternLower, MaternUpper };

std::string to_string(RateFamily f);
RateFamily rate_family_from_string(const std::string& s);

/// Rate shapes without constants:
///   se_lower      (log(R/eps))^(d/2 - 1)
///   se_upper      (log(R/eps))^d
///   matern_lower  (R/eps)^(d/(nu + d/2)) / log(R/eps)
///   matern_upper  (R/eps)^(d/nu)
double rate_theoretical(RateFamily family, double R, double eps, int dim, double nu = 0.0);

struct EntropyRow {
    double eps = 0.0;
    std::size_t packing_count = 0;  ///< empirical lower estimate of M(S, 8 eps)
    double log_packing = 0.0;
    std::size_t lower_bound_steps = 0;
};

struct EntropyReport {
    std::vector<EntropyRow> rows;
    FunctionTable table;
    CandidateOptions options;
};

/// For each eps (< R/4) packs the shared candidate table at 8 eps and
/// converts the count into the lower-bound step threshold.
EntropyReport entropy_report(const KernelSpec& kernel, const BoxDomain& domain, double R,
                             const std::vector<double>& eps_list, const CandidateOptions& options);

}  // namespace wcbo

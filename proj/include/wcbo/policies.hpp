#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wcbo/interpolate.hpp"
#include "wcbo/kernels.hpp"
#include "wcbo/search.hpp"

namespace wcbo {

/// Observed (point, value) pairs in query order.
using History = Design;

/// Deterministic optimization policy: the next query is a pure function of
/// the history, and `report` names the final recommendation.
class Policy {
public:
    explicit Policy(BoxDomain domain) : domain_(std::move(domain)) {}
    virtual ~Policy() = default;

    virtual std::string id() const = 0;
    /// Parameter record, "key=value" pairs separated by ';'.
    virtual std::string params() const = 0;
    virtual Point next(const History& history) const = 0;
    /// Defaults to the best observed point (earliest on ties).
    virtual Point report(const History& history) const;

    const BoxDomain& domain() const { return domain_; }

private:
    BoxDomain domain_;
};

enum class LcbVariant { Plain, Certified };

std::string to_string(LcbVariant v);

/// Minimizer of m_t - beta * sd_t (plain) or of the certified lower envelope
/// m_t - sd_t * sqrt(R^2 - |m_t|^2) (certified) over the search scheme.
Point next_lcb(const History& history, const KernelSpec& kernel, const BoxDomain& domain, double R,
               double beta, LcbVariant variant, const SearchConfig& search);

/// Noiseless expected improvement for minimization.
double expected_improvement(double best_value, double mean, double sd);

Point next_ei(const History& history, const KernelSpec& kernel, const BoxDomain& domain,
              const SearchConfig& search);

/// t-th (1-based) point of the half-open N^d lattice in lexicographic order.
Point next_grid(std::size_t t, int points_per_dim, const BoxDomain& domain);

/// Minimizer of the certified lower envelope over the search scheme.
Point report_grid(const History& history, const KernelSpec& kernel, double R, const BoxDomain& domain,
                  const SearchConfig& search);

/// The first query defaults to the domain center.
class LcbPolicy final : public Policy {
public:
    LcbPolicy(KernelSpec kernel, BoxDomain domain, SearchConfig search, double beta = 1.0,
              LcbVariant variant = LcbVariant::Plain, double R = 1.0,
              std::optional<Point> first_point = std::nullopt);

    std::string id() const override { return "lcb"; }
    std::string params() const override;
    Point next(const History& history) const override;

private:
    KernelSpec kernel_;
    SearchConfig search_;
    double beta_;
    LcbVariant variant_;
    double R_;
    Point first_;
};

class EiPolicy final : public Policy {
public:
    /// The first query defaults to the domain center.
    EiPolicy(KernelSpec kernel, BoxDomain domain, SearchConfig search,
             std::optional<Point> first_point = std::nullopt);

    std::string id() const override { return "ei"; }
    std::string params() const override;
    Point next(const History& history) const override;

private:
    KernelSpec kernel_;
    SearchConfig search_;
    Point first_;
};

/// Non-adaptive lattice sweep; reports the minimizer of the lower envelope.
class GridPolicy final : public Policy {
public:
    GridPolicy(KernelSpec kernel, BoxDomain domain, int points_per_dim, double R, SearchConfig search);

    std::string id() const override { return "grid"; }
    std::string params() const override;
    Point next(const History& history) const override;
    Point report(const History& history) const override;

    int points_per_dim() const { return n_; }

private:
    KernelSpec kernel_;
    int n_;
    double R_;
    SearchConfig search_;
};

/// Exploration on the two_phase_points_per_dim lattice for the given budget,
/// then the envelope-minimizing point of the exploration data, repeated.
class TwoPhasePolicy final : public Policy {
public:
    TwoPhasePolicy(KernelSpec kernel, BoxDomain domain, double R, std::size_t budget, SearchConfig search);

    std::string id() const override { return "two_phase"; }
    std::string params() const override;
    Point next(const History& history) const override;
    Point report(const History& history) const override;

    int points_per_dim() const { return n_; }
    std::size_t exploration_steps() const { return exploration_; }

private:
    KernelSpec kernel_;
    double R_;
    std::size_t budget_;
    SearchConfig search_;
    int n_;
    std::size_t exploration_;
};

struct GroundTruth {
    Point argmin;
    double min_value = 0.0;
};

/// Dense-lattice minimum of f (per-dimension resolution ceil(4^(1/d)) times the
/// search resolution, so at least 4x the points) followed by polishing.
GroundTruth ground_truth(const RkhsFunction& f, const BoxDomain& domain, const SearchConfig& search);

struct RegretStep {
    std::size_t t = 0;
    Point x;
    double value = 0.0;
    double simple_regret = 0.0;
    bool reported = false;
};

struct RegretTrace {
    std::string policy_id;
    std::vector<RegretStep> steps;  ///< T query steps followed by the reported point
    Point reported_point;
    double reported_value = 0.0;
    double min_value = 0.0;

    /// Simple regret after t queries (1-based, t <= T).
    double regret_at(std::size_t t) const { return steps.at(t - 1).simple_regret; }
    std::size_t budget() const { return steps.empty() ? 0 : steps.size() - 1; }
};

/// Runs the policy for T noiseless evaluations of f and then evaluates the
/// reported point once more.
RegretTrace run_policy(const Policy& policy, const RkhsFunction& f, std::size_t budget,
                       const GroundTruth& truth);

struct CumulativeStep {
    std::size_t t = 0;
    Point x;
    double value = 0.0;
    double instant_regret = 0.0;
    double cumulative_regret = 0.0;
    int phase = 1;
};

struct CumulativeTrace {
    int points_per_dim = 0;
    std::size_t exploration_steps = 0;
    std::vector<CumulativeStep> steps;
    double min_value = 0.0;

    double total() const { return steps.empty() ? 0.0 : steps.back().cumulative_regret; }
};

/// Lattice size per dimension for the exploration phase: ceil(log T) for SE,
/// ceil(T^(1/(d+nu))) for Matern, reduced while N^d >= T so that at least one
/// exploitation step remains.
int two_phase_points_per_dim(const KernelSpec& kernel, int dim, std::size_t budget);

/// Explore on the lattice, then repeat the envelope-minimizing point.
CumulativeTrace two_phase(const KernelSpec& kernel, const BoxDomain& domain, double R, std::size_t budget,
                          const RkhsFunction& f, const GroundTruth& truth, const SearchConfig& search);

}  // namespace wcbo

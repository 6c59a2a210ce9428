#pragma once

#include <string>
#include <vector>

#include "wcbo/interpolate.hpp"
#include "wcbo/policies.hpp"
#include "wcbo/search.hpp"

namespace wcbo {

/// Queries a deterministic policy makes when every observation is 0.
struct ZeroSequence {
    std::string policy_id;
    PointList points;
};

ZeroSequence zero_sequence(const Policy& policy, std::size_t budget);

/// Posterior of the zero observations on the first t points of the sequence.
Posterior zero_posterior(const KernelSpec& kernel, const PointList& points);

/// Smallest value at x over the R-ball functions vanishing on the design:
/// -R * sd_t(x).
double adversarial_value(const Posterior& post_zero, double R, const Point& x);

/// Ball function attaining adversarial_value at `target` while vanishing on
/// the design:
///   s(.) = -(R / sd_t(target)) * (k(target, .) - k_X(.)^T K^{-1} k_X(target)).
/// Throws TargetDegenerate when sd_t(target) <= 1e-8.
RkhsFunction adversarial_witness(const Posterior& post_zero, double R, const Point& target);

struct AdversarialStep {
    std::size_t t = 0;
    double worst_value = 0.0;         ///< -R max_x sd_t(x)
    double adversarial_regret = 0.0;  ///< R max_x sd_t(x)
    Point argmax;
    double jitter_used = 0.0;
};

struct AdversarialCurve {
    std::string policy_id;
    std::vector<AdversarialStep> steps;  ///< t = 0, 1, ..., T
    int search_resolution = 0;
    int polish_iterations = 0;

    const AdversarialStep& at(std::size_t t) const { return steps.at(t); }
};

/// Worst-case simple regret of the sequence after each prefix length.
AdversarialCurve adversarial_regret_curve(const ZeroSequence& sequence, const KernelSpec& kernel,
                                          const BoxDomain& domain, double R, const SearchConfig& search);

AdversarialCurve adversarial_regret_curve(const Policy& policy, std::size_t budget, const KernelSpec& kernel,
                                          double R, const SearchConfig& search);

/// floor(log_covering / (4 log(R/eps))); requires eps < R/4.
std::size_t lower_bound_steps(double log_covering, double R, double eps);

struct CertificateReport {
    std::string policy_id;
    double eps = 0.0;
    double R = 0.0;
    std::size_t packing_count = 0;
    double log_packing = 0.0;
    std::size_t steps = 0;  ///< t*
    double adversarial_regret = 0.0;
    double threshold = 0.0;  ///< 1.5 eps
    bool pass = false;
};

/// Checks that after t* = lower_bound_steps(log M(8 eps), R, eps) queries the
/// policy's worst-case regret is still at least 1.5 eps (within 1e-6).
CertificateReport certify_lower_bound(const Policy& policy, const KernelSpec& kernel, double R, double eps,
                                      std::size_t packing_count_at_8eps, const SearchConfig& search);

}  // namespace wcbo

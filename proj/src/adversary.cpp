#include "wcbo/adversary.hpp"

#include <cmath>
#include <sstream>

#include "wcbo/errors.hpp"

namespace wcbo {

ZeroSequence zero_sequence(const Policy& policy, std::size_t budget) {
    ZeroSequence seq;
    seq.policy_id = policy.id();
    History history;
    for (std::size_t t = 1; t <= budget; ++t) {
        Point x = policy.next(history);
        if (!policy.domain().contains(x, 1e-9)) {
            std::ostringstream os;
            os << "policy '" << policy.id() << "' left the domain at step " << t;
            throw PolicyViolation(os.str());
        }
        seq.points.push_back(x);
        history.add(std::move(x), 0.0);
    }
    return seq;
}

Posterior zero_posterior(const KernelSpec& kernel, const PointList& points) {
    return Posterior::fit(kernel, Design{points, std::vector<double>(points.size(), 0.0)});
}

namespace {

void require_zero_data(const Posterior& post) {
    for (double v : post.design().values) {
        if (v != 0.0) throw OutOfRegime("adversarial constructions need a zero-observation posterior");
    }
}

}  // namespace

double adversarial_value(const Posterior& post_zero, double R, const Point& x) {
    require_zero_data(post_zero);
    return -R * post_zero.sd(x);
}

RkhsFunction adversarial_witness(const Posterior& post_zero, double R, const Point& target) {
    require_zero_data(post_zero);
    const double sd = post_zero.sd(target);
    if (sd <= 1e-8) {
        std::ostringstream os;
        os << "target has posterior sd " << sd << " <= 1e-8; no witness can move it";
        throw TargetDegenerate(os.str());
    }
    const Eigen::VectorXd beta = post_zero.solve_weights(target);
    const auto t = static_cast<Eigen::Index>(post_zero.size());
    PointList centers = post_zero.design().points;
    centers.push_back(target);
    Eigen::VectorXd weights(t + 1);
    const double scale = R / sd;
    if (t > 0) weights.head(t) = scale * beta;
    weights[t] = -scale;
    return RkhsFunction(post_zero.kernel(), std::move(centers), std::move(weights));
}

AdversarialCurve adversarial_regret_curve(const ZeroSequence& sequence, const KernelSpec& kernel,
                                          const BoxDomain& domain, double R, const SearchConfig& search) {
    AdversarialCurve curve;
    curve.policy_id = sequence.policy_id;
    curve.search_resolution = search.resolution(domain.dim());
    curve.polish_iterations = search.polish_iterations;
    for (std::size_t t = 0; t <= sequence.points.size(); ++t) {
        const PointList prefix(sequence.points.begin(), sequence.points.begin() + static_cast<std::ptrdiff_t>(t));
        const Posterior post = zero_posterior(kernel, prefix);
        BatchObjective sd = [&post](const Eigen::MatrixXd& q) -> Eigen::VectorXd { return post.sd(q); };
        const SearchResult best = maximize_on_box(sd, domain, search);
        curve.steps.push_back({t, -R * best.value, R * best.value, best.point, post.jitter_used()});
    }
    return curve;
}

AdversarialCurve adversarial_regret_curve(const Policy& policy, std::size_t budget, const KernelSpec& kernel,
                                          double R, const SearchConfig& search) {
    return adversarial_regret_curve(zero_sequence(policy, budget), kernel, policy.domain(), R, search);
}

std::size_t lower_bound_steps(double log_covering, double R, double eps) {
    if (!(eps > 0.0) || !(eps < R / 4.0)) {
        std::ostringstream os;
        os << "eps=" << eps << " must lie in (0, R/4) with R=" << R;
        throw OutOfRegime(os.str());
    }
    if (!(log_covering >= 0.0)) throw OutOfRegime("log covering number must be nonnegative");
    return static_cast<std::size_t>(std::floor(log_covering / (4.0 * std::log(R / eps))));
}

CertificateReport certify_lower_bound(const Policy& policy, const KernelSpec& kernel, double R, double eps,
                                      std::size_t packing_count_at_8eps, const SearchConfig& search) {
    if (packing_count_at_8eps < 1) throw OutOfRegime("packing count must be at least 1");
    CertificateReport rep;
    rep.policy_id = policy.id();
    rep.eps = eps;
    rep.R = R;
    rep.packing_count = packing_count_at_8eps;
    rep.log_packing = std::log(static_cast<double>(packing_count_at_8eps));
    rep.steps = lower_bound_steps(rep.log_packing, R, eps);
    const AdversarialCurve curve = adversarial_regret_curve(policy, rep.steps, kernel, R, search);
    rep.adversarial_regret = curve.steps.back().adversarial_regret;
    rep.threshold = 1.5 * eps;
    rep.pass = rep.adversarial_regret >= rep.threshold - 1e-6;
    return rep;
}

}  // namespace wcbo

#include "wcbo/policies.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wcbo/errors.hpp"

namespace wcbo {

namespace {

std::string fmt_point(const Point& p) {
    std::ostringstream os;
    os.precision(17);
    for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
    return os.str();
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

std::string to_string(LcbVariant v) { return v == LcbVariant::Plain ? "plain" : "certified"; }

Point Policy::report(const History& history) const {
    if (history.empty()) return domain_.center();
    std::size_t best = 0;
    for (std::size_t i = 1; i < history.size(); ++i) {
        if (history.values[i] < history.values[best]) best = i;
    }
    return history.points[best];
}

Point next_lcb(const History& history, const KernelSpec& kernel, const BoxDomain& domain, double R,
               double beta, LcbVariant variant, const SearchConfig& search) {
    const Posterior post = Posterior::fit(kernel, history);
    const double scale = variant == LcbVariant::Plain ? beta : post.residual_radius(R);
    BatchObjective acq = [&](const Eigen::MatrixXd& q) -> Eigen::VectorXd {
        const Moments mo = post.predict(q);
        return mo.mean - scale * mo.sd;
    };
    return minimize_on_box(acq, domain, search).point;
}

double expected_improvement(double best_value, double mean, double sd) {
    const double gap = best_value - mean;
    if (sd <= 1e-12) return std::max(0.0, gap);
    const double z = gap / sd;
    return gap * normal_cdf(z) + sd * normal_pdf(z);
}

Point next_ei(const History& history, const KernelSpec& kernel, const BoxDomain& domain,
              const SearchConfig& search) {
    if (history.empty()) throw PolicyViolation("expected improvement needs a non-empty history");
    const Posterior post = Posterior::fit(kernel, history);
    double best = std::numeric_limits<double>::infinity();
    for (double v : history.values) best = std::min(best, v);
    BatchObjective ei = [&](const Eigen::MatrixXd& q) -> Eigen::VectorXd {
        const Moments mo = post.predict(q);
        Eigen::VectorXd out(q.cols());
        for (Eigen::Index j = 0; j < q.cols(); ++j) out[j] = expected_improvement(best, mo.mean[j], mo.sd[j]);
        return out;
    };
    return maximize_on_box(ei, domain, search).point;
}

Point next_grid(std::size_t t, int points_per_dim, const BoxDomain& domain) {
    const int d = domain.dim();
    const std::size_t total = lattice_size(points_per_dim, d, kDefaultGridCap);
    if (t < 1 || t > total) {
        std::ostringstream os;
        os << "grid step " << t << " is outside 1.." << total;
        throw SizeOverflow(os.str());
    }
    std::size_t index = t - 1;
    Point p(d);
    for (int i = d - 1; i >= 0; --i) {
        const auto k = static_cast<double>(index % static_cast<std::size_t>(points_per_dim));
        index /= static_cast<std::size_t>(points_per_dim);
        p[i] = domain.lower()[i] + (k / points_per_dim) * domain.width()[i];
    }
    return p;
}

Point report_grid(const History& history, const KernelSpec& kernel, double R, const BoxDomain& domain,
                  const SearchConfig& search) {
    const Posterior post = Posterior::fit(kernel, history, R);
    const double radius = post.residual_radius(R);
    BatchObjective lower = [&](const Eigen::MatrixXd& q) -> Eigen::VectorXd {
        const Moments mo = post.predict(q);
        return mo.mean - radius * mo.sd;
    };
    return minimize_on_box(lower, domain, search).point;
}

LcbPolicy::LcbPolicy(KernelSpec kernel, BoxDomain domain, SearchConfig search, double beta, LcbVariant variant,
                     double R, std::optional<Point> first_point)
    : Policy(std::move(domain)),
      kernel_(std::move(kernel)),
      search_(search),
      beta_(beta),
      variant_(variant),
      R_(R) {
    first_ = first_point ? *first_point : this->domain().center();
}

std::string LcbPolicy::params() const {
    std::ostringstream os;
    os.precision(17);
    os << "kernel=" << kernel_.describe() << ";beta=" << beta_ << ";variant=" << to_string(variant_)
       << ";R=" << R_ << ";first_point=" << fmt_point(first_);
    return os.str();
}

Point LcbPolicy::next(const History& history) const {
    if (history.empty()) return first_;
    return next_lcb(history, kernel_, domain(), R_, beta_, variant_, search_);
}

EiPolicy::EiPolicy(KernelSpec kernel, BoxDomain domain, SearchConfig search, std::optional<Point> first_point)
    : Policy(std::move(domain)), kernel_(std::move(kernel)), search_(search) {
    first_ = first_point ? *first_point : this->domain().center();
}

std::string EiPolicy::params() const {
    return "kernel=" + kernel_.describe() + ";first_point=" + fmt_point(first_);
}

Point EiPolicy::next(const History& history) const {
    if (history.empty()) return first_;
    return next_ei(history, kernel_, domain(), search_);
}

GridPolicy::GridPolicy(KernelSpec kernel, BoxDomain domain, int points_per_dim, double R, SearchConfig search)
    : Policy(std::move(domain)), kernel_(std::move(kernel)), n_(points_per_dim), R_(R), search_(search) {
    lattice_size(n_, this->domain().dim(), kDefaultGridCap);
}

std::string GridPolicy::params() const {
    std::ostringstream os;
    os.precision(17);
    os << "kernel=" << kernel_.describe() << ";points_per_dim=" << n_ << ";R=" << R_;
    return os.str();
}

Point GridPolicy::next(const History& history) const { return next_grid(history.size() + 1, n_, domain()); }

Point GridPolicy::report(const History& history) const {
    return report_grid(history, kernel_, R_, domain(), search_);
}

TwoPhasePolicy::TwoPhasePolicy(KernelSpec kernel, BoxDomain domain, double R, std::size_t budget,
                               SearchConfig search)
    : Policy(std::move(domain)), kernel_(std::move(kernel)), R_(R), budget_(budget), search_(search) {
    n_ = two_phase_points_per_dim(kernel_, this->domain().dim(), budget_);
    exploration_ = lattice_size(n_, this->domain().dim(), kDefaultGridCap);
}

std::string TwoPhasePolicy::params() const {
    std::ostringstream os;
    os.precision(17);
    os << "kernel=" << kernel_.describe() << ";budget=" << budget_ << ";points_per_dim=" << n_ << ";R=" << R_;
    return os.str();
}

Point TwoPhasePolicy::next(const History& history) const {
    if (history.size() < exploration_) return next_grid(history.size() + 1, n_, domain());
    return report(history);
}

Point TwoPhasePolicy::report(const History& history) const {
    const std::size_t n = std::min(history.size(), exploration_);
    return report_grid(history.prefix(n), kernel_, R_, domain(), search_);
}

GroundTruth ground_truth(const RkhsFunction& f, const BoxDomain& domain, const SearchConfig& search) {
    const int d = domain.dim();
    const int factor = static_cast<int>(std::ceil(std::pow(4.0, 1.0 / d) - 1e-12));
    SearchConfig dense = search;
    dense.points_per_dim = (search.resolution(d) - 1) * factor + 1;
    BatchObjective obj = [&f](const Eigen::MatrixXd& q) -> Eigen::VectorXd { return f.evaluate(q); };
    const SearchResult r = minimize_on_box(obj, domain, dense);
    return {r.point, r.value};
}

RegretTrace run_policy(const Policy& policy, const RkhsFunction& f, std::size_t budget,
                       const GroundTruth& truth) {
    RegretTrace trace;
    trace.policy_id = policy.id();
    trace.min_value = truth.min_value;
    History history;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t <= budget; ++t) {
        Point x = policy.next(history);
        if (!policy.domain().contains(x, 1e-9)) {
            throw PolicyViolation("policy '" + policy.id() + "' emitted a point outside the domain: " +
                                  fmt_point(x));
        }
        const double y = f(x);
        best = std::min(best, y);
        trace.steps.push_back({t, x, y, best - truth.min_value, false});
        history.add(std::move(x), y);
    }
    Point rep = policy.report(history);
    if (!policy.domain().contains(rep, 1e-9)) throw PolicyViolation("reported point outside the domain");
    const double y = f(rep);
    best = std::min(best, y);
    trace.steps.push_back({budget + 1, rep, y, best - truth.min_value, true});
    trace.reported_point = std::move(rep);
    trace.reported_value = y;
    return trace;
}

int two_phase_points_per_dim(const KernelSpec& kernel, int dim, std::size_t budget) {
    if (budget < 2) throw SizeOverflow("two-phase strategy needs a budget of at least 2");
    const double T = static_cast<double>(budget);
    double n = 0.0;
    switch (kernel.kind()) {
        case KernelKind::SquaredExponential: n = std::ceil(std::log(T)); break;
        case KernelKind::Matern: n = std::ceil(std::pow(T, 1.0 / (dim + kernel.nu()))); break;
        case KernelKind::Quadratic:
            throw UnsupportedParameter("two-phase allocation is defined for SE and Matern kernels");
    }
    int N = std::max(1, static_cast<int>(n));
    while (N > 1 && std::pow(static_cast<double>(N), dim) >= T) --N;
    return N;
}

CumulativeTrace two_phase(const KernelSpec& kernel, const BoxDomain& domain, double R, std::size_t budget,
                          const RkhsFunction& f, const GroundTruth& truth, const SearchConfig& search) {
    CumulativeTrace trace;
    trace.points_per_dim = two_phase_points_per_dim(kernel, domain.dim(), budget);
    trace.exploration_steps = lattice_size(trace.points_per_dim, domain.dim(), kDefaultGridCap);
    trace.min_value = truth.min_value;

    History history;
    double total = 0.0;
    for (std::size_t t = 1; t <= trace.exploration_steps; ++t) {
        Point x = next_grid(t, trace.points_per_dim, domain);
        const double y = f(x);
        total += y - truth.min_value;
        trace.steps.push_back({t, x, y, y - truth.min_value, total, 1});
        history.add(std::move(x), y);
    }
    const Point exploit = report_grid(history, kernel, R, domain, search);
    const double y = f(exploit);
    for (std::size_t t = trace.exploration_steps + 1; t <= budget; ++t) {
        total += y - truth.min_value;
        trace.steps.push_back({t, exploit, y, y - truth.min_value, total, 2});
    }
    return trace;
}

}  // namespace wcbo

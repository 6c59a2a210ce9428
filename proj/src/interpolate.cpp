#include "wcbo/interpolate.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "wcbo/errors.hpp"
#include "wcbo/linalg.hpp"

namespace wcbo {

Design Design::prefix(std::size_t n) const {
    Design d;
    d.points.assign(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(n));
    d.values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n));
    return d;
}

GramFactor factorize_gram(const Eigen::MatrixXd& K) {
    const Eigen::Index t = K.rows();
    GramFactor out;
    if (t == 0) return out;
    double scale = K.trace() / static_cast<double>(t);
    if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;

    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() == Eigen::Success) {
        const Eigen::MatrixXd L = llt.matrixL();
        const double min_pivot = L.diagonal().cwiseAbs2().minCoeff();
        if (min_pivot >= kMinRelativePivot * scale) {
            out.lower = L;
            out.jitter = 0.0;
            return out;
        }
    }
    for (double rel = kJitterLadderStart; rel <= kJitterLadderEnd * (1.0 + 1e-9); rel *= 10.0) {
        const double jitter = rel * scale;
        Eigen::MatrixXd Kj = K;
        Kj.diagonal().array() += jitter;
        llt.compute(Kj);
        if (llt.info() == Eigen::Success) {
            out.lower = llt.matrixL();
            out.jitter = jitter;
            return out;
        }
    }
    std::ostringstream os;
    os << "Gram matrix of size " << t << " is not positive definite at any jitter rung";
    throw IllConditioned(os.str());
}

Posterior Posterior::fit(const KernelSpec& kernel, Design design) {
    if (design.points.size() != design.values.size())
        throw DimensionError("design has different numbers of points and values");
    Posterior post(kernel, std::move(design));
    const auto& pts = post.design_.points;
    if (pts.empty()) return post;

    post.dim_ = static_cast<int>(pts.front().size());
    for (const auto& p : pts) {
        if (p.size() != post.dim_) throw DimensionError("design points have mixed dimensions");
    }
    const Eigen::MatrixXd K = gram(kernel, pts);
    GramFactor factor = factorize_gram(K);
    post.chol_ = std::move(factor.lower);
    post.jitter_ = factor.jitter;

    const Eigen::Map<const Eigen::VectorXd> f(post.design_.values.data(),
                                              static_cast<Eigen::Index>(post.design_.values.size()));
    const auto L = post.chol_.triangularView<Eigen::Lower>();
    const Eigen::VectorXd z = L.solve(f);
    post.alpha_ = post.chol_.transpose().triangularView<Eigen::Upper>().solve(z);
    double norm_sq = z.squaredNorm();
    post.norm_sq_ = norm_sq;
    return post;
}

Posterior Posterior::fit(const KernelSpec& kernel, Design design, double R) {
    if (!(R > 0.0)) throw OutOfRegime("norm budget R must be positive");
    Posterior post = fit(kernel, std::move(design));
    post.check_budget(R);
    return post;
}

void Posterior::check_budget(double R) const {
    if (norm_sq_ > R * R * (1.0 + kNormBudgetSlack)) {
        std::ostringstream os;
        os.precision(10);
        os << "interpolant norm^2 " << norm_sq_ << " exceeds budget R^2 = " << R * R;
        throw NormBudgetExceeded(os.str());
    }
}

void Posterior::check_dim(Eigen::Index n) const {
    if (!design_.empty() && n != dim_) throw DimensionError("query dimension does not match the design");
}

double Posterior::clamp_variance(double var, double prior) const {
    if (var >= 0.0) return var;
    if (var > -kVarianceClampTol * std::max(1.0, prior)) return 0.0;
    std::ostringstream os;
    os << "posterior variance " << var << " is negative beyond round-off";
    throw IllConditioned(os.str());
}

double Posterior::mean(const Point& x) const {
    check_dim(x.size());
    if (design_.empty()) return 0.0;
    return cross(kernel_, design_.points, x).dot(alpha_);
}

double Posterior::variance(const Point& x) const {
    check_dim(x.size());
    const double prior = kernel_.diag(x);
    if (design_.empty()) return prior;
    Eigen::VectorXd v = cross(kernel_, design_.points, x);
    chol_.triangularView<Eigen::Lower>().solveInPlace(v);
    return clamp_variance(prior - v.squaredNorm(), prior);
}

double Posterior::sd(const Point& x) const { return std::sqrt(variance(x)); }

Moments Posterior::predict(const Eigen::MatrixXd& queries) const {
    check_dim(queries.rows());
    const Eigen::Index m = queries.cols();
    Moments out;
    out.mean = Eigen::VectorXd::Zero(m);
    out.sd.resize(m);
    if (design_.empty()) {
        for (Eigen::Index j = 0; j < m; ++j) out.sd[j] = std::sqrt(kernel_.diag(queries.col(j)));
        return out;
    }
    Eigen::MatrixXd Kx = cross(kernel_, design_.points, queries);
    out.mean.noalias() = Kx.transpose() * alpha_;
    chol_.triangularView<Eigen::Lower>().solveInPlace(Kx);
    const Eigen::VectorXd explained = Kx.colwise().squaredNorm().transpose();
    for (Eigen::Index j = 0; j < m; ++j) {
        const double prior = kernel_.diag(queries.col(j));
        out.sd[j] = std::sqrt(clamp_variance(prior - explained[j], prior));
    }
    return out;
}

Eigen::VectorXd Posterior::sd(const Eigen::MatrixXd& queries) const { return predict(queries).sd; }

double Posterior::residual_radius(double R) const {
    check_budget(R);
    const double gap = R * R - norm_sq_;
    // rounding noise of R^2 itself counts as a used-up budget
    if (gap <= 4.0 * std::numeric_limits<double>::epsilon() * R * R) return 0.0;
    return std::sqrt(gap);
}

Envelope Posterior::envelope(double R, const Point& x) const {
    const double radius = residual_radius(R);
    const double m = mean(x);
    const double s = sd(x);
    return {m - s * radius, m + s * radius};
}

Eigen::VectorXd Posterior::solve_weights(const Point& x) const {
    check_dim(x.size());
    if (design_.empty()) return {};
    const Eigen::VectorXd k = cross(kernel_, design_.points, x);
    const Eigen::VectorXd z = chol_.triangularView<Eigen::Lower>().solve(k);
    return chol_.transpose().triangularView<Eigen::Upper>().solve(z);
}

RkhsFunction::RkhsFunction(KernelSpec kernel, PointList centers, Eigen::VectorXd weights)
    : kernel_(std::move(kernel)), centers_(std::move(centers)), weights_(std::move(weights)) {
    if (static_cast<Eigen::Index>(centers_.size()) != weights_.size())
        throw DimensionError("RKHS function has different numbers of centers and weights");
    if (!centers_.empty()) {
        dim_ = static_cast<int>(centers_.front().size());
        const Eigen::MatrixXd K = gram(kernel_, centers_);
        norm_ = std::sqrt(std::max(0.0, weights_.dot(K * weights_)));
    }
}

RkhsFunction RkhsFunction::zero(const KernelSpec& kernel, int dim) {
    RkhsFunction f(kernel, {}, Eigen::VectorXd());
    f.dim_ = dim;
    return f;
}

double RkhsFunction::operator()(const Point& x) const {
    if (centers_.empty()) return 0.0;
    if (x.size() != dim_) throw DimensionError("evaluation point dimension mismatch");
    return cross(kernel_, centers_, x).dot(weights_);
}

Eigen::VectorXd RkhsFunction::evaluate(const Eigen::MatrixXd& queries) const {
    if (centers_.empty()) return Eigen::VectorXd::Zero(queries.cols());
    return cross(kernel_, centers_, queries).transpose() * weights_;
}

RkhsFunction RkhsFunction::scaled(double factor) const {
    RkhsFunction out = *this;
    out.weights_ *= factor;
    out.norm_ *= std::abs(factor);
    return out;
}

RkhsFunction RkhsFunction::plus(const RkhsFunction& other) const {
    PointList centers = centers_;
    centers.insert(centers.end(), other.centers_.begin(), other.centers_.end());
    Eigen::VectorXd w(weights_.size() + other.weights_.size());
    w << weights_, other.weights_;
    RkhsFunction out(kernel_, std::move(centers), std::move(w));
    if (out.centers_.empty()) out.dim_ = std::max(dim_, other.dim_);
    return out;
}

RkhsFunction min_norm_interpolant(const KernelSpec& kernel, const PointList& knots,
                                  const std::vector<double>& values) {
    if (knots.size() != values.size()) throw DimensionError("knots and values differ in length");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if ((knots[i] - knots[j]).norm() < 1e-9) {
                std::ostringstream os;
                os << "knots " << j << " and " << i << " are closer than 1e-9";
                throw IllConditioned(os.str());
            }
        }
    }
    Design design{knots, values};
    const Posterior post = Posterior::fit(kernel, std::move(design));
    return RkhsFunction(kernel, knots, post.alpha());
}

std::string to_string(SamplingMode mode) { return mode == SamplingMode::Reject ? "reject" : "rescale"; }

SamplingMode sampling_mode_from_string(const std::string& s) {
    if (s == "reject") return SamplingMode::Reject;
    if (s == "rescale") return SamplingMode::Rescale;
    throw ConfigError("unknown sampling mode '" + s + "' (expected reject or rescale)");
}

RkhsSample sample_rkhs(const KernelSpec& kernel, const BoxDomain& domain, int n_knots, double R,
                       std::uint64_t seed, SamplingMode mode) {
    if (n_knots < 1) throw ConfigError("n_knots must be at least 1");
    if (!(R > 0.0)) throw OutOfRegime("norm budget R must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int d = domain.dim();

    for (int attempt = 1; attempt <= kRejectionCap; ++attempt) {
        PointList knots(static_cast<std::size_t>(n_knots), Point(d));
        for (auto& k : knots) {
            for (int i = 0; i < d; ++i) k[i] = domain.lower()[i] + unit(rng) * domain.width()[i];
        }
        const GramFactor factor = factorize_gram(gram(kernel, knots));
        Eigen::VectorXd z(n_knots);
        for (int i = 0; i < n_knots; ++i) z[i] = normal(rng);
        const Eigen::VectorXd v = factor.lower.triangularView<Eigen::Lower>() * z;
        std::vector<double> values(v.data(), v.data() + v.size());
        RkhsFunction f = min_norm_interpolant(kernel, knots, values);

        if (mode == SamplingMode::Rescale) {
            const double u = 1.0 - unit(rng);  // (0, 1]
            if (f.norm() > 0.0) f = f.scaled(u * R / f.norm());
            return {std::move(f), attempt, mode};
        }
        if (f.norm() <= R) return {std::move(f), attempt, mode};
    }
    std::ostringstream os;
    os << "no sampled function with norm <= " << R << " after " << kRejectionCap
       << " attempts; consider sampling mode 'rescale'";
    throw RejectionBudgetExhausted(os.str());
}

std::size_t lattice_size(int points_per_dim, int dim, std::size_t cap) {
    if (points_per_dim < 1) throw SizeOverflow("points per dimension must be at least 1");
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) {
        if (total > cap / static_cast<std::size_t>(points_per_dim)) {
            std::ostringstream os;
            os << points_per_dim << "^" << dim << " lattice exceeds the cap of " << cap << " points";
            throw SizeOverflow(os.str());
        }
        total *= static_cast<std::size_t>(points_per_dim);
    }
    if (total > cap) throw SizeOverflow("lattice exceeds the configured cap");
    return total;
}

PointList grid(const BoxDomain& domain, int points_per_dim, std::size_t cap) {
    const int d = domain.dim();
    const std::size_t total = lattice_size(points_per_dim, d, cap);
    PointList out;
    out.reserve(total);
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    for (std::size_t n = 0; n < total; ++n) {
        Point p(d);
        for (int i = 0; i < d; ++i) {
            p[i] = domain.lower()[i] +
                   (static_cast<double>(k[static_cast<std::size_t>(i)]) / points_per_dim) * domain.width()[i];
        }
        out.push_back(std::move(p));
        for (int i = d - 1; i >= 0; --i) {
            if (++k[static_cast<std::size_t>(i)] < points_per_dim) break;
            k[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

}  // namespace wcbo

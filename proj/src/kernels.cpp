#include "wcbo/kernels.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "wcbo/errors.hpp"

namespace wcbo {

BoxDomain::BoxDomain(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() < 1) throw DimensionError("domain dimension must be at least 1");
    if (lower_.size() != upper_.size())
        throw DimensionError("domain bounds have different dimensions");
    for (Eigen::Index i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] < upper_[i])) {
            std::ostringstream os;
            os << "domain coordinate " << i << " has lower >= upper";
            throw DimensionError(os.str());
        }
    }
}

BoxDomain BoxDomain::cube(int dim, double lower, double upper) {
    return {Eigen::VectorXd::Constant(dim, lower), Eigen::VectorXd::Constant(dim, upper)};
}

bool BoxDomain::contains(const Point& x, double tol) const {
    if (x.size() != lower_.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_[i] - tol && x[i] <= upper_[i] + tol)) return false;
    }
    return true;
}

Point BoxDomain::clamp(const Point& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

KernelSpec KernelSpec::squared_exponential(double lengthscale) {
    if (!(lengthscale > 0.0)) throw UnsupportedParameter("SE lengthscale must be positive");
    KernelSpec k;
    k.kind_ = KernelKind::SquaredExponential;
    k.lengthscale_ = lengthscale;
    return k;
}

KernelSpec KernelSpec::matern(double nu, double rho, double variance) {
    const double twice = 2.0 * nu;
    const int rounded = static_cast<int>(std::lround(twice));
    if (std::abs(twice - rounded) > 1e-12 || (rounded != 1 && rounded != 3 && rounded != 5 && rounded != 7)) {
        std::ostringstream os;
        os << "Matern nu=" << nu << " unsupported; expected one of 0.5, 1.5, 2.5, 3.5";
        throw UnsupportedParameter(os.str());
    }
    if (!(rho > 0.0)) throw UnsupportedParameter("Matern rho must be positive");
    if (!(variance > 0.0)) throw UnsupportedParameter("Matern variance must be positive");
    KernelSpec k;
    k.kind_ = KernelKind::Matern;
    k.twice_nu_ = rounded;
    k.rho_ = rho;
    k.variance_ = variance;
    return k;
}

KernelSpec KernelSpec::quadratic() {
    KernelSpec k;
    k.kind_ = KernelKind::Quadratic;
    return k;
}

double KernelSpec::radial(double r) const {
    switch (kind_) {
        case KernelKind::SquaredExponential: {
            const double s = r / lengthscale_;
            return std::exp(-s * s);
        }
        case KernelKind::Matern: {
            const double s = std::sqrt(static_cast<double>(twice_nu_)) * r / rho_;
            const double e = std::exp(-s);
            switch (twice_nu_) {
                case 1: return variance_ * e;
                case 3: return variance_ * (1.0 + s) * e;
                case 5: return variance_ * (1.0 + s + s * s / 3.0) * e;
                default: return variance_ * (1.0 + s + 0.4 * s * s + s * s * s / 15.0) * e;
            }
        }
        case KernelKind::Quadratic: break;
    }
    throw UnsupportedParameter("quadratic kernel has no radial profile");
}

double KernelSpec::operator()(const Point& x, const Point& y) const {
    if (x.size() != y.size()) throw DimensionError("kernel arguments have different dimensions");
    if (kind_ == KernelKind::Quadratic) {
        const double dot = x.dot(y);
        return dot * dot;
    }
    return radial((x - y).norm());
}

double KernelSpec::diag(const Point& x) const {
    switch (kind_) {
        case KernelKind::SquaredExponential: return 1.0;
        case KernelKind::Matern: return variance_;
        case KernelKind::Quadratic: {
            const double n2 = x.squaredNorm();
            return n2 * n2;
        }
    }
    return 0.0;
}

double KernelSpec::sup_on(const BoxDomain& domain) const {
    if (stationary()) return diag(domain.lower());
    // |x.y| <= |x||y| <= max |x|^2, attained at the farthest corner.
    const double r2 = domain.lower().cwiseAbs2().cwiseMax(domain.upper().cwiseAbs2()).sum();
    return r2 * r2;
}

bool KernelSpec::unit_bounded_on(const BoxDomain& domain) const { return sup_on(domain) <= 1.0; }

std::string KernelSpec::name() const {
    switch (kind_) {
        case KernelKind::SquaredExponential: return "se";
        case KernelKind::Matern: return "matern";
        case KernelKind::Quadratic: return "quadratic";
    }
    return "unknown";
}

namespace {

std::string shortest(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

}  // namespace

std::string KernelSpec::describe() const {
    switch (kind_) {
        case KernelKind::SquaredExponential: return "se(lengthscale=" + shortest(lengthscale_) + ")";
        case KernelKind::Matern:
            return "matern(nu=" + shortest(nu()) + ", rho=" + shortest(rho_) + ", variance=" + shortest(variance_) + ")";
        case KernelKind::Quadratic: break;
    }
    return "quadratic";
}

Eigen::MatrixXd gram(const KernelSpec& kernel, const PointList& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (points[i].size() != points[0].size()) throw DimensionError("points have mixed dimensions");
        K(i, i) = kernel(points[i], points[i]);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = kernel(points[i], points[j]);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

Eigen::VectorXd cross(const KernelSpec& kernel, const PointList& points, const Point& x) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) v[static_cast<Eigen::Index>(i)] = kernel(points[i], x);
    return v;
}

Eigen::MatrixXd cross(const KernelSpec& kernel, const PointList& points,
                      const Eigen::MatrixXd& queries) {
    const auto t = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd out(t, queries.cols());
    for (Eigen::Index i = 0; i < t; ++i) {
        if (points[i].size() != queries.rows()) throw DimensionError("query dimension mismatch");
    }
    if (kernel.kind() == KernelKind::Quadratic) {
        for (Eigen::Index i = 0; i < t; ++i) {
            out.row(i) = (points[i].transpose() * queries).array().square().matrix();
        }
        return out;
    }
    for (Eigen::Index j = 0; j < queries.cols(); ++j) {
        for (Eigen::Index i = 0; i < t; ++i) {
            out(i, j) = kernel.radial((points[i] - queries.col(j)).norm());
        }
    }
    return out;
}

Eigen::MatrixXd as_columns(const PointList& points, int dim) {
    Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim) throw DimensionError("point dimension mismatch");
        m.col(static_cast<Eigen::Index>(i)) = points[i];
    }
    return m;
}

}  // namespace wcbo

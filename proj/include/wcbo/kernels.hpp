#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace wcbo {

using Point = Eigen::VectorXd;
using PointList = std::vector<Point>;

/// Axis-aligned compact box [lower, upper] in R^d.
class BoxDomain {
public:
    BoxDomain(Eigen::VectorXd lower, Eigen::VectorXd upper);

    /// Same interval on every coordinate.
    static BoxDomain cube(int dim, double lower, double upper);

    int dim() const { return static_cast<int>(lower_.size()); }
    const Eigen::VectorXd& lower() const { return lower_; }
    const Eigen::VectorXd& upper() const { return upper_; }
    Eigen::VectorXd width() const { return upper_ - lower_; }
    Point center() const { return 0.5 * (lower_ + upper_); }

    bool contains(const Point& x, double tol = 1e-12) const;
    Point clamp(const Point& x) const;

private:
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
};

enum class KernelKind { SquaredExponential, Matern, Quadratic };

/// Positive-definite kernel together with its parameters.
///
/// The squared exponential kernel is exp(-|x-y|^2 / l^2), without the usual
/// factor 2. Matern kernels are supported for nu in {1/2, 3/2, 5/2, 7/2} and
/// evaluated through their polynomial-times-exponential closed forms.
class KernelSpec {
public:
    static KernelSpec squared_exponential(double lengthscale);
    static KernelSpec matern(double nu, double rho, double variance = 1.0);
    static KernelSpec quadratic();

    KernelKind kind() const { return kind_; }
    double lengthscale() const { return lengthscale_; }
    double nu() const { return 0.5 * twice_nu_; }
    int twice_nu() const { return twice_nu_; }
    double rho() const { return rho_; }
    double variance() const { return variance_; }
    bool stationary() const { return kind_ != KernelKind::Quadratic; }

    double operator()(const Point& x, const Point& y) const;

    /// k(x, x); constant for stationary kernels.
    double diag(const Point& x) const;

    /// Stationary profile k(r) as a function of the distance r = |x-y|.
    double radial(double r) const;

    /// Whether sup_{x,y in domain} k(x,y) <= 1 holds. Exact for all variants:
    /// the quadratic kernel attains its supremum at a pair of box corners.
    bool unit_bounded_on(const BoxDomain& domain) const;

    /// sup_{x,y in domain} |k(x,y)|.
    double sup_on(const BoxDomain& domain) const;

    std::string name() const;
    std::string describe() const;

private:
    KernelSpec() = default;

    KernelKind kind_ = KernelKind::SquaredExponential;
    double lengthscale_ = 1.0;
    int twice_nu_ = 5;
    double rho_ = 1.0;
    double variance_ = 1.0;
};

/// Symmetric Gram matrix K_ij = k(x_i, x_j).
Eigen::MatrixXd gram(const KernelSpec& kernel, const PointList& points);

/// Cross-covariance vector (k(x_1, x), ..., k(x_t, x)).
Eigen::VectorXd cross(const KernelSpec& kernel, const PointList& points, const Point& x);

/// Cross-covariance matrix for a batch of query points stored as columns.
Eigen::MatrixXd cross(const KernelSpec& kernel, const PointList& points,
                      const Eigen::MatrixXd& queries);

/// Packs a list of points as the columns of a d x n matrix.
Eigen::MatrixXd as_columns(const PointList& points, int dim);

}  // namespace wcbo

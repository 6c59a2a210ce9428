#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "wcbo/kernels.hpp"

namespace wcbo {

/// Finite design: sample points with their noiseless observations.
struct Design {
    PointList points;
    std::vector<double> values;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    void add(Point x, double y) {
        points.push_back(std::move(x));
        values.push_back(y);
    }
    /// Design of the first n entries.
    Design prefix(std::size_t n) const;
};

/// Relative jitter rungs tried after an unjittered factorization is rejected.
/// Each rung is multiplied by trace(K)/t before being added to the diagonal.
inline constexpr double kJitterLadderStart = 1e-12;
inline constexpr double kJitterLadderEnd = 1e-6;

/// The unjittered factor is accepted only when every Cholesky pivot
/// (the conditional variance of a point given its predecessors) exceeds this
/// fraction of trace(K)/t.
inline constexpr double kMinRelativePivot = 1e-10;

/// Squared standard deviations in (-kVarianceClampTol * k(x,x), 0) clamp to 0.
inline constexpr double kVarianceClampTol = 1e-10;

inline constexpr double kNormBudgetSlack = 1e-6;

struct Envelope {
    double lower;
    double upper;
};

struct Moments {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;
};

/// Noiseless Gaussian-process posterior, equivalently the minimum-norm
/// interpolant of the design in the RKHS of the kernel.
class Posterior {
public:
    /// Fits the interpolant. An empty design yields the prior (mean 0,
    /// sd sqrt(k(x,x)), norm 0).
    static Posterior fit(const KernelSpec& kernel, Design design);

    /// As above, and additionally throws NormBudgetExceeded when the data is
    /// not interpolable by any function of norm at most R.
    static Posterior fit(const KernelSpec& kernel, Design design, double R);

    const KernelSpec& kernel() const { return kernel_; }
    const Design& design() const { return design_; }
    const Eigen::VectorXd& alpha() const { return alpha_; }
    const Eigen::MatrixXd& chol() const { return chol_; }
    double norm_sq() const { return norm_sq_; }
    double jitter_used() const { return jitter_; }
    std::size_t size() const { return design_.size(); }
    int dim() const { return dim_; }

    double mean(const Point& x) const;
    double sd(const Point& x) const;
    double variance(const Point& x) const;

    /// Mean and standard deviation at the columns of `queries`.
    Moments predict(const Eigen::MatrixXd& queries) const;
    Eigen::VectorXd sd(const Eigen::MatrixXd& queries) const;

    /// Radius sqrt(R^2 - |m_t|^2) of the residual ball.
    double residual_radius(double R) const;

    /// Certified interval [m - sd*rho, m + sd*rho] containing f(x) for every f
    /// in the R-ball that is consistent with the data.
    Envelope envelope(double R, const Point& x) const;

    /// K^{-1} k_X(x) (with the jitter actually used).
    Eigen::VectorXd solve_weights(const Point& x) const;

    void check_budget(double R) const;

private:
    Posterior(KernelSpec kernel, Design design) : kernel_(std::move(kernel)), design_(std::move(design)) {}

    void check_dim(Eigen::Index n) const;
    double clamp_variance(double var, double prior) const;

    KernelSpec kernel_;
    Design design_;
    int dim_ = 0;
    Eigen::MatrixXd chol_;  // lower-triangular factor of K + jitter I
    Eigen::VectorXd alpha_;
    double norm_sq_ = 0.0;
    double jitter_ = 0.0;
};

/// Element sum_i w_i k(c_i, .) of the RKHS.
class RkhsFunction {
public:
    RkhsFunction(KernelSpec kernel, PointList centers, Eigen::VectorXd weights);

    /// The zero function of the given dimension.
    static RkhsFunction zero(const KernelSpec& kernel, int dim);

    double operator()(const Point& x) const;
    Eigen::VectorXd evaluate(const Eigen::MatrixXd& queries) const;

    const KernelSpec& kernel() const { return kernel_; }
    const PointList& centers() const { return centers_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    int dim() const { return dim_; }

    /// sqrt(w^T K w), recomputed from the Gram matrix of the centers.
    double norm() const { return norm_; }

    RkhsFunction scaled(double factor) const;
    /// Sum of two functions sharing a kernel; centers are concatenated.
    RkhsFunction plus(const RkhsFunction& other) const;

private:
    KernelSpec kernel_;
    PointList centers_;
    Eigen::VectorXd weights_;
    int dim_ = 0;
    double norm_ = 0.0;
};

/// Minimum-norm interpolant of (knots, values). Knots closer than 1e-9 raise
/// IllConditioned.
RkhsFunction min_norm_interpolant(const KernelSpec& kernel, const PointList& knots,
                                  const std::vector<double>& values);

enum class SamplingMode { Reject, Rescale };

std::string to_string(SamplingMode mode);
SamplingMode sampling_mode_from_string(const std::string& s);

inline constexpr int kRejectionCap = 1000;

struct RkhsSample {
    RkhsFunction function;
    int attempts = 1;
    SamplingMode mode = SamplingMode::Reject;
};

/// Random element of the R-ball: uniform knots, Gaussian-process values on
/// the knots, minimum-norm interpolant. Reject mode redraws until the norm is
/// at most R; rescale mode multiplies the values by u*R/norm, u ~ U(0, 1].
RkhsSample sample_rkhs(const KernelSpec& kernel, const BoxDomain& domain, int n_knots, double R,
                       std::uint64_t seed, SamplingMode mode);

inline constexpr std::size_t kDefaultGridCap = 1'000'000;

/// Lattice {lower + (k/N)(upper - lower) : k in {0..N-1}^d} in lexicographic
/// order of k (last coordinate fastest).
PointList grid(const BoxDomain& domain, int points_per_dim, std::size_t cap = kDefaultGridCap);

/// Checked N^d.
std::size_t lattice_size(int points_per_dim, int dim, std::size_t cap);

}  // namespace wcbo

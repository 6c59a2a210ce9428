#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wcbo/harness/config.hpp"

namespace wcbo::harness {

enum class OutputFormat { Csv, Json };

OutputFormat output_format_from_string(const std::string& s);
std::string to_string(OutputFormat f);

struct RunOptions {
    std::filesystem::path out_dir = "out";
    int jobs = 1;
    OutputFormat format = OutputFormat::Csv;
};

/// In-memory output files, written to disk by a single collector.
struct OutputSet {
    struct File {
        std::string name;
        std::string content;
    };
    std::vector<File> files;
    nlohmann::json summary = nlohmann::json::object();

    void add(std::string name, std::string content) { files.push_back({std::move(name), std::move(content)}); }
    const std::string& content(const std::string& name) const;
};

OutputSet cmd_demo_adversarial(const ExperimentConfig& config, const RunOptions& options);
OutputSet cmd_regret_compare(const ExperimentConfig& config, const RunOptions& options);
OutputSet cmd_rate_fit(const ExperimentConfig& config, const RunOptions& options);
OutputSet cmd_lower_bound_check(const ExperimentConfig& config, const RunOptions& options);
OutputSet cmd_quadratic_recovery(const ExperimentConfig& config, const RunOptions& options);
OutputSet cmd_entropy_estimate(const ExperimentConfig& config, const RunOptions& options);

/// Dispatches on config.command.
OutputSet run_command(const ExperimentConfig& config, const RunOptions& options);

/// Writes every file plus summary.json and manifest.json (last, atomically)
/// into options.out_dir. Returns the manifest.
nlohmann::json write_outputs(const ExperimentConfig& config, const RunOptions& options, const OutputSet& outputs,
                             double wall_seconds);

/// Exact minimum of x^T A x over a box, by enumerating the 3^d faces.
struct QuadraticMinimum {
    Point argmin;
    double value = 0.0;
};

QuadraticMinimum minimize_quadratic_on_box(const Eigen::MatrixXd& A, const BoxDomain& domain);

struct QuadraticRecovery {
    Eigen::MatrixXd recovered;  ///< sum_i alpha_i x_i x_i^T
    QuadraticMinimum truth;
    QuadraticMinimum estimate;
    double value_error = 0.0;    ///< |estimate.value - truth.value|
    double matrix_error = 0.0;   ///< max |A_hat - A|
    bool determined = false;     ///< samples >= d(d+1)/2
};

/// Fits the minimum-norm quadratic-kernel interpolant to x_i^T A x_i and
/// minimizes it on the box. Throws IllConditioned when the samples do not
/// have the generic rank min(n, d(d+1)/2).
QuadraticRecovery quadratic_recovery(const Eigen::MatrixXd& A, const PointList& samples, const BoxDomain& domain);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wcbo::harness

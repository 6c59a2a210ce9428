#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wcbo/entropy.hpp"
#include "wcbo/interpolate.hpp"
#include "wcbo/kernels.hpp"
#include "wcbo/policies.hpp"
#include "wcbo/search.hpp"

namespace wcbo::harness {

/// Ordered key/value settings, as read from a config file.
using KeyValues = std::map<std::string, std::string>;

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"demo-adversarial",  "regret-compare",
                                                   "rate-fit",          "lower-bound-check",
                                                   "quadratic-recovery", "entropy-estimate"};
    return names;
}

/// Parses "key = value" lines; '#' starts a comment, blank lines are ignored.
KeyValues parse_key_values(std::string_view text);
KeyValues read_config_file(const std::string& path);

/// Every recognized key with its default for the given command.
KeyValues default_settings(const std::string& command);

/// Fully materialized and validated experiment configuration.
struct ExperimentConfig {
    std::string command;
    KeyValues settings;  ///< defaults overlaid with the overrides

    KernelSpec kernel = KernelSpec::squared_exponential(1.0);
    BoxDomain domain = BoxDomain::cube(1, 0.0, 1.0);
    double R = 1.0;
    std::size_t budget = 0;
    std::string policy;
    double beta = 1.0;
    LcbVariant variant = LcbVariant::Plain;
    std::optional<Point> first_point;
    int grid_points_per_dim = 0;  ///< 0: smallest N with N^d >= budget
    SearchConfig search;
    int n_knots = 0;
    SamplingMode sampling_mode = SamplingMode::Rescale;
    int instances = 0;
    std::uint64_t seed = 0;

    std::vector<std::size_t> snapshots;
    std::vector<std::string> demo_policies;
    int demo_grid_points = 1001;

    std::vector<int> grid_sizes;

    std::vector<double> eps_list;
    std::vector<std::string> bound_policies;
    CandidateOptions candidates;

    Eigen::MatrixXd quadratic_matrix;
    PointList quadratic_samples;
};

/// Overlays `overrides` on the command defaults, rejects unknown keys and
/// invalid values (ConfigError), and builds the typed view.
ExperimentConfig resolve_config(const std::string& command, const KeyValues& overrides);

/// Canonical "key = value" dump of the materialized settings.
std::string dump_settings(const KeyValues& settings);

/// Builds the named policy (lcb, ei, grid, two_phase) for a run of `budget`
/// queries.
std::unique_ptr<Policy> make_policy(const std::string& name, const ExperimentConfig& config,
                                    std::size_t budget);

}  // namespace wcbo::harness

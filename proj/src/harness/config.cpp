#include "wcbo/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "wcbo/errors.hpp"

namespace wcbo::harness {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(out))
        throw ConfigError("key '" + key + "': '" + v + "' is not a finite number");
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end) throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
    return out;
}

Point to_point(const std::string& key, const std::string& v) {
    const auto xs = to_doubles(key, v);
    return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

struct KeySpec {
    const char* key;
    const char* value;
    const char* group;
};

// Global key table. Groups decide which commands materialize a key.
const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = {
        {"kernel.name", "matern", "common"},
        {"kernel.lengthscale", "0.5", "common"},
        {"kernel.nu", "2.5", "common"},
        {"kernel.rho", "1", "common"},
        {"kernel.variance", "1", "common"},
        {"domain.dim", "1", "common"},
        {"domain.lower", "0", "common"},
        {"domain.upper", "1", "common"},
        {"R", "1", "common"},
        {"seed", "0", "common"},
        {"search.points_per_dim", "0", "common"},
        {"search.polish_iterations", "20", "common"},
        {"budget", "40", "run"},
        {"policy", "lcb", "run"},
        {"policy.beta", "1", "policy"},
        {"policy.variant", "plain", "policy"},
        {"policy.first_point", "", "policy"},
        {"policy.grid_points_per_dim", "0", "policy"},
        {"sampling.n_knots", "20", "run"},
        {"sampling.mode", "rescale", "run"},
        {"sampling.instances", "20", "run"},
        {"demo.snapshots", "1,3,6,10", "demo"},
        {"demo.policies", "lcb,ei", "demo"},
        {"demo.grid_points", "1001", "demo"},
        {"rate.grid_sizes", "8,16,32,64", "rate"},
        {"bound.eps", "0.2,0.1,0.05", "bound"},
        {"bound.policies", "grid,lcb,ei", "bound"},
        {"entropy.eps", "0.2,0.1,0.05", "entropy_eps"},
        {"entropy.strategy", "mixed", "entropy"},
        {"entropy.count", "200", "entropy"},
        {"entropy.n_knots", "8", "entropy"},
        {"entropy.eval_resolution", "0", "entropy"},
        {"entropy.include_zero", "false", "entropy"},
        {"entropy.sampling_mode", "rescale", "entropy"},
        {"quadratic.matrix", "1,0,0,1", "quadratic"},
        {"quadratic.samples", "1,0;0,1;1,1", "quadratic"},
    };
    return table;
}

std::set<std::string> groups_for(const std::string& command) {
    if (command == "demo-adversarial") return {"common", "policy", "demo"};
    if (command == "regret-compare") return {"common", "run", "policy"};
    if (command == "rate-fit") return {"common", "rate"};
    if (command == "lower-bound-check") return {"common", "policy", "bound", "entropy"};
    if (command == "quadratic-recovery") return {"common", "quadratic"};
    if (command == "entropy-estimate") return {"common", "entropy", "entropy_eps"};
    throw ConfigError("unknown command '" + command + "'");
}

KernelSpec build_kernel(const KeyValues& s) {
    const std::string& name = s.at("kernel.name");
    if (name == "se") return KernelSpec::squared_exponential(to_double("kernel.lengthscale", s.at("kernel.lengthscale")));
    if (name == "matern") {
        return KernelSpec::matern(to_double("kernel.nu", s.at("kernel.nu")), to_double("kernel.rho", s.at("kernel.rho")),
                                  to_double("kernel.variance", s.at("kernel.variance")));
    }
    if (name == "quadratic") return KernelSpec::quadratic();
    throw ConfigError("kernel.name must be one of se, matern, quadratic (got '" + name + "')");
}

BoxDomain build_domain(const KeyValues& s) {
    const long long dim = to_int("domain.dim", s.at("domain.dim"));
    if (dim < 1) throw ConfigError("domain.dim must be at least 1");
    auto lower = to_doubles("domain.lower", s.at("domain.lower"));
    auto upper = to_doubles("domain.upper", s.at("domain.upper"));
    if (lower.size() == 1) lower.assign(static_cast<std::size_t>(dim), lower[0]);
    if (upper.size() == 1) upper.assign(static_cast<std::size_t>(dim), upper[0]);
    if (lower.size() != static_cast<std::size_t>(dim) || upper.size() != static_cast<std::size_t>(dim))
        throw ConfigError("domain.lower/upper must have 1 or domain.dim entries");
    try {
        return BoxDomain(Eigen::Map<Eigen::VectorXd>(lower.data(), dim), Eigen::Map<Eigen::VectorXd>(upper.data(), dim));
    } catch (const DimensionError& e) {
        throw ConfigError(std::string("invalid domain: ") + e.what());
    }
}

std::vector<std::string> to_names(const std::string& key, const std::string& v,
                                  const std::set<std::string>& allowed) {
    auto names = split(v, ',');
    if (names.empty()) throw ConfigError("key '" + key + "' must list at least one entry");
    for (const auto& n : names) {
        if (!allowed.count(n)) throw ConfigError("key '" + key + "': unknown entry '" + n + "'");
    }
    return names;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(content).substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        out[key] = trim(std::string_view(content).substr(eq + 1));
    }
    return out;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

KeyValues default_settings(const std::string& command) {
    const auto groups = groups_for(command);
    KeyValues out;
    for (const auto& k : key_table()) {
        if (groups.count(k.group)) out[k.key] = k.value;
    }
    if (command == "demo-adversarial") {
        out["domain.lower"] = "-10";
        out["domain.upper"] = "10";
        out["policy.first_point"] = "0";
    } else if (command == "regret-compare") {
        out["domain.dim"] = "3";
        out["kernel.rho"] = "0.5";
    } else if (command == "quadratic-recovery") {
        out["kernel.name"] = "quadratic";
        out["domain.dim"] = "2";
        out["domain.lower"] = "-1";
        out["domain.upper"] = "1";
    }
    return out;
}

ExperimentConfig resolve_config(const std::string& command, const KeyValues& overrides) {
    ExperimentConfig cfg;
    cfg.command = command;
    cfg.settings = default_settings(command);
    std::set<std::string> known;
    for (const auto& k : key_table()) known.insert(k.key);
    for (const auto& [key, value] : overrides) {
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
        if (cfg.settings.count(key)) cfg.settings[key] = value;
    }
    const KeyValues& s = cfg.settings;

    cfg.kernel = build_kernel(s);
    cfg.domain = build_domain(s);
    cfg.R = to_double("R", s.at("R"));
    if (!(cfg.R > 0.0)) throw ConfigError("R must be positive");
    const long long seed = to_int("seed", s.at("seed"));
    if (seed < 0) throw ConfigError("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.search.points_per_dim = static_cast<int>(to_int("search.points_per_dim", s.at("search.points_per_dim")));
    cfg.search.polish_iterations =
        static_cast<int>(to_int("search.polish_iterations", s.at("search.polish_iterations")));
    if (cfg.search.points_per_dim < 0 || cfg.search.points_per_dim == 1)
        throw ConfigError("search.points_per_dim must be 0 (default) or at least 2");
    if (cfg.search.polish_iterations < 0) throw ConfigError("search.polish_iterations must be nonnegative");

    const std::set<std::string> policy_names = {"lcb", "ei", "grid", "two_phase"};
    if (s.count("budget")) {
        const long long b = to_int("budget", s.at("budget"));
        if (b < 1) throw ConfigError("budget must be at least 1");
        cfg.budget = static_cast<std::size_t>(b);
        cfg.policy = to_names("policy", s.at("policy"), policy_names).at(0);
        cfg.n_knots = static_cast<int>(to_int("sampling.n_knots", s.at("sampling.n_knots")));
        if (cfg.n_knots < 1) throw ConfigError("sampling.n_knots must be at least 1");
        cfg.sampling_mode = sampling_mode_from_string(s.at("sampling.mode"));
        cfg.instances = static_cast<int>(to_int("sampling.instances", s.at("sampling.instances")));
        if (cfg.instances < 2) throw ConfigError("sampling.instances must be at least 2");
    }
    if (s.count("policy.beta")) {
        cfg.beta = to_double("policy.beta", s.at("policy.beta"));
        const std::string& v = s.at("policy.variant");
        if (v == "plain") {
            cfg.variant = LcbVariant::Plain;
        } else if (v == "certified") {
            cfg.variant = LcbVariant::Certified;
        } else {
            throw ConfigError("policy.variant must be plain or certified");
        }
        if (!s.at("policy.first_point").empty()) {
            Point p = to_point("policy.first_point", s.at("policy.first_point"));
            if (p.size() != cfg.domain.dim() || !cfg.domain.contains(p))
                throw ConfigError("policy.first_point must be a point of the domain");
            cfg.first_point = p;
        }
        cfg.grid_points_per_dim =
            static_cast<int>(to_int("policy.grid_points_per_dim", s.at("policy.grid_points_per_dim")));
        if (cfg.grid_points_per_dim < 0) throw ConfigError("policy.grid_points_per_dim must be nonnegative");
    }
    if (s.count("demo.snapshots")) {
        for (const auto& v : split(s.at("demo.snapshots"), ',')) {
            const long long t = to_int("demo.snapshots", v);
            if (t < 1) throw ConfigError("demo.snapshots entries must be at least 1");
            cfg.snapshots.push_back(static_cast<std::size_t>(t));
        }
        if (cfg.snapshots.empty() || !std::is_sorted(cfg.snapshots.begin(), cfg.snapshots.end()))
            throw ConfigError("demo.snapshots must be a nonempty increasing list");
        cfg.demo_policies = to_names("demo.policies", s.at("demo.policies"), {"lcb", "ei", "grid"});
        cfg.demo_grid_points = static_cast<int>(to_int("demo.grid_points", s.at("demo.grid_points")));
        if (cfg.demo_grid_points < 2) throw ConfigError("demo.grid_points must be at least 2");
    }
    if (s.count("rate.grid_sizes")) {
        for (const auto& v : split(s.at("rate.grid_sizes"), ',')) {
            const long long n = to_int("rate.grid_sizes", v);
            if (n < 1) throw ConfigError("rate.grid_sizes entries must be positive");
            if (!cfg.grid_sizes.empty() && n <= cfg.grid_sizes.back())
                throw ConfigError("rate.grid_sizes must be strictly increasing");
            cfg.grid_sizes.push_back(static_cast<int>(n));
        }
        if (cfg.grid_sizes.size() < 2) throw ConfigError("rate.grid_sizes needs at least two entries");
    }
    const std::string eps_key = s.count("bound.eps") ? "bound.eps" : "entropy.eps";
    if (s.count(eps_key)) {
        cfg.eps_list = to_doubles(eps_key, s.at(eps_key));
        if (cfg.eps_list.empty()) throw ConfigError(eps_key + " must list at least one value");
    }
    if (s.count("bound.policies")) {
        cfg.bound_policies = to_names("bound.policies", s.at("bound.policies"), policy_names);
    }
    if (s.count("entropy.strategy")) {
        cfg.candidates.strategy = candidate_strategy_from_string(s.at("entropy.strategy"));
        cfg.candidates.count = static_cast<int>(to_int("entropy.count", s.at("entropy.count")));
        if (cfg.candidates.count < 1) throw ConfigError("entropy.count must be at least 1");
        cfg.candidates.n_knots = static_cast<int>(to_int("entropy.n_knots", s.at("entropy.n_knots")));
        if (cfg.candidates.n_knots < 1) throw ConfigError("entropy.n_knots must be at least 1");
        cfg.candidates.eval_resolution =
            static_cast<int>(to_int("entropy.eval_resolution", s.at("entropy.eval_resolution")));
        if (cfg.candidates.eval_resolution < 0) throw ConfigError("entropy.eval_resolution must be nonnegative");
        cfg.candidates.include_zero = to_bool("entropy.include_zero", s.at("entropy.include_zero"));
        cfg.candidates.mode = sampling_mode_from_string(s.at("entropy.sampling_mode"));
        cfg.candidates.seed = cfg.seed;
    }
    if (s.count("quadratic.matrix")) {
        const auto a = to_doubles("quadratic.matrix", s.at("quadratic.matrix"));
        const int d = cfg.domain.dim();
        if (a.size() != static_cast<std::size_t>(d * d))
            throw ConfigError("quadratic.matrix must have domain.dim^2 entries (row-major)");
        cfg.quadratic_matrix = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            a.data(), d, d);
        if ((cfg.quadratic_matrix - cfg.quadratic_matrix.transpose()).cwiseAbs().maxCoeff() > 0.0)
            throw ConfigError("quadratic.matrix must be symmetric");
        for (const auto& p : split(s.at("quadratic.samples"), ';')) {
            Point x = to_point("quadratic.samples", p);
            if (x.size() != d) throw ConfigError("quadratic.samples points must have domain.dim coordinates");
            cfg.quadratic_samples.push_back(std::move(x));
        }
        if (cfg.quadratic_samples.empty()) throw ConfigError("quadratic.samples must list at least one point");
    }
    return cfg;
}

std::string dump_settings(const KeyValues& settings) {
    std::string out;
    for (const auto& [k, v] : settings) out += k + " = " + v + "\n";
    return out;
}

std::unique_ptr<Policy> make_policy(const std::string& name, const ExperimentConfig& config, std::size_t budget) {
    const int d = config.domain.dim();
    if (name == "lcb") {
        return std::make_unique<LcbPolicy>(config.kernel, config.domain, config.search, config.beta, config.variant,
                                           config.R, config.first_point);
    }
    if (name == "ei") return std::make_unique<EiPolicy>(config.kernel, config.domain, config.search, config.first_point);
    if (name == "grid") {
        int n = config.grid_points_per_dim;
        if (n == 0) {
            n = 1;
            while (std::pow(static_cast<double>(n), d) < static_cast<double>(budget)) ++n;
        }
        return std::make_unique<GridPolicy>(config.kernel, config.domain, n, config.R, config.search);
    }
    if (name == "two_phase") {
        return std::make_unique<TwoPhasePolicy>(config.kernel, config.domain, config.R, std::max<std::size_t>(budget, 2),
                                                config.search);
    }
    throw ConfigError("unknown policy '" + name + "'");
}

}  // namespace wcbo::harness

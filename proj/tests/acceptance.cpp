// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance <path-to-wcbo-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "wcbo/adversary.hpp"
#include "wcbo/errors.hpp"
#include "wcbo/harness/commands.hpp"
#include "wcbo/harness/config.hpp"
#include "wcbo/harness/io.hpp"

using namespace wcbo;
using namespace wcbo::harness;

namespace {

// Tolerances and runtime limits (seconds).
constexpr double kInterpResidualTol = 1e-6;
constexpr double kDesignSdTol = 1e-6;
constexpr double kPythagorasRelTol = 1e-6;
constexpr double kEnvelopeTol = 1e-6;
constexpr double kWitnessZeroTol = 1e-8;
constexpr double kWitnessNormTol = 1e-6;
constexpr double kWitnessValueTol = 1e-8;
constexpr double kQpTol = 1e-6;
constexpr double kDemoRegretTol = 1e-6;
constexpr double kWidthSlack = 1e-12;
constexpr double kSlopeLow = -3.2;
constexpr double kSlopeHigh = -1.8;
constexpr double kCertificateSlack = 1e-6;
constexpr double kQuadraticTol = 1e-8;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fixed(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(std::move(cells));
    }
    return out;
}

KernelSpec random_kernel(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> scale(0.2, 1.0);
    const int pick = static_cast<int>(rng() % 5);
    if (pick == 4) return KernelSpec::squared_exponential(scale(rng));
    return KernelSpec::matern(0.5 + pick, scale(rng));
}

Point random_point(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return Point::NullaryExpr(d, [&] { return u(rng); });
}

Outcome interpolation_invariants() {
    std::mt19937_64 rng(1001);
    std::normal_distribution<double> n01;
    double max_res = 0.0, max_sd = 0.0, max_pyth = 0.0;
    int replaced = 0;
    for (int c = 0; c < 200; ++c) {
        const KernelSpec k = random_kernel(rng);
        const int d = 1 + c % 3;
        const int t = 1 + static_cast<int>(rng() % 12);
        PointList centers;
        Eigen::VectorXd w(t + 6);
        for (int i = 0; i < t + 6; ++i) {
            centers.push_back(random_point(rng, d));
            w[i] = n01(rng);
        }
        const RkhsFunction f(k, centers, w);
        Design design;
        for (int i = 0; i < t; ++i) {
            Point x = random_point(rng, d);
            design.add(x, f(x));
        }
        const Posterior post = Posterior::fit(k, design);
        if (post.jitter_used() > 0.0) {  // numerically singular Gram; exact interpolation is out of reach
            ++replaced;
            --c;
            continue;
        }
        for (int i = 0; i < t; ++i) {
            max_res = std::max(max_res, std::abs(post.mean(design.points[i]) - design.values[i]));
            max_sd = std::max(max_sd, post.sd(design.points[i]));
        }
        PointList all = centers;
        all.insert(all.end(), design.points.begin(), design.points.end());
        Eigen::VectorXd diff(w.size() + t);
        diff << w, -post.alpha();
        const double f2 = w.dot(oracle::gram_matrix(k, centers) * w);
        const double r2 = diff.dot(oracle::gram_matrix(k, all) * diff);
        max_pyth = std::max(max_pyth, std::abs(f2 - post.norm_sq() - r2) / std::max(f2, 1e-300));
    }
    return {max_res <= kInterpResidualTol && max_sd <= kDesignSdTol && max_pyth <= kPythagorasRelTol,
            "200 cases (" + std::to_string(replaced) + " singular draws replaced), max residual " + fixed(max_res) + ", max design sd " + fixed(max_sd) +
                ", max norm-split error " + fixed(max_pyth)};
}

Outcome envelope_containment() {
    std::mt19937_64 rng(2002);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t violations = 0, checks = 0;
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
        const KernelSpec k = random_kernel(rng);
        const int d = 1 + c % 2;
        const BoxDomain dom = BoxDomain::cube(d, 0.0, 1.0);
        const double R = 0.5 + 1.5 * u(rng);
        const RkhsFunction f = sample_rkhs(k, dom, 12, R, 500 + c, SamplingMode::Rescale).function;
        Design design;
        const int t = 1 + static_cast<int>(rng() % 15);
        for (int i = 0; i < t; ++i) {
            Point x = random_point(rng, d);
            design.add(x, f(x));
        }
        const Posterior post = Posterior::fit(k, design, R);
        for (int j = 0; j < 200; ++j) {
            const Point x = random_point(rng, d);
            const Envelope env = post.envelope(R, x);
            const double v = f(x);
            const double excess = std::max(env.lower - v, v - env.upper);
            worst = std::max(worst, excess);
            if (excess > kEnvelopeTol) ++violations;
            ++checks;
        }
    }
    return {violations == 0, std::to_string(checks) + " checks, " + std::to_string(violations) +
                                 " violations, worst excess " + fixed(worst)};
}

Outcome witness_oracle() {
    std::mt19937_64 rng(3003);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double max_zero = 0.0, max_norm = 0.0, max_value = 0.0, max_qp = 0.0;
    int cases = 0;
    while (cases < 50) {
        const KernelSpec k = random_kernel(rng);
        const int d = 1 + cases % 2;
        PointList X;
        const int t = static_cast<int>(rng() % 8);
        for (int i = 0; i < t; ++i) X.push_back(random_point(rng, d));
        const Point target = random_point(rng, d);
        const double R = 0.5 + u(rng);
        const Posterior post = zero_posterior(k, X);
        if (post.sd(target) <= 1e-3) continue;  // keep the oracle's null-space solve well posed
        const RkhsFunction w = adversarial_witness(post, R, target);
        for (const auto& x : X) max_zero = std::max(max_zero, std::abs(w(x)));
        max_norm = std::max(max_norm, std::abs(w.norm() - R));
        max_value = std::max(max_value, std::abs(w(target) + R * post.sd(target)));
        max_qp = std::max(max_qp, std::abs(w(target) - oracle::constrained_qp_min(k, X, target, R)));
        ++cases;
    }
    return {max_zero <= kWitnessZeroTol && max_norm <= kWitnessNormTol && max_value <= kWitnessValueTol &&
                max_qp <= kQpTol,
            "50 cases, max |s(x_i)| " + fixed(max_zero) + ", max norm error " + fixed(max_norm) +
                ", max value error " + fixed(max_value) + ", max QP gap " + fixed(max_qp)};
}

Outcome adversarial_demo() {
    const ExperimentConfig cfg = resolve_config("demo-adversarial", {});
    RunOptions opt;
    opt.jobs = jobs();
    const OutputSet out = cmd_demo_adversarial(cfg, opt);
    bool ok = true;
    std::string detail;
    for (const std::string policy : {"lcb", "ei"}) {
        const auto curve = parse_csv(out.content("demo_" + policy + "_adversarial.csv"));
        const double r1 = std::stod(curve.at(2).at(1));
        const bool r1_ok = std::abs(r1 - 1.0) <= kDemoRegretTol;
        double max_increase = -1.0;
        std::vector<double> prev;
        for (std::size_t t : cfg.snapshots) {
            const auto table = parse_csv(out.content("demo_" + policy + "_t" + std::to_string(t) + ".csv"));
            std::vector<double> width;
            for (std::size_t i = 1; i < table.size(); ++i) width.push_back(std::stod(table[i][2]) - std::stod(table[i][1]));
            if (!prev.empty()) {
                for (std::size_t i = 0; i < width.size(); ++i) max_increase = std::max(max_increase, width[i] - prev[i]);
            }
            prev = std::move(width);
        }
        const bool mono = max_increase <= kWidthSlack;
        ok = ok && r1_ok && mono;
        detail += policy + ": regret(t=1) " + fixed(r1, 12) + ", max width increase " + fixed(max_increase) + "; ";
    }
    return {ok, detail};
}

Outcome average_vs_adversarial() {
    bool ok = true;
    std::string detail;
    for (const std::string kernel : {"matern", "se"}) {
        const ExperimentConfig cfg = resolve_config("regret-compare", {{"kernel.name", kernel}});
        RunOptions opt;
        opt.jobs = jobs();
        const OutputSet out = cmd_regret_compare(cfg, opt);
        const auto table = parse_csv(out.content("regret.csv"));
        const auto& last = table.back();
        const double mean = std::stod(last[1]), adv = std::stod(last[3]);
        ok = ok && mean < adv;
        detail += cfg.kernel.describe() + ": mean " + fixed(mean) + " vs adversarial " + fixed(adv) + " at t=" +
                  last[0] + "; ";
    }
    return {ok, detail + "20 instances, [0,1]^3"};
}

Outcome matern_rate() {
    const ExperimentConfig cfg = resolve_config("rate-fit", {});
    const OutputSet out = cmd_rate_fit(cfg, RunOptions{});
    if (!out.summary.contains("loglog_slope")) return {false, "too few usable grid sizes"};
    const double slope = out.summary["loglog_slope"].get<double>();
    const bool dec = out.summary["strictly_decreasing"].get<bool>();
    return {slope >= kSlopeLow && slope <= kSlopeHigh && dec,
            "N=8..64, slope " + fixed(slope, 4) + " (theory -2.5), strictly decreasing " + (dec ? "yes" : "no")};
}

Outcome se_decay() {
    const ExperimentConfig cfg = resolve_config(
        "rate-fit", {{"kernel.name", "se"}, {"kernel.lengthscale", "0.3"}, {"rate.grid_sizes", "4,6,8,12,16"}});
    const OutputSet out = cmd_rate_fit(cfg, RunOptions{});
    const auto table = parse_csv(out.content("rate.csv"));
    std::vector<double> n, logs;
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (table[i][6] != "ok") break;  // stop at the conditioning floor
        n.push_back(std::stod(table[i][0]));
        logs.push_back(std::log(std::stod(table[i][2])));
    }
    if (n.size() < 3) return {false, "fewer than three rows above the conditioning floor"};
    bool increasing = true, steepening = true;
    std::string decs, slopes;
    double prev_dec = -1e300, prev_slope = 1e300;
    for (std::size_t i = 1; i < n.size(); ++i) {
        const double dec = logs[i - 1] - logs[i];
        const double local = -dec / std::log(n[i] / n[i - 1]);
        increasing = increasing && dec > prev_dec;
        steepening = steepening && local < prev_slope;
        prev_dec = dec;
        prev_slope = local;
        decs += fixed(dec) + " ";
        slopes += fixed(local) + " ";
    }
    return {increasing && steepening, std::to_string(n.size()) + " rows above floor; decrements " + decs +
                                          "; local log-log slopes " + slopes};
}

Outcome certificate() {
    const ExperimentConfig cfg = resolve_config("lower-bound-check", {});
    RunOptions opt;
    opt.jobs = jobs();
    const OutputSet out = cmd_lower_bound_check(cfg, opt);
    const auto table = parse_csv(out.content("certificates.csv"));
    bool ok = table.size() == 10;
    std::string detail;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const double regret = std::stod(table[i][4]), threshold = std::stod(table[i][5]);
        ok = ok && table[i][6] == "PASS" && regret >= threshold - kCertificateSlack;
        detail += table[i][0] + "@" + table[i][1] + ":t*=" + table[i][3] + " ";
    }
    return {ok, detail};
}

Outcome quadratic_exact() {
    const ExperimentConfig cfg = resolve_config("quadratic-recovery", {});
    const QuadraticRecovery rec = quadratic_recovery(cfg.quadratic_matrix, cfg.quadratic_samples, cfg.domain);
    return {rec.value_error <= kQuadraticTol && rec.determined,
            "d=2, 3 samples, recovered min " + fixed(rec.estimate.value) + ", error " + fixed(rec.value_error)};
}

Outcome determinism(const std::string& cli) {
    if (cli.empty()) return {false, "CLI path not given"};
    const std::map<std::string, std::string> configs = {
        {"demo-adversarial", ""},
        {"regret-compare", "budget = 10\nsampling.instances = 4\nsearch.points_per_dim = 15\n"},
        {"rate-fit", ""},
        {"lower-bound-check", ""},
        {"quadratic-recovery", ""},
        {"entropy-estimate", ""},
    };
    const auto root = std::filesystem::temp_directory_path() / "wcbo_acceptance_determinism";
    std::filesystem::remove_all(root);
    std::size_t compared = 0;
    std::string mismatches;
    for (const auto& [command, text] : configs) {
        const auto cfg_path = root / (command + ".cfg");
        write_file_atomic(cfg_path, text);
        std::vector<std::filesystem::path> dirs;
        for (const auto& [tag, j] : std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 1}, {"c", 8}}) {
            const auto dir = root / (command + "_" + tag);
            const std::string cmd = "\"" + cli + "\" " + command + " --config \"" + cfg_path.string() + "\" --out \"" +
                                    dir.string() + "\" --seed 7 --jobs " + std::to_string(j) + " > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) return {false, command + " exited with an error"};
            dirs.push_back(dir);
        }
        for (const auto& entry : std::filesystem::directory_iterator(dirs[0])) {
            if (entry.path().extension() != ".csv") continue;
            const std::string ref = read_file(entry.path());
            for (std::size_t k = 1; k < dirs.size(); ++k) {
                const auto other = dirs[k] / entry.path().filename();
                if (!std::filesystem::exists(other) || read_file(other) != ref)
                    mismatches += command + "/" + entry.path().filename().string() + " ";
            }
            ++compared;
        }
    }
    std::filesystem::remove_all(root);
    return {mismatches.empty() && compared > 0,
            std::to_string(compared) + " CSV files compared across 3 runs each (jobs 1, 1, 8)" +
                (mismatches.empty() ? "" : "; mismatches: " + mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    struct Criterion {
        std::string name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"interpolation invariants", 30, interpolation_invariants},
        {"envelope containment", 60, envelope_containment},
        {"adversarial witness oracle", 60, witness_oracle},
        {"1-D adversarial demo on [-10,10]", 120, adversarial_demo},
        {"average vs adversarial regret", 900, average_vs_adversarial},
        {"Matern power-function rate", 120, matern_rate},
        {"SE super-polynomial decay", 60, se_decay},
        {"lower-bound certificate", 600, certificate},
        {"quadratic exact recovery", 1, quadratic_exact},
        {"determinism", 300, [&] { return determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::cout << (pass ? "PASS" : "FAIL") << " " << i + 1 << " " << c.name << ": " << o.detail << " [" << fixed(secs)
                  << " s, limit " << c.limit_s << " s" << (in_time ? "" : ", too slow") << "]" << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
}

#include "wcbo/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "wcbo/adversary.hpp"
#include "wcbo/entropy.hpp"
#include "wcbo/errors.hpp"
#include "wcbo/harness/io.hpp"
#include "wcbo/harness/svg.hpp"

namespace wcbo::harness {

namespace {

const char* kDeskScaleNote =
    "desk-scale defaults: budgets <= 60 and 20 instances instead of the full-size runs; "
    "kernel hyperparameters are materialized in settings";

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

std::vector<std::string> coord_headers(const std::string& prefix, int d) {
    std::vector<std::string> out;
    for (int i = 1; i <= d; ++i) out.push_back(prefix + "_" + std::to_string(i));
    return out;
}

void append_point(std::vector<std::string>& cells, const Point& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) cells.push_back(fmt(x[i]));
}

void emit_table(OutputSet& out, const RunOptions& options, const std::string& stem, const CsvTable& table) {
    if (options.format == OutputFormat::Json) {
        out.add(stem + ".json", table.to_json().dump(2) + "\n");
    } else {
        out.add(stem + ".csv", table.str());
    }
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("--format must be csv or json (got '" + s + "')");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

const std::string& OutputSet::content(const std::string& name) const {
    for (const auto& f : files) {
        if (f.name == name) return f.content;
    }
    throw Error("no output named '" + name + "'");
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("slope fit needs at least two points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const double mx = mean_of(lx), my = mean_of(ly);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

OutputSet cmd_demo_adversarial(const ExperimentConfig& config, const RunOptions& options) {
    if (config.domain.dim() != 1) throw ConfigError("demo-adversarial needs domain.dim = 1");
    const std::size_t T = config.snapshots.back();
    const Eigen::MatrixXd xs = search_lattice(config.domain, config.demo_grid_points);
    const double R = config.R;

    struct Snapshot {
        std::size_t t = 0;
        Eigen::VectorXd lower, upper, witness;
        double witness_min = 0.0;
        bool degenerate = false;
    };
    struct Demo {
        ZeroSequence sequence;
        AdversarialCurve curve;
        std::vector<Snapshot> snapshots;
    };

    const std::function<Demo(std::size_t)> run_one = [&](std::size_t p) {
        Demo demo;
        const auto policy = make_policy(config.demo_policies[p], config, T);
        demo.sequence = zero_sequence(*policy, T);
        demo.curve = adversarial_regret_curve(demo.sequence, config.kernel, config.domain, R, config.search);
        for (std::size_t t : config.snapshots) {
            const PointList prefix(demo.sequence.points.begin(),
                                   demo.sequence.points.begin() + static_cast<std::ptrdiff_t>(t));
            const Posterior post = zero_posterior(config.kernel, prefix);
            const Moments m = post.predict(xs);
            const double rr = post.residual_radius(R);
            Snapshot snap;
            snap.t = t;
            snap.lower = m.mean - rr * m.sd;
            snap.upper = m.mean + rr * m.sd;
            try {
                const RkhsFunction w = adversarial_witness(post, R, demo.curve.at(t).argmax);
                snap.witness = w.evaluate(xs);
            } catch (const TargetDegenerate&) {
                snap.witness = Eigen::VectorXd::Zero(xs.cols());
                snap.degenerate = true;
            }
            snap.witness_min = snap.witness.minCoeff();
            demo.snapshots.push_back(std::move(snap));
        }
        return demo;
    };
    const auto demos = parallel_map<Demo>(config.demo_policies.size(), options.jobs, run_one);

    OutputSet out;
    out.summary["policies"] = nlohmann::json::object();
    for (std::size_t p = 0; p < demos.size(); ++p) {
        const std::string& name = config.demo_policies[p];
        const Demo& demo = demos[p];

        CsvTable seq({"t", "x"});
        for (std::size_t t = 0; t < demo.sequence.points.size(); ++t)
            seq.add_row({fmt(t + 1), fmt(demo.sequence.points[t][0])});
        emit_table(out, options, "demo_" + name + "_sequence", seq);

        CsvTable curve({"t", "adversarial_regret", "argmax", "jitter_used"});
        for (const auto& s : demo.curve.steps)
            curve.add_row({fmt(s.t), fmt(s.adversarial_regret), fmt(s.argmax[0]), fmt(s.jitter_used)});
        emit_table(out, options, "demo_" + name + "_adversarial", curve);

        SvgPlot plot("Adversarial functions, policy " + name, "x", "f(x)");
        const std::vector<double> xv = to_std(xs.row(0).transpose());
        double max_increase = -std::numeric_limits<double>::infinity();
        nlohmann::json snaps = nlohmann::json::array();
        for (std::size_t k = 0; k < demo.snapshots.size(); ++k) {
            const Snapshot& s = demo.snapshots[k];
            CsvTable table({"x", "lower", "upper", "witness"});
            for (Eigen::Index i = 0; i < xs.cols(); ++i)
                table.add_row({fmt(xs(0, i)), fmt(s.lower[i]), fmt(s.upper[i]), fmt(s.witness[i])});
            emit_table(out, options, "demo_" + name + "_t" + std::to_string(s.t), table);
            plot.add_band({xv, to_std(s.lower), to_std(s.upper), palette(k), 0.15});
            plot.add_line({"t=" + std::to_string(s.t), xv, to_std(s.witness), palette(k), false});
            if (k > 0) {
                const Eigen::VectorXd prev = demo.snapshots[k - 1].upper - demo.snapshots[k - 1].lower;
                const Eigen::VectorXd cur = s.upper - s.lower;
                max_increase = std::max(max_increase, (cur - prev).maxCoeff());
            }
            snaps.push_back({{"t", s.t},
                             {"adversarial_regret", demo.curve.at(s.t).adversarial_regret},
                             {"witness_min", s.witness_min},
                             {"target", demo.curve.at(s.t).argmax[0]},
                             {"degenerate", s.degenerate}});
        }
        out.add("demo_" + name + ".svg", plot.render());
        nlohmann::json js;
        js["snapshots"] = snaps;
        js["max_width_increase"] = demo.snapshots.size() > 1 ? max_increase : 0.0;
        out.summary["policies"][name] = js;
    }
    return out;
}

OutputSet cmd_regret_compare(const ExperimentConfig& config, const RunOptions& options) {
    const std::size_t T = config.budget;
    const int d = config.domain.dim();
    const auto policy = make_policy(config.policy, config, T);
    const bool cumulative = config.policy == "two_phase";

    struct Instance {
        RkhsSample sample;
        GroundTruth truth;
        RegretTrace trace;
        std::optional<CumulativeTrace> cum;
    };
    const std::function<Instance(std::size_t)> run_one = [&](std::size_t i) {
        const std::uint64_t seed = config.seed + i;
        // RejectionBudgetExhausted already names the rescale mode as the remedy.
        RkhsSample sample =
            sample_rkhs(config.kernel, config.domain, config.n_knots, config.R, seed, config.sampling_mode);
        GroundTruth truth = ground_truth(sample.function, config.domain, config.search);
        RegretTrace trace = run_policy(*policy, sample.function, T, truth);
        std::optional<CumulativeTrace> cum;
        if (cumulative) cum = two_phase(config.kernel, config.domain, config.R, T, sample.function, truth, config.search);
        return Instance{std::move(sample), std::move(truth), std::move(trace), std::move(cum)};
    };
    const auto instances = parallel_map<Instance>(static_cast<std::size_t>(config.instances), options.jobs, run_one);
    const AdversarialCurve adv = adversarial_regret_curve(*policy, T, config.kernel, config.R, config.search);

    OutputSet out;
    CsvTable regret({"t", "mean", "std", "adversarial"});
    std::vector<double> ts, means, lo, hi, advs;
    for (std::size_t t = 1; t <= T; ++t) {
        std::vector<double> r;
        for (const auto& inst : instances) r.push_back(inst.trace.regret_at(t));
        const double m = mean_of(r), s = sample_std(r, m);
        regret.add_row({fmt(t), fmt(m), fmt(s), fmt(adv.at(t).adversarial_regret)});
        ts.push_back(static_cast<double>(t));
        means.push_back(m);
        lo.push_back(m - s);
        hi.push_back(m + s);
        advs.push_back(adv.at(t).adversarial_regret);
    }
    emit_table(out, options, "regret", regret);

    std::vector<std::string> h = {"t", "adversarial_regret"};
    for (auto& c : coord_headers("argmax", d)) h.push_back(c);
    h.push_back("jitter_used");
    CsvTable curve(h);
    for (const auto& s : adv.steps) {
        std::vector<std::string> row = {fmt(s.t), fmt(s.adversarial_regret)};
        append_point(row, s.argmax);
        row.push_back(fmt(s.jitter_used));
        curve.add_row(std::move(row));
    }
    emit_table(out, options, "adversarial_curve", curve);

    CsvTable inst_table({"instance", "seed", "attempts", "norm", "min_value", "final_regret", "reported_regret"});
    h = {"instance", "t"};
    for (auto& c : coord_headers("x", d)) h.push_back(c);
    for (const char* c : {"value", "simple_regret", "reported"}) h.push_back(c);
    CsvTable trace_table(h);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        inst_table.add_row({fmt(i), std::to_string(config.seed + i), fmt(inst.sample.attempts),
                            fmt(inst.sample.function.norm()), fmt(inst.truth.min_value), fmt(inst.trace.regret_at(T)),
                            fmt(inst.trace.reported_value - inst.truth.min_value)});
        for (const auto& s : inst.trace.steps) {
            std::vector<std::string> row = {fmt(i), fmt(s.t)};
            append_point(row, s.x);
            row.push_back(fmt(s.value));
            row.push_back(fmt(s.simple_regret));
            row.push_back(s.reported ? "1" : "0");
            trace_table.add_row(std::move(row));
        }
    }
    emit_table(out, options, "instances", inst_table);
    emit_table(out, options, "traces", trace_table);

    if (cumulative) {
        CsvTable cum({"t", "phase", "mean_cumulative", "std_cumulative"});
        for (std::size_t k = 0; k < T; ++k) {
            std::vector<double> c;
            for (const auto& inst : instances) c.push_back(inst.cum->steps[k].cumulative_regret);
            const double m = mean_of(c);
            cum.add_row({fmt(k + 1), fmt(instances[0].cum->steps[k].phase), fmt(m), fmt(sample_std(c, m))});
        }
        emit_table(out, options, "cumulative", cum);
        out.summary["exploration_steps"] = instances[0].cum->exploration_steps;
        out.summary["exploration_points_per_dim"] = instances[0].cum->points_per_dim;
    }

    if (options.format == OutputFormat::Json) {
        auto fs = nlohmann::json::array();
        for (const auto& inst : instances) fs.push_back(to_json(inst.sample.function));
        out.add("functions.json", fs.dump(2) + "\n");
    }

    SvgPlot plot("Simple regret, " + config.policy + " (" + config.kernel.describe() + ")", "t", "regret");
    plot.add_band({ts, lo, hi, palette(0), 0.2});
    plot.add_line({"mean", ts, means, palette(0), false});
    plot.add_line({"adversarial", ts, advs, palette(1), true});
    out.add("regret.svg", plot.render());

    out.summary["policy"] = config.policy;
    out.summary["kernel"] = config.kernel.describe();
    out.summary["final_mean_regret"] = means.back();
    out.summary["final_adversarial_regret"] = advs.back();
    out.summary["mean_below_adversarial"] = means.back() < advs.back();
    return out;
}

OutputSet cmd_rate_fit(const ExperimentConfig& config, const RunOptions& options) {
    const int d = config.domain.dim();
    if (d != 1 && d != 2) throw ConfigError("rate-fit needs domain.dim 1 or 2");
    for (int n : config.grid_sizes) lattice_size(n, d, kDefaultGridCap);

    struct Row {
        int N = 0;
        std::size_t t = 0;
        double max_sigma = std::numeric_limits<double>::quiet_NaN();
        double jitter = std::numeric_limits<double>::quiet_NaN();
        std::string status = "ok";
    };
    const std::function<Row(std::size_t)> run_one = [&](std::size_t k) {
        Row row;
        row.N = config.grid_sizes[k];
        const PointList pts = grid(config.domain, row.N);
        row.t = pts.size();
        try {
            const Posterior post = zero_posterior(config.kernel, pts);
            BatchObjective sd = [&post](const Eigen::MatrixXd& q) -> Eigen::VectorXd { return post.sd(q); };
            row.max_sigma = maximize_on_box(sd, config.domain, config.search).value;
            row.jitter = post.jitter_used();
        } catch (const IllConditioned&) {
            row.status = "ill_conditioned";
        }
        return row;
    };
    const auto rows = parallel_map<Row>(config.grid_sizes.size(), options.jobs, run_one);

    OutputSet out;
    CsvTable table({"N", "t", "max_sigma", "bound", "jitter_used", "floor", "status", "decrement"});
    std::vector<double> ns, sigmas, decrements;
    double prev_log = std::numeric_limits<double>::quiet_NaN();
    bool strictly_decreasing = true;
    bool floor_reached = false;
    for (const auto& r : rows) {
        const bool ok = r.status == "ok";
        const double floor = ok ? 10.0 * std::sqrt(r.jitter) : std::numeric_limits<double>::quiet_NaN();
        std::string status = r.status;
        std::string dec;
        if (ok && r.max_sigma <= floor) {
            status = "floor";
            floor_reached = true;
        }
        if (status == "ok" && !floor_reached) {
            const double lg = std::log(r.max_sigma);
            if (!std::isnan(prev_log)) {
                decrements.push_back(prev_log - lg);
                dec = fmt(prev_log - lg);
                if (!(lg < prev_log)) strictly_decreasing = false;
            }
            prev_log = lg;
            ns.push_back(r.N);
            sigmas.push_back(r.max_sigma);
        }
        table.add_row({fmt(r.N), fmt(r.t), ok ? fmt(r.max_sigma) : "", ok ? fmt(2.0 * config.R * r.max_sigma) : "",
                       ok ? fmt(r.jitter) : "", ok ? fmt(floor) : "", status, dec});
    }
    emit_table(out, options, "rate", table);

    bool increasing = true;
    for (std::size_t i = 1; i < decrements.size(); ++i) {
        if (!(decrements[i] > decrements[i - 1])) increasing = false;
    }
    out.summary["kernel"] = config.kernel.describe();
    out.summary["usable_rows"] = ns.size();
    out.summary["strictly_decreasing"] = strictly_decreasing;
    out.summary["decrements"] = decrements;
    out.summary["decrements_increasing"] = increasing;
    if (ns.size() >= 2) out.summary["loglog_slope"] = loglog_slope(ns, sigmas);
    if (config.kernel.kind() == KernelKind::Matern) out.summary["theory_slope"] = -config.kernel.nu() / d;

    SvgPlot plot("Worst-case posterior deviation on a uniform grid", "N", "max sigma");
    plot.set_log_y(true);
    plot.add_line({config.kernel.describe(), ns, sigmas, palette(0), false});
    out.add("rate.svg", plot.render());
    return out;
}

OutputSet cmd_lower_bound_check(const ExperimentConfig& config, const RunOptions& options) {
    const EntropyReport report =
        entropy_report(config.kernel, config.domain, config.R, config.eps_list, config.candidates);

    OutputSet out;
    CsvTable entropy({"eps", "pack_scale", "packing_count", "log_packing", "lower_bound_steps"});
    for (const auto& r : report.rows)
        entropy.add_row({fmt(r.eps), fmt(8.0 * r.eps), fmt(r.packing_count), fmt(r.log_packing),
                         fmt(r.lower_bound_steps)});
    emit_table(out, options, "entropy", entropy);

    const std::size_t n_eps = report.rows.size();
    const std::function<CertificateReport(std::size_t)> run_one = [&](std::size_t k) {
        const std::string& name = config.bound_policies[k / n_eps];
        const EntropyRow& row = report.rows[k % n_eps];
        const auto policy = make_policy(name, config, std::max<std::size_t>(row.lower_bound_steps, 1));
        return certify_lower_bound(*policy, config.kernel, config.R, row.eps, row.packing_count, config.search);
    };
    const auto reports =
        parallel_map<CertificateReport>(config.bound_policies.size() * n_eps, options.jobs, run_one);

    CsvTable table({"policy", "eps", "packing_count", "t_star", "adversarial_regret", "threshold", "verdict"});
    bool all_pass = true;
    for (const auto& r : reports) {
        table.add_row({r.policy_id, fmt(r.eps), fmt(r.packing_count), fmt(r.steps), fmt(r.adversarial_regret),
                       fmt(r.threshold), r.pass ? "PASS" : "FAIL"});
        all_pass = all_pass && r.pass;
    }
    emit_table(out, options, "certificates", table);
    out.summary["all_pass"] = all_pass;
    out.summary["candidate_count"] = report.table.size();
    out.summary["eval_resolution"] = report.table.grid_resolution;
    return out;
}

QuadraticMinimum minimize_quadratic_on_box(const Eigen::MatrixXd& A, const BoxDomain& domain) {
    const int d = domain.dim();
    if (A.rows() != d || A.cols() != d) throw DimensionError("matrix size does not match the domain");
    if (d > 12) throw SizeOverflow("face enumeration is limited to d <= 12");
    std::size_t faces = 1;
    for (int i = 0; i < d; ++i) faces *= 3;

    QuadraticMinimum best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::size_t code = 0; code < faces; ++code) {
        // digit 0: lower bound, 1: upper bound, 2: free
        Point x(d);
        std::vector<int> free_idx, fixed_idx;
        std::size_t c = code;
        for (int i = 0; i < d; ++i) {
            const int digit = static_cast<int>(c % 3);
            c /= 3;
            if (digit == 2) {
                free_idx.push_back(i);
            } else {
                x[i] = digit == 0 ? domain.lower()[i] : domain.upper()[i];
                fixed_idx.push_back(i);
            }
        }
        if (!free_idx.empty()) {
            const auto nf = static_cast<Eigen::Index>(free_idx.size());
            Eigen::MatrixXd Aff(nf, nf);
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
            for (Eigen::Index a = 0; a < nf; ++a) {
                for (Eigen::Index b = 0; b < nf; ++b) Aff(a, b) = A(free_idx[a], free_idx[b]);
                for (int j : fixed_idx) rhs[a] -= A(free_idx[a], j) * x[j];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(Aff);
            if (!lu.isInvertible()) continue;
            const Eigen::VectorXd xf = lu.solve(rhs);
            bool inside = true;
            for (Eigen::Index a = 0; a < nf; ++a) {
                const int i = free_idx[a];
                const double tol = 1e-12 * (domain.upper()[i] - domain.lower()[i]);
                if (xf[a] < domain.lower()[i] - tol || xf[a] > domain.upper()[i] + tol) inside = false;
                x[i] = std::clamp(xf[a], domain.lower()[i], domain.upper()[i]);
            }
            if (!inside) continue;
        }
        const double v = x.dot(A * x);
        if (v < best.value) {
            best.value = v;
            best.argmin = x;
        }
    }
    return best;
}

QuadraticRecovery quadratic_recovery(const Eigen::MatrixXd& A, const PointList& samples, const BoxDomain& domain) {
    const int d = domain.dim();
    const KernelSpec kernel = KernelSpec::quadratic();
    const Eigen::MatrixXd K = gram(kernel, samples);
    const auto n = static_cast<Eigen::Index>(samples.size());
    const Eigen::Index full = static_cast<Eigen::Index>(d) * (d + 1) / 2;

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(K);
    cod.setThreshold(1e-10);
    if (cod.rank() < std::min(n, full)) {
        throw IllConditioned("quadratic samples are not generic: Gram rank " + std::to_string(cod.rank()) +
                             " < " + std::to_string(std::min(n, full)));
    }
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = samples[i].dot(A * samples[i]);
    const Eigen::VectorXd alpha = cod.solve(y);

    QuadraticRecovery rec;
    rec.recovered = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) rec.recovered += alpha[i] * samples[i] * samples[i].transpose();
    rec.truth = minimize_quadratic_on_box(A, domain);
    rec.estimate = minimize_quadratic_on_box(rec.recovered, domain);
    rec.value_error = std::abs(rec.estimate.value - rec.truth.value);
    rec.matrix_error = (rec.recovered - A).cwiseAbs().maxCoeff();
    rec.determined = n >= full;
    return rec;
}

OutputSet cmd_quadratic_recovery(const ExperimentConfig& config, const RunOptions& options) {
    if (config.kernel.kind() != KernelKind::Quadratic) throw ConfigError("quadratic-recovery needs kernel.name = quadratic");
    const int d = config.domain.dim();
    const QuadraticRecovery rec = quadratic_recovery(config.quadratic_matrix, config.quadratic_samples, config.domain);

    OutputSet out;
    std::vector<std::string> h = {"samples", "determined", "true_min", "recovered_min", "value_error", "matrix_error"};
    for (auto& c : coord_headers("true_argmin", d)) h.push_back(c);
    for (auto& c : coord_headers("recovered_argmin", d)) h.push_back(c);
    CsvTable table(h);
    std::vector<std::string> row = {fmt(config.quadratic_samples.size()), rec.determined ? "1" : "0",
                                    fmt(rec.truth.value), fmt(rec.estimate.value), fmt(rec.value_error),
                                    fmt(rec.matrix_error)};
    append_point(row, rec.truth.argmin);
    append_point(row, rec.estimate.argmin);
    table.add_row(std::move(row));
    emit_table(out, options, "recovery", table);

    CsvTable matrix({"i", "j", "true", "recovered"});
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j)
            matrix.add_row({fmt(i), fmt(j), fmt(config.quadratic_matrix(i, j)), fmt(rec.recovered(i, j))});
    }
    emit_table(out, options, "recovered_matrix", matrix);

    out.summary["determined"] = rec.determined;
    out.summary["true_min"] = rec.truth.value;
    out.summary["recovered_min"] = rec.estimate.value;
    out.summary["value_error"] = rec.value_error;
    out.summary["kernel_bounded_by_one"] = config.kernel.unit_bounded_on(config.domain);
    return out;
}

OutputSet cmd_entropy_estimate(const ExperimentConfig& config, const RunOptions& options) {
    const EntropyReport report =
        entropy_report(config.kernel, config.domain, config.R, config.eps_list, config.candidates);
    const int d = config.domain.dim();

    OutputSet out;
    CsvTable entropy({"eps", "pack_scale", "packing_count", "log_packing", "lower_bound_steps"});
    for (const auto& r : report.rows)
        entropy.add_row({fmt(r.eps), fmt(8.0 * r.eps), fmt(r.packing_count), fmt(r.log_packing),
                         fmt(r.lower_bound_steps)});
    emit_table(out, options, "entropy", entropy);

    std::vector<RateFamily> families;
    if (config.kernel.kind() == KernelKind::SquaredExponential) families = {RateFamily::SeLower, RateFamily::SeUpper};
    if (config.kernel.kind() == KernelKind::Matern) families = {RateFamily::MaternLower, RateFamily::MaternUpper};
    CsvTable rates({"eps", "family", "value"});
    for (const auto& r : report.rows) {
        for (RateFamily f : families)
            rates.add_row({fmt(r.eps), to_string(f), fmt(rate_theoretical(f, config.R, r.eps, d, config.kernel.nu()))});
    }
    emit_table(out, options, "rates", rates);

    nlohmann::json prov;
    prov["strategy"] = to_string(report.options.strategy);
    prov["seed"] = report.options.seed;
    prov["grid_resolution"] = report.table.grid_resolution;
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < report.table.size(); ++i)
        rows.push_back({{"index", i}, {"source", to_string(report.table.provenance[i])}, {"norm", report.table.norms[i]}});
    prov["candidates"] = rows;
    auto packs = nlohmann::json::array();
    for (const auto& r : report.rows) {
        const PackingEstimate p = greedy_packing(report.table, 8.0 * r.eps);
        packs.push_back({{"eps", r.eps}, {"pack_scale", 8.0 * r.eps}, {"selected", p.selected_indices}});
    }
    prov["packings"] = packs;
    out.add("provenance.json", prov.dump(2) + "\n");

    out.summary["candidate_count"] = report.table.size();
    out.summary["packing_counts"] = nlohmann::json::array();
    for (const auto& r : report.rows) out.summary["packing_counts"].push_back(r.packing_count);
    return out;
}

OutputSet run_command(const ExperimentConfig& config, const RunOptions& options) {
    const std::string& c = config.command;
    if (c == "demo-adversarial") return cmd_demo_adversarial(config, options);
    if (c == "regret-compare") return cmd_regret_compare(config, options);
    if (c == "rate-fit") return cmd_rate_fit(config, options);
    if (c == "lower-bound-check") return cmd_lower_bound_check(config, options);
    if (c == "quadratic-recovery") return cmd_quadratic_recovery(config, options);
    if (c == "entropy-estimate") return cmd_entropy_estimate(config, options);
    throw ConfigError("unknown command '" + c + "'");
}

nlohmann::json write_outputs(const ExperimentConfig& config, const RunOptions& options, const OutputSet& outputs,
                             double wall_seconds) {
    std::filesystem::create_directories(options.out_dir);
    nlohmann::json files = nlohmann::json::array();
    auto record = [&](const std::string& name, const std::string& content) {
        write_file_atomic(options.out_dir / name, content);
        files.push_back({{"name", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
    };
    for (const auto& f : outputs.files) record(f.name, f.content);
    record("summary.json", outputs.summary.dump(2) + "\n");

    const std::string dump = "command = " + config.command + "\n" + dump_settings(config.settings);
    nlohmann::json manifest;
    manifest["command"] = config.command;
    manifest["settings"] = config.settings;
    manifest["input_hash"] = git_blob_sha1(dump);
    manifest["files"] = files;
    manifest["jobs"] = options.jobs;
    manifest["format"] = to_string(options.format);
    manifest["wall_seconds"] = wall_seconds;
    manifest["note"] = kDeskScaleNote;
    write_file_atomic(options.out_dir / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

}  // namespace wcbo::harness

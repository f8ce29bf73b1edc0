#include "aqem/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "aqem/config.hpp"
#include "aqem/errors.hpp"
#include "aqem/parallel.hpp"
#include "aqem/persistence.hpp"
#include "aqem/power_law.hpp"
#include "aqem/quantum_walk.hpp"
#include "aqem/statistics.hpp"
#include "aqem/trainer.hpp"

namespace aqem {

namespace {

std::string fixed(double value, int digits = 6) {
    if (!std::isfinite(value)) {
        return format_double(value);
    }
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
    return buffer;
}

void log_header(std::ostream& err, const char* command, std::uint64_t seed) {
    err << "aqem " << version() << " " << command << " seed=" << seed << '\n';
}

void print_report(std::ostream& out, const FitnessReport& r) {
    out << "sharpness = " << format_double(r.sharpness) << '\n'
        << "holevo_imprecision = " << format_double(r.holevo_imprecision) << '\n'
        << "rmse = " << format_double(r.rmse) << '\n'
        << "K = " << r.samples << '\n'
        << "seed = " << r.seed.master_seed << ":" << r.seed.stream_id << '\n';
}

EstimationProblem problem_for(const PolicyFile& f) {
    if (f.problem == ProblemKind::Interferometer) {
        return EstimationProblem::interferometer(f.n);
    }
    return EstimationProblem::walk(f.n, f.steps.value_or(10), f.walk_start.value_or(WalkerStart::Balanced));
}

struct TrainOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<unsigned> threads;
};

int run_train(const TrainOptions& opt, std::ostream& out, std::ostream& err) {
    RunConfig config = parse_config(opt.config, err);
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        config.output_dir = env;
        err << "config: output_dir = " << env << " (from " << kOutputDirEnv << ")\n";
    }
    if (opt.output) {
        config.output_dir = *opt.output;
    }
    if (opt.seed) {
        config.ladder.master_seed = *opt.seed;
    }
    if (opt.threads) {
        config.ladder.threads = *opt.threads;
    }
    log_header(err, "train", config.ladder.master_seed);
    err << describe(config);

    const LadderResult result = run_ladder(config.ladder, config.output_dir);

    out << "N,sharpness,holevo_imprecision,rmse,repetitions,ratio_met\n";
    for (const auto& r : result.rungs) {
        out << r.n << ',' << fixed(r.report.sharpness) << ',' << fixed(r.report.holevo_imprecision) << ','
            << fixed(r.report.rmse) << ',' << r.repetitions << ',' << (r.ratio_met ? "yes" : "no") << '\n';
    }
    if (result.scaling) {
        out << "exponent (holevo) = " << fixed(result.scaling->exponent, 4) << '\n';
    }
    if (result.rmse_scaling) {
        out << "exponent (rmse) = " << fixed(result.rmse_scaling->exponent, 4) << '\n';
    }

    if (config.baseline) {
        std::vector<ResultRow> rows;
        for (const auto& r : result.rungs) {
            const EstimationProblem problem = config.ladder.make_problem(r.n);
            const std::vector<double> zeros(static_cast<std::size_t>(r.n), 0.0);
            RungResult base;
            base.n = r.n;
            base.report = problem.evaluate(zeros, config.ladder.report_samples,
                                           report_seed(config.ladder.master_seed, r.n),
                                           resolve_threads(config.ladder.threads));
            if (!config.ladder.record_wall_time) {
                base.report.wall_time_s = 0.0;
            }
            rows.push_back(make_result_row(config.ladder, base));
        }
        write_results(config.output_dir / "baseline.csv", rows);
    }
    if (config.oracle && config.ladder.problem == ProblemKind::Interferometer) {
        std::string text = "N,sharpness_exact,sharpness_mc,abs_difference,three_sigma\n";
        for (const auto& r : result.rungs) {
            if (r.n > kMaxOraclePhotons) {
                continue;
            }
            const double exact = exact_sharpness_oracle(r.policy, config.oracle_grid);
            const double s = r.report.sharpness;
            const double bound = 3.0 * std::sqrt((1.0 - s * s) / static_cast<double>(r.report.samples));
            text += std::to_string(r.n) + ',' + format_double(exact) + ',' + format_double(s) + ',' +
                    format_double(std::abs(exact - s)) + ',' + format_double(bound) + '\n';
        }
        std::ofstream file(config.output_dir / "oracle.csv", std::ios::trunc);
        if (!file) {
            throw IoError("cannot write " + (config.output_dir / "oracle.csv").string());
        }
        file << text;
    }
    return 0;
}

}  // namespace

const char* version() {
    return AQEM_VERSION;
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive quantum estimation: train and evaluate feedback policies", "aqem"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    TrainOptions train;
    auto* train_cmd = app.add_subcommand("train", "Train a ladder of policies from a config file");
    train_cmd->add_option("--config", train.config, "Config file")->required();
    train_cmd->add_option("--seed", train.seed, "Master seed (overrides the config)");
    train_cmd->add_option("--output", train.output, "Output directory (overrides config and environment)");
    train_cmd->add_option("--threads", train.threads, "Worker threads, 0 for all cores");

    std::string policy_path;
    std::size_t samples = 1'000'000;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Re-score a policy file");
    evaluate_cmd->add_option("--policy", policy_path, "Policy JSON file")->required();
    evaluate_cmd->add_option("--samples,-K", samples, "Monte Carlo pulses")->check(CLI::PositiveNumber);
    evaluate_cmd->add_option("--seed", seed, "Master seed (default: the policy's)");
    evaluate_cmd->add_option("--threads", threads, "Worker threads, 0 for all cores");

    std::size_t grid = 512;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact sharpness of an interferometer policy");
    oracle_cmd->add_option("--policy", policy_path, "Policy JSON file")->required();
    oracle_cmd->add_option("--grid", grid, "Phase grid points");
    oracle_cmd->add_option("--samples,-K", samples, "Monte Carlo pulses for the comparison")
        ->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--seed", seed, "Master seed (default: the policy's)");
    oracle_cmd->add_option("--threads", threads, "Worker threads, 0 for all cores");

    std::string results;
    std::string column = "holevo_imprecision";
    auto* scaling_cmd = app.add_subcommand("scaling", "Fit Delta ~ N^-p to a results table");
    scaling_cmd->add_option("--results", results, "Results CSV")->required();
    scaling_cmd->add_option("--column", column, "Column to fit")
        ->check(CLI::IsMember({"holevo_imprecision", "rmse"}));

    int steps = 10;
    std::optional<double> bias;
    std::optional<double> theta;
    std::string start = "symmetric";
    auto* walk_cmd = app.add_subcommand("simulate-walk", "Print the position distribution of one walker");
    walk_cmd->add_option("--steps,-t", steps, "Walk duration")->check(CLI::PositiveNumber);
    auto* bias_opt = walk_cmd->add_option("--phi", bias, "Coin bias phi = sin^2(theta)")->check(CLI::Range(0.0, 1.0));
    walk_cmd->add_option("--theta", theta, "Coin angle in [0, pi/2]")->excludes(bias_opt);
    walk_cmd->add_option("--start", start, "symmetric or balanced")->check(CLI::IsMember({"symmetric", "balanced"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back();
    }
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train_cmd->parsed()) {
            return run_train(train, out, err);
        }
        if (evaluate_cmd->parsed()) {
            const PolicyFile f = read_policy_file(policy_path);
            const std::uint64_t master = seed.value_or(f.master_seed);
            log_header(err, "evaluate", master);
            err << "policy = " << policy_path << "\nK = " << samples << "\nthreads = " << threads << '\n';
            const EstimationProblem problem = problem_for(f);
            const FitnessReport r = problem.evaluate(f.deltas, samples, report_seed(master, f.n), resolve_threads(threads));
            print_report(out, r);
            return 0;
        }
        if (oracle_cmd->parsed()) {
            const PolicyFile f = read_policy_file(policy_path);
            if (f.problem != ProblemKind::Interferometer) {
                throw DomainError("the exact oracle covers interferometer policies only");
            }
            const std::uint64_t master = seed.value_or(f.master_seed);
            log_header(err, "oracle", master);
            err << "policy = " << policy_path << "\ngrid = " << grid << "\nK = " << samples << '\n';
            const double exact = exact_sharpness_oracle(f.deltas, grid);
            const EstimationProblem problem = problem_for(f);
            const FitnessReport r = problem.evaluate(f.deltas, samples, report_seed(master, f.n), resolve_threads(threads));
            const double bound = 3.0 * std::sqrt((1.0 - r.sharpness * r.sharpness) / static_cast<double>(samples));
            out << "S_exact = " << format_double(exact) << '\n'
                << "S_MC = " << format_double(r.sharpness) << '\n'
                << "|S_exact - S_MC| = " << format_double(std::abs(exact - r.sharpness)) << '\n'
                << "3 sigma = " << format_double(bound) << '\n';
            return 0;
        }
        if (scaling_cmd->parsed()) {
            log_header(err, "scaling", 0);
            err << "results = " << results << "\ncolumn = " << column << '\n';
            std::vector<ScalingPoint> points;
            for (const auto& row : read_results(results)) {
                const double value = column == "rmse" ? row.rmse : row.holevo_imprecision;
                points.push_back({row.n, value});
            }
            const ScalingFit fit = fit_power_law(points);
            out << "exponent = " << fixed(fit.exponent, 4) << '\n'
                << "intercept = " << format_double(fit.intercept) << '\n'
                << "residual = " << format_double(fit.residual) << '\n'
                << "points = " << points.size() << '\n';
            return 0;
        }
        if (walk_cmd->parsed()) {
            log_header(err, "simulate-walk", 0);
            const CoinAngle angle = theta ? CoinAngle{*theta} : CoinAngle::from_bias(bias.value_or(0.5));
            const WalkerStart ws = parse_walker_start(start);
            err << "t = " << steps << "\ntheta = " << format_double(angle.theta) << "\nphi = "
                << format_double(angle.bias()) << "\nstart = " << walker_start_name(ws) << '\n';
            const auto p = simulate_position_distribution(steps, angle, ws);
            out << "x,probability\n";
            double total = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                total += p[i];
                out << static_cast<int>(i) - steps << ',' << format_double(p[i]) << '\n';
            }
            err << "total = " << format_double(total) << "\nskewness = " << format_double(skewness(as_distribution(p)))
                << '\n';
            return 0;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

int cli_dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace aqem

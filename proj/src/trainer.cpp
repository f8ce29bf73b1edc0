#include "aqem/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "aqem/errors.hpp"
#include "aqem/parallel.hpp"
#include "aqem/persistence.hpp"
#include "aqem/statistics.hpp"

namespace aqem {

namespace {

constexpr std::size_t kPulsesPerBlock = 4096;

// Stream tags keep the search, selection and report streams apart.
constexpr std::uint64_t kTagSearch = 0x5345415243480000ULL;
constexpr std::uint64_t kTagEvaluate = 0x4556414c00000000ULL;
constexpr std::uint64_t kTagSelect = 0x53454c4543540000ULL;
constexpr std::uint64_t kTagReport = 0x5245504f52540000ULL;

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct BlockTotals {
    PhasorSum phasors;
    double squares = 0.0;
};

}  // namespace

const char* problem_name(ProblemKind kind) {
    return kind == ProblemKind::Interferometer ? "interferometer" : "walk";
}

ProblemKind parse_problem(const std::string& name) {
    if (name == "interferometer") {
        return ProblemKind::Interferometer;
    }
    if (name == "walk") {
        return ProblemKind::Walk;
    }
    throw ConfigError("unknown problem '" + name + "' (expected interferometer or walk)");
}

const char* optimizer_name(OptimizerKind kind) {
    return kind == OptimizerKind::DE ? "de" : "pso";
}

OptimizerKind parse_optimizer(const std::string& name) {
    if (name == "de") {
        return OptimizerKind::DE;
    }
    if (name == "pso") {
        return OptimizerKind::PSO;
    }
    throw ConfigError("unknown optimizer '" + name + "' (expected de or pso)");
}

EstimationProblem EstimationProblem::interferometer(int photons) {
    EstimationProblem p;
    p.kind_ = ProblemKind::Interferometer;
    p.particles_ = photons;
    p.interferometer_.emplace(photons);
    return p;
}

EstimationProblem EstimationProblem::walk(int walkers, int steps, WalkerStart start) {
    if (walkers < 1) {
        throw DomainError("walk pulse needs at least one walker");
    }
    EstimationProblem p;
    p.kind_ = ProblemKind::Walk;
    p.particles_ = walkers;
    p.steps_ = steps;
    p.walk_.emplace(steps, start);
    return p;
}

Box EstimationProblem::bounds() const {
    const double half_width = kind_ == ProblemKind::Interferometer ? std::numbers::pi : std::numbers::pi / 4.0;
    return Box::cube(static_cast<std::size_t>(particles_), -half_width, half_width);
}

FitnessReport EstimationProblem::evaluate(std::span<const double> policy, std::size_t samples, SeedSpec seed,
                                          unsigned threads) const {
    if (samples == 0) {
        throw DomainError("evaluate_policy: K must be at least 1");
    }
    if (policy.size() != static_cast<std::size_t>(particles_)) {
        throw DomainError("evaluate_policy: policy length " + std::to_string(policy.size()) +
                          " does not match N=" + std::to_string(particles_));
    }
    const auto start = std::chrono::steady_clock::now();
    const std::size_t blocks = (samples + kPulsesPerBlock - 1) / kPulsesPerBlock;
    std::vector<BlockTotals> totals(blocks);

    parallel_for(blocks, threads, [&](std::size_t b) {
        RandomStream rng(SeedSpec{seed.master_seed, derive_stream_id({seed.stream_id, b})});
        const std::size_t count = std::min(kPulsesPerBlock, samples - b * kPulsesPerBlock);
        BlockTotals& t = totals[b];
        if (kind_ == ProblemKind::Interferometer) {
            std::vector<Complex> scratch_a;
            std::vector<Complex> scratch_b;
            for (std::size_t i = 0; i < count; ++i) {
                const double phase = 2.0 * std::numbers::pi * rng.uniform();
                const double error = interferometer_->simulate_error(policy, phase, rng, scratch_a, scratch_b);
                t.phasors.add(error);
                t.squares += error * error;
            }
        } else {
            std::vector<double> scratch;
            for (std::size_t i = 0; i < count; ++i) {
                const double theta = 0.5 * std::numbers::pi * rng.uniform();
                const WalkPulseErrors e = walk_->simulate_errors(policy, theta, rng, scratch);
                t.phasors.add(e.scaled_error);
                t.squares += e.raw_error * e.raw_error;
            }
        }
    });

    PhasorSum phasors;
    double squares = 0.0;
    for (const auto& t : totals) {
        phasors.merge(t.phasors);
        squares += t.squares;
    }

    FitnessReport report;
    report.sharpness = sharpness(phasors);
    report.holevo_imprecision = report.sharpness > 0.0 ? holevo_imprecision(report.sharpness)
                                                       : std::numeric_limits<double>::infinity();
    report.rmse = std::sqrt(squares / static_cast<double>(samples));
    report.samples = samples;
    report.seed = seed;
    report.wall_time_s = elapsed_since(start);
    return report;
}

FitnessReport evaluate_policy(const EstimationProblem& problem, std::span<const double> policy,
                              std::size_t samples, SeedSpec seed, unsigned threads) {
    return problem.evaluate(policy, samples, seed, threads);
}

namespace {

struct OracleWalk {
    std::span<const double> deltas;
    double phase = 0.0;
    Complex acc{0.0, 0.0};

    void descend(const TwoModeState& state, double control, double probability, std::size_t depth) {
        const double theta = phase - control;
        const double p0 = outcome_probability(state, theta);
        for (int u = 0; u < 2; ++u) {
            const double p = u == 0 ? p0 : 1.0 - p0;
            if (p <= 0.0) {
                continue;
            }
            const double next_control = apply_phase_feedback(control, u, deltas[depth]);
            if (depth + 1 == deltas.size()) {
                acc += probability * p * std::polar(1.0, next_control - phase);
            } else {
                descend(project(state, theta, u), next_control, probability * p, depth + 1);
            }
        }
    }
};

}  // namespace

double exact_sharpness_oracle(std::span<const double> policy, std::size_t grid_points) {
    if (policy.empty()) {
        throw DomainError("exact_sharpness_oracle: empty policy");
    }
    if (policy.size() > static_cast<std::size_t>(kMaxOraclePhotons)) {
        throw DomainError("exact_sharpness_oracle: refused, N=" + std::to_string(policy.size()) +
                          " exceeds the enumeration limit of " + std::to_string(kMaxOraclePhotons) + " photons");
    }
    if (grid_points < 128) {
        throw DomainError("exact_sharpness_oracle: grid needs at least 128 points");
    }
    const TwoModeState input = enter_interferometer(prepare_input_state(static_cast<int>(policy.size())));
    Complex total{0.0, 0.0};
    for (std::size_t g = 0; g < grid_points; ++g) {
        OracleWalk walk{policy, 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(grid_points)};
        walk.descend(input, 0.0, 1.0, 0);
        total += walk.acc;
    }
    return std::min(1.0, std::abs(total) / static_cast<double>(grid_points));
}

void TrainingLadderConfig::validate() const {
    if (n_min < 1) {
        throw ConfigError("n_min must be at least 1");
    }
    if (n_max < n_min) {
        throw ConfigError("n_max must be at least n_min");
    }
    if (problem == ProblemKind::Interferometer && n_max > kMaxPhotons) {
        throw ConfigError("n_max exceeds the " + std::to_string(kMaxPhotons) + "-photon limit");
    }
    if (problem == ProblemKind::Walk && walk_steps < 1) {
        throw ConfigError("walk_steps must be at least 1");
    }
    if (report_samples == 0 || selection_samples == 0) {
        throw ConfigError("report and selection sample counts must be positive");
    }
    for (int n = n_min; n <= n_max; ++n) {
        const struct {
            const char* key;
            const BudgetExpr& expr;
        } checks[] = {{"xi", budgets.population},
                      {"upsilon", budgets.iterations},
                      {"k", budgets.samples},
                      {"omega", budgets.repetitions}};
        for (const auto& c : checks) {
            if (c.expr(n) < 1) {
                throw ConfigError(std::string(c.key) + " = " + c.expr.text() + " is not positive at N=" +
                                  std::to_string(n));
            }
        }
        DEConfig de_at = de;
        PSOConfig pso_at = pso;
        de_at.population = pso_at.population = static_cast<std::size_t>(budgets.population(n));
        de_at.iterations = pso_at.iterations = static_cast<std::size_t>(budgets.iterations(n));
        if (optimizer == OptimizerKind::DE) {
            de_at.validate();
        } else {
            pso_at.validate();
        }
    }
}

EstimationProblem TrainingLadderConfig::make_problem(int n) const {
    return problem == ProblemKind::Interferometer ? EstimationProblem::interferometer(n)
                                                  : EstimationProblem::walk(n, walk_steps, walk_start);
}

SeedSpec report_seed(std::uint64_t master_seed, int n) {
    return SeedSpec{master_seed, derive_stream_id({kTagReport, static_cast<std::uint64_t>(n)})};
}

double ratio_threshold(int n) {
    return 1.0 - 1.0 / (2.0 * n);
}

RungResult train_rung(int n, std::optional<std::span<const double>> warm_start,
                      std::optional<double> previous_imprecision, const TrainingLadderConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const EstimationProblem problem = config.make_problem(n);
    const Box bounds = problem.bounds();
    const auto population = static_cast<std::size_t>(config.budgets.population(n));
    const auto iterations = static_cast<std::size_t>(config.budgets.iterations(n));
    const auto samples = static_cast<std::size_t>(config.budgets.samples(n));
    const auto repetitions = static_cast<std::size_t>(config.budgets.repetitions(n));
    const unsigned threads = resolve_threads(config.threads);

    const Problem search{bounds, [&problem, samples](std::span<const double> x, RandomStream& rng) {
                             return problem.evaluate(x, samples, rng.spec(), 1).sharpness;
                         }};

    RungResult rung;
    rung.n = n;
    rung.ratio_met = false;
    bool have_best = false;
    const auto un = static_cast<std::uint64_t>(n);
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        RandomStream rng(SeedSpec{config.master_seed, derive_stream_id({kTagSearch, un, rep})});
        const Evaluator evaluator{derive_stream_id({config.master_seed, kTagEvaluate, un, rep}), threads};
        Population init = seed_population(population, static_cast<std::size_t>(n), bounds, warm_start, rng);

        SearchResult found;
        if (config.optimizer == OptimizerKind::DE) {
            DEConfig de = config.de;
            de.population = population;
            de.iterations = iterations;
            found = de_evolve(search, de, std::move(init), rng, evaluator);
        } else {
            PSOConfig pso = config.pso;
            pso.population = population;
            pso.iterations = iterations;
            found = pso_evolve(search, pso, std::move(init), rng, evaluator);
        }
        rung.evaluations += found.evaluations;

        const FitnessReport selection =
            problem.evaluate(found.best_position, config.selection_samples,
                             SeedSpec{config.master_seed, derive_stream_id({kTagSelect, un, rep})}, threads);
        ++rung.repetitions;
        if (!have_best || selection.sharpness > rung.selection.sharpness) {
            have_best = true;
            rung.policy = found.best_position;
            rung.selection = selection;
            rung.trace = found.trace;
        }
        const bool met = !previous_imprecision ||
                         selection.holevo_imprecision / *previous_imprecision <= ratio_threshold(n);
        if (met) {
            rung.ratio_met = true;
            break;
        }
    }

    rung.report = problem.evaluate(rung.policy, config.report_samples, report_seed(config.master_seed, n), threads);
    rung.report.wall_time_s = config.record_wall_time ? elapsed_since(start) : 0.0;
    if (!config.record_wall_time) {
        rung.selection.wall_time_s = 0.0;
    }
    return rung;
}

void summarize(LadderResult& result) {
    std::vector<ScalingPoint> holevo;
    std::vector<ScalingPoint> rms;
    for (const auto& r : result.rungs) {
        if (std::isfinite(r.report.holevo_imprecision) && r.report.holevo_imprecision > 0.0) {
            holevo.push_back({r.n, r.report.holevo_imprecision});
        }
        if (r.report.rmse > 0.0) {
            rms.push_back({r.n, r.report.rmse});
        }
    }
    result.scaling.reset();
    result.rmse_scaling.reset();
    if (holevo.size() >= 2) {
        result.scaling = fit_power_law(holevo);
    }
    if (rms.size() >= 2) {
        result.rmse_scaling = fit_power_law(rms);
    }
    result.references.clear();
    if (!holevo.empty()) {
        const double n0 = holevo.front().n;
        const double d0 = holevo.front().imprecision;
        for (const auto& r : result.rungs) {
            const double ratio = static_cast<double>(r.n) / n0;
            result.references.push_back({r.n, d0 / std::sqrt(ratio), d0 / ratio});
        }
    }
}

LadderResult run_ladder(const TrainingLadderConfig& config, const std::optional<std::filesystem::path>& output_dir) {
    config.validate();
    LadderResult result;
    if (output_dir) {
        result.rungs = load_completed_rungs(*output_dir, config);
    }

    std::optional<Position> warm;
    std::optional<double> previous;
    int first = config.n_min;
    if (!result.rungs.empty()) {
        warm = result.rungs.back().policy;
        previous = result.rungs.back().report.holevo_imprecision;
        first = result.rungs.back().n + 1;
    }

    for (int n = first; n <= config.n_max; ++n) {
        std::optional<std::span<const double>> warm_view;
        if (warm) {
            warm_view = std::span<const double>(*warm);
        }
        RungResult rung = train_rung(n, warm_view, previous, config);
        if (output_dir) {
            persist_rung(*output_dir, config, rung);
        }
        warm = rung.policy;
        previous = rung.report.holevo_imprecision;
        result.rungs.push_back(std::move(rung));
    }

    summarize(result);
    if (output_dir) {
        write_reference_curves(*output_dir / "reference_curves.csv", result);
    }
    return result;
}

}  // namespace aqem

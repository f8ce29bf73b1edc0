#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aqem/budget.hpp"
#include "aqem/interferometer.hpp"
#include "aqem/optimize.hpp"
#include "aqem/power_law.hpp"
#include "aqem/quantum_walk.hpp"
#include "aqem/random.hpp"

namespace aqem {

enum class ProblemKind { Interferometer, Walk };
enum class OptimizerKind { DE, PSO };

const char* problem_name(ProblemKind kind);
ProblemKind parse_problem(const std::string& name);
const char* optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer(const std::string& name);

/// Monte Carlo assessment of one policy.
struct FitnessReport {
    double sharpness = 0.0;
    double holevo_imprecision = 0.0;  // +inf when sharpness is 0
    double rmse = 0.0;                // interferometer: of zeta; walk: of t (phi_hat - phi)
    std::size_t samples = 0;
    SeedSpec seed;
    double wall_time_s = 0.0;
};

/// One estimation task: N particles through either device, with its prior
/// and policy box. Holds the cached simulator, so it is cheap to evaluate
/// repeatedly and safe to share between threads.
class EstimationProblem {
public:
    static EstimationProblem interferometer(int photons);
    static EstimationProblem walk(int walkers, int steps, WalkerStart start = WalkerStart::Balanced);

    ProblemKind kind() const { return kind_; }
    int particles() const { return particles_; }
    int steps() const { return steps_; }

    /// [-pi, pi]^N for the interferometer, [-pi/4, pi/4]^N for the walk.
    Box bounds() const;

    /// Draws K parameters from the prior, runs one pulse for each and reduces
    /// the errors. Pulses are grouped in fixed blocks with their own derived
    /// streams; the result depends only on (policy, K, seed), never on threads.
    FitnessReport evaluate(std::span<const double> policy, std::size_t samples, SeedSpec seed,
                           unsigned threads = 1) const;

private:
    EstimationProblem() = default;

    ProblemKind kind_ = ProblemKind::Interferometer;
    int particles_ = 0;
    int steps_ = 0;
    std::optional<InterferometerModel> interferometer_;
    std::optional<WalkModel> walk_;
};

/// Free-function form of EstimationProblem::evaluate.
FitnessReport evaluate_policy(const EstimationProblem& problem, std::span<const double> policy,
                              std::size_t samples, SeedSpec seed, unsigned threads = 1);

inline constexpr int kMaxOraclePhotons = 12;

/// Exact interferometer sharpness: every outcome string is enumerated with its
/// probability from the state vector, at each node of a trapezoid grid over
/// [0, 2pi). Throws DomainError for N > 12 or fewer than 128 grid points.
double exact_sharpness_oracle(std::span<const double> policy, std::size_t grid_points);

/// Budgets as functions of N.
struct Budgets {
    BudgetExpr population{"max(20, 2N)"};
    BudgetExpr iterations{"max(40, 4N)"};
    BudgetExpr samples{"min(10N^2, 100000)"};
    BudgetExpr repetitions{"min(N, 10)"};
};

struct TrainingLadderConfig {
    ProblemKind problem = ProblemKind::Interferometer;
    int n_min = 4;
    int n_max = 14;
    int walk_steps = 10;
    WalkerStart walk_start = WalkerStart::Balanced;
    Budgets budgets;
    OptimizerKind optimizer = OptimizerKind::DE;
    DEConfig de;
    PSOConfig pso;
    std::uint64_t master_seed = 1;
    /// Samples for the held-out report of every rung.
    std::size_t report_samples = 1'000'000;
    /// Samples for scoring each repetition's winner against the ratio gate.
    std::size_t selection_samples = 100'000;
    unsigned threads = 0;
    bool record_wall_time = true;

    /// Throws ConfigError naming the offending setting.
    void validate() const;

    EstimationProblem make_problem(int n) const;
};

/// Stream used for the held-out report (and the zero-policy baseline) at rung N.
SeedSpec report_seed(std::uint64_t master_seed, int n);

struct RungResult {
    int n = 0;
    Position policy;
    FitnessReport report;      // held-out
    FitnessReport selection;   // score used for the ratio gate
    std::size_t repetitions = 0;
    bool ratio_met = true;
    std::size_t evaluations = 0;
    std::vector<double> trace;  // optimizer trace of the kept repetition
};

/// Relaxed acceptance threshold 1 - 1/(2N) for Delta_N / Delta_{N-1}.
double ratio_threshold(int n);

/// Trains the N-particle policy, warm-started from the (N-1)-particle one.
/// Reruns with fresh streams, up to Omega(N) times, until the ratio gate
/// passes, and keeps the best repetition either way.
RungResult train_rung(int n, std::optional<std::span<const double>> warm_start,
                      std::optional<double> previous_imprecision, const TrainingLadderConfig& config);

struct ReferencePoint {
    int n = 0;
    double semiclassical = 0.0;  // anchored at the first rung, slope -1/2
    double ultimate = 0.0;       // anchored at the first rung, slope -1
};

struct LadderResult {
    std::vector<RungResult> rungs;
    std::optional<ScalingFit> scaling;       // on held-out Holevo imprecision
    std::optional<ScalingFit> rmse_scaling;  // on held-out RMSE
    std::vector<ReferencePoint> references;
};

/// Fits the scaling laws and reference curves for completed rungs.
void summarize(LadderResult& result);

/// Runs rungs N_min..N_max in order. With an output directory every rung is
/// persisted as soon as it completes, and a rerun over the same directory
/// resumes after the last completed rung.
LadderResult run_ladder(const TrainingLadderConfig& config,
                        const std::optional<std::filesystem::path>& output_dir = std::nullopt);

}  // namespace aqem

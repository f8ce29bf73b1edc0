#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aqem/random.hpp"

namespace aqem {

using Position = std::vector<double>;
using Population = std::vector<Position>;

/// Axis-aligned search box.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    static Box cube(std::size_t dimension, double lo, double hi);

    std::size_t dimension() const { return lower.size(); }
    double width(std::size_t i) const { return upper[i] - lower[i]; }
    bool contains(std::span<const double> x) const;
    void clamp(Position& x) const;
};

/// Fitness is maximized. The stream is owned by the evaluation.
using FitnessFunction = std::function<double(std::span<const double>, RandomStream&)>;

struct Problem {
    Box bounds;
    FitnessFunction fitness;
};

/// Evaluates populations, possibly in parallel. Member i of generation g
/// always receives the stream (seed, derive_stream_id({g, i})), so the result
/// does not depend on the thread count or on scheduling.
struct Evaluator {
    std::uint64_t seed = 0;
    unsigned threads = 1;

    SeedSpec stream_for(std::uint64_t generation, std::size_t member) const;
    std::vector<double> evaluate(const Problem& problem, const Population& population,
                                 std::uint64_t generation) const;
};

struct DEConfig {
    std::size_t population = 20;   // Xi
    std::size_t iterations = 40;   // Upsilon
    double mutation_scale = 0.7;   // mu
    double crossover_rate = 0.9;   // gamma

    /// Throws ConfigError (population < 4, mu outside [0, 2], gamma outside [0, 1]).
    void validate() const;
};

struct PSOConfig {
    std::size_t population = 20;
    std::size_t iterations = 40;
    double exploration = 1.4;    // alpha, pull toward the personal best
    double exploitation = 1.4;   // beta, pull toward the neighborhood best
    double inertia = 0.8;        // omega
    /// Per-coordinate speed limit nu; unset means 0.25 of each box width.
    std::optional<double> velocity_clamp;
    /// Ring neighborhood size; unset means ceil(log2 population).
    std::optional<std::size_t> neighborhood_size;

    void validate() const;
    std::size_t resolved_neighborhood() const;
    std::vector<double> resolved_velocity_clamp(const Box& bounds) const;
};

struct SearchResult {
    Position best_position;
    double best_fitness = 0.0;
    /// Best fitness so far after the initial evaluation and after each iteration.
    std::vector<double> trace;
    std::size_t evaluations = 0;
    Population final_population;
    std::vector<double> final_fitness;
};

/// x_r1 + mu (x_r2 - x_r3).
Position de_donor(std::span<const double> base, std::span<const double> plus, std::span<const double> minus,
                  double mutation_scale);

/// Binomial crossover: each coordinate comes from the donor with probability
/// `rate`, and coordinate `forced` always does. rate = 0 disables crossover and
/// returns the target unchanged.
Position binomial_crossover(std::span<const double> target, std::span<const double> donor, double rate,
                            std::size_t forced, RandomStream& rng);

/// Clamps each velocity component to [-limit_j, limit_j].
void clamp_velocity(std::span<double> velocity, std::span<const double> limit);

/// Ring neighborhood of `size` members around `member`, in ascending index order.
std::vector<std::size_t> ring_neighborhood(std::size_t member, std::size_t population, std::size_t size);

/// Initial population. Without a warm start members are uniform over the box.
/// With a warm start of dimension d-1, each member is the warm start extended
/// by a uniform last coordinate, then jittered by uniform noise spanning 10%
/// of each box width, and clamped.
Population seed_population(std::size_t size, std::size_t dimension, const Box& bounds,
                           std::optional<std::span<const double>> warm_start, RandomStream& rng);

/// Differential evolution (DE/rand/1/bin) with greedy one-to-one selection;
/// the incumbent survives exact ties.
SearchResult de_evolve(const Problem& problem, const DEConfig& config, Population init, RandomStream& rng,
                       const Evaluator& evaluator);

/// Particle swarm with ring neighborhoods and velocity clamping.
SearchResult pso_evolve(const Problem& problem, const PSOConfig& config, Population init, RandomStream& rng,
                        const Evaluator& evaluator);

}  // namespace aqem

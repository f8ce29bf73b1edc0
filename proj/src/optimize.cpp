#include "aqem/optimize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "aqem/errors.hpp"
#include "aqem/parallel.hpp"

namespace aqem {

Box Box::cube(std::size_t dimension, double lo, double hi) {
    return Box{std::vector<double>(dimension, lo), std::vector<double>(dimension, hi)};
}

bool Box::contains(std::span<const double> x) const {
    if (x.size() != dimension()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower[i] && x[i] <= upper[i])) {
            return false;
        }
    }
    return true;
}

void Box::clamp(Position& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], lower[i], upper[i]);
    }
}

SeedSpec Evaluator::stream_for(std::uint64_t generation, std::size_t member) const {
    return SeedSpec{seed, derive_stream_id({generation, static_cast<std::uint64_t>(member)})};
}

std::vector<double> Evaluator::evaluate(const Problem& problem, const Population& population,
                                        std::uint64_t generation) const {
    std::vector<double> fitness(population.size(), 0.0);
    parallel_for(population.size(), threads, [&](std::size_t i) {
        RandomStream rng(stream_for(generation, i));
        fitness[i] = problem.fitness(population[i], rng);
    });
    return fitness;
}

void DEConfig::validate() const {
    if (population < 4) {
        throw ConfigError("DE population (xi) must be at least 4, got " + std::to_string(population));
    }
    if (iterations < 1) {
        throw ConfigError("DE iterations (upsilon) must be at least 1");
    }
    if (!(mutation_scale >= 0.0 && mutation_scale <= 2.0)) {
        throw ConfigError("DE mutation scale (de_mu) must lie in [0, 2]");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw ConfigError("DE crossover rate (de_gamma) must lie in [0, 1]");
    }
}

void PSOConfig::validate() const {
    if (population < 1) {
        throw ConfigError("PSO population (xi) must be at least 1");
    }
    if (iterations < 1) {
        throw ConfigError("PSO iterations (upsilon) must be at least 1");
    }
    if (velocity_clamp && !(*velocity_clamp > 0.0)) {
        throw ConfigError("PSO velocity clamp (pso_nu) must be positive");
    }
    if (neighborhood_size && (*neighborhood_size < 1 || *neighborhood_size > population)) {
        throw ConfigError("PSO neighborhood size must lie in [1, xi]");
    }
}

std::size_t PSOConfig::resolved_neighborhood() const {
    if (neighborhood_size) {
        return *neighborhood_size;
    }
    // ceil(log2(population)), at least 1.
    const std::size_t bits = population <= 1 ? 0 : std::bit_width(population - 1);
    return std::clamp<std::size_t>(bits, 1, population);
}

std::vector<double> PSOConfig::resolved_velocity_clamp(const Box& bounds) const {
    std::vector<double> limit(bounds.dimension());
    for (std::size_t j = 0; j < limit.size(); ++j) {
        limit[j] = velocity_clamp ? *velocity_clamp : 0.25 * bounds.width(j);
    }
    return limit;
}

Position de_donor(std::span<const double> base, std::span<const double> plus, std::span<const double> minus,
                  double mutation_scale) {
    Position donor(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) {
        donor[j] = base[j] + mutation_scale * (plus[j] - minus[j]);
    }
    return donor;
}

Position binomial_crossover(std::span<const double> target, std::span<const double> donor, double rate,
                            std::size_t forced, RandomStream& rng) {
    Position trial(target.begin(), target.end());
    if (rate <= 0.0) {
        return trial;
    }
    for (std::size_t j = 0; j < trial.size(); ++j) {
        if (j == forced || rng.uniform() < rate) {
            trial[j] = donor[j];
        }
    }
    return trial;
}

void clamp_velocity(std::span<double> velocity, std::span<const double> limit) {
    for (std::size_t j = 0; j < velocity.size(); ++j) {
        velocity[j] = std::clamp(velocity[j], -limit[j], limit[j]);
    }
}

std::vector<std::size_t> ring_neighborhood(std::size_t member, std::size_t population, std::size_t size) {
    size = std::clamp<std::size_t>(size, 1, population);
    const std::size_t back = (size - 1) / 2;
    std::vector<std::size_t> out;
    out.reserve(size);
    for (std::size_t k = 0; k < size; ++k) {
        out.push_back((member + population - back + k) % population);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Population seed_population(std::size_t size, std::size_t dimension, const Box& bounds,
                           std::optional<std::span<const double>> warm_start, RandomStream& rng) {
    if (bounds.dimension() != dimension) {
        throw DomainError("seed_population: box dimension does not match");
    }
    if (warm_start && warm_start->size() + 1 != dimension) {
        throw DomainError("seed_population: warm start must have dimension " + std::to_string(dimension - 1));
    }
    Population population(size, Position(dimension));
    for (auto& member : population) {
        if (warm_start) {
            std::copy(warm_start->begin(), warm_start->end(), member.begin());
            member.back() = rng.uniform(bounds.lower.back(), bounds.upper.back());
            for (std::size_t j = 0; j < dimension; ++j) {
                member[j] += 0.1 * bounds.width(j) * (rng.uniform() - 0.5);
            }
            bounds.clamp(member);
        } else {
            for (std::size_t j = 0; j < dimension; ++j) {
                member[j] = rng.uniform(bounds.lower[j], bounds.upper[j]);
            }
        }
    }
    return population;
}

namespace {

void check_population(const Population& population, std::size_t expected, const Box& bounds) {
    if (population.size() != expected) {
        throw ConfigError("initial population has " + std::to_string(population.size()) + " members, config says " +
                          std::to_string(expected));
    }
    for (const auto& member : population) {
        if (member.size() != bounds.dimension()) {
            throw DomainError("population member dimension does not match the search box");
        }
    }
}

std::size_t argmax_first(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

}  // namespace

SearchResult de_evolve(const Problem& problem, const DEConfig& config, Population init, RandomStream& rng,
                       const Evaluator& evaluator) {
    config.validate();
    check_population(init, config.population, problem.bounds);
    const std::size_t n = init.size();
    const std::size_t dim = problem.bounds.dimension();

    Population population = std::move(init);
    for (auto& member : population) {
        problem.bounds.clamp(member);
    }
    std::vector<double> fitness = evaluator.evaluate(problem, population, 0);

    SearchResult result;
    result.evaluations = n;
    std::size_t best = argmax_first(fitness);
    result.best_position = population[best];
    result.best_fitness = fitness[best];
    result.trace.push_back(result.best_fitness);

    Population trials(n);
    for (std::size_t generation = 1; generation <= config.iterations; ++generation) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r1;
            std::size_t r2;
            std::size_t r3;
            do {
                r1 = rng.below(n);
            } while (r1 == i);
            do {
                r2 = rng.below(n);
            } while (r2 == i || r2 == r1);
            do {
                r3 = rng.below(n);
            } while (r3 == i || r3 == r1 || r3 == r2);
            const Position donor = de_donor(population[r1], population[r2], population[r3], config.mutation_scale);
            const std::size_t forced = rng.below(dim);
            trials[i] = binomial_crossover(population[i], donor, config.crossover_rate, forced, rng);
            problem.bounds.clamp(trials[i]);
        }

        const std::vector<double> trial_fitness = evaluator.evaluate(problem, trials, generation);
        result.evaluations += n;

        for (std::size_t i = 0; i < n; ++i) {
            if (trial_fitness[i] > fitness[i]) {
                population[i] = trials[i];
                fitness[i] = trial_fitness[i];
            }
        }
        best = argmax_first(fitness);
        if (fitness[best] > result.best_fitness) {
            result.best_fitness = fitness[best];
            result.best_position = population[best];
        }
        result.trace.push_back(result.best_fitness);
    }

    result.final_population = std::move(population);
    result.final_fitness = std::move(fitness);
    return result;
}

SearchResult pso_evolve(const Problem& problem, const PSOConfig& config, Population init, RandomStream& rng,
                        const Evaluator& evaluator) {
    config.validate();
    check_population(init, config.population, problem.bounds);
    const std::size_t n = init.size();
    const std::size_t dim = problem.bounds.dimension();
    const std::vector<double> limit = config.resolved_velocity_clamp(problem.bounds);
    const std::size_t neighborhood = config.resolved_neighborhood();

    Population position = std::move(init);
    Population velocity(n, Position(dim));
    for (std::size_t i = 0; i < n; ++i) {
        problem.bounds.clamp(position[i]);
        for (std::size_t j = 0; j < dim; ++j) {
            velocity[i][j] = rng.uniform(-limit[j], limit[j]);
        }
    }

    std::vector<double> fitness = evaluator.evaluate(problem, position, 0);
    Population personal_best = position;
    std::vector<double> personal_fitness = fitness;

    SearchResult result;
    result.evaluations = n;
    std::size_t best = argmax_first(personal_fitness);
    result.best_position = personal_best[best];
    result.best_fitness = personal_fitness[best];
    result.trace.push_back(result.best_fitness);

    std::vector<std::size_t> neighbor_best(n);
    for (std::size_t iteration = 1; iteration <= config.iterations; ++iteration) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t pick = n;
            for (std::size_t k : ring_neighborhood(i, n, neighborhood)) {
                if (pick == n || personal_fitness[k] > personal_fitness[pick]) {
                    pick = k;
                }
            }
            neighbor_best[i] = pick;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Position& pb = personal_best[i];
            const Position& nb = personal_best[neighbor_best[i]];
            for (std::size_t j = 0; j < dim; ++j) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                velocity[i][j] = config.inertia * velocity[i][j] +
                                 config.exploration * r1 * (pb[j] - position[i][j]) +
                                 config.exploitation * r2 * (nb[j] - position[i][j]);
            }
            clamp_velocity(velocity[i], limit);
            for (std::size_t j = 0; j < dim; ++j) {
                position[i][j] += velocity[i][j];
            }
            problem.bounds.clamp(position[i]);
        }

        fitness = evaluator.evaluate(problem, position, iteration);
        result.evaluations += n;
        for (std::size_t i = 0; i < n; ++i) {
            if (fitness[i] > personal_fitness[i]) {
                personal_fitness[i] = fitness[i];
                personal_best[i] = position[i];
            }
        }
        best = argmax_first(personal_fitness);
        if (personal_fitness[best] > result.best_fitness) {
            result.best_fitness = personal_fitness[best];
            result.best_position = personal_best[best];
        }
        result.trace.push_back(result.best_fitness);
    }

    result.final_population = std::move(position);
    result.final_fitness = std::move(fitness);
    return result;
}

}  // namespace aqem

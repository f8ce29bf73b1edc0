#include "aqem/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "aqem/errors.hpp"
#include "aqem/statistics.hpp"
#include "aqem/wigner.hpp"

namespace aqem {

namespace {

// sum_n' conj(alpha_n') beta_n' with alpha_n' = sqrt(n'+1) c_{n'+1}, beta_n' = sqrt(k-n') c_n'.
Complex interference_term(std::span<const Complex> c, std::span<const double> sqrt_table) {
    const std::size_t k = c.size() - 1;
    Complex acc{0.0, 0.0};
    for (std::size_t n = 0; n < k; ++n) {
        acc += std::conj(c[n + 1]) * c[n] * (sqrt_table[n + 1] * sqrt_table[k - n]);
    }
    return acc;
}

double probability_zero(std::span<const Complex> c, std::span<const double> sqrt_table, double theta) {
    const double k = static_cast<double>(c.size() - 1);
    const Complex phase = std::polar(1.0, theta);
    const double p0 = 0.5 + (phase * interference_term(c, sqrt_table)).real() / k;
    return std::clamp(p0, 0.0, 1.0);
}

// Writes A_u c / sqrt(k p_u) into out (size k).
void apply_detection(std::span<const Complex> c, std::span<const double> sqrt_table, double theta, int outcome,
                     double p_outcome, std::vector<Complex>& out) {
    const std::size_t k = c.size() - 1;
    const Complex rotor = std::polar(outcome == 0 ? 1.0 : -1.0, theta);
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(k) * p_outcome);
    out.resize(k);
    for (std::size_t n = 0; n < k; ++n) {
        out[n] = (sqrt_table[n + 1] * c[n + 1] + rotor * (sqrt_table[k - n] * c[n])) * scale;
    }
}

std::vector<double> make_sqrt_table(std::size_t n) {
    std::vector<double> table(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        table[i] = std::sqrt(static_cast<double>(i));
    }
    return table;
}

// Unit norm, with the global phase chosen so c_0 is real and nonnegative.
void normalize_with_phase(TwoModeState& state) {
    double acc = 0.0;
    for (const auto& a : state.amplitudes) {
        acc += std::norm(a);
    }
    const double norm = std::sqrt(acc);
    const Complex c0 = state.amplitudes.front();
    const Complex global = std::abs(c0) > 0.0 ? std::conj(c0) / std::abs(c0) : Complex{1.0, 0.0};
    for (auto& a : state.amplitudes) {
        a *= global / norm;
    }
    state.amplitudes.front() = Complex{state.amplitudes.front().real(), 0.0};
}

void check_photons(int photons) {
    if (photons < 1 || photons > kMaxPhotons) {
        throw DomainError("photon number must lie in [1, " + std::to_string(kMaxPhotons) + "], got " +
                          std::to_string(photons));
    }
}

void check_policy(std::span<const double> deltas, int photons) {
    if (deltas.size() != static_cast<std::size_t>(photons)) {
        throw DomainError("policy length " + std::to_string(deltas.size()) + " does not match N=" +
                          std::to_string(photons));
    }
}

}  // namespace

double TwoModeState::norm() const {
    double acc = 0.0;
    for (const auto& a : amplitudes) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

TwoModeState prepare_input_state(int photons) {
    check_photons(photons);
    const int n_total = photons;
    TwoModeState state;
    state.amplitudes.assign(static_cast<std::size_t>(n_total) + 1, Complex{0.0, 0.0});
    const double envelope_den = static_cast<double>(n_total + 2);
    for (int n = 0; n <= n_total; ++n) {
        Complex acc{0.0, 0.0};
        for (int k = 0; k <= n_total; ++k) {
            const double envelope = std::sin((k + 1) * std::numbers::pi / envelope_den);
            const Complex phase = std::polar(1.0, std::numbers::pi * (k - n) / 2.0);
            const double d = wigner_d({n_total, 2 * n - n_total, 2 * k - n_total, std::numbers::pi / 2.0});
            acc += envelope * d * phase;
        }
        state.amplitudes[static_cast<std::size_t>(n)] = acc;
    }
    normalize_with_phase(state);
    return state;
}

TwoModeState enter_interferometer(const TwoModeState& input) {
    const int n_total = static_cast<int>(input.photons());
    if (input.amplitudes.empty()) {
        throw StateExhaustedError("enter_interferometer: empty state");
    }
    TwoModeState state;
    state.amplitudes.assign(input.amplitudes.size(), Complex{0.0, 0.0});
    for (int n = 0; n <= n_total; ++n) {
        Complex acc{0.0, 0.0};
        for (int k = 0; k <= n_total; ++k) {
            const Complex phase = std::polar(1.0, std::numbers::pi * (k - n) / 2.0);
            const double d = wigner_d({n_total, 2 * k - n_total, 2 * n - n_total, std::numbers::pi / 2.0});
            acc += d * phase * input.amplitudes[static_cast<std::size_t>(k)];
        }
        state.amplitudes[static_cast<std::size_t>(n)] = acc;
    }
    normalize_with_phase(state);
    return state;
}

double outcome_probability(const TwoModeState& state, double theta) {
    if (state.photons() == 0) {
        throw StateExhaustedError("outcome_probability: no photons left");
    }
    const auto table = make_sqrt_table(state.photons());
    return probability_zero(state.amplitudes, table, theta);
}

TwoModeState project(const TwoModeState& state, double theta, int outcome) {
    if (state.photons() == 0) {
        throw StateExhaustedError("project: no photons left");
    }
    if (outcome != 0 && outcome != 1) {
        throw DomainError("project: outcome must be 0 or 1");
    }
    const auto table = make_sqrt_table(state.photons());
    const double p0 = probability_zero(state.amplitudes, table, theta);
    const double p = outcome == 0 ? p0 : 1.0 - p0;
    if (!(p > 0.0)) {
        throw DomainError("project: outcome has zero probability");
    }
    TwoModeState out;
    apply_detection(state.amplitudes, table, theta, outcome, p, out.amplitudes);
    return out;
}

Measurement measure_one_photon(const TwoModeState& state, double theta, RandomStream& rng) {
    if (state.photons() == 0) {
        throw StateExhaustedError("measure_one_photon: no photons left");
    }
    const auto table = make_sqrt_table(state.photons());
    const double p0 = probability_zero(state.amplitudes, table, theta);
    const int u = rng.uniform() < p0 ? 0 : 1;
    Measurement m;
    m.outcome = u;
    apply_detection(state.amplitudes, table, theta, u, u == 0 ? p0 : 1.0 - p0, m.posterior.amplitudes);
    return m;
}

double final_control(std::span<const double> deltas, std::span<const std::uint8_t> outcomes) {
    if (deltas.size() != outcomes.size()) {
        throw DomainError("final_control: outcome string length does not match policy length");
    }
    double control = 0.0;
    for (std::size_t m = 0; m < deltas.size(); ++m) {
        control = apply_phase_feedback(control, outcomes[m], deltas[m]);
    }
    return control;
}

InterferometerModel::InterferometerModel(int photons)
    : photons_(photons), input_(prepare_input_state(photons)), probe_(enter_interferometer(input_)),
      sqrt_table_(make_sqrt_table(static_cast<std::size_t>(photons))) {}

double InterferometerModel::simulate_error(std::span<const double> deltas, double true_phase, RandomStream& rng,
                                           std::vector<Complex>& scratch_a, std::vector<Complex>& scratch_b) const {
    check_policy(deltas, photons_);
    scratch_a.assign(probe_.amplitudes.begin(), probe_.amplitudes.end());
    double control = 0.0;
    for (int m = 0; m < photons_; ++m) {
        const double theta = true_phase - control;
        const double p0 = probability_zero(scratch_a, sqrt_table_, theta);
        const int u = rng.uniform() < p0 ? 0 : 1;
        if (m + 1 < photons_) {
            apply_detection(scratch_a, sqrt_table_, theta, u, u == 0 ? p0 : 1.0 - p0, scratch_b);
            std::swap(scratch_a, scratch_b);
        }
        control = apply_phase_feedback(control, u, deltas[static_cast<std::size_t>(m)]);
    }
    return wrap_phase(wrap_positive(control) - true_phase);
}

PulseOutcome InterferometerModel::run_pulse(std::span<const double> deltas, double true_phase,
                                            RandomStream& rng) const {
    check_policy(deltas, photons_);
    PulseOutcome out;
    out.true_phase = true_phase;
    out.outcomes.reserve(static_cast<std::size_t>(photons_));
    std::vector<Complex> current(probe_.amplitudes);
    std::vector<Complex> next;
    double control = 0.0;
    for (int m = 0; m < photons_; ++m) {
        const double theta = true_phase - control;
        const double p0 = probability_zero(current, sqrt_table_, theta);
        const int u = rng.uniform() < p0 ? 0 : 1;
        out.outcomes.push_back(static_cast<std::uint8_t>(u));
        if (m + 1 < photons_) {
            apply_detection(current, sqrt_table_, theta, u, u == 0 ? p0 : 1.0 - p0, next);
            std::swap(current, next);
        }
        control = apply_phase_feedback(control, u, deltas[static_cast<std::size_t>(m)]);
    }
    out.estimate = wrap_positive(control);
    out.error = wrap_phase(out.estimate - true_phase);
    return out;
}

double InterferometerModel::trajectory_probability(std::span<const double> deltas,
                                                   std::span<const std::uint8_t> outcomes,
                                                   double true_phase) const {
    check_policy(deltas, photons_);
    if (outcomes.size() != deltas.size()) {
        throw DomainError("trajectory_probability: outcome string length does not match N");
    }
    std::vector<Complex> current(probe_.amplitudes);
    std::vector<Complex> next;
    double control = 0.0;
    double probability = 1.0;
    for (int m = 0; m < photons_; ++m) {
        const int u = outcomes[static_cast<std::size_t>(m)];
        const double theta = true_phase - control;
        const double p0 = probability_zero(current, sqrt_table_, theta);
        const double p = u == 0 ? p0 : 1.0 - p0;
        probability *= p;
        if (probability == 0.0) {
            return 0.0;
        }
        if (m + 1 < photons_) {
            apply_detection(current, sqrt_table_, theta, u, p, next);
            std::swap(current, next);
        }
        control = apply_phase_feedback(control, u, deltas[static_cast<std::size_t>(m)]);
    }
    return probability;
}

PulseOutcome run_pulse(int photons, const PhasePolicy& policy, double true_phase, RandomStream& rng) {
    return InterferometerModel(photons).run_pulse(policy.deltas, true_phase, rng);
}

}  // namespace aqem

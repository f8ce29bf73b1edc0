#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "aqem/random.hpp"

namespace aqem {

using Complex = std::complex<double>;

/// Permutationally symmetric k-photon two-mode state; amplitudes[n] is the
/// coefficient of |n, k-n>.
struct TwoModeState {
    std::vector<Complex> amplitudes;

    std::size_t photons() const { return amplitudes.empty() ? 0 : amplitudes.size() - 1; }
    double norm() const;
};

inline constexpr int kMaxPhotons = 128;

/// Normalized N-photon sine state built from reduced rotation matrix elements
/// at pi/2. The global phase is fixed so amplitudes[0] is real and nonnegative.
/// Throws DomainError unless 1 <= N <= 128.
TwoModeState prepare_input_state(int photons);

/// The entrance 50:50 beam splitter, taking input-port amplitudes to the
/// arm modes a, b that the detection operators act on:
///   a_n = sum_k i^{k-n} d^{N/2}_{k-N/2, n-N/2}(pi/2) c_k.
/// For the prepared input state this is the sine state sin((n+1) pi/(N+2)),
/// normalized. Global phase fixed as in prepare_input_state.
TwoModeState enter_interferometer(const TwoModeState& input);

/// Probability of outcome 0 when one photon of `state` is detected at phase
/// difference theta. The detection operators are
///   A_u = (a + (-1)^u e^{i theta} b) / sqrt(2),   p_u = <A_u^dag A_u> / k.
double outcome_probability(const TwoModeState& state, double theta);

/// Normalized (k-1)-photon posterior after outcome u. Throws
/// StateExhaustedError when k = 0 and DomainError when p_u = 0.
TwoModeState project(const TwoModeState& state, double theta, int outcome);

struct Measurement {
    int outcome = 0;
    TwoModeState posterior;
};

/// Samples one detection and returns the outcome with its posterior.
Measurement measure_one_photon(const TwoModeState& state, double theta, RandomStream& rng);

/// Feedback adjustments Delta_1..Delta_N, each in [-pi, pi].
struct PhasePolicy {
    std::vector<double> deltas;
};

/// Control update Phi_m = Phi_{m-1} - (-1)^u Delta_m.
inline double apply_phase_feedback(double control, int outcome, double delta) {
    return outcome == 0 ? control - delta : control + delta;
}

/// Final control value Phi_N for a given outcome string, starting from Phi_0 = 0.
double final_control(std::span<const double> deltas, std::span<const std::uint8_t> outcomes);

struct PulseOutcome {
    std::vector<std::uint8_t> outcomes;
    double estimate = 0.0;    // Phi_N reduced to [0, 2pi)
    double true_phase = 0.0;
    double error = 0.0;       // wrap(estimate - true_phase) in (-pi, pi]
};

/// Simulates single N-photon pulses. The prepared input state is cached, so
/// one model serves any number of pulses and is safe to share across threads.
class InterferometerModel {
public:
    explicit InterferometerModel(int photons);

    int photons() const { return photons_; }
    const TwoModeState& input_state() const { return input_; }
    /// Arm-mode state after the entrance beam splitter; every pulse starts here.
    const TwoModeState& probe_state() const { return probe_; }

    /// Full pulse with outcome record. Throws DomainError if the policy
    /// length differs from N.
    PulseOutcome run_pulse(std::span<const double> deltas, double true_phase, RandomStream& rng) const;

    /// Same dynamics as run_pulse, returning only the wrapped error. Reuses the
    /// caller's scratch buffers so the Monte Carlo loop does not allocate.
    double simulate_error(std::span<const double> deltas, double true_phase, RandomStream& rng,
                          std::vector<Complex>& scratch_a, std::vector<Complex>& scratch_b) const;

    /// P(outcomes | phi) as the product of conditional detection probabilities
    /// along the posterior chain.
    double trajectory_probability(std::span<const double> deltas, std::span<const std::uint8_t> outcomes,
                                  double true_phase) const;

private:
    int photons_;
    TwoModeState input_;
    TwoModeState probe_;
    std::vector<double> sqrt_table_;
};

/// Convenience wrapper over InterferometerModel::run_pulse.
PulseOutcome run_pulse(int photons, const PhasePolicy& policy, double true_phase, RandomStream& rng);

}  // namespace aqem

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aqem/random.hpp"
#include "aqem/statistics.hpp"

namespace aqem {

/// Coin angle theta in [0, pi/2]; the bias is phi = sin^2(theta).
struct CoinAngle {
    double theta = 0.0;

    static CoinAngle from_bias(double bias);
    double bias() const;
};

/// Real 2x2 coin in the basis (|-1>, |+1>):
///   C|-1> = sqrt(phi)|-1> + sqrt(1-phi)|+1>,  C|+1> = sqrt(1-phi)|-1> - sqrt(phi)|+1>.
/// Stored row-major.
struct CoinMatrix {
    std::array<double, 4> entries{};

    double operator()(int row, int col) const { return entries[static_cast<std::size_t>(2 * row + col)]; }
};

/// Throws DomainError when theta lies outside [0, pi/2].
CoinMatrix coin_operator(CoinAngle angle);

/// Single walker on the line, amplitudes indexed by (x, c) for |x| <= capacity.
class WalkerState {
public:
    /// Walker at x = 0 with coin amplitudes (minus, plus), room for `capacity` steps.
    WalkerState(int capacity, std::complex<double> coin_minus, std::complex<double> coin_plus);

    /// The symmetric start (|0,-1> + i|0,+1>)/sqrt(2).
    static WalkerState symmetric(int capacity);

    int capacity() const { return capacity_; }
    int steps() const { return steps_; }

    std::complex<double> amplitude(int x, int coin) const;
    double norm() const;

    /// P(x) for x in [-capacity, capacity], tracing out the coin.
    std::vector<double> position_distribution() const;

    /// One step S (1 (x) C). Throws DomainError when the state is already at capacity.
    void step(const CoinMatrix& coin);

private:
    std::size_t index(int x, int coin) const {
        return 2 * static_cast<std::size_t>(x + capacity_) + (coin > 0 ? 1 : 0);
    }

    int capacity_;
    int steps_ = 0;
    std::vector<std::complex<double>> amplitudes_;
};

/// Returns the state after one step with the given coin angle.
WalkerState walk_step(WalkerState state, CoinAngle angle);

enum class Region : std::uint8_t { LeftOuter, LeftInner, RightInner, RightOuter };

const char* region_name(Region region);

/// Policy multiplier kappa: LO +2, LI +1, RI -1, RO -2.
int region_multiplier(Region region);

/// Inner/outer boundary b = ceil(t / 2).
int region_boundary(int steps);

struct RegionOutcome {
    Region region = Region::RightInner;
    int position = 0;
};

/// LO if x <= -b; LI if -b < x < 0; RI if 0 <= x < b; RO if x >= b.
/// Throws DomainError when |x| > t.
RegionOutcome bin_region(int position, int steps);

/// How each walker's coin state starts.
enum class WalkerStart : std::uint8_t {
    /// (|-1> + i|+1>)/sqrt(2): mirror-symmetric for every real coin.
    Symmetric,
    /// cos(a)|-1> - sin(a)|+1>, a tuned so the expected region multiplier
    /// vanishes for the unbiased coin. Left/right asymmetry then tracks the bias.
    Balanced,
};

const char* walker_start_name(WalkerStart start);
WalkerStart parse_walker_start(const std::string& name);

/// Coin amplitudes for a start choice at a given walk duration.
std::array<std::complex<double>, 2> walker_start_amplitudes(WalkerStart start, int steps);

/// Position distribution after `steps` steps at a fixed coin angle.
std::vector<double> simulate_position_distribution(int steps, CoinAngle angle, WalkerStart start);

/// Same, for explicit coin amplitudes.
std::vector<double> simulate_position_distribution(int steps, CoinAngle angle,
                                                   const std::array<std::complex<double>, 2>& start);

/// Position distribution as (x, P(x)) pairs, ready for skewness().
Distribution as_distribution(std::span<const double> probabilities);

/// Feedback adjustments Delta_1..Delta_N, each in [-pi/4, pi/4].
struct BiasPolicy {
    std::vector<double> deltas;
};

/// Controller update Theta_m = clamp(Theta_{m-1} + kappa(r) Delta_m, 0, pi/2).
double apply_bias_feedback(double control, Region region, double delta);

/// Final control value Theta_N for a forced region sequence, from Theta_0 = pi/4.
double final_bias_control(std::span<const double> deltas, std::span<const Region> regions);

struct WalkPulseOutcome {
    std::vector<RegionOutcome> measurements;
    double theta_estimate = 0.0;
    double bias_estimate = 0.0;
    double true_bias = 0.0;
    double scaled_error = 0.0;  // 2pi (phi_hat - phi) wrapped to (-pi, pi]
    double raw_error = 0.0;     // t (phi_hat - phi)
};

struct WalkPulseErrors {
    double scaled_error = 0.0;
    double raw_error = 0.0;
};

/// Adaptive walk pulses of duration t. Position probabilities are homogeneous
/// polynomials of degree 2t in (sin theta, cos theta), hence trigonometric
/// polynomials in 2 theta of degree t. The model stores their exact Fourier
/// coefficients once; a walker then costs one coefficient sweep instead of a
/// t-step state-vector simulation.
class WalkModel {
public:
    WalkModel(int steps, WalkerStart start);

    int steps() const { return steps_; }
    WalkerStart start() const { return start_; }
    const std::array<std::complex<double>, 2>& start_amplitudes() const { return start_amplitudes_; }

    /// P(x) for x in [-t, t] at coin angle theta, from the stored coefficients.
    std::vector<double> position_distribution(double theta) const;

    /// Full pulse with per-walker record. Throws DomainError when theta* is out of range.
    WalkPulseOutcome run_pulse(std::span<const double> deltas, double true_theta, RandomStream& rng) const;

    /// Errors only; allocation-free apart from the caller's scratch vector.
    WalkPulseErrors simulate_errors(std::span<const double> deltas, double true_theta, RandomStream& rng,
                                    std::vector<double>& scratch) const;

private:
    void evaluate(double theta, std::vector<double>& out) const;
    int sample_position(double theta, RandomStream& rng, std::vector<double>& scratch) const;

    int steps_;
    WalkerStart start_;
    std::array<std::complex<double>, 2> start_amplitudes_{};
    // For each support position (x = -t, -t+2, ..., t): a0, then (a_k, b_k) for k = 1..t.
    std::vector<int> support_;
    std::vector<double> coefficients_;
};

/// One adaptive pulse of N walkers (convenience wrapper).
WalkPulseOutcome run_walk_pulse(int steps, const BiasPolicy& policy, double true_theta, RandomStream& rng,
                                WalkerStart start = WalkerStart::Balanced);

}  // namespace aqem

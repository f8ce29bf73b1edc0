#include "aqem/quantum_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aqem/errors.hpp"

namespace aqem {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kAngleSlack = 1e-12;

// Coin matrix for any real angle; the public coin_operator adds the range check.
CoinMatrix coin_from_angle(double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return CoinMatrix{{s, c, c, -s}};
}

double expected_multiplier(std::span<const double> probabilities, int steps) {
    double acc = 0.0;
    for (int x = -steps; x <= steps; ++x) {
        const double p = probabilities[static_cast<std::size_t>(x + steps)];
        if (p != 0.0) {
            acc += p * region_multiplier(bin_region(x, steps).region);
        }
    }
    return acc;
}

double balanced_drift(double mixing_angle, int steps) {
    const std::array<std::complex<double>, 2> start{std::complex<double>{std::cos(mixing_angle), 0.0},
                                                    std::complex<double>{-std::sin(mixing_angle), 0.0}};
    const auto p = simulate_position_distribution(steps, CoinAngle{kQuarterPi}, start);
    return expected_multiplier(p, steps);
}

double balanced_mixing_angle(int steps) {
    // Scan for the first sign change of the drift, then bisect.
    constexpr int kScan = 64;
    double lo = 0.0;
    double f_lo = balanced_drift(lo, steps);
    if (f_lo == 0.0) {
        return lo;
    }
    for (int i = 1; i <= kScan; ++i) {
        const double hi = kHalfPi * i / kScan;
        const double f_hi = balanced_drift(hi, steps);
        if (f_hi == 0.0) {
            return hi;
        }
        if ((f_lo < 0.0) != (f_hi < 0.0)) {
            double a = lo;
            double b = hi;
            double fa = f_lo;
            for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = balanced_drift(mid, steps);
                if (fm == 0.0) {
                    return mid;
                }
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return 0.5 * (a + b);
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw DomainError("no balanced walker start exists for t=" + std::to_string(steps));
}

}  // namespace

CoinAngle CoinAngle::from_bias(double bias) {
    if (!(bias >= 0.0 && bias <= 1.0)) {
        throw DomainError("coin bias must lie in [0, 1]");
    }
    return CoinAngle{std::asin(std::sqrt(bias))};
}

double CoinAngle::bias() const {
    const double s = std::sin(theta);
    return s * s;
}

CoinMatrix coin_operator(CoinAngle angle) {
    if (!(angle.theta >= 0.0 && angle.theta <= kHalfPi)) {
        throw DomainError("coin angle must lie in [0, pi/2]");
    }
    return coin_from_angle(angle.theta);
}

WalkerState::WalkerState(int capacity, std::complex<double> coin_minus, std::complex<double> coin_plus)
    : capacity_(capacity) {
    if (capacity < 0) {
        throw DomainError("walker capacity must be nonnegative");
    }
    amplitudes_.assign(2 * (2 * static_cast<std::size_t>(capacity) + 1), std::complex<double>{0.0, 0.0});
    amplitudes_[index(0, -1)] = coin_minus;
    amplitudes_[index(0, +1)] = coin_plus;
}

WalkerState WalkerState::symmetric(int capacity) {
    const double r = 1.0 / std::numbers::sqrt2;
    return WalkerState(capacity, {r, 0.0}, {0.0, r});
}

std::complex<double> WalkerState::amplitude(int x, int coin) const {
    if (x < -capacity_ || x > capacity_) {
        return {0.0, 0.0};
    }
    return amplitudes_[index(x, coin)];
}

double WalkerState::norm() const {
    double acc = 0.0;
    for (const auto& a : amplitudes_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

std::vector<double> WalkerState::position_distribution() const {
    std::vector<double> p(2 * static_cast<std::size_t>(capacity_) + 1, 0.0);
    for (int x = -capacity_; x <= capacity_; ++x) {
        p[static_cast<std::size_t>(x + capacity_)] =
            std::norm(amplitudes_[index(x, -1)]) + std::norm(amplitudes_[index(x, +1)]);
    }
    return p;
}

void WalkerState::step(const CoinMatrix& coin) {
    if (steps_ >= capacity_) {
        throw DomainError("walk_step: walker would leave its array (capacity " + std::to_string(capacity_) + ")");
    }
    std::vector<std::complex<double>> next(amplitudes_.size(), std::complex<double>{0.0, 0.0});
    // Only |x| <= steps_ is populated; after the shift the support is |x| <= steps_ + 1.
    for (int x = -steps_; x <= steps_; ++x) {
        const auto minus = amplitudes_[index(x, -1)];
        const auto plus = amplitudes_[index(x, +1)];
        const auto new_minus = coin(0, 0) * minus + coin(0, 1) * plus;
        const auto new_plus = coin(1, 0) * minus + coin(1, 1) * plus;
        next[index(x - 1, -1)] += new_minus;
        next[index(x + 1, +1)] += new_plus;
    }
    amplitudes_ = std::move(next);
    ++steps_;
}

WalkerState walk_step(WalkerState state, CoinAngle angle) {
    state.step(coin_operator(angle));
    return state;
}

const char* region_name(Region region) {
    switch (region) {
        case Region::LeftOuter:
            return "LO";
        case Region::LeftInner:
            return "LI";
        case Region::RightInner:
            return "RI";
        case Region::RightOuter:
            return "RO";
    }
    return "?";
}

int region_multiplier(Region region) {
    switch (region) {
        case Region::LeftOuter:
            return 2;
        case Region::LeftInner:
            return 1;
        case Region::RightInner:
            return -1;
        case Region::RightOuter:
            return -2;
    }
    return 0;
}

int region_boundary(int steps) {
    return (steps + 1) / 2;
}

RegionOutcome bin_region(int position, int steps) {
    if (steps < 0 || position < -steps || position > steps) {
        throw DomainError("bin_region: position " + std::to_string(position) + " outside [-t, t] for t=" +
                          std::to_string(steps));
    }
    const int b = region_boundary(steps);
    Region r;
    if (position <= -b) {
        r = Region::LeftOuter;
    } else if (position < 0) {
        r = Region::LeftInner;
    } else if (position < b) {
        r = Region::RightInner;
    } else {
        r = Region::RightOuter;
    }
    return {r, position};
}

const char* walker_start_name(WalkerStart start) {
    return start == WalkerStart::Symmetric ? "symmetric" : "balanced";
}

WalkerStart parse_walker_start(const std::string& name) {
    if (name == "symmetric") {
        return WalkerStart::Symmetric;
    }
    if (name == "balanced") {
        return WalkerStart::Balanced;
    }
    throw DomainError("unknown walker start '" + name + "' (expected symmetric or balanced)");
}

std::array<std::complex<double>, 2> walker_start_amplitudes(WalkerStart start, int steps) {
    if (start == WalkerStart::Symmetric) {
        const double r = 1.0 / std::numbers::sqrt2;
        return {std::complex<double>{r, 0.0}, std::complex<double>{0.0, r}};
    }
    const double a = balanced_mixing_angle(steps);
    return {std::complex<double>{std::cos(a), 0.0}, std::complex<double>{-std::sin(a), 0.0}};
}

std::vector<double> simulate_position_distribution(int steps, CoinAngle angle,
                                                   const std::array<std::complex<double>, 2>& start) {
    const CoinMatrix coin = coin_from_angle(angle.theta);
    WalkerState state(steps, start[0], start[1]);
    for (int s = 0; s < steps; ++s) {
        state.step(coin);
    }
    return state.position_distribution();
}

std::vector<double> simulate_position_distribution(int steps, CoinAngle angle, WalkerStart start) {
    coin_operator(angle);
    return simulate_position_distribution(steps, angle, walker_start_amplitudes(start, steps));
}

Distribution as_distribution(std::span<const double> probabilities) {
    const int t = static_cast<int>(probabilities.size() / 2);
    Distribution d;
    d.reserve(probabilities.size());
    for (int x = -t; x <= t; ++x) {
        d.emplace_back(static_cast<double>(x), probabilities[static_cast<std::size_t>(x + t)]);
    }
    return d;
}

double apply_bias_feedback(double control, Region region, double delta) {
    return std::clamp(control + region_multiplier(region) * delta, 0.0, kHalfPi);
}

double final_bias_control(std::span<const double> deltas, std::span<const Region> regions) {
    if (deltas.size() != regions.size()) {
        throw DomainError("final_bias_control: region sequence length does not match policy length");
    }
    double control = kQuarterPi;
    for (std::size_t m = 0; m < deltas.size(); ++m) {
        control = apply_bias_feedback(control, regions[m], deltas[m]);
    }
    return control;
}

WalkModel::WalkModel(int steps, WalkerStart start)
    : steps_(steps), start_(start), start_amplitudes_(walker_start_amplitudes(start, steps)) {
    if (steps < 1) {
        throw DomainError("walk duration t must be at least 1");
    }
    for (int x = -steps; x <= steps; x += 2) {
        support_.push_back(x);
    }
    const int samples = 2 * steps + 1;
    const std::size_t stride = 2 * static_cast<std::size_t>(steps) + 1;
    std::vector<std::vector<double>> table(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        const double theta = std::numbers::pi * j / samples;
        const CoinMatrix coin = coin_from_angle(theta);
        WalkerState state(steps, start_amplitudes_[0], start_amplitudes_[1]);
        for (int s = 0; s < steps; ++s) {
            state.step(coin);
        }
        table[static_cast<std::size_t>(j)] = state.position_distribution();
    }
    coefficients_.assign(support_.size() * stride, 0.0);
    for (std::size_t i = 0; i < support_.size(); ++i) {
        const std::size_t col = static_cast<std::size_t>(support_[i] + steps);
        double* c = &coefficients_[i * stride];
        for (int j = 0; j < samples; ++j) {
            const double p = table[static_cast<std::size_t>(j)][col];
            const double u = 2.0 * std::numbers::pi * j / samples;
            c[0] += p / samples;
            for (int k = 1; k <= steps; ++k) {
                c[2 * k - 1] += 2.0 * p * std::cos(k * u) / samples;
                c[2 * k] += 2.0 * p * std::sin(k * u) / samples;
            }
        }
    }
}

void WalkModel::evaluate(double theta, std::vector<double>& out) const {
    const std::size_t stride = 2 * static_cast<std::size_t>(steps_) + 1;
    const std::complex<double> base = std::polar(1.0, 2.0 * theta);
    out.resize(support_.size());
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < support_.size(); ++i) {
        out[i] = coefficients_[i * stride];
    }
    std::complex<double> z = base;
    for (int k = 1; k <= steps_; ++k) {
        const double ck = z.real();
        const double sk = z.imag();
        for (std::size_t i = 0; i < support_.size(); ++i) {
            const double* c = &coefficients_[i * stride];
            out[i] += c[2 * k - 1] * ck + c[2 * k] * sk;
        }
        z *= base;
    }
}

std::vector<double> WalkModel::position_distribution(double theta) const {
    std::vector<double> support_probabilities;
    evaluate(theta, support_probabilities);
    std::vector<double> p(2 * static_cast<std::size_t>(steps_) + 1, 0.0);
    for (std::size_t i = 0; i < support_.size(); ++i) {
        p[static_cast<std::size_t>(support_[i] + steps_)] = std::max(0.0, support_probabilities[i]);
    }
    return p;
}

int WalkModel::sample_position(double theta, RandomStream& rng, std::vector<double>& scratch) const {
    evaluate(theta, scratch);
    double total = 0.0;
    for (double& p : scratch) {
        p = std::max(0.0, p);
        total += p;
    }
    const double target = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        acc += scratch[i];
        if (target < acc) {
            return support_[i];
        }
    }
    // Rounding left target at the very top; take the last populated position.
    for (std::size_t i = support_.size(); i-- > 0;) {
        if (scratch[i] > 0.0) {
            return support_[i];
        }
    }
    return support_.back();
}

namespace {

void check_true_theta(double true_theta) {
    if (!(true_theta >= -kAngleSlack && true_theta <= kHalfPi + kAngleSlack)) {
        throw DomainError("true coin angle must lie in [0, pi/2]");
    }
}

}  // namespace

WalkPulseErrors WalkModel::simulate_errors(std::span<const double> deltas, double true_theta, RandomStream& rng,
                                           std::vector<double>& scratch) const {
    check_true_theta(true_theta);
    double control = kQuarterPi;
    for (double delta : deltas) {
        const double effective = std::clamp(true_theta - control + kQuarterPi, 0.0, kHalfPi);
        const int x = sample_position(effective, rng, scratch);
        control = apply_bias_feedback(control, bin_region(x, steps_).region, delta);
    }
    const double s_hat = std::sin(control);
    const double s_true = std::sin(true_theta);
    const double diff = s_hat * s_hat - s_true * s_true;
    return {wrap_phase(2.0 * std::numbers::pi * diff), steps_ * diff};
}

WalkPulseOutcome WalkModel::run_pulse(std::span<const double> deltas, double true_theta, RandomStream& rng) const {
    check_true_theta(true_theta);
    WalkPulseOutcome out;
    std::vector<double> scratch;
    double control = kQuarterPi;
    for (double delta : deltas) {
        const double effective = std::clamp(true_theta - control + kQuarterPi, 0.0, kHalfPi);
        const int x = sample_position(effective, rng, scratch);
        const RegionOutcome r = bin_region(x, steps_);
        out.measurements.push_back(r);
        control = apply_bias_feedback(control, r.region, delta);
    }
    out.theta_estimate = control;
    out.bias_estimate = CoinAngle{control}.bias();
    out.true_bias = CoinAngle{true_theta}.bias();
    const double diff = out.bias_estimate - out.true_bias;
    out.scaled_error = wrap_phase(2.0 * std::numbers::pi * diff);
    out.raw_error = steps_ * diff;
    return out;
}

WalkPulseOutcome run_walk_pulse(int steps, const BiasPolicy& policy, double true_theta, RandomStream& rng,
                                WalkerStart start) {
    return WalkModel(steps, start).run_pulse(policy.deltas, true_theta, rng);
}

}  // namespace aqem

#include "aqem/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aqem/errors.hpp"

namespace aqem {

double wrap_phase(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(angle, two_pi);
    if (r > std::numbers::pi) {
        r -= two_pi;
    } else if (r <= -std::numbers::pi) {
        r += two_pi;
    }
    return r;
}

double wrap_positive(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    if (r >= two_pi) {
        r = 0.0;
    }
    return r;
}

void PhasorSum::add(double zeta) {
    re += std::cos(zeta);
    im += std::sin(zeta);
    ++count;
}

void PhasorSum::merge(const PhasorSum& other) {
    re += other.re;
    im += other.im;
    count += other.count;
}

double sharpness(const PhasorSum& sum) {
    if (sum.count == 0) {
        throw DomainError("sharpness: empty sample set");
    }
    const double s = std::hypot(sum.re, sum.im) / static_cast<double>(sum.count);
    return std::min(s, 1.0);
}

double sharpness(std::span<const double> errors) {
    PhasorSum sum;
    for (double z : errors) {
        sum.add(z);
    }
    return sharpness(sum);
}

double holevo_imprecision(double s) {
    if (!(s > 0.0)) {
        throw DomainError("holevo_imprecision: uninformative policy (sharpness <= 0)");
    }
    if (s > 1.0 + 1e-12) {
        throw DomainError("holevo_imprecision: sharpness exceeds 1");
    }
    if (s >= 1.0) {
        return 0.0;
    }
    return std::sqrt(1.0 / (s * s) - 1.0);
}

double skewness(const Distribution& distribution) {
    double total = 0.0;
    double mean = 0.0;
    for (const auto& [value, p] : distribution) {
        if (p < 0.0) {
            throw DomainError("skewness: negative probability");
        }
        total += p;
        mean += p * value;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw DomainError("skewness: probabilities do not sum to 1");
    }
    double m2 = 0.0;
    double m3 = 0.0;
    for (const auto& [value, p] : distribution) {
        const double d = value - mean;
        m2 += p * d * d;
        m3 += p * d * d * d;
    }
    if (!(m2 > 0.0)) {
        throw DomainError("skewness: degenerate distribution (zero variance)");
    }
    return m3 / (m2 * std::sqrt(m2));
}

double rmse(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("rmse: empty sample set");
    }
    double acc = 0.0;
    for (double v : values) {
        acc += v * v;
    }
    return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace aqem

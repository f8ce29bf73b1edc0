#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace aqem {

/// Wraps an angle to (-pi, pi]; -pi itself maps to +pi.
double wrap_phase(double angle);

/// Reduces an angle to [0, 2pi).
double wrap_positive(double angle);

/// Running sum of unit phasors e^{i zeta}. Accumulating in a fixed order keeps
/// results bit-identical regardless of how the samples were produced.
struct PhasorSum {
    double re = 0.0;
    double im = 0.0;
    std::size_t count = 0;

    void add(double zeta);
    void merge(const PhasorSum& other);
};

/// |sum_k e^{i zeta_k}| / K. Throws DomainError for an empty sample set.
double sharpness(std::span<const double> errors);
double sharpness(const PhasorSum& sum);

/// sqrt(S^-2 - 1), the square root of the Holevo variance.
/// Throws DomainError("uninformative policy") when S <= 0.
double holevo_imprecision(double sharpness);

/// A discrete distribution as (value, probability) pairs.
using Distribution = std::vector<std::pair<double, double>>;

/// Third standardized central moment mu3 / sigma^3.
/// Probabilities must be nonnegative and sum to 1 within 1e-9.
/// Throws DomainError("degenerate distribution") when the variance is zero.
double skewness(const Distribution& distribution);

/// Root mean square of the values. Throws DomainError when empty.
double rmse(std::span<const double> values);

}  // namespace aqem

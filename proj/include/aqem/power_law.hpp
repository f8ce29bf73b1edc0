#pragma once

#include <vector>

namespace aqem {

struct ScalingPoint {
    int n = 0;
    double imprecision = 0.0;
};

/// Least-squares fit of log(imprecision) = intercept - exponent * log(N).
struct ScalingFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // sum of squared log residuals
    std::vector<ScalingPoint> points;

    /// Fitted imprecision at n.
    double predict(double n) const;
};

/// Throws DomainError for fewer than two points, duplicate N, or nonpositive values.
ScalingFit fit_power_law(const std::vector<ScalingPoint>& points);

}  // namespace aqem

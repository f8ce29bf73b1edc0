#include "aqem/power_law.hpp"

#include <cmath>
#include <set>
#include <string>

#include "aqem/errors.hpp"

namespace aqem {

double ScalingFit::predict(double n) const {
    return std::exp(intercept - exponent * std::log(n));
}

ScalingFit fit_power_law(const std::vector<ScalingPoint>& points) {
    if (points.size() < 2) {
        throw DomainError("fit_power_law: need at least two points");
    }
    std::set<int> seen;
    for (const auto& p : points) {
        if (p.n <= 0 || !(p.imprecision > 0.0) || !std::isfinite(p.imprecision)) {
            throw DomainError("fit_power_law: N and imprecision must be positive and finite");
        }
        if (!seen.insert(p.n).second) {
            throw DomainError("fit_power_law: duplicate N=" + std::to_string(p.n));
        }
    }

    const double count = static_cast<double>(points.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& p : points) {
        mean_x += std::log(static_cast<double>(p.n));
        mean_y += std::log(p.imprecision);
    }
    mean_x /= count;
    mean_y /= count;

    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& p : points) {
        const double dx = std::log(static_cast<double>(p.n)) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log(p.imprecision) - mean_y);
    }
    const double slope = sxy / sxx;

    ScalingFit fit;
    fit.exponent = -slope;
    fit.intercept = mean_y - slope * mean_x;
    fit.points = points;
    for (const auto& p : points) {
        const double r = std::log(p.imprecision) - (fit.intercept + slope * std::log(static_cast<double>(p.n)));
        fit.residual += r * r;
    }
    return fit;
}

}  // namespace aqem

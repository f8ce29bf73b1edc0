#include "aqem/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "aqem/errors.hpp"

namespace aqem {

namespace {

double log_factorial(int n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(int n, int k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// P_n^(a,b)(x) by forward recurrence.
double jacobi(int n, int a, int b, double x) {
    if (n == 0) {
        return 1.0;
    }
    const double A = a;
    const double B = b;
    double p_prev = 1.0;
    double p = (A + 1.0) + (A + B + 2.0) * (x - 1.0) / 2.0;
    for (int k = 2; k <= n; ++k) {
        const double K = k;
        const double s = 2.0 * K + A + B;
        const double c1 = 2.0 * K * (K + A + B) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * x + A * A - B * B);
        const double c3 = 2.0 * (K + A - 1.0) * (K + B - 1.0) * s;
        const double next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = next;
    }
    return p;
}

}  // namespace

bool is_valid(const WignerIndex& idx) {
    if (idx.two_j < 0) {
        return false;
    }
    if (std::abs(idx.two_m) > idx.two_j || std::abs(idx.two_mprime) > idx.two_j) {
        return false;
    }
    const int parity = idx.two_j & 1;
    return (std::abs(idx.two_m) & 1) == parity && (std::abs(idx.two_mprime) & 1) == parity;
}

double wigner_d(const WignerIndex& idx) {
    if (!is_valid(idx)) {
        throw DomainError("wigner_d: invalid index (2j=" + std::to_string(idx.two_j) +
                          ", 2m=" + std::to_string(idx.two_m) +
                          ", 2m'=" + std::to_string(idx.two_mprime) + ")");
    }
    // Work with integers: j2 = 2j, row = m, col = m'. The four candidates
    // j+m, j-m, j+m', j-m' are all integers.
    const int j2 = idx.two_j;
    const int row = idx.two_m;       // 2m
    const int col = idx.two_mprime;  // 2m'

    const int jpm = (j2 + row) / 2;
    const int jmm = (j2 - row) / 2;
    const int jpmp = (j2 + col) / 2;
    const int jmmp = (j2 - col) / 2;
    const int k = std::min({jpm, jmm, jpmp, jmmp});

    // Standard form is written for d^j_{m'm} with m' the row; map accordingly:
    // here "mr" is the row (our m) and "mc" the column (our m').
    const int mr_minus_mc = (row - col) / 2;
    int a = 0;
    int lambda = 0;
    if (k == jpmp) {
        a = mr_minus_mc;
        lambda = mr_minus_mc;
    } else if (k == jmmp) {
        a = -mr_minus_mc;
        lambda = 0;
    } else if (k == jpm) {
        a = -mr_minus_mc;
        lambda = 0;
    } else {
        a = mr_minus_mc;
        lambda = mr_minus_mc;
    }
    const int b = j2 - 2 * k - a;

    const double half = idx.beta / 2.0;
    const double log_prefactor = 0.5 * (log_binomial(j2 - k, k + a) - log_binomial(k + b, b));
    const double trig = std::pow(std::sin(half), a) * std::pow(std::cos(half), b);
    const double sign = (lambda % 2 == 0) ? 1.0 : -1.0;
    const double value = sign * std::exp(log_prefactor) * trig * jacobi(k, a, b, std::cos(idx.beta));
    return std::clamp(value, -1.0, 1.0);
}

}  // namespace aqem

#pragma once

// Reference implementations used only by the tests. Each one takes a
// different route from the library code it checks.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

inline long double factorial(int n) {
    long double f = 1.0L;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

// Explicit factorial sum for d^j_{row,col}(beta), all spins doubled.
inline double wigner_sum(int two_j, int two_row, int two_col, double beta) {
    const int jr_plus = (two_j + two_row) / 2;
    const int jr_minus = (two_j - two_row) / 2;
    const int jc_plus = (two_j + two_col) / 2;
    const int jc_minus = (two_j - two_col) / 2;
    const int diff = (two_row - two_col) / 2;
    const long double pre = std::sqrt(factorial(jr_plus) * factorial(jr_minus) * factorial(jc_plus) * factorial(jc_minus));
    const long double c = std::cos(static_cast<long double>(beta) / 2);
    const long double s = std::sin(static_cast<long double>(beta) / 2);
    long double sum = 0.0L;
    for (int k = 0; k <= two_j; ++k) {
        const int a = jc_plus - k;
        const int b = diff + k;
        const int d = jr_minus - k;
        if (a < 0 || b < 0 || d < 0) {
            continue;
        }
        const long double sign = ((diff + k) % 2 == 0) ? 1.0L : -1.0L;
        const int pc = two_j - 2 * k - diff;
        const int ps = diff + 2 * k;
        if (pc < 0 || ps < 0) {
            continue;
        }
        sum += sign * std::pow(c, pc) * std::pow(s, ps) / (factorial(a) * factorial(k) * factorial(b) * factorial(d));
    }
    return static_cast<double>(pre * sum);
}

// Dense two-mode Fock space truncated at `cap` photons per mode; index (na, nb).
struct Fock {
    int cap;
    std::vector<cd> v;

    explicit Fock(int c) : cap(c), v(static_cast<std::size_t>((c + 1) * (c + 1))) {}
    cd& at(int na, int nb) { return v[static_cast<std::size_t>(na * (cap + 1) + nb)]; }
    cd at(int na, int nb) const { return v[static_cast<std::size_t>(na * (cap + 1) + nb)]; }

    double norm2() const {
        double s = 0.0;
        for (const auto& x : v) {
            s += std::norm(x);
        }
        return s;
    }
};

// Amplitudes c_n of |n, k-n> into the dense space.
inline Fock embed(const std::vector<cd>& c) {
    const int k = static_cast<int>(c.size()) - 1;
    Fock f(k);
    for (int n = 0; n <= k; ++n) {
        f.at(n, k - n) = c[static_cast<std::size_t>(n)];
    }
    return f;
}

// (a + sign e^{i theta} b)/sqrt(2) applied element by element.
inline Fock apply_detector(const Fock& in, double theta, int outcome) {
    Fock out(in.cap);
    const cd rotor = std::polar(outcome == 0 ? 1.0 : -1.0, theta);
    for (int na = 0; na <= in.cap; ++na) {
        for (int nb = 0; nb <= in.cap; ++nb) {
            const cd amp = in.at(na, nb);
            if (amp == cd{}) {
                continue;
            }
            if (na > 0) {
                out.at(na - 1, nb) += std::sqrt(static_cast<double>(na)) * amp / std::sqrt(2.0);
            }
            if (nb > 0) {
                out.at(na, nb - 1) += rotor * std::sqrt(static_cast<double>(nb)) * amp / std::sqrt(2.0);
            }
        }
    }
    return out;
}

// Back to amplitudes of |n, k-n>.
inline std::vector<cd> extract(const Fock& f, int k) {
    std::vector<cd> c(static_cast<std::size_t>(k + 1));
    for (int n = 0; n <= k; ++n) {
        c[static_cast<std::size_t>(n)] = f.at(n, k - n);
    }
    return c;
}

// P(outcomes | phi) by applying the whole operator string and dividing by N!.
inline double trajectory_probability(const std::vector<cd>& state, const std::vector<double>& deltas,
                                     const std::vector<int>& outcomes, double phi) {
    Fock f = embed(state);
    const int n_total = static_cast<int>(state.size()) - 1;
    double control = 0.0;
    for (std::size_t m = 0; m < outcomes.size(); ++m) {
        f = apply_detector(f, phi - control, outcomes[m]);
        control += outcomes[m] == 0 ? -deltas[m] : deltas[m];
    }
    double norm = f.norm2();
    for (int k = n_total; k > n_total - static_cast<int>(outcomes.size()); --k) {
        norm /= k;
    }
    return norm;
}

// Exact sharpness by dense enumeration, rectangle rule over a periodic grid.
inline double exact_sharpness(const std::vector<cd>& state, const std::vector<double>& deltas, int grid) {
    const int n = static_cast<int>(deltas.size());
    cd total{};
    for (int g = 0; g < grid; ++g) {
        const double phi = 2.0 * std::numbers::pi * g / grid;
        for (int mask = 0; mask < (1 << n); ++mask) {
            std::vector<int> outcomes(static_cast<std::size_t>(n));
            double control = 0.0;
            for (int m = 0; m < n; ++m) {
                outcomes[static_cast<std::size_t>(m)] = (mask >> m) & 1;
                control += outcomes[static_cast<std::size_t>(m)] == 0 ? -deltas[static_cast<std::size_t>(m)]
                                                                      : deltas[static_cast<std::size_t>(m)];
            }
            const double p = trajectory_probability(state, deltas, outcomes, phi);
            total += p * std::polar(1.0, control - phi);
        }
    }
    return std::abs(total) / grid;
}

// Coined walk on the line with a map-based state; coin then shift.
inline std::map<int, double> walk_distribution(int steps, double theta, cd start_minus, cd start_plus) {
    std::map<std::pair<int, int>, cd> psi;
    psi[{0, -1}] = start_minus;
    psi[{0, +1}] = start_plus;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    for (int t = 0; t < steps; ++t) {
        std::map<std::pair<int, int>, cd> next;
        for (const auto& [key, amp] : psi) {
            const auto [x, coin] = key;
            // C|-1> = s|-1> + c|+1>,  C|+1> = c|-1> - s|+1>
            const cd to_minus = coin < 0 ? s * amp : c * amp;
            const cd to_plus = coin < 0 ? c * amp : -s * amp;
            next[{x - 1, -1}] += to_minus;
            next[{x + 1, +1}] += to_plus;
        }
        psi.swap(next);
    }
    std::map<int, double> p;
    for (const auto& [key, amp] : psi) {
        p[key.first] += std::norm(amp);
    }
    return p;
}

}  // namespace oracle

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "aqem/errors.hpp"
#include "aqem/interferometer.hpp"
#include "aqem/statistics.hpp"
#include "oracles.hpp"

using namespace aqem;
constexpr double kPi = std::numbers::pi;

namespace {

TwoModeState random_state(int k, RandomStream& rng) {
    TwoModeState s;
    s.amplitudes.resize(static_cast<std::size_t>(k) + 1);
    double norm = 0.0;
    for (auto& a : s.amplitudes) {
        a = Complex{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        norm += std::norm(a);
    }
    for (auto& a : s.amplitudes) {
        a /= std::sqrt(norm);
    }
    return s;
}

// The input-state double sum evaluated with the factorial-sum rotation elements.
std::vector<Complex> input_state_oracle(int n_total) {
    std::vector<Complex> c(static_cast<std::size_t>(n_total) + 1);
    double norm = 0.0;
    for (int n = 0; n <= n_total; ++n) {
        for (int k = 0; k <= n_total; ++k) {
            c[static_cast<std::size_t>(n)] += std::sin((k + 1) * kPi / (n_total + 2)) *
                                              std::polar(1.0, kPi * (k - n) / 2.0) *
                                              oracle::wigner_sum(n_total, 2 * n - n_total, 2 * k - n_total, kPi / 2);
        }
        norm += std::norm(c[static_cast<std::size_t>(n)]);
    }
    const Complex phase = std::conj(c[0]) / std::abs(c[0]);
    for (auto& a : c) {
        a *= phase / std::sqrt(norm);
    }
    return c;
}

}  // namespace

TEST(InputState, SinglePhoton) {
    const auto s = prepare_input_state(1);
    ASSERT_EQ(s.amplitudes.size(), 2u);
    EXPECT_NEAR(std::abs(s.amplitudes[0]), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(s.amplitudes[1]), 1 / std::sqrt(2.0), 1e-12);
}

TEST(InputState, MatchesIndependentEvaluation) {
    for (int n = 1; n <= 16; ++n) {
        const auto s = prepare_input_state(n);
        const auto ref = input_state_oracle(n);
        for (int i = 0; i <= n; ++i) {
            EXPECT_NEAR(std::abs(s.amplitudes[static_cast<std::size_t>(i)] - ref[static_cast<std::size_t>(i)]), 0.0,
                        1e-11)
                << "N=" << n << " n=" << i;
        }
    }
}

TEST(InputState, NormPhaseAndSymmetry) {
    for (int n = 1; n <= 128; ++n) {
        const auto s = prepare_input_state(n);
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
        EXPECT_GE(s.amplitudes[0].real(), 0.0);
        EXPECT_EQ(s.amplitudes[0].imag(), 0.0);
        if (n <= 30) {
            for (int i = 0; i <= n; ++i) {
                EXPECT_NEAR(std::abs(s.amplitudes[static_cast<std::size_t>(i)]),
                            std::abs(s.amplitudes[static_cast<std::size_t>(n - i)]), 1e-10);
            }
        }
    }
    EXPECT_THROW(prepare_input_state(0), DomainError);
    EXPECT_THROW(prepare_input_state(129), DomainError);
}

TEST(InputState, BeamSplitterGivesSineState) {
    for (int n : {1, 2, 3, 7, 14, 40, 98, 128}) {
        const auto probe = enter_interferometer(prepare_input_state(n));
        double norm = 0.0;
        for (int i = 0; i <= n; ++i) {
            norm += std::pow(std::sin((i + 1) * kPi / (n + 2)), 2);
        }
        for (int i = 0; i <= n; ++i) {
            const double expected = std::sin((i + 1) * kPi / (n + 2)) / std::sqrt(norm);
            EXPECT_NEAR(std::abs(probe.amplitudes[static_cast<std::size_t>(i)] - expected), 0.0, 1e-12);
        }
    }
}

TEST(Detection, SinglePhotonExamples) {
    TwoModeState s{{Complex{1 / std::sqrt(2.0)}, Complex{1 / std::sqrt(2.0)}}};
    EXPECT_NEAR(outcome_probability(s, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(outcome_probability(s, kPi), 0.0, 1e-15);
    for (double theta : {0.2, 1.0, 2.5, -1.7}) {
        EXPECT_NEAR(outcome_probability(s, theta), std::pow(std::cos(theta / 2), 2), 1e-15);
    }
}

TEST(Detection, CompletenessAndPosteriorNorms) {
    RandomStream rng({17, 0});
    for (int trial = 0; trial < 10000; ++trial) {
        const int k = 1 + static_cast<int>(rng.below(40));
        const auto s = random_state(k, rng);
        const double theta = rng.uniform(-kPi, kPi);
        const double p0 = outcome_probability(s, theta);
        ASSERT_GE(p0, -1e-15);
        ASSERT_LE(p0, 1.0 + 1e-15);
        if (k > 1) {
            for (int u = 0; u < 2; ++u) {
                const double p = u == 0 ? p0 : 1 - p0;
                if (p < 1e-12) {
                    continue;
                }
                const auto post = project(s, theta, u);
                ASSERT_EQ(post.photons(), static_cast<std::size_t>(k - 1));
                ASSERT_NEAR(post.norm(), 1.0, 1e-10);
            }
        }
    }
}

TEST(Detection, MatchesDenseOperators) {
    RandomStream rng({18, 0});
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 1 + static_cast<int>(rng.below(8));
        const auto s = random_state(k, rng);
        const double theta = rng.uniform(-kPi, kPi);
        for (int u = 0; u < 2; ++u) {
            const auto dense = oracle::apply_detector(oracle::embed(s.amplitudes), theta, u);
            const double p = dense.norm2() / k;
            const double p_lib = u == 0 ? outcome_probability(s, theta) : 1 - outcome_probability(s, theta);
            EXPECT_NEAR(p_lib, p, 1e-13);
            if (p > 1e-9 && k > 1) {
                const auto post = project(s, theta, u);
                const auto ref = oracle::extract(dense, k - 1);
                for (int n = 0; n < k; ++n) {
                    EXPECT_NEAR(std::abs(post.amplitudes[static_cast<std::size_t>(n)] -
                                         ref[static_cast<std::size_t>(n)] / std::sqrt(k * p)),
                                0.0, 1e-12);
                }
            }
        }
    }
}

TEST(Detection, ExhaustedState) {
    TwoModeState empty{{Complex{1.0}}};
    RandomStream rng({1, 1});
    EXPECT_THROW(outcome_probability(empty, 0.1), StateExhaustedError);
    EXPECT_THROW(measure_one_photon(empty, 0.1, rng), StateExhaustedError);
    // Unnormalized on purpose: p_0 = 1 exactly, so outcome 1 is impossible.
    TwoModeState s{{Complex{1.0}, Complex{0.5}}};
    EXPECT_DOUBLE_EQ(outcome_probability(s, 0.0), 1.0);
    EXPECT_THROW(project(s, 0.0, 1), DomainError);
    EXPECT_THROW(project(s, 0.0, 2), DomainError);
}

TEST(Feedback, UpdateRuleArithmetic) {
    const std::vector<double> deltas{kPi / 2, kPi / 4};
    const std::vector<std::uint8_t> outcomes{0, 1};
    const double control = final_control(deltas, outcomes);
    EXPECT_NEAR(control, -kPi / 4, 1e-15);
    EXPECT_NEAR(wrap_positive(control), 7 * kPi / 4, 1e-15);
}

TEST(Pulse, ZeroPolicyNeverMoves) {
    RandomStream rng({4, 4});
    for (double phi : {0.3, 2.0, 5.9}) {
        const auto out = run_pulse(1, PhasePolicy{{0.0}}, phi, rng);
        EXPECT_EQ(out.estimate, 0.0);
        EXPECT_NEAR(out.error, wrap_phase(-phi), 1e-15);
        EXPECT_EQ(out.outcomes.size(), 1u);
    }
}

TEST(Pulse, SinglePhotonStatistics) {
    const InterferometerModel model(1);
    RandomStream rng({5, 5});
    for (double phi : {0.0, 1.0, 2.2}) {
        const int runs = 100000;
        int zeros = 0;
        for (int i = 0; i < runs; ++i) {
            zeros += model.run_pulse(std::vector<double>{0.0}, phi, rng).outcomes[0] == 0;
        }
        const double p = std::pow(std::cos(phi / 2), 2);
        EXPECT_NEAR(zeros / double(runs), p, 3 * std::sqrt(p * (1 - p) / runs) + 1e-12);
    }
}

TEST(Pulse, FirstOutcomeMarginal) {
    const int n = 6;
    const InterferometerModel model(n);
    const std::vector<double> policy{1.2, -0.7, 0.4, 0.3, -0.2, 0.1};
    const double phi = 1.9;
    const double p0 = oracle::apply_detector(oracle::embed(model.probe_state().amplitudes), phi, 0).norm2() / n;
    RandomStream rng({6, 6});
    const int runs = 100000;
    int zeros = 0;
    for (int i = 0; i < runs; ++i) {
        zeros += model.run_pulse(policy, phi, rng).outcomes[0] == 0;
    }
    EXPECT_NEAR(zeros / double(runs), p0, 3 * std::sqrt(p0 * (1 - p0) / runs));
}

TEST(Pulse, TrajectoryProbabilityFactorizes) {
    RandomStream rng({7, 7});
    for (int n = 1; n <= 4; ++n) {
        const InterferometerModel model(n);
        std::vector<double> policy(static_cast<std::size_t>(n));
        for (auto& d : policy) {
            d = rng.uniform(-kPi, kPi);
        }
        const double phi = rng.uniform(0, 2 * kPi);
        double total = 0.0;
        for (int mask = 0; mask < (1 << n); ++mask) {
            std::vector<std::uint8_t> outcomes(static_cast<std::size_t>(n));
            std::vector<int> as_int(static_cast<std::size_t>(n));
            for (int m = 0; m < n; ++m) {
                outcomes[static_cast<std::size_t>(m)] = static_cast<std::uint8_t>((mask >> m) & 1);
                as_int[static_cast<std::size_t>(m)] = (mask >> m) & 1;
            }
            const double p = model.trajectory_probability(policy, outcomes, phi);
            EXPECT_NEAR(p, oracle::trajectory_probability(model.probe_state().amplitudes, policy, as_int, phi), 1e-13);
            total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Pulse, ErrorMatchesFullPulse) {
    const InterferometerModel model(5);
    const std::vector<double> policy{2.0, -1.0, 0.5, 0.25, -0.1};
    RandomStream a({9, 1});
    RandomStream b({9, 1});
    std::vector<Complex> s1;
    std::vector<Complex> s2;
    for (int i = 0; i < 1000; ++i) {
        const double phi = 0.001 * i * 6.28;
        const auto full = model.run_pulse(policy, phi, a);
        const double err = model.simulate_error(policy, phi, b, s1, s2);
        ASSERT_EQ(full.error, err);
        ASSERT_GT(full.error, -kPi);
        ASSERT_LE(full.error, kPi);
        ASSERT_GE(full.estimate, 0.0);
        ASSERT_LT(full.estimate, 2 * kPi);
    }
}

TEST(Pulse, PolicyLengthChecked) {
    RandomStream rng({1, 1});
    EXPECT_THROW(run_pulse(3, PhasePolicy{{0.1, 0.2}}, 0.0, rng), DomainError);
}

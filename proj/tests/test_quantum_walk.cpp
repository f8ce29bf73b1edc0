#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "aqem/errors.hpp"
#include "aqem/quantum_walk.hpp"
#include "oracles.hpp"

using namespace aqem;
constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

TEST(Coin, HadamardAndBallistic) {
    const auto h = coin_operator({kPi / 4});
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(h(0, 0), r, 1e-15);
    EXPECT_NEAR(h(0, 1), r, 1e-15);
    EXPECT_NEAR(h(1, 0), r, 1e-15);
    EXPECT_NEAR(h(1, 1), -r, 1e-15);
    const auto b = coin_operator({kPi / 2});
    EXPECT_NEAR(b(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(b(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(b(1, 0), 0.0, 1e-15);
    EXPECT_NEAR(b(1, 1), -1.0, 1e-15);
}

TEST(Coin, Unitarity) {
    for (int i = 0; i <= 1000; ++i) {
        const auto c = coin_operator({kPi / 2 * i / 1000.0});
        for (int r = 0; r < 2; ++r) {
            for (int s = 0; s < 2; ++s) {
                const double dot = c(r, 0) * c(s, 0) + c(r, 1) * c(s, 1);
                EXPECT_NEAR(dot, r == s ? 1.0 : 0.0, 1e-15);
            }
        }
    }
}

TEST(Coin, BiasRoundTripAndRange) {
    for (double phi : {0.0, 0.2, 0.5, 0.7, 1.0}) {
        EXPECT_NEAR(CoinAngle::from_bias(phi).bias(), phi, 1e-15);
    }
    EXPECT_THROW(coin_operator({-0.01}), DomainError);
    EXPECT_THROW(coin_operator({kPi / 2 + 0.01}), DomainError);
}

TEST(Walk, OneStepHandCalculation) {
    WalkerState s(1, 1.0, 0.0);
    s.step(coin_operator({kPi / 4}));
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(s.amplitude(-1, -1) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitude(1, 1) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitude(-1, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitude(1, -1)), 0.0, 1e-15);
}

TEST(Walk, BallisticLimit) {
    const int t = 12;
    WalkerState s(t, 1.0, 0.0);
    for (int i = 0; i < t; ++i) {
        s = walk_step(s, {kPi / 2});
    }
    const auto p = s.position_distribution();
    EXPECT_NEAR(p[0], 1.0, 1e-15);
}

TEST(Walk, NormAndParity) {
    const int t = 40;
    WalkerState s = WalkerState::symmetric(t);
    const auto coin = coin_operator({0.6});
    for (int step = 1; step <= t; ++step) {
        s.step(coin);
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
        const auto p = s.position_distribution();
        for (int x = -t; x <= t; ++x) {
            const double mass = p[static_cast<std::size_t>(x + t)];
            if (std::abs(x) > step || ((x + step) % 2 != 0)) {
                EXPECT_EQ(mass, 0.0) << "x=" << x << " step=" << step;
            }
        }
    }
    EXPECT_THROW(s.step(coin), DomainError);
}

TEST(Walk, SymmetricStartIsMirrorSymmetricAtHadamard) {
    for (int t : {1, 5, 20, 50}) {
        const auto p = simulate_position_distribution(t, {kPi / 4}, WalkerStart::Symmetric);
        for (int x = 0; x <= t; ++x) {
            EXPECT_NEAR(p[static_cast<std::size_t>(t + x)], p[static_cast<std::size_t>(t - x)], 1e-10);
        }
    }
}

TEST(Walk, MatchesMapSimulation) {
    for (int t : {1, 3, 10, 25}) {
        for (double theta : {0.0, 0.3, kPi / 4, 1.2, kPi / 2}) {
            for (const auto start : {WalkerStart::Symmetric, WalkerStart::Balanced}) {
                const auto amps = walker_start_amplitudes(start, t);
                const auto ref = oracle::walk_distribution(t, theta, amps[0], amps[1]);
                const auto p = simulate_position_distribution(t, {theta}, start);
                for (int x = -t; x <= t; ++x) {
                    const auto it = ref.find(x);
                    const double expected = it == ref.end() ? 0.0 : it->second;
                    EXPECT_NEAR(p[static_cast<std::size_t>(x + t)], expected, 1e-13);
                }
            }
        }
    }
}

TEST(Walk, MirroredDynamics) {
    // Reflection x -> -x conjugates the coin into -Z C Z, so the mirror image of
    // a walk from (a, b) is the walk from (b, -a) at the same angle.
    for (int t = 1; t <= 50; t += 7) {
        for (double theta : {0.2, 0.9, 1.4}) {
            const double n = std::sqrt(0.6 * 0.6 + 0.1 * 0.1 + 0.3 * 0.3 + 0.7 * 0.7);
            const cd a = cd{0.6, 0.1} / n;
            const cd b = cd{-0.3, 0.7} / n;
            const auto p = simulate_position_distribution(t, {theta}, std::array<cd, 2>{a, b});
            const auto q = oracle::walk_distribution(t, theta, b, -a);
            for (int x = -t; x <= t; ++x) {
                const auto it = q.find(-x);
                const double mirrored = it == q.end() ? 0.0 : it->second;
                EXPECT_NEAR(p[static_cast<std::size_t>(x + t)], mirrored, 1e-12);
            }
        }
    }
}

TEST(Regions, BinningExamples) {
    EXPECT_EQ(region_boundary(5), 3);
    EXPECT_EQ(bin_region(-5, 5).region, Region::LeftOuter);
    EXPECT_EQ(bin_region(-2, 5).region, Region::LeftInner);
    EXPECT_EQ(bin_region(0, 5).region, Region::RightInner);
    EXPECT_EQ(bin_region(4, 5).region, Region::RightOuter);
    EXPECT_EQ(bin_region(-2, 2).region, Region::LeftOuter);
    EXPECT_EQ(bin_region(2, 2).region, Region::RightOuter);
    EXPECT_EQ(bin_region(0, 2).region, Region::RightInner);
    EXPECT_EQ(bin_region(3, 5).position, 3);
    EXPECT_THROW(bin_region(6, 5), DomainError);
    EXPECT_EQ(region_multiplier(Region::LeftOuter), 2);
    EXPECT_EQ(region_multiplier(Region::LeftInner), 1);
    EXPECT_EQ(region_multiplier(Region::RightInner), -1);
    EXPECT_EQ(region_multiplier(Region::RightOuter), -2);
}

TEST(Regions, InnerMassAtHundredSteps) {
    const int t = 100;
    const auto p = simulate_position_distribution(t, {kPi / 4}, WalkerStart::Symmetric);
    double inner = 0.0;
    double total = 0.0;
    for (int x = -t; x <= t; ++x) {
        const double m = p[static_cast<std::size_t>(x + t)];
        total += m;
        const auto r = bin_region(x, t).region;
        if (r == Region::LeftInner || r == Region::RightInner) {
            inner += m;
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_GE(inner, 0.25);
    EXPECT_LE(inner, 0.45);
}

TEST(Skew, SymmetricAtUnbiasedCoin) {
    for (int t : {10, 20, 100}) {
        const auto p = simulate_position_distribution(t, CoinAngle::from_bias(0.5), WalkerStart::Symmetric);
        EXPECT_NEAR(skewness(as_distribution(p)), 0.0, 1e-10);
    }
}

TEST(Skew, BiasedCoinSkewsBalancedWalker) {
    const auto p = simulate_position_distribution(20, CoinAngle::from_bias(0.7), WalkerStart::Balanced);
    EXPECT_GT(std::abs(skewness(as_distribution(p))), 0.05);
    const auto q = simulate_position_distribution(20, CoinAngle::from_bias(0.3), WalkerStart::Balanced);
    EXPECT_LT(skewness(as_distribution(p)) * skewness(as_distribution(q)), 0.0);
}

TEST(Control, UpdateArithmetic) {
    const std::vector<double> deltas{0.1, 0.05};
    const std::vector<Region> regions{Region::RightOuter, Region::RightOuter};
    EXPECT_NEAR(final_bias_control(deltas, regions), kPi / 4 - 0.2 - 0.1, 1e-15);
    EXPECT_EQ(apply_bias_feedback(0.1, Region::RightOuter, 0.5), 0.0);
    EXPECT_EQ(apply_bias_feedback(1.5, Region::LeftOuter, 0.5), kPi / 2);
}

TEST(Pulse, ZeroPolicyEstimatesHalf) {
    RandomStream rng({3, 3});
    for (double theta : {0.1, 0.8, 1.5}) {
        const auto out = run_walk_pulse(10, BiasPolicy{{0.0, 0.0, 0.0}}, theta, rng);
        EXPECT_NEAR(out.theta_estimate, kPi / 4, 1e-15);
        EXPECT_NEAR(out.bias_estimate, 0.5, 1e-15);
        EXPECT_EQ(out.measurements.size(), 3u);
        EXPECT_NEAR(out.raw_error, 10 * (0.5 - std::pow(std::sin(theta), 2)), 1e-12);
    }
}

TEST(Pulse, UnbiasedSymmetricWalkersSplitEvenly) {
    // Odd t keeps every walker off x = 0.
    const WalkModel model(9, WalkerStart::Symmetric);
    RandomStream rng({4, 2});
    const int runs = 20000;
    int left = 0;
    for (int i = 0; i < runs; ++i) {
        const auto out = model.run_pulse(std::vector<double>{0.0}, kPi / 4, rng);
        const auto r = out.measurements[0].region;
        left += (r == Region::LeftOuter || r == Region::LeftInner);
    }
    EXPECT_NEAR(left / double(runs), 0.5, 3 * std::sqrt(0.25 / runs));
}

TEST(Model, FourierCacheMatchesStateVector) {
    for (int t : {1, 2, 10, 20, 37}) {
        for (const auto start : {WalkerStart::Symmetric, WalkerStart::Balanced}) {
            if (t == 2 && start == WalkerStart::Balanced) {
                EXPECT_THROW(WalkModel(t, start), DomainError);
                continue;
            }
            const WalkModel model(t, start);
            for (double theta : {0.0, 0.05, 0.7, kPi / 4, 1.3, kPi / 2}) {
                const auto a = model.position_distribution(theta);
                const auto b = simulate_position_distribution(t, {theta}, start);
                for (std::size_t i = 0; i < a.size(); ++i) {
                    EXPECT_NEAR(a[i], b[i], 1e-12) << "t=" << t << " theta=" << theta;
                }
            }
        }
    }
}

TEST(Model, SampledPositionsMatchDistribution) {
    for (int t : {5, 20}) {
        const WalkModel model(t, WalkerStart::Balanced);
        const double theta = 0.9;
        const auto p = model.position_distribution(theta);
        std::vector<int> counts(p.size(), 0);
        RandomStream rng({21, static_cast<std::uint64_t>(t)});
        const int runs = 1000000;
        for (int i = 0; i < runs; ++i) {
            // theta* chosen so the first walker sees theta_eff = theta.
            const auto out = model.run_pulse(std::vector<double>{0.0}, theta, rng);
            ++counts[static_cast<std::size_t>(out.measurements[0].position + t)];
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double sigma = std::sqrt(p[i] * (1 - p[i]) / runs);
            EXPECT_NEAR(counts[i] / double(runs), p[i], 3 * sigma + 1e-12) << "x=" << int(i) - t;
        }
    }
}

TEST(Model, BalancedStartHasNoDriftAtHadamard) {
    for (int t : {4, 10, 20}) {
        const auto p = simulate_position_distribution(t, {kPi / 4}, WalkerStart::Balanced);
        double drift = 0.0;
        for (int x = -t; x <= t; ++x) {
            drift += p[static_cast<std::size_t>(x + t)] * region_multiplier(bin_region(x, t).region);
        }
        EXPECT_NEAR(drift, 0.0, 1e-9);
    }
}

TEST(Model, ErrorsMatchFullPulse) {
    const WalkModel model(10, WalkerStart::Balanced);
    const std::vector<double> policy{0.3, -0.2, 0.1, 0.05};
    RandomStream a({8, 8});
    RandomStream b({8, 8});
    std::vector<double> scratch;
    for (int i = 0; i < 500; ++i) {
        const double theta = kPi / 2 * i / 500.0;
        const auto full = model.run_pulse(policy, theta, a);
        const auto e = model.simulate_errors(policy, theta, b, scratch);
        ASSERT_EQ(full.scaled_error, e.scaled_error);
        ASSERT_EQ(full.raw_error, e.raw_error);
        ASSERT_GT(e.scaled_error, -kPi);
        ASSERT_LE(e.scaled_error, kPi);
    }
    EXPECT_THROW(model.run_pulse(policy, 2.0, a), DomainError);
}

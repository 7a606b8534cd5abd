#include <gtest/gtest.h>

#include <cmath>

#include "psq/game.hpp"
#include "psq/metrics.hpp"
#include "psq/verify.hpp"

using namespace psq;

namespace {

GameContext ctx(std::vector<double> psi, std::vector<double> cost, double qos, double total) {
    return GameContext{std::move(psi), std::move(cost), qos, total};
}

}  // namespace

TEST(Nash, Symmetric) {
    const auto s = nash_demands(ctx({1, 1}, {1, 1}, 1, 10));
    EXPECT_NEAR(s.demands[0], 5.0, 1e-12);
    EXPECT_NEAR(s.demands[1], 5.0, 1e-12);
}

TEST(Nash, WeightedSplit) {
    const auto c = ctx({2, 1}, {1, 1}, 1, 10);
    const auto s = nash_demands(c);
    EXPECT_NEAR(s.demands[0], 20.0 / 3.0, 1e-12);
    EXPECT_NEAR(s.demands[1], 10.0 / 3.0, 1e-12);
    const auto chk = check_ne_conditions(s, c, 1e-9);
    EXPECT_TRUE(chk.satisfied);
    EXPECT_LT(chk.level_spread, 1e-12);
    // h_i = Q_i (1 + c_i / qos) / psi_i
    EXPECT_NEAR(s.demands[0] * 2.0 / 2.0, 20.0 / 3.0, 1e-12);
}

TEST(Nash, ZeroWeightPlayer) {
    const auto s = nash_demands(ctx({1, 0}, {1, 1}, 1, 10));
    EXPECT_NEAR(s.demands[0], 10.0, 1e-12);
    EXPECT_EQ(s.demands[1], 0.0);
}

TEST(Nash, AllZeroContribution) {
    try {
        nash_demands(ctx({0, 0}, {1, 1}, 1, 10));
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::all_zero_contribution);
    }
}

TEST(NeConditions, DetectsViolations) {
    const auto c = ctx({2, 1}, {1, 1}, 1, 10);
    auto s = nash_demands(c);
    s.demands[0] += 0.01;
    const auto chk = check_ne_conditions(s, c, 1e-9);
    EXPECT_FALSE(chk.satisfied);
    EXPECT_NEAR(chk.total_residual, 0.01, 1e-12);
    const auto uniform = check_ne_conditions(StrategyProfile{{5, 5}}, c, 1e-9);
    EXPECT_FALSE(uniform.satisfied);
    EXPECT_LT(uniform.total_residual, 1e-12);
    EXPECT_GT(uniform.level_spread, 1.0);
}

TEST(WelfareBound, Values) {
    EXPECT_NEAR(welfare_bound(std::vector<double>{2, 1}, std::vector<double>{1, 1}, 1.0), 2.0794415416798359, 1e-15);
    EXPECT_EQ(welfare_bound(std::vector<double>{0, 0}, std::vector<double>{1, 2}, 1.0), 0.0);
    try {
        welfare_bound(std::vector<double>{1}, std::vector<double>{0}, 1.0);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::zero_cost);
    }
}

TEST(WelfareBound, AttainedAtEquilibrium) {
    const auto c = ctx({2, 1}, {1, 1}, 1, 10);
    const auto s = nash_demands(c);
    const auto p = declared_problem(c, s);
    EXPECT_NEAR(welfare(allocate_itf(p), p), 3.0 * std::log(2.0), 1e-12);
}

TEST(Deviation, GridAndUnitMultiplier) {
    const auto g = default_deviation_grid();
    ASSERT_EQ(g.size(), 200u);
    EXPECT_DOUBLE_EQ(g.front(), 0.1);
    EXPECT_DOUBLE_EQ(g.back(), 2.0);
    const auto c = ctx({2, 1}, {1, 1}, 1, 10);
    const auto s = nash_demands(c);
    EXPECT_EQ(deviation_sweep(0, s, c, std::vector<double>{1.0}), 0.0);
    EXPECT_EQ(deviation_sweep(0, s, c, std::vector<double>{}), 0.0);
}

TEST(Deviation, NoGainAtEquilibrium) {
    const auto c = ctx({2, 1, 0.5}, {1, 0.3, 2}, 0.7, 10);
    const auto s = nash_demands(c);
    const auto g = default_deviation_grid();
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(deviation_sweep(i, s, c, g), 1e-9) << i;
}

TEST(Deviation, UniformSplitUnderContentionIsNotEquilibrium) {
    const auto c = ctx({2, 1, 0.5}, {1, 0.3, 2}, 0.7, 9);
    const StrategyProfile uniform{{4, 4, 4}};
    const auto g = default_deviation_grid();
    double best = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) best = std::max(best, deviation_sweep(i, uniform, c, g));
    EXPECT_GT(best, 1e-6);
}

TEST(GameProperties, RandomInstances) {
    Rng rng(61);
    const auto g = default_deviation_grid();
    for (int t = 0; t < 60; ++t) {
        const auto p = random_instance(rng, 1 + t % 12);
        const auto c = game_context(p);
        const auto s = nash_demands(c);
        EXPECT_TRUE(check_ne_conditions(s, c, 1e-9).satisfied);
        const auto d = declared_problem(c, s);
        EXPECT_NEAR(welfare(allocate_itf(d), d), welfare_bound(c.psi, c.cost, c.qos), 1e-12);
        for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(deviation_sweep(i, s, c, g), 1e-9);
    }
}

TEST(GameProperties, HomogeneousInTotal) {
    Rng rng(67);
    for (int t = 0; t < 50; ++t) {
        auto c = game_context(random_instance(rng, 1 + t % 10));
        const auto a = nash_demands(c);
        c.q_total *= 3.5;
        const auto b = nash_demands(c);
        for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(b.demands[i], 3.5 * a.demands[i], 1e-12);
    }
}

TEST(GameProperties, ParetoAlternativesCostOthers) {
    // At the equilibrium every user holds exactly Q_i*; raising one user's quota
    // on a feasible alternative takes quota from the rest.
    Rng rng(71);
    for (int t = 0; t < 50; ++t) {
        const auto c = game_context(random_instance(rng, 2 + t % 10));
        const auto s = nash_demands(c);
        const auto d = declared_problem(c, s);
        const auto a = allocate_itf(d);
        for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(a.quotas[i], s.demands[i], 1e-12);
        EXPECT_NEAR(a.total(), c.q_total, 1e-9);
        for (int k = 0; k < 20; ++k) {
            std::vector<double> alt(c.size());
            double sum = 0.0;
            for (auto& v : alt) sum += (v = rng.next_unit());
            for (auto& v : alt) v *= c.q_total / sum;
            const std::size_t i = k % c.size();
            if (alt[i] <= a.quotas[i]) continue;
            double others_before = 0.0, others_after = 0.0;
            for (std::size_t j = 0; j < c.size(); ++j)
                if (j != i) others_before += a.quotas[j], others_after += alt[j];
            EXPECT_LT(others_after, others_before);
        }
    }
}

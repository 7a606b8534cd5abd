#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "psq/model.hpp"
#include "psq/random.hpp"

using namespace psq;

namespace {

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

template <class F>
Moments moments(std::size_t n, F&& draw) {
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = draw();
        s += x;
        s2 += x * x;
    }
    const double mean = s / static_cast<double>(n);
    return {mean, std::sqrt(s2 / static_cast<double>(n) - mean * mean)};
}

}  // namespace

TEST(Random, DeriveSeedIsDeterministicAndSeparatesStreams) {
    const auto a = derive_seed(1, 2, 3, StreamPurpose::scenario);
    EXPECT_EQ(a, derive_seed(1, 2, 3, StreamPurpose::scenario));
    std::set<std::uint64_t> seen;
    for (std::uint64_t slot = 0; slot < 50; ++slot)
        for (auto p : {StreamPurpose::scenario, StreamPurpose::realization, StreamPurpose::burst,
                       StreamPurpose::oracle})
            seen.insert(derive_seed(1, slot, 0, p));
    EXPECT_EQ(seen.size(), 200u);
    EXPECT_NE(derive_seed(1, 0, 0, StreamPurpose::scenario), derive_seed(2, 0, 0, StreamPurpose::scenario));
    EXPECT_NE(derive_seed(1, 0, 1, StreamPurpose::scenario), derive_seed(1, 1, 0, StreamPurpose::scenario));
}

TEST(Random, UniformRangeAndDeterminism) {
    Rng a(42), b(42);
    std::vector<double> first;
    for (int i = 0; i < 1000; ++i) {
        const double x = sample_uniform(a, 0.0, 1.0);
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
        EXPECT_EQ(x, sample_uniform(b, 0.0, 1.0));
        first.push_back(x);
    }
    EXPECT_NE(first[0], first[1]);
}

TEST(Random, UniformMean) {
    Rng rng(7);
    const auto m = moments(100000, [&] { return sample_uniform(rng, 0.0, 1.0); });
    EXPECT_NEAR(m.mean, 0.5, 0.01);
}

TEST(Random, UniformRejectsBadBounds) {
    Rng rng(1);
    EXPECT_THROW(sample_uniform(rng, 1.0, 1.0), Error);
    try {
        sample_uniform(rng, 2.0, 1.0);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_bounds);
    }
}

TEST(Random, UniformNarrowIntervalStaysHalfOpen) {
    Rng rng(3);
    const double a = 1.0;
    const double b = std::nextafter(1.0, 2.0);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_uniform(rng, a, b), a);
}

TEST(Random, TruncatedNormalDegenerate) {
    Rng rng(1);
    EXPECT_EQ(sample_truncated_normal(rng, 0.5, 0.0, 0.0, 1.0), 0.5);
    EXPECT_EQ(sample_truncated_normal(rng, 2.0, 0.0, 0.0, 1.0), 1.0);
    EXPECT_EQ(sample_truncated_normal(rng, -2.0, 0.0, 0.0, 1.0), 0.0);
}

TEST(Random, TruncatedNormalRejectsBadBounds) {
    Rng rng(1);
    EXPECT_THROW(sample_truncated_normal(rng, 0.0, 1.0, 1.0, 1.0), Error);
    EXPECT_THROW(sample_truncated_normal(rng, 0.0, -1.0, 0.0, 1.0), Error);
}

TEST(Random, TruncatedNormalSymmetricCase) {
    // Reference moments of N_tr(0.5, 0.125, 0, 1): mean 0.5, sd 0.124933062726.
    Rng rng(11);
    const auto m = moments(100000, [&] {
        const double x = sample_truncated_normal(rng, 0.5, 0.125, 0.0, 1.0);
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0);
        return x;
    });
    EXPECT_NEAR(m.mean, 0.5, 0.01);
    EXPECT_NEAR(m.sd, 0.124933062726, 0.005);
}

TEST(Random, TruncatedNormalSmallMean) {
    // Reference mean of N_tr(0.2, 0.05, 0, 1): 0.200006691723.
    Rng rng(12);
    const auto m = moments(100000, [&] { return sample_truncated_normal(rng, 0.2, 0.05, 0.0, 1.0); });
    EXPECT_NEAR(m.mean, 0.200006691723, 0.01);
}

TEST(Random, TruncatedNormalFarTailUsesInverseCdf) {
    // Acceptance is about 3e-7 here; the reference mean is 5.18314709048.
    Rng rng(13);
    const auto m = moments(20000, [&] {
        const double x = sample_truncated_normal(rng, 0.0, 1.0, 5.0, 6.0);
        EXPECT_GE(x, 5.0);
        EXPECT_LE(x, 6.0);
        return x;
    });
    EXPECT_NEAR(m.mean, 5.18314709048, 0.01);
    Rng mirrored(14);
    const auto n = moments(20000, [&] { return sample_truncated_normal(mirrored, 0.0, 1.0, -6.0, -5.0); });
    EXPECT_NEAR(n.mean, -5.18314709048, 0.01);
}

TEST(Random, TruncatedNormalBoundsOverMillionDraws) {
    Rng rng(99);
    std::size_t outside = 0;
    for (int i = 0; i < 1000000; ++i) {
        const double x = sample_truncated_normal(rng, 0.3, 0.4, 0.0, 1.0);
        if (x < 0.0 || x > 1.0) ++outside;
    }
    EXPECT_EQ(outside, 0u);
}

TEST(Random, SubstreamsReproduce) {
    Rng a = Rng::substream(5, 3, 0, StreamPurpose::burst);
    Rng b = Rng::substream(5, 3, 0, StreamPurpose::burst);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_unit(), b.next_unit());
}

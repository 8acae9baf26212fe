#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hestoncal/errors.hpp"
#include "hestoncal/rng.hpp"
#include "stats.hpp"

using namespace hestoncal;

namespace {

constexpr StreamKey kPropagate0{0, Phase::Propagate, 0};

}  // namespace

TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out =
      philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPiDigits) {
  const auto out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdccebu);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(RandomSource, NormalPairIsReproducible) {
  const RandomSource src(42);
  const auto a = src.draw_standard_normal(kPropagate0, 2);
  const auto b = src.draw_standard_normal(kPropagate0, 2);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a, b);
}

TEST(RandomSource, NormalMoments) {
  const auto x = RandomSource(7).draw_standard_normal(kPropagate0, 1'000'000);
  EXPECT_NEAR(stats::mean(x), 0.0, 0.005);
  EXPECT_NEAR(stats::variance(x), 1.0, 0.01);
}

TEST(RandomSource, UniformCodomainAndDeterminism) {
  const RandomSource src(3);
  const StreamKey key{5, Phase::Resample, 17};
  const auto u = src.draw_uniform(key, 100'000);
  EXPECT_TRUE(std::all_of(u.begin(), u.end(), [](double x) { return x >= 0.0 && x < 1.0; }));
  EXPECT_EQ(u, src.draw_uniform(key, 100'000));
}

TEST(RandomSource, UniformKolmogorovSmirnov) {
  const auto u = RandomSource(11).draw_uniform({1, Phase::Resample, 0}, 100'000);
  EXPECT_LE(stats::ks_distance(u, [](double x) { return x; }), 0.01);
}

TEST(RandomSource, BernoulliZeroGivesZeros) {
  const auto b = RandomSource(1).draw_bernoulli({0, Phase::JumpFlag, 0}, 0.0, 1000);
  EXPECT_TRUE(std::all_of(b.begin(), b.end(), [](auto v) { return v == 0; }));
}

TEST(RandomSource, BernoulliMean) {
  const auto b = RandomSource(2).draw_bernoulli({0, Phase::JumpFlag, 0}, 0.15, 100'000);
  double s = 0.0;
  for (auto v : b) s += v;
  EXPECT_NEAR(s / static_cast<double>(b.size()), 0.15, 0.01);
}

TEST(RandomSource, BernoulliRejectsCertainty) {
  EXPECT_THROW(RandomSource(2).draw_bernoulli({0, Phase::JumpFlag, 0}, 1.0, 10), ParameterError);
  EXPECT_THROW(RandomSource(2).draw_bernoulli({0, Phase::JumpFlag, 0}, -0.1, 10), ParameterError);
}

TEST(RandomSource, InverseGammaMoments) {
  auto s = RandomSource(5).stream({0, Phase::PosteriorDraw, 0});
  std::vector<double> x(1'000'000);
  for (auto& v : x) v = s.inverse_gamma(3.0, 2.0);
  EXPECT_TRUE(std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; }));
  EXPECT_NEAR(stats::mean(x), 1.0, 0.01);
  EXPECT_NEAR(stats::variance(x), 1.0, 0.05);
}

TEST(RandomSource, InverseGammaRejectsBadShape) {
  const RandomSource src(5);
  EXPECT_THROW(src.draw_inverse_gamma({0, Phase::PosteriorDraw, 0}, 0.0, 1.0), ParameterError);
  EXPECT_THROW(src.draw_inverse_gamma({0, Phase::PosteriorDraw, 0}, 1.0, -1.0), ParameterError);
}

TEST(CounterStream, DistinctKeysGiveDistinctStreams) {
  const RandomSource src(9);
  std::set<std::uint64_t> first_words;
  for (std::uint32_t cycle = 0; cycle < 4; ++cycle) {
    for (auto phase : {Phase::Simulate, Phase::Propagate, Phase::JumpFlag, Phase::JumpSize,
                       Phase::Resample, Phase::PosteriorDraw}) {
      for (std::uint32_t unit = 0; unit < 4; ++unit) {
        auto s = src.stream({cycle, phase, unit});
        first_words.insert(s());
      }
    }
  }
  EXPECT_EQ(first_words.size(), 4u * 6u * 4u);
}

TEST(CounterStream, DistinctSeedsDiffer) {
  auto a = RandomSource(1).stream(kPropagate0);
  auto b = RandomSource(2).stream(kPropagate0);
  EXPECT_NE(a(), b());
}

TEST(CounterStream, NeighbouringStreamsAreUncorrelated) {
  const RandomSource src(13);
  const auto a = src.draw_standard_normal({0, Phase::Propagate, 0}, 100'000);
  const auto b = src.draw_standard_normal({0, Phase::Propagate, 1}, 100'000);
  // 4 standard errors of a sample correlation at n = 1e5
  EXPECT_LT(std::abs(stats::correlation(a, b)), 4.0 / std::sqrt(1e5));
}

TEST(CounterStream, RestartsIdentically) {
  auto a = RandomSource(21).stream({3, Phase::Resample, 9});
  auto b = RandomSource(21).stream({3, Phase::Resample, 9});
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.normal(), b.normal());
}

TEST(CounterStream, SatisfiesUniformRandomBitGenerator) {
  static_assert(std::uniform_random_bit_generator<CounterStream>);
  SUCCEED();
}

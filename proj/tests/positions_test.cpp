#include "doceval/positions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "doceval/error.hpp"

using namespace doceval;

namespace {

// Enumerates (g, j) pairs of the pseudo-uniform scheme directly.
std::map<std::size_t, double> enumerate_unifpe(std::size_t l, std::size_t M) {
  if (M < 2 * l) return {{0, 1.0}};
  const std::size_t m = M / l, r = M - m * l;
  std::map<std::size_t, double> out;
  for (std::size_t g = 1; g <= m; ++g) {
    for (std::size_t j = 0; j < m; ++j) out[j * l + (j >= g ? r : 0)] += 1.0 / static_cast<double>(m * m);
  }
  return out;
}

// P(i) by adding each offset's mass to every covered position.
std::vector<double> brute_profile(const std::vector<std::size_t>& lengths, Sampler sampler, std::size_t M) {
  std::vector<double> p(M, 0.0);
  for (auto l : lengths) {
    for (const auto& [k, prob] : offset_distribution(sampler, l, M).support) {
      for (std::size_t i = k; i < k + l; ++i) p[i] += prob / static_cast<double>(lengths.size());
    }
  }
  return p;
}

double mean_of(const std::vector<std::size_t>& v) {
  double s = 0;
  for (auto x : v) s += static_cast<double>(x);
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST(UnifPE, Examples) {
  const auto a = unifpe_offset_distribution(300, 512);
  ASSERT_EQ(a.support.size(), 1u);
  EXPECT_EQ(a.support[0].first, 0u);
  EXPECT_DOUBLE_EQ(a.support[0].second, 1.0);

  EXPECT_EQ(unifpe_offset_distribution(512, 512).support.size(), 1u);

  const auto b = unifpe_offset_distribution(200, 512);
  ASSERT_EQ(b.support.size(), 3u);
  EXPECT_DOUBLE_EQ(b.probability(0), 0.5);
  EXPECT_DOUBLE_EQ(b.probability(200), 0.25);
  EXPECT_DOUBLE_EQ(b.probability(312), 0.25);
  EXPECT_DOUBLE_EQ(b.probability(100), 0.0);
}

TEST(UnifPE, MatchesEnumeration) {
  for (std::size_t M : {16, 50, 97, 512}) {
    for (std::size_t l = 1; l <= M; ++l) {
      const auto dist = unifpe_offset_distribution(l, M);
      const auto want = enumerate_unifpe(l, M);
      ASSERT_EQ(dist.support.size(), want.size()) << l << " " << M;
      double total = 0;
      for (const auto& [k, p] : dist.support) {
        EXPECT_NEAR(p, want.at(k), 1e-15);
        EXPECT_LE(k + l, M);
        total += p;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(UnifPE, InvalidLengths) {
  EXPECT_THROW(unifpe_offset_distribution(0, 10), InvalidLength);
  EXPECT_THROW(unifpe_offset_distribution(11, 10), InvalidLength);
  EXPECT_THROW(shape_offset_distribution(11, 10), InvalidLength);
}

TEST(Shape, Examples) {
  EXPECT_EQ(shape_offset_distribution(8, 8).support.size(), 1u);
  const auto d = shape_offset_distribution(2, 4);
  ASSERT_EQ(d.support.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(d.probability(k), 1.0 / 3, 1e-15);
  const auto capped = shape_offset_distribution(2, 100, 4);
  EXPECT_EQ(capped.support.size(), 5u);
  EXPECT_EQ(capped.support.back().first, 4u);
}

TEST(SampleOffset, PointMassAlwaysZero) {
  Rng rng(1);
  const auto d = baseline_offset_distribution(10, 20);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_offset(d, rng), 0u);
}

TEST(SampleOffset, FrequenciesWithinThreeSigma) {
  Rng rng(123);
  const auto d = unifpe_offset_distribution(200, 512);
  const int draws = 100000;
  std::map<std::size_t, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[sample_offset(d, rng)];
  for (const auto& [k, p] : d.support) {
    const double sigma = std::sqrt(draws * p * (1 - p));
    EXPECT_LE(std::abs(counts[k] - draws * p), 3 * sigma) << "offset " << k;
  }
  EXPECT_EQ(counts.size(), 3u);
}

TEST(SampleOffset, SameSeedSameDraws) {
  const auto d = shape_offset_distribution(50, 512);
  Rng a(9), b(9);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_offset(d, a), sample_offset(d, b));
}

TEST(Coverage, BaselineExample) {
  const std::vector<std::size_t> lengths{3, 5};
  const auto p = coverage_profile(lengths, Sampler::kBaseline, 8);
  const std::vector<double> want{1, 1, 1, .5, .5, 0, 0, 0};
  EXPECT_EQ(p.p, want);
}

TEST(Coverage, UnifPEExample) {
  const std::vector<std::size_t> lengths{200};
  const auto p = coverage_profile(lengths, Sampler::kUnifPE, 512);
  for (std::size_t i = 1; i <= 512; ++i) {
    const double want = i <= 200 ? 0.5 : i <= 312 ? 0.25 : i <= 400 ? 0.5 : 0.25;
    EXPECT_NEAR(p.at(i), want, 1e-12) << i;
  }
}

TEST(Coverage, ShapeTrapezoid) {
  const std::vector<std::size_t> lengths{200};
  const auto p = coverage_profile(lengths, Sampler::kShape, 512);
  double peak = 0;
  for (double v : p.p) peak = std::max(peak, v);
  EXPECT_NEAR(peak, 200.0 / 313, 1e-12);
  EXPECT_NEAR(p.at(1), 1.0 / 313, 1e-12);
  EXPECT_NEAR(p.at(512), 1.0 / 313, 1e-12);
}

TEST(Coverage, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t M = 20 + rng() % 200;
    std::vector<std::size_t> lengths(1 + rng() % 12);
    for (auto& l : lengths) l = 1 + rng() % M;
    for (auto s : {Sampler::kBaseline, Sampler::kShape, Sampler::kUnifPE}) {
      const auto p = coverage_profile(lengths, s, M);
      const auto want = brute_profile(lengths, s, M);
      for (std::size_t i = 0; i < M; ++i) EXPECT_NEAR(p.p[i], want[i], 1e-12);
    }
  }
}

TEST(Coverage, MassEqualsMeanLength) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t M = 64 + rng() % 2048;
    std::vector<std::size_t> lengths(1 + rng() % 200);
    for (auto& l : lengths) l = 1 + rng() % M;
    for (auto s : {Sampler::kBaseline, Sampler::kShape, Sampler::kUnifPE}) {
      const auto p = coverage_profile(lengths, s, M);
      double mass = 0;
      for (double v : p.p) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0 + 1e-12);
        mass += v;
      }
      EXPECT_NEAR(mass, mean_of(lengths), 1e-9);
    }
  }
}

TEST(Coverage, UnifPECoversEveryPosition) {
  for (std::size_t M : {10, 64, 512, 1024}) {
    for (std::size_t l = 1; 2 * l <= M; ++l) {
      const std::vector<std::size_t> lengths{l};
      const auto u = coverage_profile(lengths, Sampler::kUnifPE, M);
      for (std::size_t i = 1; i <= M; ++i) ASSERT_GT(u.at(i), 0.0) << l << " " << M << " " << i;
      const auto b = coverage_profile(lengths, Sampler::kBaseline, M);
      for (std::size_t i = l + 1; i <= M; ++i) ASSERT_EQ(b.at(i), 0.0);
    }
  }
}

TEST(Coverage, ShapeLowersSmallPositions) {
  const std::vector<std::size_t> lengths{100, 200, 300};
  const auto b = coverage_profile(lengths, Sampler::kBaseline, 1024);
  const auto s = coverage_profile(lengths, Sampler::kShape, 1024);
  for (std::size_t i = 1; i <= 50; ++i) EXPECT_LT(s.at(i), b.at(i));
}

TEST(Coverage, RejectsLengthAboveModelMax) {
  const std::vector<std::size_t> lengths{10, 600};
  EXPECT_THROW(coverage_profile(lengths, Sampler::kUnifPE, 512), LengthExceedsModelMax);
  EXPECT_THROW(coverage_profile(std::vector<std::size_t>{}, Sampler::kUnifPE, 512), EmptyCorpus);
}

TEST(Flatness, Examples) {
  CoverageProfile constant{std::vector<double>(10, 0.3)};
  EXPECT_DOUBLE_EQ(flatness(constant), 0.0);
  CoverageProfile step{{1, 1, 1, 0, 0}};
  EXPECT_GT(flatness(step), 0.0);
  // Population std of {1,1,1,0,0} is sqrt(0.24); the mean is 0.6.
  EXPECT_NEAR(flatness(step), std::sqrt(0.24) / 0.6, 1e-12);
  EXPECT_DOUBLE_EQ(flatness(step, 1, 3), 0.0);
}

TEST(Flatness, UnifPEFlatterThanBaseline) {
  const std::vector<std::size_t> lengths{200};
  EXPECT_LT(flatness(coverage_profile(lengths, Sampler::kUnifPE, 512)),
            flatness(coverage_profile(lengths, Sampler::kBaseline, 512)));
}

TEST(Sampler, Names) {
  for (auto s : {Sampler::kBaseline, Sampler::kShape, Sampler::kUnifPE}) EXPECT_EQ(parse_sampler(sampler_name(s)), s);
  EXPECT_THROW(parse_sampler("rope"), InvalidArgument);
}

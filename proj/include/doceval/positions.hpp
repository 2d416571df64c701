#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "doceval/rng.hpp"

namespace doceval {

/// Probability mass over starting offsets for a sequence of `length` tokens
/// placed in a model context of `max_length` positions. Offsets are sorted
/// ascending and every offset k satisfies k + length <= max_length.
struct OffsetDistribution {
  std::vector<std::pair<std::size_t, double>> support;
  std::size_t length = 0;
  std::size_t max_length = 0;

  double probability(std::size_t offset) const;
};

/// Pseudo-uniform offsets. With m = floor(M / l) and r = M - m*l, a gap index
/// g is drawn uniformly from {1..m}; offsets are j*l + (j >= g ? r : 0) for
/// j = 0..m-1, each with probability 1/m. The result is the exact marginal
/// over g. When M < 2l the only offset is 0.
OffsetDistribution unifpe_offset_distribution(std::size_t length, std::size_t max_length);

/// SHAPE: offsets uniform over [0, M - l], or over [0, min(max_shift, M - l)]
/// when a fixed shift interval is requested.
OffsetDistribution shape_offset_distribution(std::size_t length, std::size_t max_length,
                                             std::optional<std::size_t> max_shift = std::nullopt);

/// Standard training: offset 0 with probability one.
OffsetDistribution baseline_offset_distribution(std::size_t length, std::size_t max_length);

/// Draws one offset by inverse CDF.
std::size_t sample_offset(const OffsetDistribution& dist, Rng& rng);

enum class Sampler { kBaseline, kShape, kUnifPE };

Sampler parse_sampler(const std::string& name);
std::string sampler_name(Sampler sampler);

OffsetDistribution offset_distribution(Sampler sampler, std::size_t length, std::size_t max_length,
                                       std::optional<std::size_t> shape_max_shift = std::nullopt);

/// P(i) for positions i = 1..M, stored 0-based (p[i-1] is P(i)).
struct CoverageProfile {
  std::vector<double> p;

  std::size_t max_length() const { return p.size(); }
  double at(std::size_t position) const { return p.at(position - 1); }
};

/// Exact probability that position i is covered by a randomly chosen corpus
/// example, averaging each example's offset marginal. Throws
/// LengthExceedsModelMax when a length exceeds M.
CoverageProfile coverage_profile(std::span<const std::size_t> lengths, Sampler sampler,
                                 std::size_t max_length,
                                 std::optional<std::size_t> shape_max_shift = std::nullopt);

/// Coefficient of variation (population std / mean) of P over positions
/// [first, last], both 1-based and inclusive. Zero for a constant or all-zero range.
double flatness(const CoverageProfile& profile, std::size_t first, std::size_t last);
double flatness(const CoverageProfile& profile);

}  // namespace doceval

#include "doceval/positions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "doceval/error.hpp"

namespace doceval {
namespace {

void check_lengths(std::size_t length, std::size_t max_length) {
  if (length < 1 || length > max_length) {
    throw InvalidLength("sequence length " + std::to_string(length) +
                        " must lie in [1, " + std::to_string(max_length) + "]");
  }
}

}  // namespace

double OffsetDistribution::probability(std::size_t offset) const {
  auto it = std::lower_bound(support.begin(), support.end(), offset,
                             [](const auto& entry, std::size_t k) { return entry.first < k; });
  return it != support.end() && it->first == offset ? it->second : 0.0;
}

OffsetDistribution baseline_offset_distribution(std::size_t length, std::size_t max_length) {
  check_lengths(length, max_length);
  return {{{0, 1.0}}, length, max_length};
}

OffsetDistribution unifpe_offset_distribution(std::size_t length, std::size_t max_length) {
  check_lengths(length, max_length);
  if (max_length < 2 * length) return {{{0, 1.0}}, length, max_length};

  const std::size_t m = max_length / length;
  const std::size_t r = max_length - m * length;
  // Offset j*l occurs for every gap g > j, offset j*l + r for every g <= j;
  // each (g, j) pair has probability 1/m^2.
  std::map<std::size_t, std::size_t> hits;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t unshifted = m - j;  // g in {j+1..m}
    const std::size_t shifted = j;        // g in {1..j}
    hits[j * length] += unshifted;
    if (shifted > 0) hits[j * length + r] += shifted;
  }
  OffsetDistribution dist;
  dist.length = length;
  dist.max_length = max_length;
  const double denom = static_cast<double>(m) * static_cast<double>(m);
  for (const auto& [offset, count] : hits) {
    dist.support.emplace_back(offset, static_cast<double>(count) / denom);
  }
  return dist;
}

OffsetDistribution shape_offset_distribution(std::size_t length, std::size_t max_length,
                                             std::optional<std::size_t> max_shift) {
  check_lengths(length, max_length);
  std::size_t top = max_length - length;
  if (max_shift) top = std::min(top, *max_shift);
  OffsetDistribution dist;
  dist.length = length;
  dist.max_length = max_length;
  const double p = 1.0 / static_cast<double>(top + 1);
  dist.support.reserve(top + 1);
  for (std::size_t k = 0; k <= top; ++k) dist.support.emplace_back(k, p);
  return dist;
}

std::size_t sample_offset(const OffsetDistribution& dist, Rng& rng) {
  if (dist.support.size() == 1) {
    rng.next();
    return dist.support.front().first;
  }
  const double u = rng.uniform01();
  double acc = 0.0;
  for (const auto& [offset, p] : dist.support) {
    acc += p;
    if (u < acc) return offset;
  }
  return dist.support.back().first;
}

Sampler parse_sampler(const std::string& name) {
  if (name == "baseline") return Sampler::kBaseline;
  if (name == "shape") return Sampler::kShape;
  if (name == "unifpe") return Sampler::kUnifPE;
  throw InvalidArgument("unknown sampler '" + name + "' (expected baseline, shape or unifpe)");
}

std::string sampler_name(Sampler sampler) {
  switch (sampler) {
    case Sampler::kBaseline:
      return "baseline";
    case Sampler::kShape:
      return "shape";
    case Sampler::kUnifPE:
      return "unifpe";
  }
  return "";
}

OffsetDistribution offset_distribution(Sampler sampler, std::size_t length, std::size_t max_length,
                                       std::optional<std::size_t> shape_max_shift) {
  switch (sampler) {
    case Sampler::kBaseline:
      return baseline_offset_distribution(length, max_length);
    case Sampler::kShape:
      return shape_offset_distribution(length, max_length, shape_max_shift);
    case Sampler::kUnifPE:
      return unifpe_offset_distribution(length, max_length);
  }
  throw InvalidArgument("unknown sampler");
}

CoverageProfile coverage_profile(std::span<const std::size_t> lengths, Sampler sampler,
                                 std::size_t max_length,
                                 std::optional<std::size_t> shape_max_shift) {
  if (lengths.empty()) throw EmptyCorpus("coverage profile of an empty corpus");
  std::map<std::size_t, std::size_t> histogram;
  for (auto l : lengths) {
    if (l > max_length) {
      throw LengthExceedsModelMax("length " + std::to_string(l) + " exceeds model maximum " +
                                  std::to_string(max_length));
    }
    ++histogram[l];
  }

  // delta[i] accumulates +p at the first covered position and -p one past the last.
  std::vector<double> delta(max_length + 1, 0.0);
  for (const auto& [length, count] : histogram) {
    if (length == 0) continue;
    const auto dist = offset_distribution(sampler, length, max_length, shape_max_shift);
    const double weight = static_cast<double>(count);
    for (const auto& [offset, p] : dist.support) {
      delta[offset] += weight * p;
      delta[offset + length] -= weight * p;
    }
  }
  CoverageProfile profile;
  profile.p.resize(max_length);
  const double n = static_cast<double>(lengths.size());
  double running = 0.0;
  for (std::size_t i = 0; i < max_length; ++i) {
    running += delta[i];
    profile.p[i] = std::clamp(running / n, 0.0, 1.0);
  }
  return profile;
}

double flatness(const CoverageProfile& profile, std::size_t first, std::size_t last) {
  if (first < 1 || last > profile.p.size() || first > last) {
    throw InvalidArgument("flatness range must lie within [1, M]");
  }
  const auto range = std::span(profile.p).subspan(first - 1, last - first + 1);
  const auto [lo, hi] = std::minmax_element(range.begin(), range.end());
  if (*lo == *hi) return 0.0;
  const double count = static_cast<double>(range.size());
  double mean = 0.0;
  for (std::size_t i = first; i <= last; ++i) mean += profile.at(i);
  mean /= count;
  if (mean == 0.0) return 0.0;
  double var = 0.0;
  for (std::size_t i = first; i <= last; ++i) var += (profile.at(i) - mean) * (profile.at(i) - mean);
  return std::sqrt(var / count) / mean;
}

double flatness(const CoverageProfile& profile) { return flatness(profile, 1, profile.p.size()); }

}  // namespace doceval

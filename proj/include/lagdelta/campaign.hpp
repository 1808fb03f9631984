#pragma once

// Randomized verification campaign: for seeded random (tensor, frame,
// partition, c) evaluate universal_check and keep the smallest gap.

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "lagdelta/delta.hpp"
#include "lagdelta/io.hpp"
#include "lagdelta/random.hpp"

namespace lagdelta {

struct CampaignConfig {
  std::uint64_t seed = 42;
  int samples = 1000;
  int n_min = 3;
  int n_max = 6;
  // Empty means every admissible partition of the sampled n.
  std::vector<std::vector<int>> partitions;
  std::vector<double> c_values{-1.0, 0.0, 1.0};
  double tensor_scale = 1.0;

  void validate() const {
    if (samples < 1) fail(ErrorCode::ParseError, "samples must be at least 1");
    if (n_min < 2 || n_max > kMaxDimension || n_min > n_max) fail(ErrorCode::ParseError, "n_range must lie in [2, 12]");
    if (c_values.empty()) fail(ErrorCode::ParseError, "need at least one c value");
    if (!(tensor_scale > 0)) fail(ErrorCode::ParseError, "tensor_scale must be positive");
  }
};

struct SampleRow {
  int index;
  std::uint64_t sample_seed;
  PartitionSpec partition;
  double c;
  double hsq;
  double gap;
};

struct CampaignSummary {
  int samples = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  int argmin_index = -1;
  std::uint64_t argmin_seed = 0;
  int violations = 0;  // gap < -1e-9
};

namespace detail {

inline std::vector<PartitionSpec> candidate_partitions(const CampaignConfig& cfg, int n) {
  if (cfg.partitions.empty()) return all_admissible_partitions(n);
  std::vector<PartitionSpec> out;
  for (const auto& blocks : cfg.partitions) {
    try {
      out.emplace_back(n, blocks);
    } catch (const Error&) {
      // not admissible for this n
    }
  }
  return out;
}

}  // namespace detail

// One sample, reproducible from (config, index) alone.
inline std::optional<SampleRow> campaign_sample(const CampaignConfig& cfg, int index) {
  const std::uint64_t sample_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(index));
  Rng rng(sample_seed);
  const int n = std::uniform_int_distribution<int>(cfg.n_min, cfg.n_max)(rng);
  const auto options = detail::candidate_partitions(cfg, n);
  if (options.empty()) return std::nullopt;
  const PartitionSpec P = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
  const double c = cfg.c_values[std::uniform_int_distribution<std::size_t>(0, cfg.c_values.size() - 1)(rng)];
  const CubicForm h = random_cubic_form(n, cfg.tensor_scale, rng);
  const Frame R = random_frame(n, rng);
  return SampleRow{index, sample_seed, P, c, mean_curvature_sq(h), universal_check(h, AmbientConstant(c), P, R)};
}

// Runs every sample in index order; `csv` (optional) receives one row each.
inline CampaignSummary run_campaign(const CampaignConfig& cfg, std::ostream* csv = nullptr) {
  cfg.validate();
  CampaignSummary summary;
  if (csv) *csv << "sample,seed,n,partition,c,hsq,gap\n";
  for (int i = 0; i < cfg.samples; ++i) {
    auto row = campaign_sample(cfg, i);
    if (!row) continue;
    ++summary.samples;
    if (row->gap < summary.min_gap) {
      summary.min_gap = row->gap;
      summary.argmin_index = i;
      summary.argmin_seed = row->sample_seed;
    }
    if (row->gap < -1e-9) ++summary.violations;
    if (csv) {
      *csv << i << "," << row->sample_seed << "," << row->partition.n() << ",\"" << row->partition.to_string()
           << "\"," << io::format_double(row->c) << "," << io::format_double(row->hsq) << ","
           << io::format_double(row->gap) << "\n";
    }
  }
  return summary;
}

}  // namespace lagdelta

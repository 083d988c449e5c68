#pragma once

// Seeded trajectories for heat-bath and lifted chains, and exact
// distribution propagation for convergence checks.
//
// RNG contract: std::mt19937_64 (bit-exact across conforming platforms).
// Each uniform variate consumes exactly one 64-bit draw, mapped to [0, 1)
// by its top 53 bits. A heat-bath step draws once for the label and once
// for the in-block sample; a lifted step draws three times (lift, T, adjoint).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "hbspectra/error.hpp"
#include "hbspectra/heatbath.hpp"
#include "hbspectra/matrix.hpp"
#include "hbspectra/transfer.hpp"

namespace hbspectra {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Index drawn from cumulative weights (last entry is the total).
inline std::size_t sample_cumulative(std::span<const double> cumulative, Rng& rng) {
  const double u = uniform01(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - cumulative.begin());
  return std::min(i, cumulative.size() - 1);
}

struct TrajectoryConfig {
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::size_t start = 0;
};

/// Precomputed sampling tables for one heat-bath spec.
class HeatBathSampler {
 public:
  explicit HeatBathSampler(const HeatBathSpec& spec) {
    require_valid(spec);
    const std::size_t n = spec.states.size();
    double acc = 0.0;
    for (const auto& label : spec.labels) {
      acc += label.rho.get_d();
      label_cumulative_.push_back(acc);
      LabelTable table;
      table.block_of.assign(n, 0);
      for (std::size_t b = 0; b < label.blocks.size(); ++b) {
        Block block;
        double mass = 0.0;
        for (std::size_t x : label.blocks[b]) {
          table.block_of[x] = b;
          mass += spec.pi[x].get_d();
          block.states.push_back(x);
          block.cumulative.push_back(mass);
        }
        table.blocks.push_back(std::move(block));
      }
      labels_.push_back(std::move(table));
    }
    size_ = n;
  }

  std::size_t size() const { return size_; }

  std::size_t step(std::size_t x, Rng& rng) const {
    if (x >= size_) throw ValidationError("state index out of range");
    const std::size_t a = sample_cumulative(label_cumulative_, rng);
    const Block& block = labels_[a].blocks[labels_[a].block_of[x]];
    return block.states[sample_cumulative(block.cumulative, rng)];
  }

  /// States visited, starting with config.start (steps + 1 entries).
  std::vector<std::size_t> trajectory(const TrajectoryConfig& config) const {
    Rng rng(config.seed);
    std::vector<std::size_t> path{config.start};
    path.reserve(config.steps + 1);
    std::size_t x = config.start;
    for (std::size_t i = 0; i < config.steps; ++i) path.push_back(x = step(x, rng));
    return path;
  }

 private:
  struct Block {
    std::vector<std::size_t> states;
    std::vector<double> cumulative;
  };
  struct LabelTable {
    std::vector<std::size_t> block_of;
    std::vector<Block> blocks;
  };
  std::vector<double> label_cumulative_;
  std::vector<LabelTable> labels_;
  std::size_t size_ = 0;
};

/// One heat-bath transition: choose a label by rho, then resample from pi
/// restricted to the current block.
inline std::size_t step(const HeatBathSpec& spec, std::size_t x, Rng& rng) { return HeatBathSampler(spec).step(x, rng); }

namespace detail {

inline std::vector<std::vector<double>> cumulative_rows(const RMatrix& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (const auto& v : m.row(i)) rows[i].push_back(acc += v.get_d());
  }
  return rows;
}

}  // namespace detail

/// Samples the lifted chain: lift x through R, step T, return through R*.
class TransferSampler {
 public:
  TransferSampler(const RMatrix& r, const RMatrix& t, const TargetDistribution& pi, const TargetDistribution& mu)
      : lift_(detail::cumulative_rows(r)),
        inner_(detail::cumulative_rows(t)),
        back_(detail::cumulative_rows(adjoint(r, pi, mu))) {
    if (t.rows() != mu.size() || !t.is_square()) throw ValidationError("TransferSampler: T has wrong dimensions");
  }

  std::size_t step(std::size_t x, Rng& rng) const {
    const std::size_t lifted = sample_cumulative(lift_.at(x), rng);
    const std::size_t moved = sample_cumulative(inner_[lifted], rng);
    return sample_cumulative(back_[moved], rng);
  }

 private:
  std::vector<std::vector<double>> lift_, inner_, back_;
};

inline std::size_t transfer_step(const RMatrix& r, const RMatrix& t, const TargetDistribution& pi,
                                 const TargetDistribution& mu, std::size_t x, Rng& rng) {
  return TransferSampler(r, t, pi, mu).step(x, rng);
}

/// (1/2) sum |p_i - q_i|.
inline double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ValidationError("tv_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

/// Row `start` of P^steps, by repeated vector-matrix products.
inline std::vector<double> distribution_after(const DMatrix& p, std::size_t start, std::size_t steps) {
  std::vector<double> dist(p.rows(), 0.0), next(p.rows());
  dist.at(start) = 1.0;
  for (std::size_t s = 0; s < steps; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = 0; x < p.rows(); ++x) {
      if (dist[x] == 0.0) continue;
      for (std::size_t y = 0; y < p.cols(); ++y) next[y] += dist[x] * p(x, y);
    }
    dist.swap(next);
  }
  return dist;
}

/// Empirical one-step transition frequencies from `from`, over `samples`
/// independent steps.
template <typename Stepper>
std::vector<double> empirical_row(const Stepper& stepper, std::size_t n, std::size_t from, std::size_t samples, Rng& rng) {
  std::vector<double> counts(n, 0.0);
  for (std::size_t i = 0; i < samples; ++i) counts[stepper.step(from, rng)] += 1.0;
  for (auto& c : counts) c /= static_cast<double>(samples);
  return counts;
}

/// Occupation frequencies of a trajectory.
inline std::vector<double> occupation(std::span<const std::size_t> path, std::size_t n) {
  std::vector<double> freq(n, 0.0);
  for (std::size_t x : path) freq.at(x) += 1.0;
  for (auto& f : freq) f /= static_cast<double>(path.size());
  return freq;
}

/// CSV dump: header "step,state", one row per visited state.
inline void write_trajectory_csv(std::ostream& out, std::span<const std::size_t> path, const StateSpace& space) {
  out << "step,state\n";
  for (std::size_t i = 0; i < path.size(); ++i) out << i << ',' << detail::csv_field(space.label(path[i])) << '\n';
}

}  // namespace hbspectra

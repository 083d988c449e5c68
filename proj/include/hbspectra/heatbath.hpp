#pragma once

// Heat-bath chains: a target distribution pi, labels a with weights rho(a),
// and for each label a partition of the state space. The label kernel P_a
// resamples from pi restricted to the current block; the chain is the
// rho-weighted sum of the kernels.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbspectra/error.hpp"
#include "hbspectra/matrix.hpp"
#include "hbspectra/rational.hpp"
#include "hbspectra/sicanon.hpp"

namespace hbspectra {

struct LabelPartition {
  std::string id;
  Rational rho;
  std::vector<std::vector<std::size_t>> blocks;
};

/// Plain description of a heat-bath chain; may be invalid until checked by
/// validate_spec.
struct HeatBathSpec {
  std::vector<std::string> states;
  std::vector<Rational> pi;
  std::vector<LabelPartition> labels;

  StateSpace space() const { return StateSpace(states); }
  TargetDistribution target() const { return TargetDistribution(space(), pi); }

  const LabelPartition& label(std::string_view id) const {
    for (const auto& l : labels)
      if (l.id == id) return l;
    throw ValidationError("unknown label id '" + std::string(id) + "'");
  }
};

struct Violation {
  std::string axiom;  // "(I)", "(II)", "pi", "rho", "labels", "consistency"
  std::string label;  // offending label id, empty when global
  std::string message;
  std::optional<std::size_t> witness;  // offending state index
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

// state -> block index for one label, or nullopt entries for uncovered states.
inline std::vector<std::optional<std::size_t>> block_lookup(const LabelPartition& label, std::size_t n) {
  std::vector<std::optional<std::size_t>> of(n);
  for (std::size_t b = 0; b < label.blocks.size(); ++b)
    for (std::size_t x : label.blocks[b])
      if (x < n && !of[x]) of[x] = b;
  return of;
}

inline std::string state_name(const HeatBathSpec& spec, std::size_t x) {
  return x < spec.states.size() ? "state " + std::to_string(x) + " ('" + spec.states[x] + "')"
                                : "state " + std::to_string(x);
}

}  // namespace detail

/// Checks the partition axioms and the distribution data. Problems are
/// collected with witnesses rather than thrown.
inline ValidationReport validate_spec(const HeatBathSpec& spec) {
  ValidationReport report;
  auto add = [&](std::string axiom, std::string label, std::string message, std::optional<std::size_t> witness = {}) {
    report.violations.push_back({std::move(axiom), std::move(label), std::move(message), witness});
  };

  const std::size_t n = spec.states.size();
  if (n == 0) add("states", "", "state space is empty");
  {
    std::vector<std::string> sorted = spec.states;
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
      add("states", "", "duplicate state label '" + *dup + "'");
  }

  if (spec.pi.size() != n) {
    add("pi", "", "pi has " + std::to_string(spec.pi.size()) + " entries for " + std::to_string(n) + " states");
  } else {
    Rational total = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (spec.pi[x] <= 0) add("pi", "", "pi is not positive at " + detail::state_name(spec, x), x);
      total += spec.pi[x];
    }
    if (total != 1) add("pi", "", "pi sums to " + to_string(total) + ", not 1");
  }

  if (spec.labels.empty()) add("labels", "", "label set is empty");
  Rational rho_total = 0;
  std::vector<std::string> ids;
  for (const auto& label : spec.labels) {
    ids.push_back(label.id);
    if (label.rho < 0) add("rho", label.id, "rho(" + label.id + ") is negative");
    rho_total += label.rho;

    std::vector<int> hits(n, 0);
    for (const auto& block : label.blocks) {
      if (block.empty()) add("(II)", label.id, "empty block");
      for (std::size_t x : block) {
        if (x >= n) {
          add("(II)", label.id, "block index " + std::to_string(x) + " out of range", x);
          continue;
        }
        if (++hits[x] == 2) add("(II)", label.id, "overlapping blocks, witness state " + std::to_string(x), x);
      }
    }
    for (std::size_t x = 0; x < n; ++x)
      if (hits[x] == 0) add("(II)", label.id, "state " + std::to_string(x) + " uncovered", x);
  }
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
    add("labels", *dup, "duplicate label id '" + *dup + "'");
  if (!spec.labels.empty() && rho_total != 1) add("rho", "", "rho sums to " + to_string(rho_total) + ", not 1");

  if (!report.ok()) return report;

  // With a genuine partition, x lies in its own block (I) and y in block(x)
  // implies block(y) == block(x). Re-derive both from the lookup table.
  for (const auto& label : spec.labels) {
    const auto of = detail::block_lookup(label, n);
    for (std::size_t x = 0; x < n; ++x) {
      const auto& block = label.blocks[*of[x]];
      if (std::find(block.begin(), block.end(), x) == block.end())
        add("(I)", label.id, detail::state_name(spec, x) + " not in its own block", x);
      for (std::size_t y : block)
        if (of[y] != of[x]) add("consistency", label.id, "block of " + std::to_string(y) + " differs from block of " + std::to_string(x), y);
    }
  }
  return report;
}

inline void require_valid(const HeatBathSpec& spec) {
  const ValidationReport report = validate_spec(spec);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    std::string msg = "invalid heat-bath spec: " + v.axiom + (v.label.empty() ? "" : " [" + v.label + "]") + ": " + v.message;
    if (report.violations.size() > 1) msg += " (+" + std::to_string(report.violations.size() - 1) + " more)";
    throw ValidationError(msg);
  }
}

/// Blocks sorted internally, ordered by minimum state index.
inline std::vector<std::vector<std::size_t>> canonical_blocks(std::vector<std::vector<std::size_t>> blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return blocks;
}

struct LabelKernel {
  std::string label;
  StochasticMatrix matrix;
};

namespace detail {

inline RMatrix kernel_matrix(const LabelPartition& label, const std::vector<Rational>& pi) {
  const std::size_t n = pi.size();
  RMatrix p(n, n);
  for (const auto& block : label.blocks) {
    Rational mass = 0;
    for (std::size_t y : block) mass += pi[y];
    for (std::size_t x : block)
      for (std::size_t y : block) p(x, y) = pi[y] / mass;
  }
  return p;
}

}  // namespace detail

/// P_a(x, y) = pi(y) / pi(block of x) for y in the block of x, else 0.
inline LabelKernel build_label_kernel(const HeatBathSpec& spec, std::string_view label_id) {
  require_valid(spec);
  const LabelPartition& label = spec.label(label_id);
  const TargetDistribution pi = spec.target();
  StochasticMatrix kernel(pi.space(), detail::kernel_matrix(label, spec.pi));
  if (!is_idempotent(kernel.matrix())) throw InternalError("label kernel is not idempotent");
  if (!check_reversible(kernel.matrix(), pi)) throw InternalError("label kernel is not reversible");
  return {label.id, std::move(kernel)};
}

/// P = sum_a rho(a) P_a, exact.
inline StochasticMatrix build_chain(const HeatBathSpec& spec) {
  require_valid(spec);
  const TargetDistribution pi = spec.target();
  const std::size_t n = spec.states.size();
  RMatrix p(n, n);
  for (const auto& label : spec.labels) {
    if (label.rho == 0) continue;
    p = p + label.rho * detail::kernel_matrix(label, spec.pi);
  }
  StochasticMatrix chain(pi.space(), std::move(p));
  for (std::size_t x = 0; x < n; ++x)
    if (chain(x, x) <= 0) throw InternalError("heat-bath chain has a state without a self-loop");
  if (!check_reversible(chain, pi)) throw InternalError("heat-bath chain is not reversible");
  return chain;
}

struct WeightedKernel {
  RMatrix matrix;
  Rational weight;
};

/// Recovers a heat-bath spec from SI kernels without zero columns that are
/// reversible with respect to pi. Label ids are "k0", "k1", ... in input
/// order; each label's blocks are the kernel's 1-SI blocks.
inline HeatBathSpec reconstruct_spec(std::span<const WeightedKernel> kernels, const TargetDistribution& pi) {
  if (kernels.empty()) throw ValidationError("reconstruct_spec: no kernels");
  HeatBathSpec spec;
  spec.states = pi.space().labels();
  spec.pi = pi.probs();
  Rational weight_total = 0;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const std::string id = "k" + std::to_string(i);
    const RMatrix& m = kernels[i].matrix;
    if (kernels[i].weight < 0) throw ValidationError("reconstruct_spec: kernel " + id + " has negative weight");
    weight_total += kernels[i].weight;
    if (m.rows() != pi.size() || !m.is_square())
      throw ValidationError("reconstruct_spec: kernel " + id + " has wrong dimensions");
    if (!si_classify(m).is_si()) throw ValidationError("reconstruct_spec: kernel " + id + " is not SI");
    if (!zero_columns(m).empty()) throw ValidationError("reconstruct_spec: kernel " + id + " has a zero column");
    if (!check_reversible(m, pi)) throw ValidationError("reconstruct_spec: kernel " + id + " is not reversible w.r.t. pi");

    const SiDecomposition d = si_decompose(m);
    LabelPartition label{id, kernels[i].weight, {}};
    for (const auto& block : d.blocks) {
      Rational mass = 0;
      for (std::size_t y : block.states) mass += pi[y];
      for (std::size_t j = 0; j < block.states.size(); ++j)
        if (block.pi[j] != pi[block.states[j]] / mass)
          throw InternalError("reconstruct_spec: block row is not pi restricted to the block");
      label.blocks.push_back(block.states);
    }
    spec.labels.push_back(std::move(label));
  }
  if (weight_total != 1) throw ValidationError("reconstruct_spec: weights sum to " + to_string(weight_total) + ", not 1");
  return spec;
}

}  // namespace hbspectra

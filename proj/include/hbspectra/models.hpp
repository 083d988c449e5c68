#pragma once

// Concrete chains: single-site heat-bath dynamics for spin systems, the
// 2x2-subsquare chain on contingency tables, and Swendsen-Wang dynamics for
// the Potts model built through a lifted space.
//
// Potts interactions are parametrized by w = e^beta, which must be rational
// so that every weight and probability stays exact.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hbspectra/error.hpp"
#include "hbspectra/heatbath.hpp"
#include "hbspectra/matrix.hpp"
#include "hbspectra/rational.hpp"
#include "hbspectra/sicanon.hpp"
#include "hbspectra/transfer.hpp"

namespace hbspectra {

// ---------------------------------------------------------------------------
// Enumeration caps

struct EnumerationCaps {
  std::size_t max_states = 20000;   // |Omega|
  std::size_t max_lifted = 200000;  // |Omega'|, and raw S^V enumeration

  /// Defaults, overridden by HBSPECTRA_MAX_STATES when set.
  static EnumerationCaps from_env() {
    EnumerationCaps caps;
    if (const char* env = std::getenv("HBSPECTRA_MAX_STATES"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0' || v == 0) throw ValidationError("HBSPECTRA_MAX_STATES must be a positive integer");
      caps.max_states = caps.max_lifted = static_cast<std::size_t>(v);
    }
    return caps;
  }
};

namespace detail {

// n^k, or nullopt once it exceeds `limit`.
inline std::optional<std::size_t> bounded_power(std::size_t n, std::size_t k, std::size_t limit) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (n != 0 && v > limit / n) return std::nullopt;
    v *= n;
  }
  return v <= limit ? std::optional<std::size_t>(v) : std::nullopt;
}

inline Rational rpow(const Rational& base, std::size_t e) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  return ratio(num, den);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graphs

/// Simple undirected graph with labelled vertices.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t add_vertex(const std::string& name) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i] == name) return i;
    vertices.push_back(name);
    return vertices.size() - 1;
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u == v) throw ValidationError("self-loop at vertex '" + vertices.at(u) + "'");
    if (u >= vertices.size() || v >= vertices.size()) throw ValidationError("edge endpoint out of range");
    for (const auto& [a, b] : edges)
      if ((a == u && b == v) || (a == v && b == u))
        throw ValidationError("parallel edge " + vertices[u] + " " + vertices[v]);
    edges.emplace_back(u, v);
  }

  /// One "u v" edge per line; a line holding a single token declares an
  /// isolated vertex. Blank lines and '#' comments are ignored.
  static Graph parse_edge_list(std::istream& in) {
    Graph g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream tokens(line);
      std::vector<std::string> parts;
      for (std::string tok; tokens >> tok;) parts.push_back(tok);
      if (parts.empty()) continue;
      if (parts.size() > 2) throw ParseError("graph line " + std::to_string(lineno) + ": expected 'u v'");
      const std::size_t u = g.add_vertex(parts[0]);
      if (parts.size() == 2) g.add_edge(u, g.add_vertex(parts[1]));
    }
    if (g.vertices.empty()) throw ParseError("graph has no vertices");
    return g;
  }

  static Graph path(std::size_t n) {
    Graph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
  }

  static Graph cycle(std::size_t n) {
    Graph g = path(n);
    if (n >= 3) g.add_edge(n - 1, 0);
    return g;
  }

  static Graph complete(std::size_t n) {
    Graph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
  }
};

// ---------------------------------------------------------------------------
// Spin systems

using Assignment = std::vector<std::size_t>;

struct SpinSystem {
  Graph graph;
  std::size_t q = 2;
  std::function<bool(const Assignment&)> admissible = [](const Assignment&) { return true; };
  std::function<Rational(const Assignment&)> weight = [](const Assignment&) { return Rational(1); };
};

/// Number of monochromatic edges.
inline std::size_t monochromatic_edges(const Graph& g, const Assignment& s) {
  std::size_t count = 0;
  for (const auto& [u, v] : g.edges)
    if (s[u] == s[v]) ++count;
  return count;
}

/// Potts model: weight w^{|E(sigma)|}, w = e^beta >= 1.
inline SpinSystem potts(Graph graph, std::size_t q, const Rational& w) {
  if (q < 2) throw ValidationError("Potts model needs q >= 2");
  if (w < 1) throw ValidationError("Potts model needs w = e^beta >= 1");
  SpinSystem sys;
  sys.q = q;
  sys.weight = [g = graph, w](const Assignment& s) { return detail::rpow(w, monochromatic_edges(g, s)); };
  sys.graph = std::move(graph);
  return sys;
}

inline SpinSystem ising(Graph graph, const Rational& w) { return potts(std::move(graph), 2, w); }

/// Uniform distribution on proper q-colourings.
inline SpinSystem proper_colourings(Graph graph, std::size_t q) {
  if (q < 1) throw ValidationError("colourings need q >= 1");
  SpinSystem sys;
  sys.q = q;
  sys.admissible = [g = graph](const Assignment& s) { return monochromatic_edges(g, s) == 0; };
  sys.graph = std::move(graph);
  return sys;
}

/// "AB" style label for q <= 26, otherwise comma-separated spin indices.
inline std::string assignment_label(const Assignment& s, std::size_t q) {
  std::string out;
  if (q <= 26) {
    for (std::size_t k : s) out.push_back(static_cast<char>('A' + k));
    return out;
  }
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out;
}

namespace detail {

// All of S^V in lexicographic order (first vertex most significant).
inline std::vector<Assignment> all_assignments(std::size_t n_vertices, std::size_t q, std::size_t cap) {
  const auto count = bounded_power(q, n_vertices, cap);
  if (!count) throw ValidationError("spin enumeration exceeds cap of " + std::to_string(cap) + " configurations");
  std::vector<Assignment> out;
  out.reserve(*count);
  Assignment s(n_vertices, 0);
  for (std::size_t idx = 0; idx < *count; ++idx) {
    out.push_back(s);
    for (std::size_t v = n_vertices; v-- > 0;) {
      if (++s[v] < q) break;
      s[v] = 0;
    }
  }
  return out;
}

struct SpinStates {
  std::vector<Assignment> configs;
  std::vector<Rational> weights;
};

inline SpinStates admissible_states(const SpinSystem& sys, const EnumerationCaps& caps) {
  if (sys.graph.vertices.empty()) throw ValidationError("spin system has no vertices");
  if (sys.q < 1) throw ValidationError("spin system needs at least one spin value");
  SpinStates out;
  for (auto& s : all_assignments(sys.graph.vertices.size(), sys.q, caps.max_lifted)) {
    if (!sys.admissible(s)) continue;
    Rational w = sys.weight(s);
    if (w <= 0) throw ValidationError("spin weight must be positive on admissible states");
    out.configs.push_back(std::move(s));
    out.weights.push_back(std::move(w));
  }
  if (out.configs.empty()) throw ValidationError("spin system has no admissible configurations");
  if (out.configs.size() > caps.max_states)
    throw ValidationError("state space of " + std::to_string(out.configs.size()) + " exceeds cap of " +
                          std::to_string(caps.max_states));
  return out;
}

}  // namespace detail

/// Single-site heat-bath chain: labels are vertices with uniform rho; the
/// block of sigma under v is {sigma^{v,k} : k admissible}.
inline HeatBathSpec build_spin_heatbath(const SpinSystem& sys, const EnumerationCaps& caps = EnumerationCaps::from_env()) {
  const detail::SpinStates states = detail::admissible_states(sys, caps);
  const std::size_t n = states.configs.size();
  const std::size_t nv = sys.graph.vertices.size();

  HeatBathSpec spec;
  for (const auto& s : states.configs) spec.states.push_back(assignment_label(s, sys.q));
  Rational total = 0;
  for (const auto& w : states.weights) total += w;
  for (const auto& w : states.weights) spec.pi.push_back(w / total);

  for (std::size_t v = 0; v < nv; ++v) {
    std::map<Assignment, std::vector<std::size_t>> groups;
    for (std::size_t x = 0; x < n; ++x) {
      Assignment key = states.configs[x];
      key[v] = sys.q;  // wildcard at v
      groups[key].push_back(x);
    }
    LabelPartition label{sys.graph.vertices[v], Rational(1, nv), {}};
    for (auto& [key, block] : groups) label.blocks.push_back(std::move(block));
    label.blocks = canonical_blocks(std::move(label.blocks));
    spec.labels.push_back(std::move(label));
  }
  return spec;
}

/// The single-site update written out entrywise: from sigma pick v with
/// probability 1/|V| and move to sigma^{v,k} with probability
/// pi(sigma^{v,k}) / sum_{l in S_v^sigma} pi(sigma^{v,l}). Independent of the
/// partition machinery; used to cross-check build_spin_heatbath.
inline RMatrix spin_heatbath_direct(const SpinSystem& sys, const EnumerationCaps& caps = EnumerationCaps::from_env()) {
  const detail::SpinStates states = detail::admissible_states(sys, caps);
  const std::size_t n = states.configs.size();
  const std::size_t nv = sys.graph.vertices.size();
  std::map<Assignment, std::size_t> index;
  for (std::size_t x = 0; x < n; ++x) index.emplace(states.configs[x], x);

  RMatrix p(n, n);
  const Rational pick(1, nv);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t v = 0; v < nv; ++v) {
      std::vector<std::pair<std::size_t, Rational>> options;
      Rational norm = 0;
      for (std::size_t k = 0; k < sys.q; ++k) {
        Assignment moved = states.configs[x];
        moved[v] = k;
        auto it = index.find(moved);
        if (it == index.end()) continue;
        options.emplace_back(it->second, states.weights[it->second]);
        norm += states.weights[it->second];
      }
      for (const auto& [y, w] : options) p(x, y) += pick * w / norm;
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Contingency tables

struct ContingencyInstance {
  std::vector<std::uint64_t> rows;
  std::vector<std::uint64_t> cols;
};

struct TableSet {
  std::size_t m = 0, n = 0;
  std::vector<std::vector<std::uint64_t>> tables;  // row-major, lexicographic
  StateSpace space = StateSpace::indexed(1);
};

inline std::string table_label(std::span<const std::uint64_t> cells, std::size_t n) {
  std::string out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k > 0) out += (k % n == 0) ? ";" : ",";
    out += std::to_string(cells[k]);
  }
  return out;
}

/// All nonnegative integer m x n tables with the given margins, in
/// lexicographic order of the row-major entries.
inline TableSet enumerate_tables(const ContingencyInstance& inst, const EnumerationCaps& caps = EnumerationCaps::from_env()) {
  const std::size_t m = inst.rows.size(), n = inst.cols.size();
  if (m == 0 || n == 0) throw ValidationError("contingency margins must be nonempty");
  for (auto v : inst.rows)
    if (v == 0) throw ValidationError("row sums must be positive");
  for (auto v : inst.cols)
    if (v == 0) throw ValidationError("column sums must be positive");
  if (std::accumulate(inst.rows.begin(), inst.rows.end(), std::uint64_t{0}) !=
      std::accumulate(inst.cols.begin(), inst.cols.end(), std::uint64_t{0}))
    throw ValidationError("row and column sums differ");

  TableSet out;
  out.m = m;
  out.n = n;
  std::vector<std::uint64_t> cells(m * n, 0), row_left(inst.rows), col_left(inst.cols);

  // Depth-first over cells in row-major order, smallest value first.
  std::function<void(std::size_t)> fill = [&](std::size_t cell) {
    if (cell == m * n) {
      if (out.tables.size() >= caps.max_states)
        throw ValidationError("contingency enumeration exceeds cap of " + std::to_string(caps.max_states) + " tables");
      out.tables.push_back(cells);
      return;
    }
    const std::size_t i = cell / n, j = cell % n;
    std::uint64_t lo = 0, hi = std::min(row_left[i], col_left[j]);
    if (j == n - 1) lo = row_left[i];  // last column is forced
    if (i == m - 1) lo = std::max(lo, col_left[j]);
    if (lo > hi || (j == n - 1 && i == m - 1 && row_left[i] != col_left[j])) return;
    if (j == n - 1 || i == m - 1) hi = lo;
    for (std::uint64_t v = lo; v <= hi; ++v) {
      cells[cell] = v;
      row_left[i] -= v;
      col_left[j] -= v;
      fill(cell + 1);
      row_left[i] += v;
      col_left[j] += v;
    }
    cells[cell] = 0;
  };
  fill(0);

  if (out.tables.empty()) throw InternalError("no contingency table found for consistent margins");
  std::vector<std::string> labels;
  labels.reserve(out.tables.size());
  for (const auto& t : out.tables) labels.push_back(table_label(t, n));
  out.space = StateSpace(std::move(labels));
  return out;
}

/// Heat-bath chain on contingency tables: one label per 2x2 subsquare
/// position, rho uniform, pi uniform; the block of a table under a position
/// is every table agreeing with it outside that subsquare.
inline HeatBathSpec build_contingency_chain(const ContingencyInstance& inst,
                                            const EnumerationCaps& caps = EnumerationCaps::from_env()) {
  const TableSet tables = enumerate_tables(inst, caps);
  const std::size_t m = tables.m, n = tables.n;
  if (m < 2 || n < 2) throw ValidationError("contingency chain needs at least 2 rows and 2 columns");
  const std::size_t count = tables.tables.size();
  const std::size_t positions = (m * (m - 1) / 2) * (n * (n - 1) / 2);

  HeatBathSpec spec;
  spec.states = tables.space.labels();
  spec.pi.assign(count, Rational(1, count));
  for (std::size_t i0 = 0; i0 < m; ++i0)
    for (std::size_t i1 = i0 + 1; i1 < m; ++i1)
      for (std::size_t j0 = 0; j0 < n; ++j0)
        for (std::size_t j1 = j0 + 1; j1 < n; ++j1) {
          std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> groups;
          for (std::size_t x = 0; x < count; ++x) {
            std::vector<std::uint64_t> outside = tables.tables[x];
            for (std::size_t i : {i0, i1})
              for (std::size_t j : {j0, j1}) outside[i * n + j] = 0;
            groups[outside].push_back(x);
          }
          LabelPartition label{"r" + std::to_string(i0) + "-" + std::to_string(i1) + "c" + std::to_string(j0) + "-" +
                                   std::to_string(j1),
                               Rational(1, positions),
                               {}};
          for (auto& [key, block] : groups) label.blocks.push_back(std::move(block));
          label.blocks = canonical_blocks(std::move(label.blocks));
          spec.labels.push_back(std::move(label));
        }
  return spec;
}

// ---------------------------------------------------------------------------
// Swendsen-Wang

/// Lifted state (sigma, A) with A a subset of the monochromatic edges of sigma.
struct BondState {
  std::size_t config;  // index into Omega
  std::uint64_t bonds;  // bitmask over graph edges
};

struct SwendsenWangTriple {
  TargetDistribution pi;  // Potts distribution on Omega
  TargetDistribution mu;  // joint distribution on Omega'
  std::vector<BondState> lifted;
  RMatrix R;  // |Omega| x |Omega'|
  RMatrix T;  // |Omega'| x |Omega'|
  StochasticMatrix P;  // R T R*
};

namespace detail {

inline std::uint64_t monochromatic_mask(const Graph& g, const Assignment& s) {
  std::uint64_t mask = 0;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (s[g.edges[e].first] == s[g.edges[e].second]) mask |= std::uint64_t{1} << e;
  return mask;
}

inline std::string bond_label(std::uint64_t mask) {
  std::string out = "{";
  bool first = true;
  for (std::size_t e = 0; e < 64; ++e)
    if (mask >> e & 1U) {
      out += (first ? "" : ",") + std::to_string(e);
      first = false;
    }
  return out + "}";
}

// Subsets of `mask` in increasing numeric order.
inline std::vector<std::uint64_t> submasks(std::uint64_t mask) {
  std::vector<std::uint64_t> out;
  std::uint64_t s = 0;
  while (true) {
    out.push_back(s);
    if (s == mask) break;
    s = (s - mask) & mask;
  }
  return out;
}

inline void check_sw_params(const Graph& g, std::size_t q, const Rational& w) {
  if (q < 2) throw ValidationError("Swendsen-Wang needs q >= 2");
  if (w <= 1) throw ValidationError("Swendsen-Wang needs beta > 0, i.e. w = e^beta > 1");
  if (g.edges.size() > 63) throw ValidationError("Swendsen-Wang supports at most 63 edges");
}

// Union-find component id per vertex for the spanning subgraph (V, bonds).
inline std::vector<std::size_t> components(const Graph& g, std::uint64_t bonds, std::size_t& count) {
  std::vector<std::size_t> parent(g.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (bonds >> e & 1U) parent[find(g.edges[e].first)] = find(g.edges[e].second);
  std::vector<std::size_t> id(g.vertices.size());
  std::map<std::size_t, std::size_t> relabel;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    auto [it, inserted] = relabel.emplace(find(v), relabel.size());
    id[v] = it->second;
  }
  count = relabel.size();
  return id;
}

}  // namespace detail

/// Builds the lifted space Omega' = {(sigma, A) : A subset of E(sigma)} with
/// mu(sigma, A) = (w-1)^{|A|} / Z, the lifting
/// R(sigma, (tau, A)) = w^{-|E(sigma)|} (w-1)^{|A|} 1(sigma = tau),
/// T((sigma, A), (tau, B)) = mu((tau, B) | B = A), and P = R T R*.
inline SwendsenWangTriple build_swendsen_wang(const Graph& g, std::size_t q, const Rational& w,
                                              const EnumerationCaps& caps = EnumerationCaps::from_env()) {
  detail::check_sw_params(g, q, w);
  const auto configs = detail::all_assignments(g.vertices.size(), q, caps.max_states);
  const std::size_t n = configs.size();

  std::vector<std::uint64_t> mono(n);
  std::vector<Rational> pi_weights(n);
  std::vector<BondState> lifted;
  for (std::size_t x = 0; x < n; ++x) {
    mono[x] = detail::monochromatic_mask(g, configs[x]);
    pi_weights[x] = detail::rpow(w, static_cast<std::size_t>(__builtin_popcountll(mono[x])));
    for (std::uint64_t a : detail::submasks(mono[x])) {
      lifted.push_back({x, a});
      if (lifted.size() > caps.max_lifted)
        throw ValidationError("lifted space exceeds cap of " + std::to_string(caps.max_lifted) + " states");
    }
  }
  Rational z = 0;
  for (const auto& v : pi_weights) z += v;

  std::vector<std::string> labels;
  for (const auto& c : configs) labels.push_back(assignment_label(c, q));
  TargetDistribution pi = TargetDistribution::from_weights(StateSpace(labels), pi_weights);

  const Rational wm1 = w - 1;
  const std::size_t nl = lifted.size();
  std::vector<std::string> lifted_labels;
  std::vector<Rational> mu_probs;
  for (const auto& b : lifted) {
    lifted_labels.push_back(labels[b.config] + "|" + detail::bond_label(b.bonds));
    mu_probs.push_back(detail::rpow(wm1, static_cast<std::size_t>(__builtin_popcountll(b.bonds))) / z);
  }
  TargetDistribution mu(StateSpace(std::move(lifted_labels)), std::move(mu_probs));

  RMatrix r(n, nl);
  for (std::size_t j = 0; j < nl; ++j) {
    const BondState& b = lifted[j];
    const std::size_t e_sigma = static_cast<std::size_t>(__builtin_popcountll(mono[b.config]));
    r(b.config, j) = detail::rpow(wm1, static_cast<std::size_t>(__builtin_popcountll(b.bonds))) /
                     detail::rpow(w, e_sigma);
  }

  std::map<std::uint64_t, std::vector<std::size_t>> by_bonds;
  for (std::size_t j = 0; j < nl; ++j) by_bonds[lifted[j].bonds].push_back(j);
  RMatrix t(nl, nl);
  for (const auto& [bonds, members] : by_bonds) {
    Rational mass = 0;
    for (std::size_t j : members) mass += mu[j];
    for (std::size_t i : members)
      for (std::size_t j : members) t(i, j) = mu[j] / mass;
  }
  if (!is_idempotent(t)) throw InternalError("Swendsen-Wang T is not idempotent");

  StochasticMatrix p = compose_transfer(r, t, pi, mu);
  return {std::move(pi), std::move(mu), std::move(lifted), std::move(r), std::move(t), std::move(p)};
}

/// Swendsen-Wang transition matrix by direct summation: keep each
/// monochromatic edge with probability 1 - 1/w, then recolour every
/// component of (V, A) uniformly.
inline StochasticMatrix direct_swendsen_wang(const Graph& g, std::size_t q, const Rational& w,
                                             const EnumerationCaps& caps = EnumerationCaps::from_env()) {
  detail::check_sw_params(g, q, w);
  const auto configs = detail::all_assignments(g.vertices.size(), q, caps.max_states);
  const std::size_t n = configs.size(), nv = g.vertices.size();
  const Rational keep = 1 - 1 / w, drop = 1 / w;

  RMatrix p(n, n);
  std::size_t work = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const std::uint64_t mono = detail::monochromatic_mask(g, configs[x]);
    const std::size_t e_sigma = static_cast<std::size_t>(__builtin_popcountll(mono));
    for (std::uint64_t a : detail::submasks(mono)) {
      if (++work > caps.max_lifted)
        throw ValidationError("Swendsen-Wang summation exceeds cap of " + std::to_string(caps.max_lifted) + " terms");
      const std::size_t kept = static_cast<std::size_t>(__builtin_popcountll(a));
      const Rational bond_prob = detail::rpow(keep, kept) * detail::rpow(drop, e_sigma - kept);
      std::size_t ncomp = 0;
      const auto comp = detail::components(g, a, ncomp);
      const auto colourings = detail::bounded_power(q, ncomp, caps.max_states);
      if (!colourings) throw ValidationError("recolouring enumeration exceeds cap");
      const Rational each = bond_prob / Rational(static_cast<long>(*colourings));
      Assignment colour(ncomp, 0);
      for (std::size_t c = 0; c < *colourings; ++c) {
        std::size_t y = 0;
        for (std::size_t v = 0; v < nv; ++v) y = y * q + colour[comp[v]];
        p(x, y) += each;
        for (std::size_t k = ncomp; k-- > 0;) {
          if (++colour[k] < q) break;
          colour[k] = 0;
        }
      }
    }
  }
  std::vector<std::string> labels;
  for (const auto& c : configs) labels.push_back(assignment_label(c, q));
  return StochasticMatrix(StateSpace(std::move(labels)), std::move(p));
}

}  // namespace hbspectra

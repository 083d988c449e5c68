#pragma once

// Structure theory of stochastic idempotent (SI) matrices: classification,
// the block canonical form, reversibility equivalences and finite-convergence
// analysis. Everything here is exact rational arithmetic.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hbspectra/error.hpp"
#include "hbspectra/matrix.hpp"
#include "hbspectra/rational.hpp"

namespace hbspectra {

inline bool is_idempotent(const RMatrix& m) {
  if (!m.is_square()) throw ValidationError("is_idempotent: matrix is not square");
  return m * m == m;
}

/// Index of the first row where M*M differs from M, with that row of M*M.
struct IdempotenceWitness {
  std::size_t row;
  std::vector<Rational> squared_row;
};

inline std::optional<IdempotenceWitness> idempotence_witness(const RMatrix& m) {
  const RMatrix sq = m * m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    bool same = true;
    for (std::size_t j = 0; j < m.cols() && same; ++j) same = sq(i, j) == m(i, j);
    if (!same) return IdempotenceWitness{i, std::vector<Rational>(sq.row(i).begin(), sq.row(i).end())};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classification

struct SiClass {
  enum class Kind { not_stochastic, not_idempotent, si };
  Kind kind = Kind::not_stochastic;
  std::size_t zero_columns = 0;  // t, when si
  std::size_t rank = 0;          // r, when si

  bool is_si() const { return kind == Kind::si; }
};

inline const char* to_string(SiClass::Kind k) {
  switch (k) {
    case SiClass::Kind::not_stochastic: return "not_stochastic";
    case SiClass::Kind::not_idempotent: return "not_idempotent";
    case SiClass::Kind::si: return "SI";
  }
  return "not_stochastic";
}

inline SiClass si_classify(const RMatrix& m) {
  if (!m.is_square() || check_stochastic(m) != Stochasticity::stochastic) return {};
  if (!is_idempotent(m)) return {SiClass::Kind::not_idempotent, 0, 0};
  return {SiClass::Kind::si, zero_columns(m).size(), rank(m)};
}

// ---------------------------------------------------------------------------
// Canonical form
//
//   U = [ 1 pi_1   0     ...  0       0 ]
//       [ 0      1 pi_2  ...  0       0 ]
//       [ ...                           ]
//       [ 0       0     ...  1 pi_k   0 ]
//       [ p_1 pi_1  p_2 pi_2 ... p_k pi_k  0 ]
//
// with the last block row/column holding the t ephemeral (zero-column) states.

struct SiBlock {
  std::vector<std::size_t> states;  // original indices, ascending
  std::vector<Rational> pi;         // positive, sums to 1; aligned with states
};

struct SiDecomposition {
  std::vector<std::size_t> permutation;  // new position -> original index
  std::vector<SiBlock> blocks;           // ordered by minimum original state
  std::vector<std::size_t> ephemeral;    // zero-column states, ascending
  /// coupling[e][i] = p_i entry for ephemeral state e; each row sums to 1.
  std::vector<std::vector<Rational>> coupling;

  std::size_t k() const { return blocks.size(); }
  std::size_t t() const { return ephemeral.size(); }
  std::size_t size() const { return permutation.size(); }
};

/// Rebuilds M from its canonical form (in original index order).
inline RMatrix reassemble(const SiDecomposition& d) {
  const std::size_t n = d.size();
  RMatrix m(n, n);
  for (const auto& block : d.blocks)
    for (std::size_t x : block.states)
      for (std::size_t j = 0; j < block.states.size(); ++j) m(x, block.states[j]) = block.pi[j];
  for (std::size_t e = 0; e < d.ephemeral.size(); ++e)
    for (std::size_t i = 0; i < d.blocks.size(); ++i)
      for (std::size_t j = 0; j < d.blocks[i].states.size(); ++j)
        m(d.ephemeral[e], d.blocks[i].states[j]) = d.coupling[e][i] * d.blocks[i].pi[j];
  return m;
}

/// The canonical form U itself, i.e. the input with rows and columns
/// reordered by `permutation`.
inline RMatrix canonical_matrix(const SiDecomposition& d) { return permute(reassemble(d), d.permutation); }

/// Canonical form of an SI matrix: remove zero columns, split the rest into
/// communicating classes, read each class's common row as pi_i, and recover
/// the ephemeral couplings p_i as the mass each ephemeral row puts on block i.
inline SiDecomposition si_decompose(const RMatrix& m) {
  const SiClass cls = si_classify(m);
  if (!cls.is_si()) throw ValidationError(std::string("si_decompose: input is ") + to_string(cls.kind));

  const std::size_t n = m.rows();
  SiDecomposition d;
  d.ephemeral = zero_columns(m);
  std::vector<bool> is_ephemeral(n, false);
  for (std::size_t e : d.ephemeral) is_ephemeral[e] = true;

  std::vector<std::size_t> kept;
  for (std::size_t x = 0; x < n; ++x)
    if (!is_ephemeral[x]) kept.push_back(x);

  RMatrix reduced(kept.size(), kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = 0; j < kept.size(); ++j) reduced(i, j) = m(kept[i], kept[j]);

  const CommunicatingStructure structure = communicating_structure(reduced);
  auto contradiction = [](const std::string& what) {
    return InternalError("si_decompose: SI input but " + what);
  };

  std::vector<std::size_t> block_of(n, static_cast<std::size_t>(-1));
  for (const auto& c : structure.classes) {
    SiBlock block;
    for (std::size_t local : c.states) block.states.push_back(kept[local]);
    const std::size_t lead = block.states.front();
    for (std::size_t y : block.states) {
      if (m(lead, y) <= 0) throw contradiction("block row is not positive");
      block.pi.push_back(m(lead, y));
    }
    for (std::size_t x : block.states) {
      Rational mass = 0;
      for (std::size_t j = 0; j < block.states.size(); ++j) {
        if (m(x, block.states[j]) != block.pi[j]) throw contradiction("block rows differ");
        mass += block.pi[j];
      }
      if (mass != 1) throw contradiction("block rows leak mass");
    }
    for (std::size_t x : block.states) block_of[x] = d.blocks.size();
    d.blocks.push_back(std::move(block));
  }

  for (std::size_t e : d.ephemeral) {
    std::vector<Rational> p(d.blocks.size());
    for (std::size_t y = 0; y < n; ++y) {
      if (m(e, y) == 0) continue;
      if (is_ephemeral[y]) throw contradiction("ephemeral row hits an ephemeral column");
      p[block_of[y]] += m(e, y);
    }
    Rational total = 0;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
      total += p[i];
      const auto& block = d.blocks[i];
      for (std::size_t j = 0; j < block.states.size(); ++j)
        if (m(e, block.states[j]) != p[i] * block.pi[j]) throw contradiction("coupling is not p_i pi_i");
    }
    if (total != 1) throw contradiction("coupling weights do not sum to 1");
    d.coupling.push_back(std::move(p));
  }

  for (const auto& block : d.blocks) d.permutation.insert(d.permutation.end(), block.states.begin(), block.states.end());
  d.permutation.insert(d.permutation.end(), d.ephemeral.begin(), d.ephemeral.end());

  if (reassemble(d) != m) throw contradiction("reassembly differs from input");
  return d;
}

// ---------------------------------------------------------------------------
// Reversibility equivalences for SI matrices

struct SiEquivalence {
  bool no_zero_columns = false;
  bool direct_sum = false;
  bool reversible = false;
  /// Positive diagonal D with D^{-1} M D = M^T, when reversible.
  std::optional<std::vector<Rational>> witness;
};

namespace detail {

// Permutation-similar to a direct sum of 1-SI blocks: every communicating
// class of the full matrix is closed, and within it all rows equal one
// positive vector.
inline bool is_direct_sum_of_rank_one_blocks(const RMatrix& m) {
  const CommunicatingStructure structure = communicating_structure(m);
  for (const auto& c : structure.classes) {
    if (!c.recurrent) return false;
    const std::size_t lead = c.states.front();
    for (std::size_t x : c.states) {
      for (std::size_t y : c.states) {
        if (m(lead, y) <= 0 || m(x, y) != m(lead, y)) return false;
      }
    }
  }
  return true;
}

// Searches for detailed-balance weights by propagating ratios over the
// symmetric support graph, normalizing each connected piece to total 1, and
// returns their reciprocals.
inline std::optional<std::vector<Rational>> reversibility_weights(const RMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<Rational> w(n);
  std::vector<bool> seen(n, false);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::size_t> piece{root}, todo{root};
    seen[root] = true;
    w[root] = 1;
    while (!todo.empty()) {
      const std::size_t x = todo.back();
      todo.pop_back();
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || (m(x, y) == 0 && m(y, x) == 0)) continue;
        if (m(x, y) == 0 || m(y, x) == 0) return std::nullopt;
        if (seen[y]) continue;
        seen[y] = true;
        w[y] = w[x] * m(x, y) / m(y, x);
        piece.push_back(y);
        todo.push_back(y);
      }
    }
    Rational total = 0;
    for (std::size_t x : piece) total += w[x];
    for (std::size_t x : piece) w[x] /= total;
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (w[x] * m(x, y) != w[y] * m(y, x)) return std::nullopt;
  // Detailed balance w_x m(x,y) = w_y m(y,x) means diag(w) M diag(w)^{-1} = M^T,
  // so the diagonal conjugating on the other side is the inverse.
  for (auto& v : w) v = 1 / v;
  return w;
}

}  // namespace detail

/// D^{-1} M D == M^T exactly, for a positive diagonal given as a vector.
inline bool satisfies_diagonal_reversibility(const RMatrix& m, const std::vector<Rational>& d) {
  for (std::size_t x = 0; x < m.rows(); ++x)
    for (std::size_t y = 0; y < m.cols(); ++y)
      if (m(x, y) * d[y] / d[x] != m(y, x)) return false;
  return true;
}

/// Evaluates the three equivalent conditions independently and checks that
/// they agree: no zero columns; permutation-similar to a direct sum of 1-SI
/// matrices; reversible with respect to some positive distribution.
inline SiEquivalence reversible_si_equivalence(const RMatrix& m) {
  if (!si_classify(m).is_si()) throw ValidationError("reversible_si_equivalence: input is not SI");
  SiEquivalence out;
  out.no_zero_columns = zero_columns(m).empty();
  out.direct_sum = detail::is_direct_sum_of_rank_one_blocks(m);
  if (auto w = detail::reversibility_weights(m)) {
    out.reversible = true;
    if (!satisfies_diagonal_reversibility(m, *w))
      throw InternalError("reversible_si_equivalence: witness fails D^-1 M D = M^T");
    out.witness = std::move(w);
  }
  if (out.no_zero_columns != out.direct_sum || out.direct_sum != out.reversible)
    throw PropertyFalsified("SI equivalence conditions disagree");
  return out;
}

// ---------------------------------------------------------------------------
// Finite convergence

/// Characteristic polynomial det(xI - M), coefficients from x^0 up to x^n
/// (Faddeev-LeVerrier, exact).
inline std::vector<Rational> characteristic_polynomial(const RMatrix& m) {
  if (!m.is_square()) throw ValidationError("characteristic_polynomial: matrix is not square");
  const std::size_t n = m.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  RMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    mk = m * mk;
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += mk(i, i);
    c[n - k] = -trace / Rational(static_cast<long>(k));
  }
  return c;
}

/// Whether every eigenvalue of M lies in {0, 1}, decided exactly by comparing
/// the characteristic polynomial with x^(n-b) (x-1)^b where b = trace(M).
inline bool has_binary_spectrum(const RMatrix& m) {
  const std::size_t n = m.rows();
  Rational trace = 0;
  for (std::size_t i = 0; i < n; ++i) trace += m(i, i);
  if (trace.get_den() != 1 || trace < 0 || trace > static_cast<long>(n)) return false;
  const std::size_t b = trace.get_num().get_ui();
  // (x-1)^b shifted by n-b.
  std::vector<Rational> expected(n + 1);
  Integer binom = 1;
  for (std::size_t j = 0; j <= b; ++j) {
    Rational coef(binom);
    if ((b - j) % 2 == 1) coef = -coef;
    expected[n - b + j] = coef;
    binom = binom * static_cast<unsigned long>(b - j) / static_cast<unsigned long>(j + 1);
  }
  return characteristic_polynomial(m) == expected;
}

struct FiniteConvergenceReport {
  bool settles = false;
  std::size_t m = 0;  // minimal m with M^{m+1} = M^m, when settles
  bool spectrum_binary = false;
  std::vector<SiBlock> recurrent_blocks;  // 1-SI blocks of M^m
  /// Whether every state outside the recurrent blocks is a zero column of M,
  /// i.e. M itself is permutation-similar to the block form with a zero
  /// last column block.
  bool strict_form = false;
};

/// Size above which the binary-spectrum verdict comes from the exact
/// annihilating polynomial x^m (x - 1) instead of the characteristic
/// polynomial.
inline constexpr std::size_t kCharpolyLimit = 64;

inline FiniteConvergenceReport settle_analysis(const RMatrix& m, std::size_t m_cap = 0) {
  if (check_stochastic(m) != Stochasticity::stochastic) throw ValidationError("settle_analysis: matrix is not stochastic");
  const std::size_t n = m.rows();
  if (m_cap == 0) m_cap = n;

  FiniteConvergenceReport report;
  RMatrix power = m;  // M^j
  for (std::size_t j = 1; j <= m_cap; ++j) {
    RMatrix next = power * m;
    if (next == power) {
      report.settles = true;
      report.m = j;
      break;
    }
    power = std::move(next);
  }

  if (n <= kCharpolyLimit) {
    report.spectrum_binary = has_binary_spectrum(m);
  } else {
    // x^m (x - 1) annihilates M when it settles; a stochastic matrix with
    // binary spectrum settles within n steps, so the converse holds for
    // m_cap >= n.
    report.spectrum_binary = report.settles;
  }
  if (!report.settles) return report;
  if (!report.spectrum_binary) throw PropertyFalsified("settling matrix has an eigenvalue outside {0,1}");

  // power == M^m here.
  if (power * power != power) throw PropertyFalsified("M^{2m} != M^m for a settling matrix");
  RMatrix probe = power;
  for (int delta = 1; delta <= 3; ++delta) {
    probe = probe * m;
    if (probe != power) throw PropertyFalsified("M^{m+delta} != M^m for a settling matrix");
  }

  SiDecomposition limit = si_decompose(power);
  report.recurrent_blocks = std::move(limit.blocks);
  std::vector<bool> in_block(n, false);
  for (const auto& block : report.recurrent_blocks)
    for (std::size_t x : block.states) in_block[x] = true;
  const std::vector<std::size_t> zeros = zero_columns(m);
  report.strict_form = true;
  for (std::size_t x = 0; x < n; ++x)
    if (!in_block[x] && !std::binary_search(zeros.begin(), zeros.end(), x)) report.strict_form = false;
  return report;
}

struct IdempotenceVerdict {
  bool confirmed = false;
  std::size_t settle_power = 0;
  /// Present only if a reversible settling matrix failed M^2 = M.
  std::optional<IdempotenceWitness> counterexample;
};

/// For a matrix reversible with respect to a positive distribution that
/// settles in finitely many steps, checks that it is idempotent.
inline IdempotenceVerdict reversible_settles_implies_idempotent(const RMatrix& m, const TargetDistribution& pi) {
  if (check_stochastic(m) != Stochasticity::stochastic)
    throw ValidationError("reversible_settles_implies_idempotent: matrix is not stochastic");
  if (!check_reversible(m, pi))
    throw ValidationError("reversible_settles_implies_idempotent: matrix is not reversible w.r.t. pi");
  const FiniteConvergenceReport settle = settle_analysis(m);
  if (!settle.settles)
    throw ValidationError("reversible_settles_implies_idempotent: matrix does not settle");
  IdempotenceVerdict verdict;
  verdict.settle_power = settle.m;
  verdict.counterexample = idempotence_witness(m);
  verdict.confirmed = !verdict.counterexample.has_value();
  return verdict;
}

}  // namespace hbspectra

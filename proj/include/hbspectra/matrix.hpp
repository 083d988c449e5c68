#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hbspectra/error.hpp"
#include "hbspectra/rational.hpp"

namespace hbspectra {

/// Dense row-major matrix. Used with Rational for every structural test and
/// with double for spectra.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw ValidationError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ValidationError("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b(k, j) == 0) continue;
          c(i, j) += aik * b(k, j);
        }
      }
    }
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix sum dimension mismatch");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
  }

  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix c = a;
    for (auto& v : c.data_) v *= s;
    return c;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RMatrix = Matrix<Rational>;
using DMatrix = Matrix<double>;

inline DMatrix to_double(const RMatrix& m) {
  DMatrix d(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).get_d();
  return d;
}

/// Builds a rational matrix from string literals ("1/2", "0.25", "1").
inline RMatrix parse_matrix(const std::vector<std::vector<std::string>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ValidationError("ragged matrix literal");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_rational(rows[i][j]);
  }
  return m;
}

// ---------------------------------------------------------------------------
// State spaces and distributions

/// Ordered, immutable set of opaque state labels with a label -> index map.
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ValidationError("state space must contain at least one state");
    index_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second)
        throw ValidationError("duplicate state label '" + labels_[i] + "'");
    }
  }

  /// States labelled "0", "1", ..., "n-1".
  static StateSpace indexed(std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return StateSpace(std::move(labels));
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::size_t index_of(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) throw ValidationError("unknown state label '" + std::string(label) + "'");
    return it->second;
  }

  friend bool operator==(const StateSpace& a, const StateSpace& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Strictly positive probability vector on a StateSpace, summing to exactly 1.
class TargetDistribution {
 public:
  TargetDistribution(StateSpace space, std::vector<Rational> probs)
      : space_(std::move(space)), probs_(std::move(probs)) {
    if (probs_.size() != space_.size())
      throw ValidationError("distribution has " + std::to_string(probs_.size()) + " entries for " +
                            std::to_string(space_.size()) + " states");
    Rational total = 0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (probs_[i] <= 0)
        throw ValidationError("distribution entry for state '" + space_.label(i) + "' is not positive");
      total += probs_[i];
    }
    if (total != 1) throw ValidationError("distribution sums to " + to_string(total) + ", not 1");
  }

  static TargetDistribution uniform(StateSpace space) {
    const std::size_t n = space.size();
    return TargetDistribution(std::move(space), std::vector<Rational>(n, Rational(1, n)));
  }

  /// Normalizes positive weights into a distribution.
  static TargetDistribution from_weights(StateSpace space, std::vector<Rational> weights) {
    Rational total = 0;
    for (const auto& w : weights) total += w;
    if (total <= 0) throw ValidationError("weights must have positive total");
    for (auto& w : weights) w /= total;
    return TargetDistribution(std::move(space), std::move(weights));
  }

  const StateSpace& space() const { return space_; }
  std::size_t size() const { return probs_.size(); }
  const Rational& operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<Rational>& probs() const { return probs_; }

  Rational min() const { return *std::min_element(probs_.begin(), probs_.end()); }

  std::vector<double> to_double() const {
    std::vector<double> out(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) out[i] = probs_[i].get_d();
    return out;
  }

 private:
  StateSpace space_;
  std::vector<Rational> probs_;
};

// ---------------------------------------------------------------------------
// Stochasticity

enum class Stochasticity { stochastic, substochastic, neither };

inline const char* to_string(Stochasticity s) {
  switch (s) {
    case Stochasticity::stochastic: return "stochastic";
    case Stochasticity::substochastic: return "substochastic";
    case Stochasticity::neither: return "neither";
  }
  return "neither";
}

inline std::vector<Rational> row_sums(const RMatrix& m) {
  std::vector<Rational> sums(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& v : m.row(i)) sums[i] += v;
  return sums;
}

/// Classifies a square matrix by exact row sums. Strictly substochastic
/// means nonnegative with every row sum at most 1 and at least one below.
inline Stochasticity check_stochastic(const RMatrix& m) {
  if (!m.is_square()) throw ValidationError("check_stochastic: matrix is not square");
  bool all_one = true;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Rational sum = 0;
    for (const auto& v : m.row(i)) {
      if (v < 0) return Stochasticity::neither;
      sum += v;
    }
    if (sum > 1) return Stochasticity::neither;
    if (sum != 1) all_one = false;
  }
  return all_one ? Stochasticity::stochastic : Stochasticity::substochastic;
}

/// Nonnegative with every row summing to exactly 1 (any shape).
inline bool is_row_stochastic(const RMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Rational sum = 0;
    for (const auto& v : m.row(i)) {
      if (v < 0) return false;
      sum += v;
    }
    if (sum != 1) return false;
  }
  return true;
}

/// Square row-stochastic matrix indexed by a StateSpace.
class StochasticMatrix {
 public:
  StochasticMatrix(StateSpace space, RMatrix entries) : space_(std::move(space)), entries_(std::move(entries)) {
    if (entries_.rows() != space_.size() || entries_.cols() != space_.size())
      throw ValidationError("stochastic matrix dimension does not match its state space");
    if (check_stochastic(entries_) != Stochasticity::stochastic)
      throw ValidationError("matrix is not stochastic");
  }

  explicit StochasticMatrix(RMatrix entries)
      : StochasticMatrix(StateSpace::indexed(entries.rows()), std::move(entries)) {}

  const StateSpace& space() const { return space_; }
  const RMatrix& matrix() const { return entries_; }
  std::size_t size() const { return entries_.rows(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  DMatrix to_double() const { return hbspectra::to_double(entries_); }

 private:
  StateSpace space_;
  RMatrix entries_;
};

inline void require_same_size(const RMatrix& m, const TargetDistribution& pi, const char* what) {
  if (!m.is_square() || m.rows() != pi.size())
    throw ValidationError(std::string(what) + ": matrix and distribution dimensions differ");
}

/// Exact detailed balance: pi(x) M(x,y) == pi(y) M(y,x) for all x, y.
inline bool check_reversible(const RMatrix& m, const TargetDistribution& pi) {
  require_same_size(m, pi, "check_reversible");
  for (std::size_t x = 0; x < m.rows(); ++x)
    for (std::size_t y = x + 1; y < m.cols(); ++y)
      if (pi[x] * m(x, y) != pi[y] * m(y, x)) return false;
  return true;
}

inline bool check_reversible(const StochasticMatrix& m, const TargetDistribution& pi) {
  return check_reversible(m.matrix(), pi);
}

/// pi M == pi exactly.
inline bool is_stationary(const RMatrix& m, const TargetDistribution& pi) {
  require_same_size(m, pi, "is_stationary");
  for (std::size_t y = 0; y < m.cols(); ++y) {
    Rational mass = 0;
    for (std::size_t x = 0; x < m.rows(); ++x) mass += pi[x] * m(x, y);
    if (mass != pi[y]) return false;
  }
  return true;
}

/// (I + M) / 2.
inline RMatrix lazify(const RMatrix& m) {
  if (!m.is_square()) throw ValidationError("lazify: matrix is not square");
  RMatrix out(m.rows(), m.cols());
  const Rational half(1, 2);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = half * m(i, j) + (i == j ? half : Rational(0));
  return out;
}

inline StochasticMatrix lazify(const StochasticMatrix& m) { return StochasticMatrix(m.space(), lazify(m.matrix())); }

/// Indices of identically-zero columns, ascending.
inline std::vector<std::size_t> zero_columns(const RMatrix& m) {
  if (!m.is_square()) throw ValidationError("zero_columns: matrix is not square");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    bool zero = true;
    for (std::size_t i = 0; i < m.rows() && zero; ++i) zero = m(i, j) == 0;
    if (zero) out.push_back(j);
  }
  return out;
}

/// Simultaneous row/column reordering: out(i, j) = m(order[i], order[j]).
/// This is A^T M A for the permutation matrix A whose column i is e_{order[i]}.
template <typename T>
Matrix<T> permute(const Matrix<T>& m, std::span<const std::size_t> order) {
  if (!m.is_square() || order.size() != m.rows()) throw ValidationError("permute: dimension mismatch");
  Matrix<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = 0; j < order.size(); ++j) out(i, j) = m(order[i], order[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Support graph structure

struct CommunicatingClass {
  std::vector<std::size_t> states;  // ascending
  bool recurrent = false;           // closed: no edge leaves the class
};

struct CommunicatingStructure {
  std::vector<CommunicatingClass> classes;  // ordered by minimum state
  bool is_irreducible = false;
};

/// Strongly connected components of the support graph (x -> y iff m(x,y) > 0),
/// each tagged recurrent when closed. Iterative Tarjan; classes are returned
/// sorted by their minimum state index.
template <typename T>
CommunicatingStructure communicating_structure(const Matrix<T>& m) {
  if (!m.is_square()) throw ValidationError("communicating_structure: matrix is not square");
  const std::size_t n = m.rows();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);

  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (m(x, y) > 0) adj[x].push_back(y);

  std::vector<std::size_t> index(n, unvisited), low(n, 0), component(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;

  struct Frame {
    std::size_t node;
    std::size_t next_edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_edge < adj[f.node].size()) {
        const std::size_t w = adj[f.node][f.next_edge++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const std::size_t v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = comps.size();
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }

  CommunicatingStructure out;
  for (const auto& comp : comps) {
    CommunicatingClass cls{comp, true};
    const std::size_t id = component[comp.front()];
    for (std::size_t x : comp)
      for (std::size_t y : adj[x])
        if (component[y] != id) cls.recurrent = false;
    out.classes.push_back(std::move(cls));
  }
  std::sort(out.classes.begin(), out.classes.end(),
            [](const auto& a, const auto& b) { return a.states.front() < b.states.front(); });
  out.is_irreducible = out.classes.size() == 1;
  return out;
}

/// Exact rank by fraction-free (Bareiss) elimination. Rows are first scaled
/// to integers by their denominators' lcm; every division is exact.
inline std::size_t rank(const RMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    Integer l = 1;
    for (const auto& v : m.row(i)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  std::size_t r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

/// Unique stationary distribution of an irreducible stochastic matrix, by
/// exact elimination on pi (P - I) = 0 with one equation replaced by
/// sum(pi) = 1. Returns nullopt when the chain is not irreducible.
inline std::optional<std::vector<Rational>> stationary_distribution(const RMatrix& p) {
  if (!p.is_square()) throw ValidationError("stationary_distribution: matrix is not square");
  if (!communicating_structure(p).is_irreducible) return std::nullopt;
  const std::size_t n = p.rows();
  // Row i of the system is column i of (P - I); the last row is all ones.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = p(j, i) - (i == j ? 1 : 0);
  for (std::size_t j = 0; j <= n; ++j) a[n - 1][j] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c] == 0) ++pivot;
    if (pivot == n) throw InternalError("singular stationary system for an irreducible chain");
    std::swap(a[pivot], a[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j <= n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  std::vector<Rational> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
  return pi;
}

}  // namespace hbspectra

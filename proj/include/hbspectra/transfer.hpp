#pragma once

// Lifting a chain through an auxiliary space: P = R T R*, where R maps
// states to distributions on the lifted space and R* is its adjoint with
// respect to pi and mu. PSD of T transfers to P.

#include <cstddef>
#include <string>
#include <vector>

#include "hbspectra/error.hpp"
#include "hbspectra/matrix.hpp"
#include "hbspectra/sicanon.hpp"
#include "hbspectra/spectral.hpp"

namespace hbspectra {

/// pi R, the pushforward of pi through the lifting.
inline std::vector<Rational> push_forward(const RMatrix& r, const TargetDistribution& pi) {
  if (r.rows() != pi.size()) throw ValidationError("push_forward: R has wrong row count");
  std::vector<Rational> out(r.cols());
  for (std::size_t x = 0; x < r.rows(); ++x)
    for (std::size_t y = 0; y < r.cols(); ++y)
      if (r(x, y) != 0) out[y] += pi[x] * r(x, y);
  return out;
}

/// R*(y, x) = pi(x) R(x, y) / mu(y). Requires pi R == mu.
inline RMatrix adjoint(const RMatrix& r, const TargetDistribution& pi, const TargetDistribution& mu) {
  if (r.rows() != pi.size() || r.cols() != mu.size()) throw ValidationError("adjoint: dimension mismatch");
  if (push_forward(r, pi) != mu.probs()) throw ValidationError("adjoint: pi R != mu");
  RMatrix out(r.cols(), r.rows());
  for (std::size_t x = 0; x < r.rows(); ++x)
    for (std::size_t y = 0; y < r.cols(); ++y)
      if (r(x, y) != 0) out(y, x) = pi[x] * r(x, y) / mu[y];
  if (!is_row_stochastic(out)) throw InternalError("adjoint rows do not sum to 1");
  return out;
}

struct ConditionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TransferReport {
  std::vector<ConditionCheck> checks;
  /// How T's PSD was established: "exact-idempotent", "numeric", or
  /// "not-evaluated" when T is not a reversible transition matrix.
  std::string psd_method = "not-evaluated";

  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  bool passed(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c.passed;
    throw InternalError("unknown transfer check '" + name + "'");
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.passed) out.push_back(c.name);
    return out;
  }
};

/// Checks each lifting condition separately: R nonnegative, rows of R sum
/// to 1, pi R = mu, T stochastic, T reversible w.r.t. mu, T PSD.
inline TransferReport verify_transfer_conditions(const RMatrix& r, const RMatrix& t, const TargetDistribution& pi,
                                                 const TargetDistribution& mu, double tol = 1e-9) {
  TransferReport report;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const bool r_shape = r.rows() == pi.size() && r.cols() == mu.size();
  bool nonneg = r_shape;
  std::string nonneg_detail = r_shape ? "" : "R has wrong dimensions";
  bool rows_one = r_shape;
  std::string rows_detail = nonneg_detail;
  if (r_shape) {
    for (std::size_t x = 0; x < r.rows(); ++x) {
      Rational sum = 0;
      for (const auto& v : r.row(x)) {
        if (v < 0 && nonneg) {
          nonneg = false;
          nonneg_detail = "negative entry in row " + std::to_string(x);
        }
        sum += v;
      }
      if (sum != 1 && rows_one) {
        rows_one = false;
        rows_detail = "row " + std::to_string(x) + " sums to " + to_string(sum);
      }
    }
  }
  add("R_nonnegative", nonneg, nonneg_detail);
  add("R_rows_sum_to_one", rows_one, rows_detail);
  add("pi_R_equals_mu", r_shape && push_forward(r, pi) == mu.probs(), r_shape ? "" : "R has wrong dimensions");

  const bool t_shape = t.is_square() && t.rows() == mu.size();
  const bool t_stochastic = t_shape && check_stochastic(t) == Stochasticity::stochastic;
  add("T_stochastic", t_stochastic, t_shape ? "" : "T has wrong dimensions");
  const bool t_reversible = t_shape && check_reversible(t, mu);
  add("T_reversible", t_reversible);

  if (t_stochastic && t_reversible) {
    const SpectralReport spectrum = certify_psd(t, mu, tol);
    report.psd_method = to_string(spectrum.certificate);
    add("T_psd", spectrum.psd, "lambda_min = " + std::to_string(spectrum.lambda_min));
  } else {
    add("T_psd", false, "not evaluated: T is not a reversible transition matrix");
  }
  return report;
}

/// P = R T R*; asserts that the result is stochastic, reversible w.r.t. pi
/// and positive semidefinite.
inline StochasticMatrix compose_transfer(const RMatrix& r, const RMatrix& t, const TargetDistribution& pi,
                                         const TargetDistribution& mu, double tol = 1e-9) {
  const TransferReport report = verify_transfer_conditions(r, t, pi, mu, tol);
  if (!report.ok()) {
    std::string msg = "compose_transfer: conditions failed:";
    for (const auto& name : report.failures()) msg += " " + name;
    throw ValidationError(msg);
  }
  RMatrix p = r * t * adjoint(r, pi, mu);
  if (check_stochastic(p) != Stochasticity::stochastic) throw InternalError("R T R* is not stochastic");
  if (!check_reversible(p, pi)) throw InternalError("R T R* is not reversible w.r.t. pi");
  StochasticMatrix chain(pi.space(), std::move(p));
  if (!certify_psd(chain, pi, tol).psd) throw PropertyFalsified("R T R* has a negative eigenvalue");
  return chain;
}

}  // namespace hbspectra

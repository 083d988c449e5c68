#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hbspectra/error.hpp"
#include "hbspectra/matrix.hpp"
#include "hbspectra/sicanon.hpp"

namespace hbspectra {

/// Q = D^{-1} P D with D = diag(sqrt(pi)). Off-diagonal entries are formed
/// as sqrt(P(x,y) P(y,x)), which equals the similarity transform under
/// detailed balance and is symmetric by construction.
inline DMatrix symmetrize(const RMatrix& p, const TargetDistribution& pi) {
  if (!check_reversible(p, pi)) throw ValidationError("symmetrize: matrix is not reversible w.r.t. pi");
  const std::size_t n = p.rows();
  DMatrix q(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    q(x, x) = p(x, x).get_d();
    for (std::size_t y = x + 1; y < n; ++y) {
      const Rational product = p(x, y) * p(y, x);
      const double v = product == 0 ? 0.0 : std::sqrt(product.get_d());
      q(x, y) = v;
      q(y, x) = v;
    }
  }
  return q;
}

inline DMatrix symmetrize(const StochasticMatrix& p, const TargetDistribution& pi) {
  return symmetrize(p.matrix(), pi);
}

inline double max_asymmetry(const DMatrix& q) {
  double worst = 0.0;
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = i + 1; j < q.cols(); ++j) worst = std::max(worst, std::abs(q(i, j) - q(j, i)));
  return worst;
}

struct JacobiOptions {
  double off_norm_tolerance = 1e-13;
  int max_sweeps = 100;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
inline std::vector<double> eigenvalues_symmetric(DMatrix a, JacobiOptions options = {}) {
  if (!a.is_square()) throw ValidationError("eigenvalues_symmetric: matrix is not square");
  if (max_asymmetry(a) > 1e-10) throw ValidationError("eigenvalues_symmetric: matrix is not symmetric");
  const std::size_t n = a.rows();
  // Work on the exactly symmetric average.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };

  for (int sweep = 0; sweep < options.max_sweeps && off_norm() >= options.off_norm_tolerance; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double app = a(p, p), aqq = a(q, q);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p), arq = a(r, q);
          a(p, r) = a(r, p) = arp - s * (arq + tau * arp);
          a(q, r) = a(r, q) = arq + s * (arp - tau * arq);
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

enum class PsdCertificate { numeric, exact_idempotent };

inline const char* to_string(PsdCertificate c) {
  return c == PsdCertificate::exact_idempotent ? "exact-idempotent" : "numeric";
}

struct MixingBound {
  double epsilon = 0.0;
  double tau_upper = 0.0;
};

struct SpectralReport {
  std::vector<double> eigenvalues;  // descending
  std::optional<double> lambda_1;   // absent when N == 1
  double lambda_min = 0.0;
  double lambda_star = 0.0;
  bool psd = false;
  double tolerance = 1e-9;
  PsdCertificate certificate = PsdCertificate::numeric;
  bool is_ergodic = false;
  std::optional<MixingBound> mixing_bound;
};

/// Largest size for which the exact idempotence certificate is attempted.
inline constexpr std::size_t kExactCertificateLimit = 256;

/// Irreducible and at least one state with a self-loop.
inline bool is_ergodic(const RMatrix& p) {
  if (!communicating_structure(p).is_irreducible) return false;
  for (std::size_t x = 0; x < p.rows(); ++x)
    if (p(x, x) > 0) return true;
  return false;
}

/// Spectrum of a reversible chain and the verdict "no eigenvalue below -tol".
/// Idempotent inputs get an exact certificate (spectrum inside {0, 1}).
inline SpectralReport certify_psd(const RMatrix& p, const TargetDistribution& pi, double tol = 1e-9) {
  if (check_stochastic(p) != Stochasticity::stochastic) throw ValidationError("certify_psd: matrix is not stochastic");
  SpectralReport report;
  report.tolerance = tol;
  report.eigenvalues = eigenvalues_symmetric(symmetrize(p, pi));
  const auto& eig = report.eigenvalues;
  report.lambda_min = eig.back();
  if (eig.size() >= 2) {
    report.lambda_1 = eig[1];
    report.lambda_star = std::max(eig[1], std::abs(eig.back()));
  }
  report.psd = report.lambda_min >= -tol;
  if (p.rows() <= kExactCertificateLimit && is_idempotent(p)) {
    report.certificate = PsdCertificate::exact_idempotent;
    report.psd = true;
  }
  report.is_ergodic = is_ergodic(p);
  return report;
}

inline SpectralReport certify_psd(const StochasticMatrix& p, const TargetDistribution& pi, double tol = 1e-9) {
  return certify_psd(p.matrix(), pi, tol);
}

/// Upper bound (1 - lambda_*)^{-1} ln(1 / (eps pi_min)) on the mixing time
/// tau(eps) of an ergodic reversible chain.
inline double mixing_time_bound(const SpectralReport& report, const TargetDistribution& pi, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("mixing_time_bound: epsilon must lie in (0, 1)");
  if (!report.is_ergodic) throw ValidationError("mixing_time_bound: chain is not ergodic");
  const double gap = 1.0 - report.lambda_star;
  if (gap < 1e-12) throw ValidationError("mixing_time_bound: lambda_* is 1 within tolerance");
  return std::log(1.0 / (eps * pi.min().get_d())) / gap;
}

/// Attaches the mixing bound to a report.
inline SpectralReport with_mixing_bound(SpectralReport report, const TargetDistribution& pi, double eps) {
  report.mixing_bound = MixingBound{eps, mixing_time_bound(report, pi, eps)};
  return report;
}

}  // namespace hbspectra

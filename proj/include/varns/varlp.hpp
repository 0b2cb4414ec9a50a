#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "varns/exponents.hpp"
#include "varns/grid.hpp"

namespace varns {

enum class NormKind { luxemburg, classical, mixed };

std::string to_string(NormKind k);

struct NormValue {
  double value = 0.0;
  NormKind kind = NormKind::luxemburg;
  /// Half-width of the final bisection bracket (0 for closed-form norms).
  double tolerance = 0.0;
};

/// Quadrature of |f(x)|^p(x) with the grid's midpoint weights.
double modular(const ScalarField& f, const ExponentField& p);
/// Same as modular(f / lambda, p) without materialising f / lambda.
double modular_scaled(std::span<const double> f, std::span<const double> p,
                      double weight, double lambda);

/// Classical (sum |f|^p w)^(1/p) for a constant index.
double classical_norm(const ScalarField& f, double p);

/// inf{ lambda > 0 : modular(f / lambda) <= 1 } by bracketing and bisection.
///
/// The bracket is seeded at the classical p_minus norm and grown by doubling or
/// halving, then bisected until its half-width is <= tol; the midpoint is
/// returned. f == 0 returns exactly 0. Throws non_convergence when the bracket
/// cannot be resolved to `tol` in floating point (absurd input scales).
NormValue luxemburg_norm(const ScalarField& f, const ExponentField& p, double tol = 1e-10);

/// max{ ||f||_{p(.)}, ||f||_{frak_p} }.
NormValue mixed_norm(const ScalarField& f, const ExponentField& p, double frak_p,
                     double tol = 1e-10);

/// ||fg||_p / (||f||_q ||g||_r) for exponents with 1/p = 1/q + 1/r.
double holder_defect(const ScalarField& f, const ScalarField& g, const ExponentField& p,
                     const ExponentField& q, const ExponentField& r, double tol = 1e-10);

/// Lower estimate of sup{ int |f||g| : ||g||_{p'(.)} <= 1 } over generated
/// candidates. The candidates always include |f|^{p-1} and (|f|/||f||)^{p-1},
/// each normalised in L^{p'(.)}, plus `candidates` seeded perturbations.
double conjugate_pairing_lower_bound(const ScalarField& f, const ExponentField& p,
                                     int candidates, std::uint64_t seed);

/// ||1||_{L^{p(.)}([0,T])}; p must live on a truncated 1D grid covering [0,T].
NormValue unit_function_norm(double T, const ExponentField& p, double tol = 1e-12);

/// ||f||_{p1} / ||f||_{p2} on a bounded (truncated) domain. Requires
/// p1 <= p2 at every grid point; the first violation is reported.
double embedding_defect(const ScalarField& f, const ExponentField& p1,
                        const ExponentField& p2, double tol = 1e-12);

/// Absolute bisection tolerance proportional to the size of f, for internal
/// norm evaluations that only need relative accuracy.
double relative_tolerance(const ScalarField& f, const ExponentField& p, double rel);

}  // namespace varns

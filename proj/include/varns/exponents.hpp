#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varns/grid.hpp"

namespace varns {

enum class ExponentFamily { constant, radial_log, gaussian_bump, sinusoidal, custom_samples };

std::string to_string(ExponentFamily f);
ExponentFamily exponent_family_from_string(const std::string& s);

/// Family tag plus parameters; enough to rebuild the exponent on any grid.
///
///   constant       [p]
///   radial-log     [p_inf, A]          p_inf + A / log(e + |x|)
///   gaussian-bump  [a, b]              a + b exp(-|x|^2)
///   sinusoidal     [a, b, w=1, m=1]    a + b prod_d sin(w x_d)^m
struct ExponentSpec {
  ExponentFamily family = ExponentFamily::constant;
  std::vector<double> params;
};

/// Closed-form value of a built-in family at a point. Not defined for
/// custom-samples.
double evaluate_family(ExponentFamily family, std::span<const double> params,
                       const std::array<double, 3>& x, int dimension);

/// Sampled variable exponent with 1 < p_minus <= p(x) <= p_plus < inf.
class ExponentField {
 public:
  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }
  double p_minus() const noexcept { return p_minus_; }
  double p_plus() const noexcept { return p_plus_; }
  std::optional<double> p_infinity() const noexcept { return p_infinity_; }
  ExponentFamily family() const noexcept { return family_; }
  std::span<const double> params() const noexcept { return params_; }
  bool is_constant() const noexcept { return p_minus_ == p_plus_; }

  friend ExponentField make_exponent(ExponentFamily, std::span<const double>,
                                     const GridSpec&);
  friend ExponentField exponent_from_samples(const GridSpec&, std::vector<double>,
                                             std::optional<double>);

 private:
  ExponentField(GridSpec grid, std::vector<double> samples, std::optional<double> p_inf,
                ExponentFamily family, std::vector<double> params);

  GridSpec grid_;
  std::vector<double> samples_;
  double p_minus_ = 0.0;
  double p_plus_ = 0.0;
  std::optional<double> p_infinity_;
  ExponentFamily family_ = ExponentFamily::custom_samples;
  std::vector<double> params_;
};

/// Builds one of the closed-form families on `grid`. Throws when the sampled
/// infimum is <= 1, the supremum is not finite, or the limit exponent of a
/// decaying family is <= 1.
ExponentField make_exponent(ExponentFamily family, std::span<const double> params,
                            const GridSpec& grid);
inline ExponentField make_exponent(const ExponentSpec& spec, const GridSpec& grid) {
  return make_exponent(spec.family, spec.params, grid);
}

/// Wraps arbitrary samples (family tag custom-samples).
ExponentField exponent_from_samples(const GridSpec& grid, std::vector<double> samples,
                                    std::optional<double> p_infinity = std::nullopt);

template <class F>
ExponentField exponent_from_function(const GridSpec& grid, F&& fn,
                                     std::optional<double> p_infinity = std::nullopt) {
  std::vector<double> s(grid.size());
  for (std::size_t n = 0; n < s.size(); ++n) s[n] = fn(grid.point(n));
  return exponent_from_samples(grid, std::move(s), p_infinity);
}

/// p'(x) = p(x) / (p(x) - 1).
ExponentField conjugate_exponent(const ExponentField& p);

/// factor * p(x); keeps the family (parameters are rescaled). Rejects
/// factor * p_minus <= 1.
ExponentField scale_exponent(const ExponentField& p, double factor);

/// The exponent p with 1/p = 1/q + 1/r pointwise.
ExponentField holder_exponent(const ExponentField& q, const ExponentField& r);

/// Target exponent of the Riesz potential: 1/q = 1/p - sigma/n.
/// Requires 0 < sigma < n / p_plus.
ExponentField riesz_target_exponent(const ExponentField& p, double sigma);

/// Target exponent for the mixed-space potential bound: rho = n p / (n - sigma * frak_p).
/// Requires 0 < sigma < min(n / p_plus, n / frak_p).
ExponentField mixed_riesz_target_exponent(const ExponentField& p, double sigma,
                                          double frak_p);

struct LogHolderReport {
  double c_local = 0.0;
  std::optional<double> c_decay;
  std::size_t pair_count = 0;
  bool flagged = false;  ///< c_local exceeded the configured threshold
};

/// Best constants of the two log-Hölder conditions over examined pairs.
///
/// All pairs are scanned when their count fits in `pair_budget`; otherwise a
/// seeded sample of `pair_budget` pairs is drawn. A larger budget with the same
/// seed examines a superset of pairs, so the constants are monotone in the
/// budget. c_decay scans every grid point and is absent without p_infinity.
LogHolderReport log_holder_constants(const ExponentField& p, std::size_t pair_budget,
                                     std::uint64_t seed, double flag_threshold = 50.0);

}  // namespace varns

#include "varns/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "varns/error.hpp"

namespace varns {

std::string to_string(ExponentFamily f) {
  switch (f) {
    case ExponentFamily::constant: return "constant";
    case ExponentFamily::radial_log: return "radial-log";
    case ExponentFamily::gaussian_bump: return "gaussian-bump";
    case ExponentFamily::sinusoidal: return "sinusoidal";
    case ExponentFamily::custom_samples: return "custom-samples";
  }
  return "custom-samples";
}

ExponentFamily exponent_family_from_string(const std::string& s) {
  if (s == "constant") return ExponentFamily::constant;
  if (s == "radial-log") return ExponentFamily::radial_log;
  if (s == "gaussian-bump") return ExponentFamily::gaussian_bump;
  if (s == "sinusoidal") return ExponentFamily::sinusoidal;
  if (s == "custom-samples") return ExponentFamily::custom_samples;
  throw Error(ErrorKind::invalid_argument, "unknown exponent family '" + s + "'");
}

namespace {

double param_or(std::span<const double> params, std::size_t i, double fallback) {
  return i < params.size() ? params[i] : fallback;
}

std::size_t required_params(ExponentFamily family) {
  switch (family) {
    case ExponentFamily::constant: return 1;
    case ExponentFamily::radial_log:
    case ExponentFamily::gaussian_bump:
    case ExponentFamily::sinusoidal: return 2;
    case ExponentFamily::custom_samples: return 0;
  }
  return 0;
}

}  // namespace

double evaluate_family(ExponentFamily family, std::span<const double> params,
                       const std::array<double, 3>& x, int dimension) {
  const double r = norm3(x);
  switch (family) {
    case ExponentFamily::constant:
      return params[0];
    case ExponentFamily::radial_log:
      return params[0] + params[1] / std::log(std::numbers::e + r);
    case ExponentFamily::gaussian_bump:
      return params[0] + params[1] * std::exp(-r * r);
    case ExponentFamily::sinusoidal: {
      const double w = param_or(params, 2, 1.0);
      const double m = param_or(params, 3, 1.0);
      double prod = 1.0;
      for (int d = 0; d < dimension; ++d) prod *= std::pow(std::sin(w * x[d]), m);
      return params[0] + params[1] * prod;
    }
    case ExponentFamily::custom_samples:
      break;
  }
  throw Error(ErrorKind::invalid_argument, "custom-samples has no closed form");
}

ExponentField::ExponentField(GridSpec grid, std::vector<double> samples,
                             std::optional<double> p_inf, ExponentFamily family,
                             std::vector<double> params)
    : grid_(grid),
      samples_(std::move(samples)),
      p_infinity_(p_inf),
      family_(family),
      params_(std::move(params)) {
  grid_.validate();
  require(!samples_.empty(), "exponent grid is empty");
  require(samples_.size() == grid_.size(), "exponent sample count does not match grid",
          ErrorKind::grid_mismatch);
  for (double s : samples_) require(std::isfinite(s), "exponent sample is not finite");
  const auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
  p_minus_ = *lo;
  p_plus_ = *hi;
  require(p_minus_ > 1.0, "exponent infimum must exceed 1 (got " +
                              std::to_string(p_minus_) + ")");
  if (p_infinity_)
    require(std::isfinite(*p_infinity_) && *p_infinity_ > 1.0,
            "limit exponent p_inf must be finite and exceed 1");
}

ExponentField make_exponent(ExponentFamily family, std::span<const double> params,
                            const GridSpec& grid) {
  require(family != ExponentFamily::custom_samples,
          "custom-samples exponents are built with exponent_from_samples");
  require(params.size() >= required_params(family),
          "too few parameters for exponent family " + to_string(family));
  for (double v : params) require(std::isfinite(v), "exponent parameters must be finite");
  grid.validate();

  std::optional<double> p_inf;
  switch (family) {
    case ExponentFamily::constant:
      p_inf = params[0];
      break;
    case ExponentFamily::radial_log:
      require(params[1] >= 0.0, "radial-log amplitude A must be >= 0");
      p_inf = params[0];
      break;
    case ExponentFamily::gaussian_bump:
      p_inf = params[0];
      break;
    case ExponentFamily::sinusoidal:
      break;
    case ExponentFamily::custom_samples:
      break;
  }
  if (p_inf) require(*p_inf > 1.0, "limit exponent must exceed 1");

  std::vector<double> samples(grid.size());
  for (std::size_t n = 0; n < samples.size(); ++n)
    samples[n] = evaluate_family(family, params, grid.point(n), grid.dimension);
  return ExponentField(grid, std::move(samples), p_inf, family,
                       std::vector<double>(params.begin(), params.end()));
}

ExponentField exponent_from_samples(const GridSpec& grid, std::vector<double> samples,
                                    std::optional<double> p_infinity) {
  return ExponentField(grid, std::move(samples), p_infinity,
                       ExponentFamily::custom_samples, {});
}

ExponentField conjugate_exponent(const ExponentField& p) {
  std::vector<double> s(p.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = p[i] / (p[i] - 1.0);
  std::optional<double> inf;
  if (p.p_infinity()) inf = *p.p_infinity() / (*p.p_infinity() - 1.0);
  return exponent_from_samples(p.grid(), std::move(s), inf);
}

ExponentField scale_exponent(const ExponentField& p, double factor) {
  require(std::isfinite(factor) && factor > 0.0, "scale factor must be positive");
  require(factor * p.p_minus() > 1.0,
          "scaled exponent infimum would be <= 1 (factor * p_minus = " +
              std::to_string(factor * p.p_minus()) + ")");
  if (p.family() != ExponentFamily::custom_samples) {
    std::vector<double> params(p.params().begin(), p.params().end());
    // Both the offset and amplitude scale; frequency/power do not.
    const std::size_t scaled = p.family() == ExponentFamily::constant ? 1 : 2;
    for (std::size_t i = 0; i < scaled; ++i) params[i] *= factor;
    return make_exponent(p.family(), params, p.grid());
  }
  std::vector<double> s(p.samples().begin(), p.samples().end());
  for (double& v : s) v *= factor;
  std::optional<double> inf;
  if (p.p_infinity()) inf = *p.p_infinity() * factor;
  return exponent_from_samples(p.grid(), std::move(s), inf);
}

ExponentField holder_exponent(const ExponentField& q, const ExponentField& r) {
  require(q.grid() == r.grid(), "exponent grids differ", ErrorKind::grid_mismatch);
  std::vector<double> s(q.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 / (1.0 / q[i] + 1.0 / r[i]);
  std::optional<double> inf;
  if (q.p_infinity() && r.p_infinity())
    inf = 1.0 / (1.0 / *q.p_infinity() + 1.0 / *r.p_infinity());
  return exponent_from_samples(q.grid(), std::move(s), inf);
}

ExponentField riesz_target_exponent(const ExponentField& p, double sigma) {
  const double n = p.grid().dimension;
  require(sigma > 0.0 && sigma < n / p.p_plus(), "need 0 < sigma < n / p_plus");
  std::vector<double> s(p.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 / (1.0 / p[i] - sigma / n);
  std::optional<double> inf;
  if (p.p_infinity() && 1.0 / *p.p_infinity() > sigma / n)
    inf = 1.0 / (1.0 / *p.p_infinity() - sigma / n);
  return exponent_from_samples(p.grid(), std::move(s), inf);
}

ExponentField mixed_riesz_target_exponent(const ExponentField& p, double sigma,
                                          double frak_p) {
  const double n = p.grid().dimension;
  require(frak_p > 1.0, "mixed index must exceed 1");
  require(sigma > 0.0 && sigma < std::min(n / p.p_plus(), n / frak_p),
          "need 0 < sigma < min(n / p_plus, n / frak_p)");
  const double scale = n / (n - sigma * frak_p);
  std::vector<double> s(p.samples().begin(), p.samples().end());
  for (double& v : s) v *= scale;
  std::optional<double> inf;
  if (p.p_infinity()) inf = *p.p_infinity() * scale;
  return exponent_from_samples(p.grid(), std::move(s), inf);
}

LogHolderReport log_holder_constants(const ExponentField& p, std::size_t pair_budget,
                                     std::uint64_t seed, double flag_threshold) {
  const GridSpec& g = p.grid();
  const std::size_t m = p.size();
  LogHolderReport rep;

  std::vector<std::array<double, 3>> pts(m);
  std::vector<double> inv(m);
  for (std::size_t i = 0; i < m; ++i) {
    pts[i] = g.point(i);
    inv[i] = 1.0 / p[i];
  }
  auto pair_term = [&](std::size_t i, std::size_t j) {
    const std::array<double, 3> d{pts[i][0] - pts[j][0], pts[i][1] - pts[j][1],
                                  pts[i][2] - pts[j][2]};
    const double dist = norm3(d);
    return std::abs(inv[i] - inv[j]) * std::log(std::numbers::e + 1.0 / dist);
  };

  const std::size_t all_pairs = m * (m - 1) / 2;
  if (all_pairs <= pair_budget) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        rep.c_local = std::max(rep.c_local, pair_term(i, j));
    rep.pair_count = all_pairs;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (std::size_t n = 0; n < pair_budget; ++n) {
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (j == i) j = (i + 1) % m;
      rep.c_local = std::max(rep.c_local, pair_term(i, j));
    }
    rep.pair_count = pair_budget;
  }

  if (p.p_infinity()) {
    const double inv_inf = 1.0 / *p.p_infinity();
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      c = std::max(c, std::abs(inv[i] - inv_inf) * std::log(std::numbers::e + norm3(pts[i])));
    rep.c_decay = c;
  }
  rep.flagged = rep.c_local > flag_threshold;
  return rep;
}

}  // namespace varns

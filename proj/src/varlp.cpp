#include "varns/varlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "varns/error.hpp"

namespace varns {

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::luxemburg: return "luxemburg";
    case NormKind::classical: return "classical";
    case NormKind::mixed: return "mixed";
  }
  return "luxemburg";
}

namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

void check_same_grid(const GridSpec& a, const GridSpec& b) {
  require(a == b, "field and exponent live on different grids", ErrorKind::grid_mismatch);
}

double zero_safe_ratio(double num, double den) {
  require(den > 0.0, "denominator norm is zero", ErrorKind::undefined_ratio);
  return num / den;
}

}  // namespace

double modular_scaled(std::span<const double> f, std::span<const double> p, double weight,
                      double lambda) {
  CompensatedSum acc;
  const double inv = 1.0 / lambda;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]) * inv;
    if (a == 0.0) continue;
    acc.add(std::pow(a, p[i]));
  }
  return acc.value() * weight;
}

double modular(const ScalarField& f, const ExponentField& p) {
  check_same_grid(f.grid(), p.grid());
  return modular_scaled(f.values(), p.samples(), f.grid().cell_weight(), 1.0);
}

double classical_norm(const ScalarField& f, double p) {
  require(p >= 1.0 && std::isfinite(p), "classical index must be in [1, inf)");
  CompensatedSum acc;
  for (double v : f.values())
    if (v != 0.0) acc.add(std::pow(std::abs(v), p));
  return std::pow(acc.value() * f.grid().cell_weight(), 1.0 / p);
}

NormValue luxemburg_norm(const ScalarField& f, const ExponentField& p, double tol) {
  check_same_grid(f.grid(), p.grid());
  require(tol > 0.0, "norm tolerance must be positive");
  if (f.is_zero()) return {0.0, NormKind::luxemburg, 0.0};

  const auto vals = f.values();
  const auto exps = p.samples();
  const double w = f.grid().cell_weight();
  auto rho = [&](double lambda) { return modular_scaled(vals, exps, w, lambda); };

  // Seed at the classical p_minus norm, computed on f / max|f| so that the
  // seed itself cannot overflow.
  const double peak = f.max_abs();
  ScalarField unit = f;
  unit *= 1.0 / peak;
  const double seed = peak * classical_norm(unit, p.p_minus());
  require(std::isfinite(seed) && seed > 0.0, "Luxemburg seed is not finite",
          ErrorKind::non_convergence);
  double lo = seed;
  double hi = seed;
  constexpr int kMaxExpand = 2100;
  int n = 0;
  if (rho(seed) > 1.0) {
    hi = 2.0 * seed;
    while (rho(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
      require(++n < kMaxExpand && std::isfinite(hi), "Luxemburg bracket did not close",
              ErrorKind::non_convergence);
    }
  } else {
    lo = 0.5 * seed;
    while (rho(lo) <= 1.0) {
      hi = lo;
      lo *= 0.5;
      require(++n < kMaxExpand && lo > 0.0, "Luxemburg bracket did not close",
              ErrorKind::non_convergence);
    }
  }
  // Invariant: rho(lo) > 1 >= rho(hi).
  constexpr int kMaxBisect = 400;
  for (int it = 0; 0.5 * (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (it >= kMaxBisect || mid <= lo || mid >= hi)
      throw Error(ErrorKind::non_convergence,
                  "Luxemburg bisection cannot reach tolerance " + std::to_string(tol) +
                      " at norm scale " + std::to_string(hi));
    if (rho(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return {0.5 * (lo + hi), NormKind::luxemburg, 0.5 * (hi - lo)};
}

NormValue mixed_norm(const ScalarField& f, const ExponentField& p, double frak_p,
                     double tol) {
  require(frak_p > 1.0 && std::isfinite(frak_p), "mixed index must be in (1, inf)");
  const NormValue lux = luxemburg_norm(f, p, tol);
  const double classical = classical_norm(f, frak_p);
  return {std::max(lux.value, classical), NormKind::mixed, lux.tolerance};
}

double relative_tolerance(const ScalarField& f, const ExponentField& p, double rel) {
  if (f.is_zero()) return rel;
  ScalarField unit = f;
  unit *= 1.0 / f.max_abs();
  const double scale = f.max_abs() * classical_norm(unit, p.p_minus());
  return rel * std::max(scale, 1e-300);
}

double holder_defect(const ScalarField& f, const ScalarField& g, const ExponentField& p,
                     const ExponentField& q, const ExponentField& r, double tol) {
  check_same_grid(f.grid(), g.grid());
  check_same_grid(f.grid(), p.grid());
  check_same_grid(q.grid(), p.grid());
  check_same_grid(r.grid(), p.grid());
  for (std::size_t i = 0; i < p.size(); ++i)
    require(std::abs(1.0 / p[i] - 1.0 / q[i] - 1.0 / r[i]) <= 1e-12,
            "exponents violate 1/p = 1/q + 1/r at grid point " + std::to_string(i));
  const double nf = luxemburg_norm(f, q, tol).value;
  const double ng = luxemburg_norm(g, r, tol).value;
  const double nfg = luxemburg_norm(product(f, g), p, tol).value;
  return zero_safe_ratio(nfg, nf * ng);
}

double conjugate_pairing_lower_bound(const ScalarField& f, const ExponentField& p,
                                     int candidates, std::uint64_t seed) {
  check_same_grid(f.grid(), p.grid());
  require(!f.is_zero(), "duality estimate needs a non-zero function",
          ErrorKind::undefined_ratio);
  const GridSpec& grid = f.grid();
  const ExponentField pc = conjugate_exponent(p);
  const double w = grid.cell_weight();
  const double fnorm = luxemburg_norm(f, p, relative_tolerance(f, p, 1e-13)).value;

  double best = 0.0;
  auto consider = [&](std::vector<double> g) {
    ScalarField gf(grid, std::move(g));
    if (gf.is_zero()) return;
    const double gn = luxemburg_norm(gf, pc, relative_tolerance(gf, pc, 1e-13)).value;
    CompensatedSum acc;
    for (std::size_t i = 0; i < gf.size(); ++i) acc.add(std::abs(f[i]) * gf[i]);
    best = std::max(best, acc.value() * w / gn);
  };

  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(std::abs(f[i]), p[i] - 1.0);
  consider(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = std::pow(std::abs(f[i]) / fnorm, p[i] - 1.0);
  consider(g);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(0.5, 1.5), phase(0.0, 6.283185307179586),
      freq(0.2, 2.0);
  for (int c = 0; c < candidates; ++c) {
    const double alpha = expo(rng);
    const double omega = freq(rng);
    const double phi = phase(rng);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto x = grid.point(i);
      const double mod = 1.0 + 0.5 * std::sin(omega * (x[0] + x[1] + x[2]) + phi);
      g[i] = std::pow(std::abs(f[i]) / fnorm, alpha * (p[i] - 1.0)) * mod;
      if (f[i] == 0.0) g[i] = 0.0;
    }
    consider(g);
  }
  return best;
}

NormValue unit_function_norm(double T, const ExponentField& p, double tol) {
  const GridSpec& g = p.grid();
  require(T > 0.0, "interval length T must be positive");
  require(g.dimension == 1 && g.topology == Topology::truncated,
          "unit-function norm needs a truncated 1D grid");
  require(std::abs(g.origin[0]) <= 1e-12 * T && std::abs(g.extents[0] - T) <= 1e-12 * T,
          "exponent grid does not cover [0, T]", ErrorKind::grid_mismatch);
  ScalarField one(g, std::vector<double>(g.size(), 1.0));
  return luxemburg_norm(one, p, tol);
}

double embedding_defect(const ScalarField& f, const ExponentField& p1,
                        const ExponentField& p2, double tol) {
  check_same_grid(f.grid(), p1.grid());
  check_same_grid(f.grid(), p2.grid());
  require(f.grid().topology == Topology::truncated,
          "embedding estimate needs a bounded (truncated) domain");
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (p1[i] > p2[i]) {
      const auto x = f.grid().point(i);
      throw Error(ErrorKind::invalid_argument,
                  "p1 > p2 at grid point " + std::to_string(i) + " (x = " +
                      std::to_string(x[0]) + ", p1 = " + std::to_string(p1[i]) +
                      ", p2 = " + std::to_string(p2[i]) + ")");
    }
  }
  const double n1 = luxemburg_norm(f, p1, tol).value;
  const double n2 = luxemburg_norm(f, p2, tol).value;
  return zero_safe_ratio(n1, n2);
}

}  // namespace varns

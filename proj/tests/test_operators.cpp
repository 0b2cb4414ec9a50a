#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_support.hpp"
#include "varns/error.hpp"
#include "varns/operators.hpp"

using namespace varns;
using varns::testing::field_rel_diff;
using varns::testing::random_band_limited;
using varns::testing::random_band_limited_vector;
using varns::testing::rel_diff;

namespace {

constexpr double pi = std::numbers::pi;

GridSpec periodic_line(std::size_t n) { return GridSpec::line(0.0, 2.0 * pi, n, Topology::periodic); }

}  // namespace

TEST_CASE("spectral round trip and layout") {
  std::mt19937_64 rng(1);
  for (GridSpec g : {GridSpec::torus(16, 2.0 * pi), periodic_line(64),
                     GridSpec::torus(12, 3.0)}) {
    SpectralWorkspace ws(g);
    auto f = varns::testing::random_bumps(g, rng);
    const auto back = ws.inverse(ws.forward(f.values()));
    CHECK(field_rel_diff(back, f.values()) < 1e-12);
  }
  CHECK_THROWS_AS(SpectralWorkspace(GridSpec::box(0.0, 1.0, 8)), Error);

  // Parseval with multiplicities: sum |f|^2 = sum w |fhat|^2 / N.
  GridSpec g = GridSpec::torus(10, 2.0 * pi);
  SpectralWorkspace ws(g);
  auto f = varns::testing::random_bumps(g, rng);
  const auto hat = ws.forward(f.values());
  double physical = 0.0, spectral = 0.0;
  for (double v : f.values()) physical += v * v;
  for (std::size_t m = 0; m < hat.size(); ++m) spectral += ws.multiplicity(m) * std::norm(hat[m]);
  CHECK(rel_diff(spectral / static_cast<double>(g.size()), physical) < 1e-12);
}

TEST_CASE("riesz transform") {
  const GridSpec g = GridSpec::torus(16, 2.0 * pi);
  SpectralWorkspace ws(g);

  SUBCASE("plane wave along the first axis") {
    auto f = ScalarField::from_function(g, [](auto x) { return std::cos(x[0]); });
    auto r = riesz_transform(0, f, ws);
    auto expect = ScalarField::from_function(g, [](auto x) { return std::sin(x[0]); });
    CHECK(field_rel_diff(r.values(), expect.values()) < 1e-12);
    // orthogonal axes see no k_j component
    CHECK(riesz_transform(1, f, ws).max_abs() < 1e-13);
  }

  SUBCASE("sum of squares is minus the mean-free part") {
    const GridSpec big = GridSpec::torus(32, 2.0 * pi);
    SpectralWorkspace wb(big);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 3; ++trial) {
      auto f = random_band_limited(wb, rng, 10);
      double mean = 0.0;
      for (double v : f.values()) mean += v;
      mean /= static_cast<double>(f.size());
      ScalarField sum(big);
      for (int j = 0; j < 3; ++j) sum += riesz_transform(j, riesz_transform(j, f, wb), wb);
      ScalarField expect = f;
      for (double& v : expect.values()) v = mean - v;
      CHECK(field_rel_diff(sum.values(), expect.values()) < 1e-12);
    }
  }

  SUBCASE("refinement on a smooth non-band-limited field") {
    auto make = [](const GridSpec& grid) {
      return ScalarField::from_function(grid, [](auto x) {
        return std::exp(std::sin(x[0]) + 0.5 * std::cos(x[1] - x[2]));
      });
    };
    const GridSpec fine = GridSpec::torus(32, 2.0 * pi);
    SpectralWorkspace wf(fine);
    for (int j = 0; j < 3; ++j) {
      auto coarse_r = riesz_transform(j, make(g), ws);
      auto fine_r = restrict_periodic(riesz_transform(j, make(fine), wf), 2);
      CHECK(field_rel_diff(coarse_r.values(), fine_r.values()) < 1e-3);
    }
  }

  SUBCASE("rejections") {
    CHECK_THROWS_AS(riesz_transform(3, ScalarField(g), ws), Error);
    SpectralWorkspace other(GridSpec::torus(8, 2.0 * pi));
    CHECK_THROWS_AS(riesz_transform(0, ScalarField(g), other), Error);
  }
}

TEST_CASE("leray projection") {
  const GridSpec g = GridSpec::torus(32, 2.0 * pi);
  SpectralWorkspace ws(g);
  std::mt19937_64 rng(11);

  SUBCASE("annihilates gradients") {
    auto phi = ScalarField::from_function(
        g, [](auto x) { return std::sin(x[0] + 2.0 * x[1]) + std::cos(3.0 * x[2]); });
    auto p = leray_project(gradient(phi, ws), ws);
    CHECK(p.max_abs() < 1e-12);
  }

  SUBCASE("keeps divergence-free fields") {
    auto v = VectorField(ScalarField(g), ScalarField::from_function(g, [](auto x) {
                           return std::cos(x[0]);
                         }),
                         ScalarField::from_function(g, [](auto x) { return std::sin(x[0]); }));
    CHECK(field_rel_diff(leray_project(v, ws), v) < 1e-12);
  }

  SUBCASE("idempotent and divergence-free on random fields") {
    for (int trial = 0; trial < 3; ++trial) {
      auto v = random_band_limited_vector(ws, rng, 12);
      auto p = leray_project(v, ws);
      auto pp = leray_project(p, ws);
      CHECK(field_rel_diff(pp, p) < 1e-12);
      CHECK(divergence_ratio(p, ws) < 1e-12);
      CHECK(divergence_ratio(v, ws) > 0.1);
    }
  }

  SUBCASE("zero mode unchanged") {
    VectorField v(g);
    for (double& x : v.component(1)) x = 2.5;
    CHECK(field_rel_diff(leray_project(v, ws), v) < 1e-14);
    CHECK(divergence_ratio(v, ws) == 0.0);
  }
}

TEST_CASE("heat convolution") {
  const GridSpec g = GridSpec::torus(32, 2.0 * pi);
  SpectralWorkspace ws(g);
  std::mt19937_64 rng(5);

  auto c = ScalarField::from_function(g, [](auto) { return -1.75; });
  CHECK(field_rel_diff(heat_convolve(c, 3.0, ws).values(), c.values()) < 1e-14);

  // |k|^2 = 4, t = 1/4: amplitude e^{-1}
  auto wave = ScalarField::from_function(g, [](auto x) { return std::cos(2.0 * x[1]); });
  auto decayed = heat_convolve(wave, 0.25, ws);
  auto expect = std::exp(-1.0) * wave;
  CHECK(field_rel_diff(decayed.values(), expect.values()) < 1e-12);
  CHECK(std::abs(decayed.max_abs() - 0.36787944117144233) < 1e-12);

  auto f = random_band_limited(ws, rng, 15);
  CHECK(field_rel_diff(heat_convolve(f, 0.0, ws).values(), f.values()) < 1e-15);
  auto two_step = heat_convolve(heat_convolve(f, 0.1, ws), 0.2, ws);
  auto one_step = heat_convolve(f, 0.3, ws);
  CHECK(field_rel_diff(two_step.values(), one_step.values()) < 1e-12);

  auto v = random_band_limited_vector(ws, rng, 8);
  auto hv = heat_convolve(v, 0.05, ws);
  auto hx = heat_convolve(v.component_field(0), 0.05, ws);
  CHECK(field_rel_diff(hv.component_field(0).values(), hx.values()) < 1e-14);

  CHECK_THROWS_AS(heat_convolve(f, -0.1, ws), Error);
}

TEST_CASE("duhamel quadrature") {
  const GridSpec g = GridSpec::torus(16, 2.0 * pi);
  SpectralWorkspace ws(g);

  SUBCASE("zero force") {
    TimeGrid tg(1.0, 8);
    SpaceTimeField zero(tg, g);
    auto d = duhamel_force(zero, tg, ws);
    for (const auto& fr : d.frames()) CHECK(fr.max_abs() == 0.0);
  }

  SUBCASE("constant-in-time single mode against the closed form") {
    TimeGrid tg(1.0, 256);
    auto mode = ScalarField::from_function(g, [](auto x) { return std::cos(2.0 * x[0]); });
    VectorField fv(mode, ScalarField(g), ScalarField(g));
    SpaceTimeField force(tg, std::vector<VectorField>(tg.node_count(), fv));
    auto d = duhamel_force(force, tg, ws);
    double worst = 0.0;
    for (std::size_t i = 0; i < tg.node_count(); ++i) {
      const double t = tg.node(i);
      const double amp = (1.0 - std::exp(-4.0 * t)) / 4.0;
      for (std::size_t n = 0; n < g.size(); ++n)
        worst = std::max(worst, std::abs(d.frame(i).component(0)[n] - amp * mode[n]));
    }
    CHECK(worst <= 1e-4);
    CHECK(worst > 0.0);
  }

  SUBCASE("recursion equals the direct trapezoid sum, and linearity") {
    std::mt19937_64 rng(17);
    TimeGrid tg(0.7, 12);
    auto build = [&] {
      std::vector<VectorField> frames;
      for (std::size_t i = 0; i < tg.node_count(); ++i)
        frames.push_back(random_band_limited_vector(ws, rng, 5));
      return SpaceTimeField(tg, std::move(frames));
    };
    auto f1 = build(), f2 = build();
    auto fast = duhamel_force(f1, tg, ws);
    auto slow = duhamel_force_direct(f1, tg, ws);
    CHECK(fast.frame(0).max_abs() == 0.0);
    for (std::size_t i = 1; i < tg.node_count(); ++i)
      CHECK(field_rel_diff(fast.frame(i), slow.frame(i)) < 1e-12);

    auto sum = duhamel_force(f1 + f2, tg, ws);
    auto parts = fast + duhamel_force(f2, tg, ws);
    for (std::size_t i = 1; i < tg.node_count(); ++i)
      CHECK(field_rel_diff(sum.frame(i), parts.frame(i)) < 1e-12);
  }

  SUBCASE("mismatched time grid") {
    TimeGrid tg(1.0, 4);
    SpaceTimeField f(TimeGrid(1.0, 5), g);
    CHECK_THROWS_AS(duhamel_force(f, tg, ws), Error);
  }
}

TEST_CASE("maximal function") {
  SUBCASE("constant field") {
    for (GridSpec g : {GridSpec::line(-3.0, 3.0, 101), GridSpec::box(-1.0, 1.0, 12),
                       GridSpec::torus(10, 2.0 * pi)}) {
      auto c = ScalarField::from_function(g, [](auto) { return -2.0; });
      auto m = maximal_function(c, default_radius_ladder(g));
      for (double v : m.values()) CHECK(std::abs(v - 2.0) < 1e-12);
    }
  }

  SUBCASE("indicator of a ball at its centre") {
    // 31 cells: the centre 0 is a cell centre
    const GridSpec g = GridSpec::box(-1.55, 1.55, 31);
    auto ind = ScalarField::from_function(g, [](auto x) { return norm3(x) <= 0.8 ? 1.0 : 0.0; });
    std::vector<double> radii{0.05, 0.2, 0.45, 0.8};
    auto m = maximal_function(ind, radii);
    CHECK(std::abs(m[g.flatten(15, 15, 15)] - 1.0) < 1e-14);
  }

  SUBCASE("brute-force oracle at random points") {
    std::mt19937_64 rng(23);
    for (GridSpec g : {GridSpec::line(-4.0, 4.0, 400), GridSpec::box(-3.0, 3.0, 24),
                       GridSpec::torus(20, 2.0 * pi), periodic_line(300)}) {
      auto f = ScalarField::from_function(g, [](auto x) {
        return std::exp(-(x[0] - 0.3) * (x[0] - 0.3) - 0.5 * x[1] * x[1] - x[2] * x[2]) - 0.1;
      });
      const auto radii = default_radius_ladder(g, 16);
      auto m = maximal_function(f, radii);
      std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
      for (int probe = 0; probe < 20; ++probe) {
        const std::size_t n = pick(rng);
        double brute = 0.0;
        for (double r : radii) brute = std::max(brute, ball_average(f, g.point(n), r));
        CHECK(std::abs(m[n] - brute) <= 1e-10 * std::max(1.0, brute));
      }
    }
  }

  SUBCASE("large single balls against brute force") {
    std::mt19937_64 rng(31);
    for (GridSpec g : {GridSpec::box(-3.0, 3.0, 18), GridSpec::torus(16, 2.0 * pi)}) {
      auto f = varns::testing::random_bumps(g, rng);
      std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
      for (double r : {0.9, 1.7, 2.9}) {
        const std::vector<double> one{r};
        auto m = maximal_function(f, one);
        for (int probe = 0; probe < 25; ++probe) {
          const std::size_t n = pick(rng);
          const double brute = ball_average(f, g.point(n), r);
          CHECK(std::abs(m[n] - brute) <= 1e-12 * brute);
        }
      }
    }
  }

  SUBCASE("pointwise domination and sublinearity") {
    std::mt19937_64 rng(29);
    const GridSpec g = GridSpec::line(-5.0, 5.0, 500);
    const auto radii = default_radius_ladder(g);
    for (int trial = 0; trial < 5; ++trial) {
      auto f = varns::testing::random_bumps(g, rng);
      auto h = varns::testing::random_bumps(g, rng);
      auto mf = maximal_function(f, radii);
      auto mh = maximal_function(h, radii);
      auto msum = maximal_function(f + h, radii);
      for (std::size_t n = 0; n < g.size(); ++n) {
        CHECK(mf[n] >= std::abs(f[n]) * (1.0 - 1e-14));
        CHECK(msum[n] <= (mf[n] + mh[n]) * (1.0 + 1e-12));
      }
    }
  }

  SUBCASE("radius validation") {
    const GridSpec g = GridSpec::line(0.0, 1.0, 10);
    ScalarField f(g);
    CHECK_THROWS_AS(maximal_function(f, std::vector<double>{}), Error);
    CHECK_THROWS_AS(maximal_function(f, std::vector<double>{0.6}), Error);
    CHECK_THROWS_AS(maximal_function(f, std::vector<double>{-0.1}), Error);
  }
}

TEST_CASE("lattice zeta") {
  for (double sigma : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const double h = 1.0;
    CHECK(rel_diff(lattice_zeta(1.0 - sigma, std::span<const double>(&h, 1), 1),
                   2.0 * std::riemann_zeta(1.0 - sigma)) < 1e-12);
  }
  // Convergent region: compare with a direct sum (anisotropic spacing)
  const std::array<double, 3> h{1.0, 2.0, 0.7};
  double direct = 0.0;
  const long R = 60;
  for (long i = -R; i <= R; ++i)
    for (long j = -R; j <= R; ++j)
      for (long k = -R; k <= R; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        const double r2 = std::pow(i * h[0], 2) + std::pow(j * h[1], 2) + std::pow(k * h[2], 2);
        direct += std::pow(r2, -4.0);
      }
  CHECK(rel_diff(lattice_zeta(8.0, h, 3), direct) < 1e-10);

  // Known value of the continued cubic-lattice sum at s = 2.
  const std::array<double, 3> unit{1.0, 1.0, 1.0};
  CHECK(std::abs(lattice_zeta(2.0, unit, 3) + 8.91363291758515) < 1e-10);
  // Homogeneity in the spacing.
  const std::array<double, 3> half{0.5, 0.5, 0.5};
  CHECK(rel_diff(lattice_zeta(2.0, half, 3), 4.0 * lattice_zeta(2.0, unit, 3)) < 1e-12);
  CHECK_THROWS_AS(lattice_zeta(3.0, unit, 3), Error);
}

TEST_CASE("riesz potential") {
  SUBCASE("zero field") {
    const GridSpec g = GridSpec::line(0.0, 4.0, 64);
    CHECK(riesz_potential_direct(ScalarField(g), 0.5).is_zero());
    CHECK(riesz_potential_1d(ScalarField(g), 0.5).is_zero());
  }

  SUBCASE("indicator closed form in 1D") {
    const GridSpec g = GridSpec::line(0.0, 4.0, 8192);
    auto ind = ScalarField::from_function(g, [](auto x) { return x[0] < 1.0 ? 1.0 : 0.0; });
    const double exact = 2.0 * (std::sqrt(2.0) - 1.0);
    CHECK(std::abs(riesz_potential_at(ind, 0.5, {2.0, 0.0, 0.0}) - exact) <= 1e-4);
    CHECK(std::abs(exact - 0.828427) < 1e-6);
    // On the grid, compare with the antiderivative at each cell centre beyond 1.5.
    auto pot = riesz_potential_1d(ind, 0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = g.coordinate(0, i);
      if (s < 1.5) continue;
      worst = std::max(worst, std::abs(pot[i] - 2.0 * (std::sqrt(s) - std::sqrt(s - 1.0))));
    }
    CHECK(worst <= 1e-4);
  }

  SUBCASE("grid output equals point evaluation") {
    std::mt19937_64 rng(31);
    const GridSpec line = GridSpec::line(-3.0, 3.0, 150);
    auto f = varns::testing::random_bumps(line, rng);
    auto pot = riesz_potential_direct(f, 0.4);
    for (std::size_t i = 0; i < line.size(); ++i)
      CHECK(rel_diff(pot[i], riesz_potential_at(f, 0.4, line.point(i))) < 1e-12);

    const GridSpec box = GridSpec::box(-3.0, 3.0, 12);
    auto f3 = varns::testing::random_bumps(box, rng);
    auto pot3 = riesz_potential_direct(f3, 1.0, DiagonalRule::cell_analytic);
    std::uniform_int_distribution<std::size_t> pick(0, box.size() - 1);
    for (int probe = 0; probe < 20; ++probe) {
      const std::size_t n = pick(rng);
      CHECK(rel_diff(pot3[n], riesz_potential_at(f3, 1.0, box.point(n),
                                                 DiagonalRule::cell_analytic)) < 1e-12);
    }
  }

  SUBCASE("homogeneity and monotonicity") {
    std::mt19937_64 rng(37);
    const GridSpec g = GridSpec::line(-4.0, 4.0, 256);
    auto f = varns::testing::random_bumps(g, rng);
    auto base = riesz_potential_direct(f, 0.3);
    auto scaled = riesz_potential_direct(-4.0 * f, 0.3);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(scaled[i] == 4.0 * base[i]);
    auto odd = riesz_potential_direct(3.7 * f, 0.3);
    CHECK(field_rel_diff(odd.values(), (3.7 * base).values()) < 1e-13);

    ScalarField smaller = f;
    for (std::size_t i = 0; i < g.size(); ++i)
      smaller[i] *= 0.5 * (1.0 + std::sin(3.0 * g.coordinate(0, i)));
    auto ps = riesz_potential_1d(smaller, 0.3);
    auto pb = riesz_potential_1d(f, 0.3);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(ps[i] <= pb[i] * (1.0 + 1e-12));
    for (double v : base.values()) CHECK(v > 0.0);
  }

  SUBCASE("centre value of a 3D gaussian") {
    // I_1 of exp(-|x|^2/2) at the origin is 4 pi sqrt(pi/2).
    const double exact = 4.0 * pi * std::sqrt(pi / 2.0);
    const GridSpec g = GridSpec::box(-6.0, 6.0, 33);
    auto f = ScalarField::from_function(g, [](auto x) { return std::exp(-0.5 * norm3(x) * norm3(x)); });
    const std::array<double, 3> origin{0.0, 0.0, 0.0};
    const double corrected = riesz_potential_at(f, 1.0, origin);
    const double analytic = riesz_potential_at(f, 1.0, origin, DiagonalRule::cell_analytic);
    CHECK(rel_diff(corrected, exact) < 3e-3);
    CHECK(rel_diff(analytic, exact) > 1e-2);
    CHECK(rel_diff(corrected, riesz_potential_direct(f, 1.0)[g.flatten(16, 16, 16)]) < 1e-12);
  }

  SUBCASE("nested refinement shares cell centres") {
    const GridSpec g = GridSpec::box(-2.0, 2.0, 6);
    const GridSpec fine = g.nested_refinement();
    CHECK(fine.resolution[0] == 13);
    CHECK(std::abs(fine.spacing(0) - 0.5 * g.spacing(0)) < 1e-15);
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(std::abs(fine.coordinate(1, 2 * i + 1) - g.coordinate(1, i)) < 1e-14);
  }

  SUBCASE("argument checks") {
    const GridSpec g = GridSpec::line(0.0, 1.0, 16);
    ScalarField f(g);
    CHECK_THROWS_AS(riesz_potential_direct(f, 0.0), Error);
    CHECK_THROWS_AS(riesz_potential_direct(f, 1.0), Error);
    CHECK_THROWS_AS(riesz_potential_1d(ScalarField(GridSpec::box(0, 1, 4)), 0.5), Error);
    CHECK_THROWS_AS(riesz_potential_direct(ScalarField(periodic_line(8)), 0.5), Error);
  }
}

TEST_CASE("heat kernel gradient defect") {
  CHECK(grad_heat_kernel_defect(0.7, {0.0, 0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(grad_heat_kernel_defect(0.0, {1.0, 0.0, 0.0}), Error);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> logu(-3.0, 1.0), dir(-1.0, 1.0), lam(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = std::pow(10.0, logu(rng));
    const std::array<double, 3> x{dir(rng), dir(rng), dir(rng)};
    const double l = std::pow(10.0, lam(rng));
    const std::array<double, 3> lx{l * x[0], l * x[1], l * x[2]};
    CHECK(rel_diff(grad_heat_kernel_defect(l * l * t, lx), grad_heat_kernel_defect(t, x)) <
          1e-10);
  }

  auto sweep = [](int n) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double t = std::pow(10.0, -3.0 + 4.0 * i / (n - 1));
        const double r = std::pow(10.0, -3.0 + 4.0 * j / (n - 1));
        worst = std::max(worst, grad_heat_kernel_defect(t, {r, 0.0, 0.0}));
      }
    return worst;
  };
  const double coarse = sweep(60), fine = sweep(120);
  CHECK(std::isfinite(fine));
  CHECK(rel_diff(coarse, fine) < 0.05);
  // The defect depends on |x| / sqrt(t) only; its supremum over that ratio.
  double sup = 0.0;
  for (int k = 1; k < 200000; ++k) sup = std::max(sup, grad_heat_kernel_defect(1.0, {k * 1e-4, 0.0, 0.0}));
  CHECK(fine <= sup * (1.0 + 1e-12));
  CHECK(rel_diff(fine, sup) < 0.05);
}

TEST_CASE("radial majorant") {
  std::mt19937_64 rng(43);
  const GridSpec g = periodic_line(256);
  auto ball = ScalarField::from_function(g, [](auto x) {
    const double d = std::min(x[0], 2.0 * pi - x[0]);
    return d <= 0.5 ? 1.0 : 0.0;
  });

  SUBCASE("normalised ball indicator") {
    for (int trial = 0; trial < 5; ++trial) {
      auto f = varns::testing::random_bumps(GridSpec::line(0.0, 2.0 * pi, 256), rng);
      ScalarField fp(g, {f.values().begin(), f.values().end()});
      CHECK(radial_majorant_defect(ball, fp) <= 1.05);
    }
  }

  SUBCASE("constant input gives exactly one") {
    auto c = ScalarField::from_function(g, [](auto) { return 3.0; });
    CHECK(std::abs(radial_majorant_defect(ball, c) - 1.0) < 1e-12);
  }

  SUBCASE("gaussian phi across resolutions") {
    for (std::size_t n : {128u, 256u, 512u}) {
      const GridSpec gn = periodic_line(n);
      auto phi = ScalarField::from_function(gn, [](auto x) {
        const double d = std::min(x[0], 2.0 * pi - x[0]);
        return std::exp(-4.0 * d * d);
      });
      for (int trial = 0; trial < 4; ++trial) {
        auto f = varns::testing::random_bumps(GridSpec::line(0.0, 2.0 * pi, n), rng);
        ScalarField fp(gn, {f.values().begin(), f.values().end()});
        CHECK(radial_majorant_defect(phi, fp) <= 1.05);
      }
    }
  }

  SUBCASE("rejects non-radial phi") {
    auto bad = ScalarField::from_function(g, [](auto x) { return x[0]; });
    CHECK_FALSE(is_radially_nonincreasing(bad));
    CHECK_THROWS_AS(radial_majorant_defect(bad, ball), Error);
    CHECK(is_radially_nonincreasing(ball));
  }
}

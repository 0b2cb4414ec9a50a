#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

#include "test_support.hpp"
#include "varns/error.hpp"
#include "varns/field_io.hpp"
#include "varns/mild_solver.hpp"

using namespace varns;
using varns::testing::field_rel_diff;
using varns::testing::rel_diff;

namespace {

constexpr double pi = std::numbers::pi;

SolverConfig small_config(Regime regime = Regime::thm1) {
  SolverConfig cfg;
  cfg.regime = regime;
  cfg.resolution = 16;
  cfg.steps = 16;
  cfg.T = 1.0;
  cfg.u0.kind = InitialKind::taylor_green;
  cfg.u0.amplitude = 0.05;
  cfg.cb_trials = 2;
  if (regime == Regime::thm2) {
    cfg.exponent = {ExponentFamily::sinusoidal, {3.0, 1.0, 1.0, 2.0}};
    cfg.q = 10.0;
  }
  return cfg;
}

double max_abs(const SpaceTimeField& u) {
  double m = 0.0;
  for (const auto& f : u.frames()) m = std::max(m, f.max_abs());
  return m;
}

SpaceTimeField constant_in_time(const VectorField& w, const TimeGrid& tg) {
  return SpaceTimeField(tg, std::vector<VectorField>(tg.node_count(), w));
}

}  // namespace

TEST_CASE("initial term") {
  const SolverConfig cfg = small_config();
  const GridSpec g = cfg.grid();
  const TimeGrid tg = cfg.time_grid();
  SpectralWorkspace ws(g);

  SUBCASE("zero data") {
    const auto e0 = initial_term(VectorField(g), std::monostate{}, tg, ws);
    CHECK(e0.frame_count() == tg.node_count());
    CHECK(max_abs(e0) == 0.0);
  }
  SUBCASE("heat eigen-decay of a Taylor-Green mode") {
    const VectorField u0 = taylor_green(g, 1.0);
    const auto e0 = initial_term(u0, std::monostate{}, tg, ws);
    for (std::size_t i = 0; i < tg.node_count(); ++i) {
      const VectorField expect = std::exp(-3.0 * tg.node(i)) * u0;
      CHECK(field_rel_diff(e0.frame(i), expect) <= 1e-12);
    }
  }
  SUBCASE("constant tensor potential contributes nothing") {
    ForceSpec f{ForceKind::constant, 2.5};
    const auto force = force_input(f, Regime::thm1, g, tg);
    REQUIRE(std::holds_alternative<TensorField>(force));
    CHECK(projected_divergence(std::get<TensorField>(force), ws).max_abs() == 0.0);
    const auto e0 = initial_term(VectorField(g), force, tg, ws);
    CHECK(max_abs(e0) <= 1e-14);
  }
  SUBCASE("shear potential drives a divergence-free force") {
    const auto force = force_input({ForceKind::shear, 1.0}, Regime::thm1, g, tg);
    const VectorField f = projected_divergence(std::get<TensorField>(force), ws);
    // div F = (-sin y, 0, 0) for F_01 = F_10 = cos y
    for (std::size_t n = 0; n < g.size(); ++n) {
      CHECK(f.component(0)[n] == doctest::Approx(-std::sin(g.point(n)[1])).epsilon(1e-12));
      CHECK(std::abs(f.component(2)[n]) <= 1e-13);
    }
    const auto e0 = initial_term(VectorField(g), force, tg, ws);
    CHECK(max_abs(e0) > 0.0);
    for (const auto& fr : e0.frames()) CHECK(divergence_ratio(fr, ws) <= 1e-10);
  }
  SUBCASE("grid mismatch") {
    CHECK_THROWS_AS(initial_term(VectorField(GridSpec::torus(8, 2 * pi)), std::monostate{}, tg, ws),
                    Error);
  }
}

TEST_CASE("bilinear term") {
  const TimeGrid tg(1.0, 16);
  const GridSpec g = GridSpec::torus(16, 2 * pi);
  SpectralWorkspace ws(g);

  SUBCASE("zero") {
    CHECK(max_abs(bilinear_term(SpaceTimeField(tg, g), ws)) == 0.0);
  }
  SUBCASE("spatially constant field") {
    VectorField w(g);
    for (int c = 0; c < 3; ++c)
      std::fill(w.component(c).begin(), w.component(c).end(), 0.3 * (c + 1));
    CHECK(max_abs(bilinear_term(constant_in_time(w, tg), ws)) <= 1e-14);
  }
  SUBCASE("divergence-free output") {
    std::mt19937_64 rng(5);
    std::vector<VectorField> frames;
    for (std::size_t i = 0; i < tg.node_count(); ++i)
      frames.push_back(varns::testing::random_band_limited_vector(ws, rng, 3));
    const auto b = bilinear_term(SpaceTimeField(tg, std::move(frames)), ws);
    CHECK(max_abs(b) > 0.0);
    for (const auto& f : b.frames()) CHECK(divergence_ratio(f, ws) <= 1e-10);
  }
  SUBCASE("refinement of a heat-evolved Taylor-Green field") {
    SolverConfig cfg = small_config();
    const auto p = cfg.exponent_field();
    auto run = [&](std::size_t n, std::size_t steps) {
      const GridSpec gg = GridSpec::torus(n, 2 * pi);
      const TimeGrid tt(1.0, steps);
      SpectralWorkspace w(gg);
      const auto u = initial_term(taylor_green(gg, 1.0), std::monostate{}, tt, w);
      return bilinear_term(u, w);
    };
    const auto coarse = run(16, 32);
    const auto fine = restrict_periodic(run(32, 64), 2, 2);
    const double ref = norm_E_thm1(fine, p).value;
    const double err = norm_E_thm1(coarse - fine, p).value;
    MESSAGE("B refinement error " << err / ref);
    CHECK(err <= 1e-3 * ref);
  }
}

TEST_CASE("thm1 norm") {
  const SolverConfig cfg = small_config();
  const GridSpec g = cfg.grid();
  const TimeGrid tg = cfg.time_grid();
  const auto p = cfg.exponent_field();
  SpectralWorkspace ws(g);
  std::mt19937_64 rng(11);
  const VectorField w = varns::testing::random_band_limited_vector(ws, rng, 3);

  SUBCASE("time-independent field") {
    const double expect = mixed_norm(w.magnitude(), p, 3.0, 1e-12).value;
    CHECK(norm_E_thm1(constant_in_time(w, tg), p, 3.0, 1e-12).value ==
          doctest::Approx(expect).epsilon(1e-10));
  }
  SUBCASE("separable field with max |a| = 1") {
    std::vector<VectorField> frames;
    for (std::size_t i = 0; i < tg.node_count(); ++i)
      frames.push_back(std::cos(2.0 * pi * tg.node(i)) * w);
    const double expect = mixed_norm(w.magnitude(), p, 3.0, 1e-12).value;
    CHECK(norm_E_thm1(SpaceTimeField(tg, frames), p, 3.0, 1e-12).value ==
          doctest::Approx(expect).epsilon(1e-10));
  }
  SUBCASE("time order does not matter") {
    std::vector<VectorField> frames;
    for (std::size_t i = 0; i < tg.node_count(); ++i)
      frames.push_back(varns::testing::random_band_limited_vector(ws, rng, 2));
    const double a = norm_E_thm1(SpaceTimeField(tg, frames), p).value;
    std::shuffle(frames.begin(), frames.end(), rng);
    CHECK(norm_E_thm1(SpaceTimeField(tg, frames), p).value == a);
  }
  SUBCASE("homogeneity and domination") {
    const auto u = constant_in_time(w, tg);
    const double a = norm_E_thm1(u, p, 3.0, 1e-12).value;
    CHECK(norm_E_thm1(-2.5 * u, p, 3.0, 1e-12).value ==
          doctest::Approx(2.5 * a).epsilon(1e-10));
    std::vector<VectorField> frames(u.frames());
    frames[3] = 1.5 * frames[3];
    CHECK(norm_E_thm1(SpaceTimeField(tg, frames), p, 3.0, 1e-12).value >= a);
  }
  SUBCASE("streaming accumulator agrees") {
    const auto u = constant_in_time(w, tg);
    const RegimeNorm norm(Regime::thm1, p, 10.0, 3.0, 1e-12);
    auto acc = norm.accumulator();
    for (const auto& f : u.frames()) acc.push(f);
    CHECK(acc.finish().value == norm(u).value);
  }
}

TEST_CASE("thm2 norm") {
  const SolverConfig cfg = small_config(Regime::thm2);
  const GridSpec g = cfg.grid();
  const TimeGrid tg = cfg.time_grid();
  SpectralWorkspace ws(g);
  std::mt19937_64 rng(13);
  const VectorField w = varns::testing::random_band_limited_vector(ws, rng, 3);
  const double q = cfg.q;

  std::vector<VectorField> frames;
  std::vector<double> a;
  for (std::size_t i = 0; i < tg.node_count(); ++i) {
    a.push_back(1.0 + 0.5 * std::cos(3.0 * tg.node(i)));
    frames.push_back(a.back() * w);
  }
  const SpaceTimeField u(tg, frames);
  const double wq = lq_trace(constant_in_time(w, tg), q).front();

  SUBCASE("zero") {
    CHECK(norm_E_thm2(SpaceTimeField(tg, g), cfg.exponent_field(), q).value == 0.0);
  }
  SUBCASE("trace is the spatial L^q norm") {
    double sum = 0.0;
    const auto mag = w.magnitude();
    for (double x : mag.values()) sum += std::pow(x, q);
    CHECK(wq == doctest::Approx(std::pow(sum * g.cell_weight(), 1.0 / q)).epsilon(1e-13));
  }
  SUBCASE("separable field") {
    const auto p = cfg.exponent_field();
    const double tol = 1e-11;
    const double an = luxemburg_norm(ScalarField(cfg.time_cells(), a), p, 1e-13).value;
    CHECK(std::abs(norm_E_thm2(u, p, q, tol).value - wq * an) <= 2 * tol + 1e-12 * wq * an);
  }
  SUBCASE("constant exponent against the classical time quadrature") {
    const auto p = make_exponent(ExponentFamily::constant, std::vector<double>{4.0},
                                 cfg.time_cells());
    double sum = 0.0;
    for (double ai : a) sum += std::pow(ai * wq, 4.0);
    const double expect = std::pow(sum * cfg.time_cells().cell_weight(), 0.25);
    CHECK(rel_diff(norm_E_thm2(u, p, q, 1e-12).value, expect) <= 1e-6);
  }
  SUBCASE("homogeneity and domination") {
    const auto p = cfg.exponent_field();
    const double base = norm_E_thm2(u, p, q, 1e-12).value;
    CHECK(norm_E_thm2(3.0 * u, p, q, 1e-12).value == doctest::Approx(3.0 * base).epsilon(1e-10));
    auto bigger = frames;
    bigger[0] = 2.0 * bigger[0];
    CHECK(norm_E_thm2(SpaceTimeField(tg, bigger), p, q, 1e-12).value >= base);
  }
  SUBCASE("exponent must live on the time cells") {
    CHECK_THROWS_AS(norm_E_thm2(u, make_exponent(cfg.exponent, g), q), Error);
    const auto short_p = make_exponent(cfg.exponent, GridSpec::line(0, 1, 5));
    CHECK_THROWS_AS(norm_E_thm2(u, short_p, q), Error);
  }
}

TEST_CASE("configuration checks") {
  SolverConfig cfg = small_config(Regime::thm2);
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("p_minus must exceed 2") {
    cfg.exponent = {ExponentFamily::constant, {2.0}};
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  SUBCASE("q must exceed 3") {
    cfg.q = 3.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  SUBCASE("2/p + 3/q < 1") {
    cfg.exponent = {ExponentFamily::constant, {2.5}};
    cfg.q = 10.0;  // 0.8 + 0.3
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  SUBCASE("constant tensor force is a thm1 input") {
    cfg.force = {ForceKind::constant, 1.0};
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
  SUBCASE("enum names round trip") {
    for (auto k : {InitialKind::zero, InitialKind::taylor_green, InitialKind::random_div_free,
                   InitialKind::file})
      CHECK(initial_kind_from_string(to_string(k)) == k);
    for (auto k : {ForceKind::none, ForceKind::constant, ForceKind::shear})
      CHECK(force_kind_from_string(to_string(k)) == k);
    CHECK(regime_from_string("thm2") == Regime::thm2);
    CHECK_THROWS_AS(regime_from_string("thm3"), Error);
  }
}

TEST_CASE("random divergence-free data") {
  const GridSpec g = GridSpec::torus(16, 2 * pi);
  SpectralWorkspace ws(g);
  const auto a = random_div_free(g, 7, 2, 0.3);
  const auto b = random_div_free(g, 7, 2, 0.3);
  for (int c = 0; c < 3; ++c)
    CHECK(std::equal(a.component(c).begin(), a.component(c).end(), b.component(c).begin()));
  CHECK(a.magnitude().max_abs() == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(divergence_ratio(a, ws) <= 1e-10);
  // Same draw at a finer resolution restricts to a multiple of the coarse
  // field (the peak is taken over a different node set).
  auto coarse = restrict_periodic(random_div_free(GridSpec::torus(32, 2 * pi), 7, 2, 0.3), 2);
  coarse *= 0.3 / coarse.magnitude().max_abs();
  CHECK(field_rel_diff(coarse, a) <= 1e-12);
  CHECK(field_rel_diff(random_div_free(g, 8, 2, 0.3), a) > 1e-3);
}

TEST_CASE("bilinear constant estimate") {
  const SolverConfig cfg = small_config();
  const double c1 = estimate_bilinear_constant(cfg, 1, 7);
  const double c3 = estimate_bilinear_constant(cfg, 3, 7);
  CHECK(std::isfinite(c1));
  CHECK(c1 > 0.0);
  CHECK(c3 >= c1);
  CHECK(estimate_bilinear_constant(cfg, 3, 7) == c3);
  CHECK_THROWS_AS(estimate_bilinear_constant(cfg, 0, 7), Error);
  const double c2 = estimate_bilinear_constant(small_config(Regime::thm2), 2, 7);
  CHECK(c2 > 0.0);
}

TEST_CASE("smallness check") {
  SUBCASE("zero data passes") {
    SolverConfig cfg = small_config();
    cfg.u0.kind = InitialKind::zero;
    const auto v = smallness_check(cfg, 1.0);
    CHECK(v.delta == 0.0);
    CHECK(v.threshold == 0.25);
    CHECK(v.pass);
  }
  SUBCASE("delta is linear in the data") {
    for (Regime r : {Regime::thm1, Regime::thm2}) {
      SolverConfig cfg = small_config(r);
      cfg.force = {ForceKind::shear, 0.02};
      const double d1 = smallness_check(cfg, 1.0).delta;
      cfg.u0.amplitude *= 2.0;
      cfg.force.amplitude *= 2.0;
      const double d2 = smallness_check(cfg, 1.0).delta;
      CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-9));
    }
  }
  SUBCASE("thm2 admissible T shrinks as the data grows") {
    SolverConfig cfg = small_config(Regime::thm2);
    cfg.resolution = 8;
    cfg.steps = 8;
    cfg.ladder_count = 10;
    std::optional<double> previous;
    for (double amp : {0.01, 0.03, 0.1, 0.3, 1.0}) {
      cfg.u0.amplitude = amp;
      const auto v = smallness_check(cfg, 1.0);
      REQUIRE(v.ladder.size() == 10);
      CHECK(v.ladder.front().T == 8.0);
      const double T = v.admissible_T.value_or(0.0);
      if (previous) CHECK(T <= *previous);
      previous = T;
    }
  }
  SUBCASE("non-positive constant") {
    CHECK_THROWS_AS(smallness_check(small_config(), 0.0), Error);
  }
}

TEST_CASE("Picard iteration") {
  SUBCASE("zero data converges at iterate 0") {
    SolverConfig cfg = small_config();
    cfg.u0.kind = InitialKind::zero;
    cfg.cb_override = 1.0;
    const auto r = picard_solve(cfg);
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.iterations == 0);
    CHECK(max_abs(r.final) == 0.0);
    CHECK(r.residual == 0.0);
  }
  SUBCASE("disabled nonlinearity gives the heat solution") {
    SolverConfig cfg = small_config();
    cfg.disable_bilinear = true;
    cfg.cb_override = 1.0;
    const auto r = picard_solve(cfg);
    CHECK(r.iterations == 0);
    const GridSpec g = cfg.grid();
    const TimeGrid tg = cfg.time_grid();
    const VectorField u0 = taylor_green(g, cfg.u0.amplitude);
    std::vector<VectorField> exact;
    for (std::size_t i = 0; i < tg.node_count(); ++i)
      exact.push_back(std::exp(-3.0 * tg.node(i)) * u0);
    const auto p = cfg.exponent_field();
    CHECK(norm_E_thm1(r.final - SpaceTimeField(tg, exact), p).value <= 1e-10);
  }
  SUBCASE("smallness gate") {
    SolverConfig cfg = small_config();
    cfg.u0.amplitude = 50.0;
    cfg.cb_override = 1.0;
    try {
      picard_solve(cfg);
      FAIL("expected the smallness gate to throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::solver);
    }
  }
  SUBCASE("large data with override reports instead of throwing") {
    SolverConfig cfg = small_config();
    cfg.u0.amplitude = 20.0;
    cfg.max_iters = 3;
    cfg.override_smallness = true;
    cfg.cb_override = 1.0;
    const auto r = picard_solve(cfg);
    CHECK(r.status != SolveStatus::converged);
    CHECK_FALSE(r.smallness.pass);
    cfg.override_smallness = false;
    cfg.u0.amplitude = 1e-3;
    cfg.max_iters = 1;
    cfg.tol_fixedpoint = 1e-300;
    try {
      picard_solve(cfg);
      FAIL("expected non-convergence");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::non_convergence);
      CHECK(std::string(e.what()).find("increments") != std::string::npos);
    }
  }
  SUBCASE("overflow aborts with the iterate index") {
    SolverConfig cfg = small_config();
    cfg.u0.amplitude = 1e120;
    cfg.override_smallness = true;
    cfg.cb_override = 1.0;
    try {
      picard_solve(cfg);
      FAIL("expected a non-finite abort");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::solver);
      CHECK(std::string(e.what()).find("iterate 2") != std::string::npos);
    }
  }
}

TEST_CASE("small-data fixed point") {
  for (Regime regime : {Regime::thm1, Regime::thm2}) {
    CAPTURE(to_string(regime));
    SolverConfig cfg = small_config(regime);
    cfg.smallness_target = 0.5;
    cfg.force = {ForceKind::shear, 0.01};
    const auto r = picard_solve(cfg);
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.residual <= cfg.tol_fixedpoint);
    CHECK(r.contraction_estimate < 1.0);
    CHECK(r.contraction_estimate <= 0.6);
    CHECK(r.smallness.pass);
    CHECK(4.0 * r.c_b_estimate * r.smallness.delta == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.final_norm <= 2.0 * r.smallness.delta + 3.0 * cfg.tol_fixedpoint);
    CHECK(r.max_divergence <= 1e-10);
    CHECK(r.iterates_norms.size() == r.iterations + 1);
    CHECK(r.history.front().iter == 0);
    for (double v : r.iterates_norms) CHECK(std::isfinite(v));
    CHECK(fixed_point_residual(r.final, r.config) <= cfg.tol_fixedpoint);
    CHECK(fixed_point_residual(r.final, r.config) ==
          doctest::Approx(r.residual).epsilon(1e-6));
  }
}

TEST_CASE("field files") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string path = (dir / "varns_test_field.vlpf").string();
  const GridSpec g = GridSpec::torus(8, 2 * pi);
  const VectorField v = random_div_free(g, 3, 2, 0.7);
  write_field(path, v);
  const VectorField back = read_vector_field(path);
  CHECK(back.grid() == g);
  for (int c = 0; c < 3; ++c)
    CHECK(std::equal(v.component(c).begin(), v.component(c).end(), back.component(c).begin()));

  InitialDataSpec spec;
  spec.kind = InitialKind::file;
  spec.path = path;
  spec.amplitude = 2.0;
  CHECK(field_rel_diff(initial_data(spec, g), 2.0 * v) <= 1e-12);
  CHECK_THROWS_AS(initial_data(spec, GridSpec::torus(16, 2 * pi)), Error);
  CHECK_THROWS_AS(read_vector_field((dir / "varns_missing.vlpf").string()), Error);
  std::filesystem::remove(path);
}

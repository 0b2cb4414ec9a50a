#include "varns/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "varns/error.hpp"
#include "varns/field_io.hpp"

namespace varns {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

template <class E>
E parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> table,
             const char* what) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw Error(ErrorKind::invalid_argument, std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

std::string to_string(Regime r) { return r == Regime::thm1 ? "thm1" : "thm2"; }

Regime regime_from_string(const std::string& s) {
  return parse_enum<Regime>(s, {{"thm1", Regime::thm1}, {"thm2", Regime::thm2}}, "regime");
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::zero: return "zero";
    case InitialKind::taylor_green: return "taylor-green";
    case InitialKind::random_div_free: return "random-div-free";
    case InitialKind::file: return "file";
  }
  return "zero";
}

InitialKind initial_kind_from_string(const std::string& s) {
  return parse_enum<InitialKind>(s,
                                 {{"zero", InitialKind::zero},
                                  {"taylor-green", InitialKind::taylor_green},
                                  {"random-div-free", InitialKind::random_div_free},
                                  {"file", InitialKind::file}},
                                 "initial data kind");
}

std::string to_string(ForceKind k) {
  switch (k) {
    case ForceKind::none: return "none";
    case ForceKind::constant: return "constant";
    case ForceKind::shear: return "shear";
  }
  return "none";
}

ForceKind force_kind_from_string(const std::string& s) {
  return parse_enum<ForceKind>(
      s, {{"none", ForceKind::none}, {"constant", ForceKind::constant}, {"shear", ForceKind::shear}},
      "force kind");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max-iterations";
    case SolveStatus::diverged: return "diverged";
  }
  return "converged";
}

// ---------------------------------------------------------------------------
// Configuration

ExponentField SolverConfig::exponent_field() const {
  return make_exponent(exponent, regime == Regime::thm1 ? grid() : time_cells());
}

void SolverConfig::validate() const {
  require(resolution >= 4, "solver resolution must be at least 4");
  require(std::isfinite(length) && length > 0.0, "torus length must be positive");
  require(std::isfinite(T) && T > 0.0, "final time must be positive");
  require(steps >= 1, "at least one time step is required");
  require(tol_fixedpoint > 0.0 && tol_norm > 0.0, "tolerances must be positive");
  require(max_iters >= 1, "max_iters must be at least 1");
  require(frak_p > 1.0, "mixed index must exceed 1");
  require(cb_trials >= 1, "c_b needs at least one trial");
  require(!cb_override || *cb_override > 0.0, "c_b override must be positive");
  require(!smallness_target || (*smallness_target > 0.0 && *smallness_target < 1.0),
          "smallness target must lie in (0, 1)");
  require(ladder_count >= 1 && ladder_ratio > 0.0 && ladder_ratio < 1.0 && ladder_T_max > 0.0,
          "bad T ladder settings");
  require(u0.band >= 1 && 2 * u0.band < static_cast<long>(resolution),
          "random data band must be below the Nyquist index");
  const ExponentField p = exponent_field();
  if (regime == Regime::thm2) {
    require(force.kind != ForceKind::constant, "a constant tensor force is a thm1 input");
    require(p.p_minus() > 2.0, "thm2 needs an exponent with p_minus > 2");
    require(q > 3.0, "thm2 needs q > 3");
    for (std::size_t i = 0; i < p.size(); ++i)
      require(2.0 / p[i] + 3.0 / q < 1.0,
              "thm2 needs 2/p(t) + 3/q < 1; violated at time cell " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// Data

VectorField taylor_green(const GridSpec& grid, double amplitude) {
  require(grid.dimension == 3, "Taylor-Green data needs a 3D grid");
  const double s = two_pi / grid.extents[0];
  VectorField v(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto x = grid.point(n);
    const double cx = std::cos(s * x[0]), sx = std::sin(s * x[0]);
    const double cy = std::cos(s * x[1]), sy = std::sin(s * x[1]);
    const double cz = std::cos(s * x[2]);
    v.component(0)[n] = amplitude * sx * cy * cz;
    v.component(1)[n] = -amplitude * cx * sy * cz;
  }
  return v;
}

VectorField random_div_free(const GridSpec& grid, std::uint64_t seed, long band,
                            double amplitude) {
  require(grid.dimension == 3 && grid.topology == Topology::periodic,
          "random divergence-free data needs a 3D torus");
  for (int a = 0; a < 3; ++a)
    require(2 * band < static_cast<long>(grid.resolution[a]),
            "band must stay below the Nyquist index");
  SpectralWorkspace ws(grid);
  const long n0 = static_cast<long>(grid.resolution[0]);
  const long n1 = static_cast<long>(grid.resolution[1]);
  const long half = static_cast<long>(grid.resolution[2] / 2 + 1);
  auto slot = [&](long m0, long m1, long m2) {
    const long i0 = ((m0 % n0) + n0) % n0, i1 = ((m1 % n1) + n1) % n1;
    return static_cast<std::size_t>((i0 * n1 + i1) * half + m2);
  };
  const double N = static_cast<double>(grid.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  SpectralVector hat;
  for (auto& c : hat) c.assign(ws.mode_count(), 0.0);
  // Draws follow a fixed mode order, so the field does not depend on the
  // resolution. Each term is a cos(m.x) + b sin(m.x).
  for (long m0 = -band; m0 <= band; ++m0)
    for (long m1 = -band; m1 <= band; ++m1)
      for (long m2 = -band; m2 <= band; ++m2)
        for (int c = 0; c < 3; ++c) {
          const double a = gauss(rng), b = gauss(rng);
          const Complex coef = 0.5 * N * Complex(a, -b);
          if (m0 == 0 && m1 == 0 && m2 == 0) continue;  // mean-free
          if (m2 > 0) {
            hat[c][slot(m0, m1, m2)] += coef;
          } else if (m2 < 0) {
            hat[c][slot(-m0, -m1, -m2)] += std::conj(coef);
          } else {
            hat[c][slot(m0, m1, 0)] += coef;
            hat[c][slot(-m0, -m1, 0)] += std::conj(coef);
          }
        }
  leray_project_modes(hat, ws);
  VectorField v = ws.inverse(hat);
  const double peak = v.magnitude().max_abs();
  require(peak > 0.0, "random divergence-free draw vanished");
  v *= amplitude / peak;
  return v;
}

VectorField initial_data(const InitialDataSpec& spec, const GridSpec& grid) {
  switch (spec.kind) {
    case InitialKind::zero: return VectorField(grid);
    case InitialKind::taylor_green: return taylor_green(grid, spec.amplitude);
    case InitialKind::random_div_free:
      return random_div_free(grid, spec.seed, spec.band, spec.amplitude);
    case InitialKind::file: {
      VectorField v = read_vector_field(spec.path);
      require(v.grid() == grid, "initial data file grid does not match the solver grid",
              ErrorKind::grid_mismatch);
      SpectralWorkspace ws(grid);
      v = leray_project(v, ws);
      v *= spec.amplitude;
      return v;
    }
  }
  return VectorField(grid);
}

ForceInput force_input(const ForceSpec& spec, Regime regime, const GridSpec& grid,
                       const TimeGrid& tg) {
  if (spec.kind == ForceKind::none || spec.amplitude == 0.0) return std::monostate{};
  const double s = two_pi / grid.extents[1];
  if (regime == Regime::thm1) {
    TensorField F(grid);
    if (spec.kind == ForceKind::constant) {
      for (auto& c : F.comps) std::fill(c.begin(), c.end(), spec.amplitude);
    } else {
      for (std::size_t n = 0; n < grid.size(); ++n) {
        const double v = spec.amplitude * std::cos(s * grid.point(n)[1]);
        F.component(0, 1)[n] = v;
        F.component(1, 0)[n] = v;
      }
    }
    return F;
  }
  require(spec.kind == ForceKind::shear, "thm2 supports only the shear force");
  VectorField profile(grid);
  for (std::size_t n = 0; n < grid.size(); ++n)
    profile.component(0)[n] = spec.amplitude * std::sin(s * grid.point(n)[1]);
  std::vector<VectorField> frames;
  for (std::size_t i = 0; i < tg.node_count(); ++i)
    frames.push_back(std::cos(tg.node(i)) * profile);
  return SpaceTimeField(tg, std::move(frames));
}

namespace {

SpectralVector projected_divergence_modes(const TensorField& F, SpectralWorkspace& ws) {
  SpectralVector out;
  for (auto& c : out) c.assign(ws.mode_count(), 0.0);
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < 3; ++a) {
      const auto hat = ws.forward(F.component(a, b));
      for (std::size_t m = 0; m < hat.size(); ++m)
        out[a][m] += Complex(0.0, ws.derivative_wavenumber(b, m)) * hat[m];
    }
  leray_project_modes(out, ws);
  return out;
}

// Frames of e0 in time order, without storing the whole space-time field.
class InitialTermGenerator {
 public:
  InitialTermGenerator(const VectorField& u0, const ForceInput& force, const TimeGrid& tg,
                       SpectralWorkspace& ws)
      : ws_(ws), tg_(tg), force_(force), u0_(ws.forward(u0)), duhamel_(ws, tg.dt()) {
    require(u0.grid() == ws.grid(), "initial data grid mismatch", ErrorKind::grid_mismatch);
    if (const auto* F = std::get_if<TensorField>(&force_)) {
      require(F->grid == ws.grid(), "force grid mismatch", ErrorKind::grid_mismatch);
      constant_force_ = projected_divergence_modes(*F, ws);
    } else if (const auto* f = std::get_if<SpaceTimeField>(&force_)) {
      require(f->time_grid() == tg && f->grid() == ws.grid(), "force grid mismatch",
              ErrorKind::grid_mismatch);
    }
  }

  VectorField next() {
    const std::size_t i = index_++;
    const double t = tg_.node(i);
    SpectralVector e = u0_;
    for (std::size_t m = 0; m < ws_.mode_count(); ++m) {
      const double decay = std::exp(-t * ws_.wavenumber_sq(m));
      for (auto& c : e) c[m] *= decay;
    }
    const SpectralVector* integrand = nullptr;
    SpectralVector sampled;
    if (std::holds_alternative<TensorField>(force_)) {
      integrand = &constant_force_;
    } else if (const auto* f = std::get_if<SpaceTimeField>(&force_)) {
      sampled = ws_.forward(f->frame(i));
      leray_project_modes(sampled, ws_);
      integrand = &sampled;
    }
    if (integrand) {
      const auto& d = duhamel_.push(*integrand);
      for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < ws_.mode_count(); ++m) e[c][m] += d[c][m];
    }
    return ws_.inverse(e);
  }

 private:
  SpectralWorkspace& ws_;
  TimeGrid tg_;
  const ForceInput& force_;
  SpectralVector u0_;
  SpectralVector constant_force_;
  DuhamelAccumulator duhamel_;
  std::size_t index_ = 0;
};

// Frames of B(u, u) from frames of u, in time order.
class BilinearStream {
 public:
  BilinearStream(SpectralWorkspace& ws, double dt) : ws_(ws), duhamel_(ws, dt) {
    for (auto& c : div_) c.resize(ws.mode_count());
  }

  VectorField push(const VectorField& u) {
    for (auto& c : div_) std::fill(c.begin(), c.end(), Complex(0.0));
    std::vector<double> prod(u.grid().size());
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        const auto ua = u.component(a), ub = u.component(b);
        for (std::size_t n = 0; n < prod.size(); ++n) prod[n] = ua[n] * ub[n];
        const auto hat = ws_.forward(prod);
        // (div T)_a = sum_b d_b T_ab with T symmetric
        for (std::size_t m = 0; m < hat.size(); ++m) {
          div_[a][m] += Complex(0.0, ws_.derivative_wavenumber(b, m)) * hat[m];
          if (b != a) div_[b][m] += Complex(0.0, ws_.derivative_wavenumber(a, m)) * hat[m];
        }
      }
    leray_project_modes(div_, ws_);
    return ws_.inverse(duhamel_.push(div_));
  }

 private:
  SpectralWorkspace& ws_;
  DuhamelAccumulator duhamel_;
  SpectralVector div_;
};

bool all_finite(const VectorField& v) {
  for (int c = 0; c < 3; ++c)
    for (double x : v.component(c))
      if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

VectorField projected_divergence(const TensorField& F, SpectralWorkspace& ws) {
  require(F.grid == ws.grid(), "tensor grid mismatch", ErrorKind::grid_mismatch);
  return ws.inverse(projected_divergence_modes(F, ws));
}

SpaceTimeField initial_term(const VectorField& u0, const ForceInput& force, const TimeGrid& tg,
                            SpectralWorkspace& ws) {
  InitialTermGenerator gen(u0, force, tg, ws);
  std::vector<VectorField> frames;
  frames.reserve(tg.node_count());
  for (std::size_t i = 0; i < tg.node_count(); ++i) frames.push_back(gen.next());
  return SpaceTimeField(tg, std::move(frames));
}

SpaceTimeField bilinear_term(const SpaceTimeField& u, SpectralWorkspace& ws) {
  require(u.grid() == ws.grid(), "field grid does not match the workspace",
          ErrorKind::grid_mismatch);
  BilinearStream stream(ws, u.time_grid().dt());
  std::vector<VectorField> frames;
  frames.reserve(u.frame_count());
  for (const auto& f : u.frames()) frames.push_back(stream.push(f));
  return SpaceTimeField(u.time_grid(), std::move(frames));
}

// ---------------------------------------------------------------------------
// Norms

namespace {

double lq_norm(const VectorField& v, double q) {
  const ScalarField mag = v.magnitude();
  const double peak = mag.max_abs();
  if (peak == 0.0) return 0.0;
  double sum = 0.0;
  for (double x : mag.values()) sum += std::pow(x / peak, q);
  return peak * std::pow(sum * mag.grid().cell_weight(), 1.0 / q);
}

// The absolute tolerance, tightened to 1e-11 relative for small fields and
// relaxed to 1e-14 relative where it would fall below rounding.
double effective_tol(const ScalarField& trace, const ExponentField& p, double tol) {
  return std::max(std::min(tol, relative_tolerance(trace, p, 1e-11)),
                  relative_tolerance(trace, p, 1e-14));
}

}  // namespace

std::vector<double> lq_trace(const SpaceTimeField& u, double q) {
  require(q >= 1.0, "spatial index must be at least 1");
  std::vector<double> t;
  for (const auto& f : u.frames()) t.push_back(lq_norm(f, q));
  return t;
}

RegimeNorm::RegimeNorm(Regime regime, ExponentField p, double q, double frak_p, double tol)
    : regime_(regime), p_(std::move(p)), q_(q), frak_p_(frak_p), tol_(tol) {
  require(tol > 0.0, "norm tolerance must be positive");
  if (regime == Regime::thm2) {
    require(p_.grid().dimension == 1, "thm2 exponent must live on the time cells",
            ErrorKind::grid_mismatch);
    require(q > 1.0, "spatial index must exceed 1");
  } else {
    require(frak_p > 1.0, "mixed index must exceed 1");
  }
}

RegimeNorm RegimeNorm::from_config(const SolverConfig& cfg) {
  return RegimeNorm(cfg.regime, cfg.exponent_field(), cfg.q, cfg.frak_p, cfg.tol_norm);
}

void RegimeNorm::Accumulator::push(const VectorField& frame) {
  if (owner_->regime_ == Regime::thm1) {
    if (sup_.empty()) {
      grid_ = frame.grid();
      sup_.assign(grid_.size(), 0.0);
    }
    require(frame.grid() == grid_, "frames must share one grid", ErrorKind::grid_mismatch);
    const ScalarField mag = frame.magnitude();
    for (std::size_t n = 0; n < sup_.size(); ++n) sup_[n] = std::max(sup_[n], mag[n]);
  } else {
    trace_.push_back(lq_norm(frame, owner_->q_));
  }
}

NormValue RegimeNorm::Accumulator::finish() const {
  const RegimeNorm& o = *owner_;
  if (o.regime_ == Regime::thm1) {
    require(!sup_.empty(), "no frames pushed");
    const ScalarField trace(grid_, sup_);
    return mixed_norm(trace, o.p_, o.frak_p_, effective_tol(trace, o.p_, o.tol_));
  }
  require(trace_.size() == o.p_.size(),
          "time exponent has " + std::to_string(o.p_.size()) + " cells but " +
              std::to_string(trace_.size()) + " frames were given",
          ErrorKind::grid_mismatch);
  const ScalarField trace(o.p_.grid(), trace_);
  return luxemburg_norm(trace, o.p_, effective_tol(trace, o.p_, o.tol_));
}

NormValue RegimeNorm::operator()(const SpaceTimeField& u) const {
  auto acc = accumulator();
  for (const auto& f : u.frames()) acc.push(f);
  return acc.finish();
}

NormValue norm_E_thm1(const SpaceTimeField& u, const ExponentField& p, double frak_p,
                      double tol) {
  return RegimeNorm(Regime::thm1, p, 3.0, frak_p, tol)(u);
}

NormValue norm_E_thm2(const SpaceTimeField& u, const ExponentField& p, double q, double tol) {
  return RegimeNorm(Regime::thm2, p, q, 3.0, tol)(u);
}

// ---------------------------------------------------------------------------
// Constants and smallness

double estimate_bilinear_constant(const SolverConfig& cfg, std::size_t trials,
                                  std::uint64_t seed) {
  cfg.validate();
  require(trials >= 1, "c_b needs at least one trial");
  const GridSpec grid = cfg.grid();
  const TimeGrid tg = cfg.time_grid();
  SpectralWorkspace ws(grid);
  const RegimeNorm norm = RegimeNorm::from_config(cfg);
  const long band = std::min<long>(2, static_cast<long>(cfg.resolution) / 2 - 1);
  double best = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    VectorField w;
    if (k == 0) {
      w = taylor_green(grid, 1.0);
    } else {
      std::seed_seq seq{seed, static_cast<std::uint64_t>(k)};
      std::uint64_t probe_seed[1];
      seq.generate(probe_seed, probe_seed + 1);
      w = random_div_free(grid, probe_seed[0], k % 2 == 1 ? 1 : band, 1.0);
    }
    BilinearStream bilinear(ws, tg.dt());
    auto un = norm.accumulator();
    auto bn = norm.accumulator();
    for (std::size_t i = 0; i < tg.node_count(); ++i) {
      bn.push(bilinear.push(w));
      un.push(w);
    }
    const double nu = un.finish().value;
    if (nu > 0.0) best = std::max(best, bn.finish().value / (nu * nu));
  }
  return best;
}

namespace {

double initial_term_norm(const SolverConfig& cfg) {
  const GridSpec grid = cfg.grid();
  const TimeGrid tg = cfg.time_grid();
  SpectralWorkspace ws(grid);
  const VectorField u0 = initial_data(cfg.u0, grid);
  const ForceInput force = force_input(cfg.force, cfg.regime, grid, tg);
  InitialTermGenerator gen(u0, force, tg, ws);
  const RegimeNorm norm = RegimeNorm::from_config(cfg);
  auto acc = norm.accumulator();
  for (std::size_t i = 0; i < tg.node_count(); ++i) acc.push(gen.next());
  return acc.finish().value;
}

}  // namespace

SmallnessVerdict smallness_check(const SolverConfig& cfg, double c_b) {
  cfg.validate();
  require(c_b > 0.0 && std::isfinite(c_b), "c_b must be positive");
  SmallnessVerdict v;
  v.delta = initial_term_norm(cfg);
  v.threshold = 1.0 / (4.0 * c_b);
  v.pass = v.delta < v.threshold;
  if (cfg.regime == Regime::thm2) {
    for (std::size_t k = 0; k < cfg.ladder_count; ++k) {
      SolverConfig at = cfg;
      at.T = cfg.ladder_T_max * std::pow(cfg.ladder_ratio, static_cast<double>(k));
      LadderEntry e;
      e.T = at.T;
      e.delta = initial_term_norm(at);
      e.c_b = c_b * (1.0 + at.T) / (1.0 + cfg.T);
      e.pass = e.delta < 1.0 / (4.0 * e.c_b);
      v.ladder.push_back(e);
      if (e.pass && !v.admissible_T) v.admissible_T = e.T;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Fixed point

SolverResult picard_solve(const SolverConfig& input) {
  input.validate();
  SolverResult result;
  SolverConfig cfg = input;
  result.c_b_estimate =
      cfg.cb_override ? *cfg.cb_override : estimate_bilinear_constant(cfg, cfg.cb_trials, cfg.cb_seed);
  require(result.c_b_estimate > 0.0, "bilinear constant estimate vanished", ErrorKind::solver);
  cfg.cb_override = result.c_b_estimate;

  if (cfg.smallness_target) {
    const double unit_delta = initial_term_norm(cfg);
    require(unit_delta > 0.0, "cannot rescale zero data to a smallness target");
    result.data_scale = *cfg.smallness_target / (4.0 * result.c_b_estimate * unit_delta);
    cfg.u0.amplitude *= result.data_scale;
    cfg.force.amplitude *= result.data_scale;
    cfg.smallness_target.reset();
  }
  result.config = cfg;
  result.smallness = smallness_check(cfg, result.c_b_estimate);
  if (!result.smallness.pass && !cfg.override_smallness) {
    std::ostringstream msg;
    msg << "smallness condition fails: delta = " << result.smallness.delta
        << " >= 1/(4 c_b) = " << result.smallness.threshold;
    throw Error(ErrorKind::solver, msg.str());
  }

  const GridSpec grid = cfg.grid();
  const TimeGrid tg = cfg.time_grid();
  SpectralWorkspace ws(grid);
  const RegimeNorm norm = RegimeNorm::from_config(cfg);
  const VectorField u0 = initial_data(cfg.u0, grid);
  const ForceInput force = force_input(cfg.force, cfg.regime, grid, tg);

  SpaceTimeField u = initial_term(u0, force, tg, ws);
  const double norm0 = norm(u).value;
  result.iterates_norms.push_back(norm0);
  result.history.push_back({0, norm0, norm0, 0.0});

  std::vector<double> increments;
  bool converged = false;
  for (std::size_t n = 0; n < cfg.max_iters; ++n) {
    InitialTermGenerator e0(u0, force, tg, ws);
    std::optional<BilinearStream> bilinear;
    if (!cfg.disable_bilinear) bilinear.emplace(ws, tg.dt());
    std::vector<VectorField> frames;
    frames.reserve(tg.node_count());
    auto diff = norm.accumulator();
    auto next_norm = norm.accumulator();
    for (std::size_t i = 0; i < tg.node_count(); ++i) {
      VectorField frame = e0.next();
      if (bilinear) frame -= bilinear->push(u.frame(i));
      if (!all_finite(frame))
        throw Error(ErrorKind::solver,
                    "non-finite value in Picard iterate " + std::to_string(n + 1) +
                        " at time node " + std::to_string(i));
      diff.push(frame - u.frame(i));
      next_norm.push(frame);
      frames.push_back(std::move(frame));
    }
    const double d = diff.finish().value;
    increments.push_back(d);
    result.history.back().residual = d;
    if (increments.size() >= 2) {
      const double prev = increments[increments.size() - 2];
      if (prev > 0.0)
        result.contraction_estimate = std::max(result.contraction_estimate, d / prev);
    }
    result.iterations = n;
    result.residual = d;
    if (d <= cfg.tol_fixedpoint) {
      converged = true;
      break;
    }
    if (n + 1 == cfg.max_iters) break;  // keep the last iterate with a known residual
    u = SpaceTimeField(tg, std::move(frames));
    const double nn = next_norm.finish().value;
    result.iterates_norms.push_back(nn);
    result.history.push_back({n + 1, nn, d, 0.0});
  }

  if (converged) {
    result.status = SolveStatus::converged;
  } else {
    result.status = increments.back() >= increments.front() ? SolveStatus::diverged
                                                            : SolveStatus::max_iterations;
    if (!cfg.override_smallness) {
      std::ostringstream msg;
      msg << "Picard iteration did not converge in " << cfg.max_iters
          << " iterations; increments:";
      for (double d : increments) msg << ' ' << d;
      throw Error(ErrorKind::non_convergence, msg.str());
    }
  }
  result.final_norm = result.iterates_norms.back();
  for (const auto& f : u.frames())
    result.max_divergence = std::max(result.max_divergence, divergence_ratio(f, ws));
  result.final = std::move(u);
  return result;
}

double fixed_point_residual(const SpaceTimeField& u, const SolverConfig& cfg) {
  require(!cfg.smallness_target, "resolve the smallness target before recomputing residuals");
  cfg.validate();
  const GridSpec grid = cfg.grid();
  const TimeGrid tg = cfg.time_grid();
  require(u.grid() == grid && u.time_grid() == tg, "field does not match the configuration",
          ErrorKind::grid_mismatch);
  SpectralWorkspace ws(grid);
  const VectorField u0 = initial_data(cfg.u0, grid);
  const ForceInput force = force_input(cfg.force, cfg.regime, grid, tg);
  InitialTermGenerator e0(u0, force, tg, ws);
  BilinearStream bilinear(ws, tg.dt());
  const RegimeNorm norm = RegimeNorm::from_config(cfg);
  auto acc = norm.accumulator();
  for (std::size_t i = 0; i < tg.node_count(); ++i) {
    VectorField r = u.frame(i) - e0.next();
    if (!cfg.disable_bilinear) r += bilinear.push(u.frame(i));
    acc.push(r);
  }
  return acc.finish().value;
}

}  // namespace varns

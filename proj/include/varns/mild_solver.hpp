#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "varns/exponents.hpp"
#include "varns/grid.hpp"
#include "varns/operators.hpp"
#include "varns/spacetime.hpp"
#include "varns/varlp.hpp"

namespace varns {

/// thm1: u in L^inf in time, mixed variable-exponent norm in space.
/// thm2: u in L^q in space, variable-exponent Luxemburg norm in time.
enum class Regime { thm1, thm2 };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

enum class InitialKind { zero, taylor_green, random_div_free, file };

std::string to_string(InitialKind k);
InitialKind initial_kind_from_string(const std::string& s);

struct InitialDataSpec {
  InitialKind kind = InitialKind::taylor_green;
  double amplitude = 0.05;
  std::uint64_t seed = 1;
  /// Largest |m| per axis for random data.
  long band = 2;
  /// VLPF file for InitialKind::file (scaled by amplitude).
  std::string path;
};

/// none:     no force.
/// constant: thm1 only; F is a constant tensor (so f = div F = 0).
/// shear:    thm1: F = A cos(y) (e_x (x) e_y + e_y (x) e_x), f = div F = (-A sin y, 0, 0);
///           thm2: f(t, x) = A cos(t) (sin y, 0, 0).
enum class ForceKind { none, constant, shear };

std::string to_string(ForceKind k);
ForceKind force_kind_from_string(const std::string& s);

struct ForceSpec {
  ForceKind kind = ForceKind::none;
  double amplitude = 0.0;
};

/// Everything a solver run needs, as specifications so the same
/// configuration can be rebuilt at another resolution.
struct SolverConfig {
  Regime regime = Regime::thm1;
  std::size_t resolution = 32;
  double length = 6.283185307179586;
  double T = 1.0;
  std::size_t steps = 64;
  /// Spatial exponent (thm1, sampled on the torus) or temporal exponent
  /// (thm2, sampled on [0, T]).
  ExponentSpec exponent{ExponentFamily::sinusoidal, {3.0, 0.5, 1.0, 2.0}};
  double q = 10.0;
  double frak_p = 3.0;
  double tol_fixedpoint = 1e-6;
  std::size_t max_iters = 50;
  double tol_norm = 1e-10;
  InitialDataSpec u0;
  ForceSpec force;
  std::size_t cb_trials = 4;
  std::uint64_t cb_seed = 7;
  std::optional<double> cb_override;
  /// When set, u0 and the force are rescaled so that 4 c_b delta equals it.
  std::optional<double> smallness_target;
  /// Run even when the smallness gate fails; report instead of throwing.
  bool override_smallness = false;
  /// Test hook: B(u, u) = 0.
  bool disable_bilinear = false;
  double ladder_T_max = 8.0;
  std::size_t ladder_count = 16;
  double ladder_ratio = 0.5;

  GridSpec grid() const { return GridSpec::torus(resolution, length); }
  TimeGrid time_grid() const { return TimeGrid(T, steps); }
  /// Grid of the temporal exponent: steps + 1 equal cells on [0, T], one per
  /// time node.
  GridSpec time_cells() const { return GridSpec::line(0.0, T, steps + 1); }
  ExponentField exponent_field() const;
  /// Throws on inconsistent settings, including the thm2 exponent conditions
  /// p_minus > 2, q > 3 and 2/p(t) + 3/q < 1 at every sample.
  void validate() const;
};

// ---- Data -------------------------------------------------------------------

/// A (sin x cos y cos z, -cos x sin y cos z, 0) on a torus of side 2 pi,
/// rescaled to the grid's side length.
VectorField taylor_green(const GridSpec& grid, double amplitude);

/// Leray-projected random field with modes |m_a| <= band, normalised to max
/// magnitude `amplitude`. Deterministic in (seed, band, grid).
VectorField random_div_free(const GridSpec& grid, std::uint64_t seed, long band,
                            double amplitude);

VectorField initial_data(const InitialDataSpec& spec, const GridSpec& grid);

/// Force input: nothing, a tensor potential F (thm1, f = P div F), or a force
/// sampled on the time nodes (thm2).
using ForceInput = std::variant<std::monostate, TensorField, SpaceTimeField>;

ForceInput force_input(const ForceSpec& spec, Regime regime, const GridSpec& grid,
                       const TimeGrid& tg);

/// Leray projection of the spectral divergence of a tensor field.
VectorField projected_divergence(const TensorField& F, SpectralWorkspace& ws);

// ---- Terms of the integral equation --------------------------------------------

/// e0(t) = heat(t) u0 + Duhamel term of the force.
SpaceTimeField initial_term(const VectorField& u0, const ForceInput& force, const TimeGrid& tg,
                            SpectralWorkspace& ws);

/// B(u, u)(t) = int_0^t heat(t - s) P div(u (x) u)(s) ds by the trapezoid rule.
SpaceTimeField bilinear_term(const SpaceTimeField& u, SpectralWorkspace& ws);

// ---- Norms --------------------------------------------------------------------

/// mixed_norm(max_t |u(t, .)|, p, frak_p).
NormValue norm_E_thm1(const SpaceTimeField& u, const ExponentField& p, double frak_p = 3.0,
                      double tol = 1e-10);

/// Luxemburg norm in time of t -> ||u(t)||_{L^q}; p lives on the time cells
/// (node_count equal cells on [0, T]).
NormValue norm_E_thm2(const SpaceTimeField& u, const ExponentField& p, double q,
                      double tol = 1e-10);

/// Streaming evaluation of the regime norm, one frame at a time.
class RegimeNorm {
 public:
  RegimeNorm(Regime regime, ExponentField p, double q, double frak_p, double tol);
  static RegimeNorm from_config(const SolverConfig& cfg);

  NormValue operator()(const SpaceTimeField& u) const;

  class Accumulator {
   public:
    void push(const VectorField& frame);
    NormValue finish() const;

   private:
    friend class RegimeNorm;
    explicit Accumulator(const RegimeNorm& owner) : owner_(&owner) {}
    const RegimeNorm* owner_;
    std::vector<double> sup_;     // thm1: running max of |u|
    std::vector<double> trace_;   // thm2: L^q norm per frame
    GridSpec grid_;
  };
  Accumulator accumulator() const { return Accumulator(*this); }

  Regime regime() const noexcept { return regime_; }
  const ExponentField& exponent() const noexcept { return p_; }

 private:
  Regime regime_;
  ExponentField p_;
  double q_;
  double frak_p_;
  double tol_;
};

/// ||u(t)||_{L^q} per node.
std::vector<double> lq_trace(const SpaceTimeField& u, double q);

// ---- Constants and smallness ----------------------------------------------------

/// max over probes u of ||B(u, u)||_E / ||u||_E^2. Probes are constant in
/// time: probe 0 is a Taylor-Green mode, probe k >= 1 a random
/// divergence-free field seeded by (seed, k) with band 1 (k odd) or 2.
double estimate_bilinear_constant(const SolverConfig& cfg, std::size_t trials,
                                  std::uint64_t seed);

struct LadderEntry {
  double T = 0.0;
  double delta = 0.0;
  double c_b = 0.0;
  bool pass = false;
};

struct SmallnessVerdict {
  double delta = 0.0;
  double threshold = 0.0;
  bool pass = false;
  /// thm2: first passing candidate of the descending T ladder.
  std::optional<double> admissible_T;
  std::vector<LadderEntry> ladder;
};

/// delta = ||e0||_E, threshold = 1 / (4 c_b). For thm2 the ladder rescales
/// c_b by (1 + T) / (1 + T_cfg) and recomputes delta on [0, T].
SmallnessVerdict smallness_check(const SolverConfig& cfg, double c_b);

// ---- Fixed point ------------------------------------------------------------------

enum class SolveStatus { converged, max_iterations, diverged };

std::string to_string(SolveStatus s);

struct IterationRecord {
  std::size_t iter = 0;
  double e_norm = 0.0;     ///< ||u^n||_E
  double increment = 0.0;  ///< ||u^n - u^{n-1}||_E, with u^{-1} = 0
  double residual = 0.0;   ///< ||u^{n+1} - u^n||_E
};

struct SolverResult {
  SolveStatus status = SolveStatus::converged;
  /// Index n of the returned iterate u^n.
  std::size_t iterations = 0;
  std::vector<double> iterates_norms;
  std::vector<IterationRecord> history;
  SpaceTimeField final;
  double residual = 0.0;
  double contraction_estimate = 0.0;
  double c_b_estimate = 0.0;
  /// Factor applied to u0 and the force (1 unless smallness_target is set).
  double data_scale = 1.0;
  double final_norm = 0.0;
  double max_divergence = 0.0;
  SmallnessVerdict smallness;
  /// The configuration actually solved: data amplitudes include data_scale and
  /// c_b is pinned in cb_override.
  SolverConfig config;
};

/// u^0 = e0, u^{n+1} = e0 - B(u^n, u^n), stopping at the first n with
/// ||u^{n+1} - u^n||_E <= tol; u^n is returned. Throws when the smallness
/// gate fails or the iteration does not converge, unless override_smallness
/// is set, in which case the status is reported. NaN or Inf in an iterate
/// always throws with the iterate index.
SolverResult picard_solve(const SolverConfig& cfg);

/// ||u - e0 + B(u, u)||_E recomputed from scratch (smallness_target must be
/// unset; pass SolverResult::config).
double fixed_point_residual(const SpaceTimeField& u, const SolverConfig& cfg);

}  // namespace varns

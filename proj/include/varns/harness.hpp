#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "varns/exponents.hpp"
#include "varns/grid.hpp"
#include "varns/mild_solver.hpp"

namespace varns {

// ---- Corpora -----------------------------------------------------------------

/// smooth-decaying:  1-3 C-infinity bumps supported strictly inside the box.
/// plane-wave-mix:   1-4 cosines with integer wave numbers per active axis.
/// indicator-union:  union of 1-3 boxes with edges on a 1/16 lattice of the domain.
/// divergence-free:  random_div_free fields (3D torus only).
enum class CorpusKind { smooth_decaying, plane_wave_mix, indicator_union, divergence_free };

std::string to_string(CorpusKind k);
CorpusKind corpus_kind_from_string(const std::string& s);

/// Element `index` of a corpus, sampled on `grid`. Elements are defined
/// independently of the grid, so one index names the same function at every
/// resolution. The divergence-free kind yields the pointwise magnitude.
ScalarField corpus_element(CorpusKind kind, const GridSpec& grid, std::uint64_t seed,
                           std::size_t index);
VectorField div_free_element(const GridSpec& grid, std::uint64_t seed, std::size_t index);

std::vector<ScalarField> generate_corpus(CorpusKind kind, std::size_t size, const GridSpec& grid,
                                         std::uint64_t seed);
std::vector<VectorField> generate_div_free_corpus(std::size_t size, const GridSpec& grid,
                                                  std::uint64_t seed);

/// Largest |f| on the outermost layer of cells of a truncated grid.
double boundary_shell_max(const ScalarField& f);

// ---- Workers -------------------------------------------------------------------

/// VARNS_THREADS if set to a positive integer, otherwise the hardware count.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to `workers` threads. The first
/// exception (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

// ---- Campaigns -----------------------------------------------------------------

enum class CampaignTarget {
  holder,
  duality,
  maximal,
  riesz_potential,
  proposition1,
  embedding,
  radial_majorant,
  grad_heat,
  lemma_unit_norm,
};

std::string to_string(CampaignTarget t);
CampaignTarget campaign_target_from_string(const std::string& s);
const std::vector<CampaignTarget>& all_campaign_targets();

/// Plain statement of the estimate a target checks.
std::string citation(CampaignTarget t);

/// Per-element ratios and their meaning:
///   holder           ||fg||_p / (||f||_q ||g||_r), exponents q, r; p from 1/p = 1/q + 1/r
///   duality          pairing lower bound / ||f||_p
///   maximal          ||M f||_p / ||f||_p
///   riesz_potential  ||I f||_rho / ||f||_p with 1/rho = 1/p - sigma/n
///   proposition1     ||I f||_rho / max(||f||_p, ||f||_frak_p), rho = n p / (n - sigma frak_p)
///   embedding        ||f||_p1 / ||f||_p2 with p1 <= p2
///   radial_majorant  max |phi * f| / (||phi||_1 M f), phi a gaussian of element-dependent width
///   grad_heat        sup of |grad g_t(x)| (t^2 + |x|^4) over a log sweep in (t, |x|)
///   lemma_unit_norm  smallest C with min(T^{1/p-}, T^{1/p+}) / C <= ||1|| <= C max(...)
struct CampaignConfig {
  CampaignTarget target = CampaignTarget::holder;
  CorpusKind corpus = CorpusKind::smooth_decaying;
  std::size_t corpus_size = 16;
  std::uint64_t seed = 1;
  /// One grid per level, or a single base grid refined by doubling.
  std::vector<GridSpec> grids;
  std::size_t refinement_levels = 3;
  std::vector<ExponentSpec> exponent_specs;
  double bound = 4.0;
  /// Smallest acceptable ratio (used by duality).
  double lower_bound = 0.0;
  /// Largest relative change of the per-level maximum between levels.
  double drift_limit = 0.1;
  double sigma = 1.0;
  double frak_p = 1.5;
  int candidates = 16;
  double T_min = 0.125;
  double T_max = 8.0;
  double tol = 1e-10;

  std::vector<GridSpec> level_grids() const;
  void validate() const;
};

/// Default corpus, grids, exponents and bound for a target.
CampaignConfig default_campaign(CampaignTarget t);

/// Ratio of one element at one level; deterministic in (config, level, element).
double evaluate_element(const CampaignConfig& cfg, std::size_t level, std::size_t element);

/// The target's ratio for a given field (all targets except grad_heat and
/// lemma_unit_norm). `element` seeds the companion draws (second Hoelder
/// factor, duality candidates, majorant width).
double evaluate_ratio(const CampaignConfig& cfg, const ScalarField& f, std::size_t element);

struct Evaluation {
  std::size_t level = 0;
  std::size_t element = 0;
  double ratio = 0.0;
  bool operator==(const Evaluation&) const = default;
};

struct WorstCase {
  std::size_t level = 0;
  std::size_t element = 0;
  double ratio = 0.0;
  GridSpec grid;
  bool operator==(const WorstCase&) const = default;
};

struct InequalityReport {
  CampaignTarget target = CampaignTarget::holder;
  std::string citation;
  double bound = 0.0;
  double lower_bound = 0.0;
  double observed_max_ratio = 0.0;
  double observed_min_ratio = 0.0;
  std::vector<double> per_level_max;
  /// max over consecutive levels of |m_{l+1} - m_l| / m_l (0 with one level).
  double drift = 0.0;
  double drift_limit = 0.0;
  /// Every ratio within [lower_bound, bound].
  bool pass = false;
  bool drift_pass = false;
  WorstCase worst_case;
  std::vector<Evaluation> evaluations;
  CampaignConfig config;
};

/// Evaluates every element at every level on worker_count() threads. Ties in
/// the maximum go to the lowest (level, element).
InequalityReport run_campaign(const CampaignConfig& cfg);
InequalityReport run_campaign(const CampaignConfig& cfg, std::size_t workers);

/// Recomputes the worst case from the report's embedded configuration.
double replay_worst_case(const InequalityReport& report);

// ---- Serialization -------------------------------------------------------------

inline constexpr const char* report_schema = "varns-report/1";

nlohmann::json to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExponentSpec& e);
ExponentSpec exponent_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CampaignConfig& cfg);
/// Missing keys keep the target's defaults.
CampaignConfig campaign_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const InequalityReport& r);
InequalityReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolverResult& r);

/// Applies "a.b.c=value" to a JSON document; value is parsed as JSON when
/// possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& doc);

/// One row per evaluation: target,level,element,resolution,ratio.
void write_report_csv(const std::string& path, const InequalityReport& r);
/// One row per Picard iterate: iter,E_norm,increment_norm,residual.
void write_solver_csv(const std::string& path, const SolverResult& r);

}  // namespace varns

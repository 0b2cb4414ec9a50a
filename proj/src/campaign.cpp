#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "varns/error.hpp"
#include "varns/harness.hpp"
#include "varns/operators.hpp"
#include "varns/varlp.hpp"

namespace varns {

// ---- Workers -------------------------------------------------------------------

std::size_t worker_count() {
  if (const char* env = std::getenv("VARNS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---- Targets -------------------------------------------------------------------

std::string to_string(CampaignTarget t) {
  switch (t) {
    case CampaignTarget::holder: return "holder";
    case CampaignTarget::duality: return "duality";
    case CampaignTarget::maximal: return "maximal";
    case CampaignTarget::riesz_potential: return "riesz_potential";
    case CampaignTarget::proposition1: return "proposition1";
    case CampaignTarget::embedding: return "embedding";
    case CampaignTarget::radial_majorant: return "radial_majorant";
    case CampaignTarget::grad_heat: return "grad_heat";
    case CampaignTarget::lemma_unit_norm: return "lemma_unit_norm";
  }
  return "holder";
}

const std::vector<CampaignTarget>& all_campaign_targets() {
  static const std::vector<CampaignTarget> all{
      CampaignTarget::holder,          CampaignTarget::duality,
      CampaignTarget::maximal,         CampaignTarget::riesz_potential,
      CampaignTarget::proposition1,    CampaignTarget::embedding,
      CampaignTarget::radial_majorant, CampaignTarget::grad_heat,
      CampaignTarget::lemma_unit_norm};
  return all;
}

CampaignTarget campaign_target_from_string(const std::string& s) {
  for (auto t : all_campaign_targets())
    if (to_string(t) == s) return t;
  throw Error(ErrorKind::invalid_argument, "unknown campaign target '" + s + "'");
}

std::string citation(CampaignTarget t) {
  switch (t) {
    case CampaignTarget::holder:
      return "Hoelder inequality in variable Lebesgue spaces: ||fg||_p <= C ||f||_q ||g||_r, "
             "1/p = 1/q + 1/r";
    case CampaignTarget::duality:
      return "norm conjugate formula: ||f||_p is comparable to sup of int |f g| over "
             "||g||_p' <= 1";
    case CampaignTarget::maximal:
      return "Hardy-Littlewood maximal function bounded on L^p(.) for log-Hoelder p";
    case CampaignTarget::riesz_potential:
      return "Riesz potential bound ||I_sigma f||_q <= C ||f||_p, 1/q = 1/p - sigma/n";
    case CampaignTarget::proposition1:
      return "Riesz potential from the mixed space L^p(.) cap L^frak_p into L^rho(.), "
             "rho = n p / (n - sigma frak_p)";
    case CampaignTarget::embedding:
      return "embedding on bounded X: ||f||_p1 <= (1 + |X|) ||f||_p2 when p1 <= p2";
    case CampaignTarget::radial_majorant:
      return "radially decreasing kernels: |phi * f| <= ||phi||_1 M f";
    case CampaignTarget::grad_heat:
      return "heat kernel gradient majorant: |grad g_t(x)| <= C / (t^2 + |x|^4) in 3D";
    case CampaignTarget::lemma_unit_norm:
      return "norm of 1 on [0, T]: comparable to min/max of T^(1/p-) and T^(1/p+)";
  }
  return "";
}

// ---- Configuration ---------------------------------------------------------------

std::vector<GridSpec> CampaignConfig::level_grids() const {
  require(!grids.empty(), "campaign needs at least one grid");
  if (grids.size() > 1) {
    require(grids.size() == refinement_levels,
            "grid list length must equal refinement_levels");
    return grids;
  }
  std::vector<GridSpec> out;
  for (std::size_t l = 0; l < refinement_levels; ++l)
    out.push_back(grids.front().refined(std::size_t{1} << l));
  return out;
}

namespace {

std::size_t exponent_count(CampaignTarget t) {
  switch (t) {
    case CampaignTarget::holder:
    case CampaignTarget::embedding: return 2;
    case CampaignTarget::grad_heat:
    case CampaignTarget::radial_majorant: return 0;
    default: return 1;
  }
}

}  // namespace

void CampaignConfig::validate() const {
  require(corpus_size >= 1, "corpus_size must be at least 1");
  require(refinement_levels >= 1, "refinement_levels must be at least 1");
  require(bound > 0.0, "bound must be positive");
  require(drift_limit > 0.0, "drift_limit must be positive");
  require(tol > 0.0, "tolerance must be positive");
  require(exponent_specs.size() >= exponent_count(target),
          to_string(target) + " needs " + std::to_string(exponent_count(target)) +
              " exponent specs");
  require(T_min > 0.0 && T_max >= T_min, "bad T range");
  for (const auto& g : level_grids()) g.validate();
  if (target == CampaignTarget::radial_majorant)
    require(grids.front().topology == Topology::periodic, "radial_majorant needs a periodic grid");
  if (corpus == CorpusKind::divergence_free)
    require(grids.front().dimension == 3 && grids.front().topology == Topology::periodic,
            "divergence-free corpora need a 3D torus");
}

CampaignConfig default_campaign(CampaignTarget t) {
  CampaignConfig c;
  c.target = t;
  c.seed = 20240601;
  c.refinement_levels = 3;
  const GridSpec line = GridSpec::line(-4.0, 4.0, 256);
  const GridSpec box = GridSpec::box(-4.0, 4.0, 16);
  switch (t) {
    case CampaignTarget::holder:
      c.corpus_size = 200;
      c.grids = {line};
      c.exponent_specs = {{ExponentFamily::gaussian_bump, {3.0, 2.0}},
                          {ExponentFamily::radial_log, {4.0, 1.0}}};
      c.bound = 4.0;
      break;
    case CampaignTarget::duality:
      c.corpus_size = 64;
      c.grids = {line};
      c.exponent_specs = {{ExponentFamily::radial_log, {2.0, 1.0}}};
      c.bound = 2.0;
      c.lower_bound = 0.5;
      c.candidates = 8;
      break;
    case CampaignTarget::maximal:
      c.corpus_size = 8;
      c.grids = {box};
      c.exponent_specs = {{ExponentFamily::radial_log, {2.0, 1.0}}};
      c.bound = 10.0;
      break;
    case CampaignTarget::riesz_potential:
      c.corpus_size = 8;
      c.grids = {box};
      c.exponent_specs = {{ExponentFamily::gaussian_bump, {1.5, 0.6}}};
      c.bound = 10.0;
      break;
    case CampaignTarget::proposition1:
      // input exponent p/2 with frak_p = 3/2 and sigma = 1 lands in L^p
      c.corpus_size = 8;
      c.grids = {box};
      c.exponent_specs = {{ExponentFamily::gaussian_bump, {1.5, 0.5}}};
      c.bound = 10.0;
      c.sigma = 1.0;
      c.frak_p = 1.5;
      break;
    case CampaignTarget::embedding:
      c.corpus_size = 200;
      c.grids = {GridSpec::line(0.0, 2.0, 256)};
      c.exponent_specs = {{ExponentFamily::sinusoidal, {2.0, 0.5, 1.0, 2.0}},
                          {ExponentFamily::sinusoidal, {3.0, 1.0, 1.0, 2.0}}};
      c.bound = 3.0;  // 1 + |X|
      break;
    case CampaignTarget::radial_majorant:
      c.corpus_size = 8;
      c.corpus = CorpusKind::plane_wave_mix;
      c.grids = {GridSpec::torus(16, 8.0)};
      c.bound = 1.05;
      break;
    case CampaignTarget::grad_heat:
      c.corpus_size = 8;
      c.grids = {GridSpec::line(0.0, 1.0, 16)};
      c.bound = 1.0;
      break;
    case CampaignTarget::lemma_unit_norm:
      c.corpus_size = 20;
      c.grids = {GridSpec::line(0.0, 1.0, 512)};
      c.exponent_specs = {{ExponentFamily::sinusoidal, {2.0, 2.0, 1.0, 2.0}}};
      c.bound = 2.0;
      break;
  }
  return c;
}

// ---- Evaluation -------------------------------------------------------------------

namespace {

double norm_of(const ScalarField& f, const ExponentField& p, double tol) {
  return luxemburg_norm(f, p, std::min(tol, relative_tolerance(f, p, 1e-12))).value;
}

double nonzero(double v, const std::string& what) {
  require(v > 0.0, what + " vanished", ErrorKind::undefined_ratio);
  return v;
}

std::mt19937_64 companion_rng(const CampaignConfig& cfg, std::size_t element) {
  std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(element), std::uint64_t{0x5eed}};
  return std::mt19937_64(seq);
}

ScalarField periodic_gaussian(const GridSpec& g, double width) {
  std::vector<double> v(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto idx = g.unflatten(n);
    double r2 = 0.0;
    for (int a = 0; a < g.dimension; ++a) {
      const std::size_t i = std::min(idx[a], g.resolution[a] - idx[a]);
      const double d = static_cast<double>(i) * g.spacing(a);
      r2 += d * d;
    }
    v[n] = std::exp(-0.5 * r2 / (width * width));
  }
  return ScalarField(g, std::move(v));
}

double grad_heat_sweep(std::size_t per_decade, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::array<double, 3> dir{};
  double len = 0.0;
  while (len < 1e-6) {
    for (double& d : dir) d = gauss(rng);
    len = norm3(dir);
  }
  for (double& d : dir) d /= len;
  // four decades on each axis of [1e-3, 10]
  const std::size_t n = 4 * per_decade + 1;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 1e-3 * std::pow(10.0, 4.0 * i / (n - 1));
    for (std::size_t j = 0; j < n; ++j) {
      const double r = 1e-3 * std::pow(10.0, 4.0 * j / (n - 1));
      best = std::max(best, grad_heat_kernel_defect(t, {r * dir[0], r * dir[1], r * dir[2]}));
    }
  }
  return best;
}

}  // namespace

double evaluate_element(const CampaignConfig& cfg, std::size_t level, std::size_t element) {
  const auto grids = cfg.level_grids();
  require(level < grids.size(), "level out of range");
  require(element < cfg.corpus_size, "element out of range");
  const GridSpec& g = grids[level];
  const auto& specs = cfg.exponent_specs;

  switch (cfg.target) {
    case CampaignTarget::grad_heat: {
      auto rng = companion_rng(cfg, element);
      return grad_heat_sweep(std::size_t{8} << level, rng);
    }
    case CampaignTarget::lemma_unit_norm: {
      const double T = cfg.corpus_size == 1
                           ? cfg.T_min
                           : cfg.T_min * std::pow(cfg.T_max / cfg.T_min,
                                                  static_cast<double>(element) /
                                                      static_cast<double>(cfg.corpus_size - 1));
      const GridSpec tg = GridSpec::line(0.0, T, g.resolution[0]);
      const ExponentField p = make_exponent(specs.at(0), tg);
      const double one = unit_function_norm(T, p, 1e-13).value;
      const double a = std::pow(T, 1.0 / p.p_minus()), b = std::pow(T, 1.0 / p.p_plus());
      return std::max(one / std::max(a, b), std::min(a, b) / one);
    }
    default: break;
  }

  return evaluate_ratio(cfg, corpus_element(cfg.corpus, g, cfg.seed, element), element);
}

double evaluate_ratio(const CampaignConfig& cfg, const ScalarField& f, std::size_t element) {
  require(cfg.target != CampaignTarget::grad_heat && cfg.target != CampaignTarget::lemma_unit_norm,
          to_string(cfg.target) + " does not take a field");
  require(!f.is_zero(), "corpus element " + std::to_string(element) + " is zero",
          ErrorKind::undefined_ratio);
  const GridSpec& g = f.grid();
  const auto& specs = cfg.exponent_specs;

  switch (cfg.target) {
    case CampaignTarget::holder: {
      const ExponentField q = make_exponent(specs.at(0), g);
      const ExponentField r = make_exponent(specs.at(1), g);
      const ExponentField p = holder_exponent(q, r);
      // indicator corpora pair each set with itself (the equality case)
      const ScalarField h = cfg.corpus == CorpusKind::indicator_union
                                ? f
                                : corpus_element(cfg.corpus, g, companion_rng(cfg, element)(),
                                                 element);
      return holder_defect(f, h, p, q, r, cfg.tol);
    }
    case CampaignTarget::duality: {
      const ExponentField p = make_exponent(specs.at(0), g);
      const double lower = conjugate_pairing_lower_bound(f, p, cfg.candidates,
                                                         companion_rng(cfg, element)());
      return lower / nonzero(norm_of(f, p, cfg.tol), "norm of f");
    }
    case CampaignTarget::maximal: {
      const ExponentField p = make_exponent(specs.at(0), g);
      const auto radii = default_radius_ladder(g);
      const ScalarField m = maximal_function(f, radii);
      return norm_of(m, p, cfg.tol) / nonzero(norm_of(f, p, cfg.tol), "norm of f");
    }
    case CampaignTarget::riesz_potential: {
      const ExponentField p = make_exponent(specs.at(0), g);
      const ExponentField rho = riesz_target_exponent(p, cfg.sigma);
      const ScalarField potential = riesz_potential_direct(f, cfg.sigma);
      return norm_of(potential, rho, cfg.tol) / nonzero(norm_of(f, p, cfg.tol), "norm of f");
    }
    case CampaignTarget::proposition1: {
      const ExponentField p = make_exponent(specs.at(0), g);
      const ExponentField rho = mixed_riesz_target_exponent(p, cfg.sigma, cfg.frak_p);
      const ScalarField potential = riesz_potential_direct(f, cfg.sigma);
      const double denom =
          mixed_norm(f, p, cfg.frak_p, std::min(cfg.tol, relative_tolerance(f, p, 1e-12))).value;
      return norm_of(potential, rho, cfg.tol) / nonzero(denom, "mixed norm of f");
    }
    case CampaignTarget::embedding: {
      const ExponentField p1 = make_exponent(specs.at(0), g);
      const ExponentField p2 = make_exponent(specs.at(1), g);
      return embedding_defect(f, p1, p2, std::min(cfg.tol, relative_tolerance(f, p2, 1e-12)));
    }
    case CampaignTarget::radial_majorant: {
      auto rng = companion_rng(cfg, element);
      std::uniform_real_distribution<double> frac(0.03, 0.12);
      double min_extent = g.extents[0];
      for (int a = 1; a < g.dimension; ++a) min_extent = std::min(min_extent, g.extents[a]);
      const ScalarField phi = periodic_gaussian(g, frac(rng) * min_extent);
      return radial_majorant_defect(phi, f);
    }
    default: break;
  }
  throw Error(ErrorKind::invalid_argument, "unhandled campaign target");
}

// ---- Runner ---------------------------------------------------------------------

InequalityReport run_campaign(const CampaignConfig& cfg) {
  return run_campaign(cfg, worker_count());
}

InequalityReport run_campaign(const CampaignConfig& cfg, std::size_t workers) {
  cfg.validate();
  const auto grids = cfg.level_grids();
  const std::size_t levels = grids.size();
  const std::size_t total = levels * cfg.corpus_size;

  std::vector<double> ratios(total);
  parallel_for(total, workers, [&](std::size_t k) {
    const std::size_t level = k / cfg.corpus_size, element = k % cfg.corpus_size;
    try {
      ratios[k] = evaluate_element(cfg, level, element);
    } catch (const Error& e) {
      throw Error(e.kind(), "element " + std::to_string(element) + " at level " +
                                std::to_string(level) + ": " + e.what());
    }
  });

  InequalityReport r;
  r.target = cfg.target;
  r.citation = citation(cfg.target);
  r.bound = cfg.bound;
  r.lower_bound = cfg.lower_bound;
  r.drift_limit = cfg.drift_limit;
  r.config = cfg;
  r.per_level_max.assign(levels, -std::numeric_limits<double>::infinity());
  r.observed_max_ratio = -std::numeric_limits<double>::infinity();
  r.observed_min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t level = k / cfg.corpus_size, element = k % cfg.corpus_size;
    const double v = ratios[k];
    r.evaluations.push_back({level, element, v});
    r.per_level_max[level] = std::max(r.per_level_max[level], v);
    r.observed_min_ratio = std::min(r.observed_min_ratio, v);
    if (v > r.observed_max_ratio) {
      r.observed_max_ratio = v;
      r.worst_case = {level, element, v, grids[level]};
    }
  }
  for (std::size_t l = 1; l < levels; ++l)
    r.drift = std::max(r.drift, std::abs(r.per_level_max[l] - r.per_level_max[l - 1]) /
                                    std::abs(r.per_level_max[l - 1]));
  r.pass = r.observed_max_ratio <= r.bound && r.observed_min_ratio >= r.lower_bound;
  r.drift_pass = r.drift <= r.drift_limit;
  return r;
}

double replay_worst_case(const InequalityReport& report) {
  return evaluate_element(report.config, report.worst_case.level, report.worst_case.element);
}

}  // namespace varns

// varns command-line front end.
//
// Exit codes: 0 pass / converged, 1 bound violated / solver failure,
// 2 usage or I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "varns/error.hpp"
#include "varns/field_io.hpp"
#include "varns/harness.hpp"
#include "varns/varlp.hpp"

using namespace varns;
using nlohmann::json;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::solver:
    case ErrorKind::non_convergence:
    case ErrorKind::undefined_ratio:
      return exit_fail;
    default:
      return exit_usage;
  }
}

json load_document(const std::string& path, const std::vector<std::string>& overrides) {
  json doc = path.empty() ? json::object() : read_json_file(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return doc;
}

void emit(const json& doc, const std::string& out) {
  if (out.empty())
    std::cout << doc.dump(2) << '\n';
  else
    write_json_file(out, doc);
}

void summarize(const InequalityReport& r) {
  std::fprintf(stderr, "%-16s max %.6g (bound %g) min %.6g drift %.4f (limit %g)  %s\n",
               to_string(r.target).c_str(), r.observed_max_ratio, r.bound, r.observed_min_ratio,
               r.drift, r.drift_limit, r.pass && r.drift_pass ? "PASS" : "FAIL");
}

ScalarField load_scalar(const std::string& path) {
  const FieldFile file = read_field_file(path);
  if (file.components.size() == 1) return ScalarField(file.grid, file.components[0]);
  require(file.components.size() == 3, path + ": expected 1 or 3 components", ErrorKind::io);
  return VectorField(file.grid, {file.components[0], file.components[1], file.components[2]})
      .magnitude();
}

struct NormArgs {
  std::string field, exponent, out;
  std::optional<double> mixed;
  double tol = 1e-8;
};

int run_norm(const NormArgs& a) {
  const ScalarField f = load_scalar(a.field);
  const ExponentField p = make_exponent(exponent_spec_from_json(read_json_file(a.exponent)), f.grid());
  json doc = {{"schema", report_schema},
              {"kind", "norm"},
              {"p_minus", p.p_minus()},
              {"p_plus", p.p_plus()},
              {"modular", modular(f, p)}};
  const NormValue lux = luxemburg_norm(f, p, a.tol);
  doc["luxemburg"] = lux.value;
  doc["tolerance"] = lux.tolerance;
  if (a.mixed) {
    doc["frak_p"] = *a.mixed;
    doc["classical"] = classical_norm(f, *a.mixed);
    doc["mixed"] = mixed_norm(f, p, *a.mixed, a.tol).value;
  }
  emit(doc, a.out);
  return exit_pass;
}

struct RunArgs {
  std::string config, out, csv;
  std::vector<std::string> overrides;
  std::optional<std::size_t> threads;
};

std::size_t workers(const RunArgs& a) { return a.threads ? *a.threads : worker_count(); }

int run_verify(const RunArgs& a) {
  const json doc = load_document(a.config, a.overrides);
  std::vector<json> campaigns;
  if (doc.contains("campaigns"))
    for (const auto& c : doc.at("campaigns")) campaigns.push_back(c);
  else
    campaigns.push_back(doc);
  json reports = json::array();
  bool all = true;
  for (const auto& c : campaigns) {
    const InequalityReport r = run_campaign(campaign_config_from_json(c), workers(a));
    summarize(r);
    all = all && r.pass && r.drift_pass;
    reports.push_back(to_json(r));
  }
  emit({{"schema", report_schema}, {"kind", "verify"}, {"pass", all}, {"reports", reports}}, a.out);
  return all ? exit_pass : exit_fail;
}

int run_campaign_cmd(const RunArgs& a, const json& flags) {
  json doc = load_document(a.config, {});
  for (const auto& [key, value] : flags.items()) doc[key] = value;
  for (const auto& o : a.overrides) apply_override(doc, o);
  const InequalityReport r = run_campaign(campaign_config_from_json(doc), workers(a));
  summarize(r);
  emit(to_json(r), a.out);
  if (!a.csv.empty()) write_report_csv(a.csv, r);
  return r.pass && r.drift_pass ? exit_pass : exit_fail;
}

int run_solve(const RunArgs& a) {
  const SolverConfig cfg = solver_config_from_json(load_document(a.config, a.overrides));
  const SolverResult r = picard_solve(cfg);
  std::fprintf(stderr, "%s at iterate %zu, residual %.3e, contraction %.3f, E-norm %.6g\n",
               to_string(r.status).c_str(), r.iterations, r.residual, r.contraction_estimate,
               r.final_norm);
  emit(to_json(r), a.out);
  if (!a.csv.empty()) write_solver_csv(a.csv, r);
  return r.status == SolveStatus::converged ? exit_pass : exit_fail;
}

int run_replay(const std::string& path) {
  const InequalityReport r = report_from_json(read_json_file(path));
  const double ratio = replay_worst_case(r);
  const double diff = std::abs(ratio - r.worst_case.ratio);
  std::printf("worst case level %zu element %zu: reported %.17g replayed %.17g\n",
              r.worst_case.level, r.worst_case.element, r.worst_case.ratio, ratio);
  return diff <= 1e-9 ? exit_pass : exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-exponent Lebesgue norms, inequality campaigns and mild Navier-Stokes solves"};
  app.require_subcommand(1);

  NormArgs norm_args;
  auto* norm = app.add_subcommand("norm", "Modular, Luxemburg and mixed norms of a field file");
  norm->add_option("--field", norm_args.field, "Field file (.vlpf); vector fields use |u|")->required();
  norm->add_option("--exponent", norm_args.exponent, "Exponent JSON {family, params}")->required();
  norm->add_option("--mixed", norm_args.mixed, "Classical exponent of the mixed norm");
  norm->add_option("--tol", norm_args.tol, "Absolute bisection tolerance");
  norm->add_option("--out", norm_args.out, "Output JSON (stdout if omitted)");

  RunArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run one campaign or a {\"campaigns\": [...]} list");
  verify->add_option("--config", verify_args.config, "Campaign JSON")->required();
  verify->add_option("--out", verify_args.out, "Report JSON");
  verify->add_option("--set", verify_args.overrides, "key=value override (dotted keys)");
  verify->add_option("--threads", verify_args.threads, "Worker count");

  RunArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Picard iteration for the mild solution");
  solve->add_option("--config", solve_args.config, "Solver JSON (defaults if omitted)");
  solve->add_option("--out", solve_args.out, "Result JSON");
  solve->add_option("--csv", solve_args.csv, "Per-iterate CSV");
  solve->add_option("--set", solve_args.overrides, "key=value override (dotted keys)");

  RunArgs camp_args;
  json flags = json::object();
  std::string target, corpus;
  std::optional<std::size_t> size, levels;
  std::optional<std::uint64_t> seed;
  std::optional<double> bound;
  auto* camp = app.add_subcommand("campaign", "Run one inequality campaign");
  camp->add_option("--target", target, "Estimate to check")
      ->check(CLI::IsMember([] {
        std::vector<std::string> names;
        for (auto t : all_campaign_targets()) names.push_back(to_string(t));
        return names;
      }()));
  camp->add_option("--config", camp_args.config, "Campaign JSON; flags override its keys");
  camp->add_option("--corpus", corpus, "Corpus kind");
  camp->add_option("--size", size, "Corpus size");
  camp->add_option("--seed", seed, "Corpus seed");
  camp->add_option("--levels", levels, "Refinement levels");
  camp->add_option("--bound", bound, "Upper acceptance bound");
  camp->add_option("--set", camp_args.overrides, "key=value override (dotted keys)");
  camp->add_option("--threads", camp_args.threads, "Worker count");
  camp->add_option("--out", camp_args.out, "Report JSON");
  camp->add_option("--csv", camp_args.csv, "Per-evaluation CSV");

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "Recompute the worst case of a report");
  replay->add_option("report", replay_path, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_usage;
  }

  try {
    if (*norm) return run_norm(norm_args);
    if (*verify) return run_verify(verify_args);
    if (*solve) return run_solve(solve_args);
    if (*replay) return run_replay(replay_path);
    if (!target.empty()) flags["target"] = target;
    if (!corpus.empty()) flags["corpus"] = corpus;
    if (size) flags["corpus_size"] = *size;
    if (seed) flags["seed"] = *seed;
    if (levels) flags["refinement_levels"] = *levels;
    if (bound) flags["bound"] = *bound;
    return run_campaign_cmd(camp_args, flags);
  } catch (const Error& e) {
    std::fprintf(stderr, "varns: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "varns: %s\n", e.what());
    return exit_usage;
  }
}

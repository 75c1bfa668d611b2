// Command-line front end: hypothesis checks, evolution runs, resolvent
// computation, seminorm estimation, estimate verification and report
// aggregation. JSON configs in, CSV/JSON artifacts plus a manifest out.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "semigroup_lab/coefficients.hpp"
#include "semigroup_lab/grid.hpp"
#include "semigroup_lab/hypotheses.hpp"
#include "semigroup_lab/parallel.hpp"
#include "semigroup_lab/profiles.hpp"
#include "semigroup_lab/run_io.hpp"
#include "semigroup_lab/semigroup.hpp"
#include "semigroup_lab/seminorms.hpp"
#include "semigroup_lab/verify.hpp"

namespace sl = semigroup_lab;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file " + path);
  return json::parse(is);  // parse_error carries position info
}

sl::CoefficientField field_from_config(const json& cfg, bool strict_family) {
  const json& c = cfg.at("coefficients");
  sl::PolynomialFamilyParams params = sl::family_params_from_json(c);
  if (strict_family) return sl::polynomial_family(params);
  const bool drift = c.value("drift", true);
  return sl::CoefficientField::raw(params.d, params.m, params.k, params.p, params.r,
                                   params.gamma, params.Q0, params.B0, params.C0, drift);
}

sl::ProfileFn initial_from_config(const json& cfg, const GlobalOpts& g, int comps) {
  const json init = cfg.value("initial", json{{"type", "gaussian"}, {"sigma", 1.0}});
  const std::string type = init.at("type").get<std::string>();
  if (type == "gaussian")
    return sl::gaussian_profile(init.value("sigma", 1.0), init.value("amplitude", 1.0));
  if (type == "bump")
    return sl::bump_profile(init.value("radius", 2.0), init.value("amplitude", 1.0));
  if (type == "step")
    return sl::step_profile(init.value("width", 0.05), init.value("amplitude", 1.0));
  if (type == "random_smooth") {
    if (!g.seed)
      throw std::invalid_argument("initial type random_smooth requires --seed");
    return sl::random_smooth_profile(*g.seed, comps, init.value("sigma", 2.0));
  }
  throw std::invalid_argument("unknown initial type: " + type);
}

sl::EvolveConfig evolve_from_config(const json& cfg) {
  sl::EvolveConfig e;
  e.dt = cfg.at("dt").get<double>();
  e.t_final = cfg.value("t_final", 0.1);
  if (cfg.contains("snapshots"))
    e.snapshot_times = cfg.at("snapshots").get<std::vector<double>>();
  const std::string scheme = cfg.value("scheme", "imex");
  if (scheme == "imex")
    e.scheme = sl::Scheme::imex;
  else if (scheme == "explicit")
    e.scheme = sl::Scheme::explicit_euler;
  else
    throw std::invalid_argument("unknown scheme: " + scheme);
  e.cfl_safety = cfg.value("cfl_safety", 0.9);
  e.hypotheses_checked = cfg.value("hypotheses_checked", false);
  return e;
}

std::string snapshot_name(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshot_t%.6g.csv", t);
  return buf;
}

int run_check(const json& cfg, const GlobalOpts& g, sl::RunManifest& man) {
  const sl::PolynomialFamilyParams params =
      sl::family_params_from_json(cfg.at("coefficients"));
  const double nu = cfg.value("nu", 0.0);
  const std::string mode = cfg.value("mode", "closed_form");
  std::vector<int> levels = cfg.value("levels", std::vector<int>{1, 2, 3});

  bool all_pass = true;
  auto emit = [&](const sl::HypothesisReport& rep, const std::string& name) {
    const std::string path = g.out_dir + "/" + name;
    sl::write_json_atomic(path, rep.to_json());
    man.outputs.push_back(path);
    if (!rep.passed()) all_pass = false;
    std::cout << name << ": " << sl::to_string(rep.status)
              << (rep.witness.empty() ? "" : "  [" + rep.witness + "]") << "\n";
  };

  for (int level : levels) {
    if (mode == "closed_form" || mode == "both")
      emit(sl::check_family_closed_form(params, level),
           "report_closed_form_level" + std::to_string(level) + ".json");
    if (mode == "numeric" || mode == "both") {
      const sl::CoefficientField field = sl::polynomial_family(params);
      sl::ShellSampling sampling;
      if (cfg.contains("sampling")) {
        const json& s = cfg.at("sampling");
        sampling.radius = s.value("R", 50.0);
        sampling.shells = s.value("shells", 64);
        sampling.directions = s.value("directions", 8);
        sampling.seed = g.seed.value_or(0);
      }
      emit(sl::check_numeric(field, nu, level, sampling),
           "report_numeric_level" + std::to_string(level) + ".json");
    }
  }
  if (cfg.value("l1", false)) {
    const sl::CoefficientField field = sl::polynomial_family(params);
    emit(sl::check_L1_condition(field, nu), "report_l1.json");
  }
  return all_pass ? 0 : 1;
}

int run_evolve(const json& cfg, const GlobalOpts& g, sl::RunManifest& man) {
  const sl::CoefficientField field = field_from_config(cfg, false);
  const sl::Grid grid =
      sl::make_grid(field.dim(), cfg.at("L").get<double>(), cfg.at("n").get<int>());
  sl::EvolveConfig ecfg = evolve_from_config(cfg);
  if (ecfg.snapshot_times.empty()) ecfg.snapshot_times = {ecfg.t_final};

  const bool scalar = cfg.contains("nu") && !cfg.at("nu").is_null();
  const int comps = scalar ? 1 : field.comps();
  const sl::Field f0 = sl::sample(grid, comps, initial_from_config(cfg, g, comps));
  const sl::Trajectory traj =
      scalar ? sl::evolve_scalar_comparison(field, cfg.at("nu").get<double>(), f0, ecfg)
             : sl::evolve(field, f0, ecfg);

  json diag;
  diag["warning"] = traj.warning;
  diag["steps"] = traj.steps;
  diag["dt"] = traj.dt_used;
  diag["max_abs_final"] = traj.step_max_abs.empty() ? f0.max_abs() : traj.step_max_abs.back();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] == 0.0) continue;
    const std::string path = g.out_dir + "/" + snapshot_name(traj.times[i]);
    sl::write_field_csv(traj.snapshots[i], path);
    man.outputs.push_back(path);
  }
  const std::string dpath = g.out_dir + "/diagnostics.json";
  sl::write_json_atomic(dpath, diag);
  man.outputs.push_back(dpath);
  return 0;
}

int run_resolvent(const json& cfg, const GlobalOpts& g, sl::RunManifest& man) {
  const sl::CoefficientField field = field_from_config(cfg, false);
  const sl::Grid grid =
      sl::make_grid(field.dim(), cfg.at("L").get<double>(), cfg.at("n").get<int>());
  const sl::EvolveConfig ecfg = evolve_from_config(cfg);
  sl::QuadratureConfig qcfg;
  qcfg.s_max = cfg.value("s_max", 3.0);
  qcfg.panels = cfg.value("panels", 16);
  qcfg.points_per_panel = cfg.value("points_per_panel", 4);
  const double lambda = cfg.at("lambda").get<double>();
  const double nu = cfg.value("nu", 0.0);

  const sl::Field f0 =
      sl::sample(grid, field.comps(), initial_from_config(cfg, g, field.comps()));
  const sl::ResolventResult res = sl::resolvent(field, f0, lambda, qcfg, ecfg, nu);

  const std::string fpath = g.out_dir + "/resolvent.csv";
  sl::write_field_csv(res.u, fpath);
  man.outputs.push_back(fpath);
  json diag;
  diag["lambda"] = res.lambda;
  diag["h_nu"] = res.h_nu;
  diag["tail_bound"] = res.tail_bound;
  diag["tail_warning"] = res.tail_warning;
  const std::string dpath = g.out_dir + "/resolvent_diagnostics.json";
  sl::write_json_atomic(dpath, diag);
  man.outputs.push_back(dpath);
  return 0;
}

int run_seminorm(const json& cfg, const GlobalOpts& g, sl::RunManifest& man) {
  const sl::Field field = sl::read_field_csv(cfg.at("field_csv").get<std::string>());
  const std::string kind = cfg.at("kind").get<std::string>();
  const int margin = cfg.value("margin", field.grid().n_per_axis / 10);
  sl::SeminormEstimate est;
  if (kind == "sup" || kind == "ck") {
    est = sl::ck_norm(field, kind == "sup" ? 0 : cfg.value("k", 1), margin);
  } else if (kind == "holder") {
    if (!g.seed && field.grid().d == 2)
      throw std::invalid_argument("holder pair sampling requires --seed");
    est = sl::holder_seminorm(field, cfg.at("alpha").get<double>(),
                              cfg.value("window", 1.0),
                              cfg.value("pair_samples", 100000), margin,
                              g.seed.value_or(0));
  } else if (kind == "zygmund") {
    est = sl::zygmund_seminorm(field, cfg.value("window", 1.0), margin);
  } else if (kind == "lp") {
    est = sl::lp_norm(field, cfg.value("p", 2.0), margin);
  } else if (kind == "sobolev") {
    est = sl::sobolev_norm(field, cfg.value("k", 1), cfg.value("p", 2.0), margin);
  } else if (kind == "besov") {
    est = sl::besov_seminorm(field, cfg.at("s").get<double>(), cfg.value("p", 2.0),
                             cfg.value("h_samples", 64), cfg.value("window", 1.0), margin);
  } else {
    throw std::invalid_argument("unknown seminorm kind: " + kind);
  }
  const std::string path = g.out_dir + "/estimate.json";
  sl::write_json_atomic(path, est.to_json());
  man.outputs.push_back(path);
  std::cout << kind << " = " << est.value << "\n";
  return 0;
}

int run_verify(const json& cfg, const GlobalOpts& g, sl::RunManifest& man) {
  const sl::CoefficientField field = field_from_config(cfg, false);
  const std::string claim = cfg.at("claim").get<std::string>();
  const double nu = cfg.value("nu", 0.0);

  sl::VerifyConfig vc;
  vc.half_width = cfg.at("L").get<double>();
  vc.n_per_axis = cfg.at("n").get<int>();
  vc.margin_cells = cfg.value("margin", 0);
  vc.evolve = evolve_from_config(cfg);
  const std::vector<double> t_list =
      cfg.value("t_list", std::vector<double>{0.01, 0.05, 0.1});

  sl::VerificationRecord rec;
  if (claim.rfind("thm3.1-k", 0) == 0) {
    const int k = claim[8] - '0';
    const int l = claim[11] - '0';
    int certified = 0;
    const sl::PolynomialFamilyParams params =
        sl::family_params_from_json(cfg.at("coefficients"));
    for (int level = 1; level <= 3; ++level)
      if (sl::check_family_closed_form(params, level).passed()) certified = level;
    rec = sl::pointwise_check(field, nu, initial_from_config(cfg, g, field.comps()), k, l,
                              t_list, vc, certified);
  } else if (claim == "cossali-domination") {
    if (!g.seed) throw std::invalid_argument("cossali-domination requires --seed");
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < cfg.value("family_size", 5); ++i) seeds.push_back(*g.seed + i);
    rec = sl::domination_check(field, nu, seeds, t_list, vc, 1e-6, 1e-2);
  } else if (claim == "norminfty-bound") {
    rec = sl::supnorm_check(field, nu, initial_from_config(cfg, g, field.comps()), t_list,
                            vc, 1e-3);
  } else if (claim.rfind("aim-rate-k", 0) == 0) {
    const int k = claim[10] - '0';
    const int l = claim[13] - '0';
    std::vector<double> t_grid;
    for (int i = 0; i < 8; ++i)
      t_grid.push_back(1e-3 * std::pow(100.0, i / 7.0));
    const sl::RateFit fit =
        sl::decay_rate_fit(field, initial_from_config(cfg, g, field.comps()),
                           field.comps(), k, l, t_grid, vc, cfg.value("noise_floor", 1e-8));
    rec.claim_id = claim;
    rec.operator_fp = field.fingerprint();
    rec.fitted_rate = fit.rate;
    rec.rate_half_width = fit.half_width;
    const double expected = -0.5 * (l - k);
    rec.tolerance = cfg.value("rate_tolerance", 0.1);
    rec.status = std::abs(fit.rate - expected) <= rec.tolerance ? "pass" : "fail";
  } else if (claim == "schauder-elliptic") {
    if (!g.seed) throw std::invalid_argument("schauder-elliptic requires --seed");
    sl::QuadratureConfig qcfg;
    qcfg.s_max = cfg.value("s_max", 2.0);
    rec = sl::schauder_elliptic_check(field, nu, *g.seed, cfg.value("family_size", 5),
                                      cfg.at("lambda").get<double>(),
                                      cfg.value("alpha", 0.5), cfg.value("window", 1.0),
                                      qcfg, vc);
  } else if (claim == "lp-flow") {
    rec = sl::lp_checks(field, nu, initial_from_config(cfg, g, field.comps()),
                        cfg.value("p", 2.0), t_list, cfg.value("k", 0), cfg.value("l", 1),
                        vc);
  } else if (claim == "semigroup-law") {
    rec = sl::semigroup_property_check(field, initial_from_config(cfg, g, field.comps()),
                                       field.comps(), cfg.value("t", 0.05),
                                       cfg.value("s", 0.05), vc,
                                       cfg.at("single_run_error").get<double>());
  } else {
    throw std::invalid_argument("unknown claim id: " + claim);
  }

  const std::string jpath = g.out_dir + "/record_" + claim + ".json";
  sl::write_json_atomic(jpath, rec.to_json());
  man.outputs.push_back(jpath);
  if (!rec.rows.empty()) {
    const std::string cpath = g.out_dir + "/record_" + claim + ".csv";
    rec.write_rows_csv(cpath);
    man.outputs.push_back(cpath);
  }
  std::cout << claim << ": " << rec.status << "\n";
  return rec.passed() ? 0 : 1;
}

int run_report(const std::vector<std::string>& record_files, const GlobalOpts& g,
               sl::RunManifest& man) {
  if (record_files.empty()) throw std::invalid_argument("report needs record files");
  struct Entry {
    json j;
  };
  std::vector<Entry> entries;
  for (const auto& path : record_files) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open record " + path);
    entries.push_back({json::parse(is)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.j.value("claim", "") < b.j.value("claim", "");
  });

  std::map<std::string, std::string> fingerprints;
  bool any_fail = false;
  std::ostringstream csv, table;
  csv << "claim,status,constant,rate,rate_half_width,operator,grid,notes\n";
  table << "claim                         status        constant      rate\n";
  for (const Entry& e : entries) {
    const std::string claim = e.j.value("claim", "?");
    const std::string status = e.j.value("status", "?");
    const std::string fp = e.j.value("operator", "") + "|" + e.j.value("grid", "");
    if (fingerprints.count(claim) && fingerprints[claim] != fp) {
      std::cerr << "warning: claim " << claim << " appears with different fingerprints\n";
      csv << claim << ",warning-duplicate-fingerprint,,,,,,\n";
    }
    fingerprints[claim] = fp;
    if (status != "pass") any_fail = true;
    csv << claim << "," << status << "," << e.j.value("constant", 0.0) << ","
        << e.j.value("rate", 0.0) << "," << e.j.value("rate_half_width", 0.0) << ","
        << e.j.value("operator", "") << "," << e.j.value("grid", "") << ",\""
        << e.j.value("notes", "") << "\"\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-29s %-13s %-13.6g %-10.6g\n", claim.c_str(),
                  status.c_str(), e.j.value("constant", 0.0), e.j.value("rate", 0.0));
    table << line;
  }
  const std::string cpath = g.out_dir + "/summary.csv";
  sl::write_text_atomic(cpath, csv.str());
  man.outputs.push_back(cpath);
  std::cout << table.str();
  return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for vector-valued parabolic semigroups"};
  app.require_subcommand(1);

  GlobalOpts g;
  std::uint64_t seed_value = 0;
  bool seed_given = false;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--out", g.out_dir, "output directory");
  app.add_option("--threads", g.threads, "worker threads");
  app.add_option("--seed", seed_value, "RNG seed (required by sampling runs)")
      ->each([&](const std::string&) { seed_given = true; });

  auto* c_check = app.add_subcommand("check", "hypothesis certification");
  auto* c_evolve = app.add_subcommand("evolve", "Cauchy-Dirichlet evolution");
  auto* c_resolvent = app.add_subcommand("resolvent", "Laplace-quadrature resolvent");
  auto* c_seminorm = app.add_subcommand("seminorm", "norm/seminorm estimation");
  auto* c_verify = app.add_subcommand("verify", "estimate verification record");
  auto* c_report = app.add_subcommand("report", "aggregate verification records");
  std::vector<std::string> record_files;
  c_report->add_option("records", record_files, "record JSON files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sl::exit_code(sl::RunStatus::usage_error);
  }

  if (seed_given) g.seed = seed_value;
  if (g.threads <= 0) {
    if (const char* env = std::getenv("SEMIGROUP_LAB_THREADS")) g.threads = std::atoi(env);
  }
  sl::set_max_threads(g.threads > 0 ? g.threads : 1);

  sl::RunManifest man;
  man.tool_version = sl::tool_version();
  man.seed = g.seed.value_or(0);
  const auto t0 = std::chrono::steady_clock::now();

  int rc = 0;
  try {
    std::filesystem::create_directories(g.out_dir);
    json cfg;
    if (!c_report->parsed()) {
      if (g.config_path.empty()) throw std::invalid_argument("--config is required");
      cfg = load_config(g.config_path);
      man.config_digest = sl::config_digest(cfg);
    } else {
      json files = record_files;
      man.config_digest = sl::config_digest(files);
    }
    if (c_check->parsed()) {
      man.command = "check";
      rc = run_check(cfg, g, man);
    } else if (c_evolve->parsed()) {
      man.command = "evolve";
      rc = run_evolve(cfg, g, man);
    } else if (c_resolvent->parsed()) {
      man.command = "resolvent";
      rc = run_resolvent(cfg, g, man);
    } else if (c_seminorm->parsed()) {
      man.command = "seminorm";
      rc = run_seminorm(cfg, g, man);
    } else if (c_verify->parsed()) {
      man.command = "verify";
      rc = run_verify(cfg, g, man);
    } else if (c_report->parsed()) {
      man.command = "report";
      rc = run_report(record_files, g, man);
    }
  } catch (const json::parse_error& e) {
    man.error = std::string("config parse error: ") + e.what();
    rc = sl::exit_code(sl::RunStatus::usage_error);
  } catch (const sl::NumericalAbort& e) {
    man.error = std::string("numerical abort: ") + e.what();
    rc = sl::exit_code(sl::RunStatus::numerical_abort);
  } catch (const std::invalid_argument& e) {
    man.error = std::string("usage error: ") + e.what();
    rc = sl::exit_code(sl::RunStatus::usage_error);
  } catch (const std::exception& e) {
    man.error = e.what();
    rc = sl::exit_code(sl::RunStatus::numerical_abort);
  }

  man.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    sl::write_json_atomic(g.out_dir + "/manifest.json", man.to_json());
  } catch (const std::exception& e) {
    std::cerr << "failed to write manifest: " << e.what() << "\n";
  }
  if (!man.error.empty()) std::cerr << man.error << "\n";
  return rc;
}

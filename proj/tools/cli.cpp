#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "lancaster/orthopoly.hpp"
#include "lancaster/validation.hpp"

namespace lancaster::cli {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kValidation = 2;

struct FamilyFlags {
  std::string name;
  std::optional<double> alpha, a, beta, c;

  void attach(CLI::App* app) {
    app->add_option("--family", name, "gamma | poisson | nb | gamma-nb")->required();
    app->add_option("--alpha", alpha, "gamma shape");
    app->add_option("--a", a, "Poisson mean");
    app->add_option("--beta", beta, "negative binomial shape");
    app->add_option("--c", c, "negative binomial success parameter in (0, 1)");
  }

  FamilyParams build() const {
    Json j = {{"name", name}};
    if (alpha) j["alpha"] = *alpha;
    if (a) j["a"] = *a;
    if (beta) j["beta"] = *beta;
    if (c) j["c"] = *c;
    return parse_family(j);
  }
};

struct TruncFlags {
  int n_max;
  double tail_tol = 1e-12;

  explicit TruncFlags(int default_n_max) : n_max(default_n_max) {}

  void attach(CLI::App* app) {
    app->add_option("--n-max", n_max, "largest series order")->capture_default_str();
    app->add_option("--tail-tol", tail_tol, "series tail tolerance")->capture_default_str();
  }

  Truncation build() const {
    Truncation t{n_max, tail_tol};
    t.validate();
    return t;
  }
};

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

Json dispersion_json(const Dispersion& d) {
  return {{"mean", d.mean}, {"sd", d.sd}, {"max_abs_dev", d.max_abs_dev}};
}

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

unsigned resolve_threads(int flag_value) {
  if (flag_value > 0) return static_cast<unsigned>(flag_value);
  if (const char* env = std::getenv("LANCASTER_MT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw ConfigError("LANCASTER_MT_THREADS must be a positive integer");
    }
    return static_cast<unsigned>(v);
  }
  return 1;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lancaster bivariate laws, indicator covariances and FDP simulation", "lancaster_mt"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads_flag = 0;
  app.add_option("--threads", threads_flag, "worker threads (default: LANCASTER_MT_THREADS or 1)");

  // poly eval
  auto* poly = app.add_subcommand("poly", "orthogonal polynomials")->require_subcommand(1);
  auto* poly_eval = poly->add_subcommand("eval", "evaluate one polynomial");
  std::string poly_kind;
  int poly_n = 0;
  double poly_x = 0, poly_alpha = 0, poly_a = 1, poly_beta = 1, poly_c = 0.5;
  poly_eval->add_option("--kind", poly_kind, "laguerre (plain L_n^(alpha)) | charlier, meixner (orthonormal)")->required();
  poly_eval->add_option("--n", poly_n, "degree")->required();
  poly_eval->add_option("--x", poly_x, "point")->required();
  poly_eval->add_option("--alpha", poly_alpha, "Laguerre parameter (unnormalized L_n^(alpha))");
  poly_eval->add_option("--a", poly_a, "Charlier parameter");
  poly_eval->add_option("--beta", poly_beta, "Meixner beta");
  poly_eval->add_option("--c", poly_c, "Meixner c");

  // kernel eval
  auto* kernel = app.add_subcommand("kernel", "joint densities")->require_subcommand(1);
  auto* kernel_eval = kernel->add_subcommand("eval", "truncated joint density h(x, y)");
  FamilyFlags kernel_family;
  TruncFlags kernel_trunc(400);
  double kernel_rho = 0, kernel_x = 0, kernel_y = 0;
  kernel_family.attach(kernel_eval);
  kernel_trunc.attach(kernel_eval);
  kernel_eval->add_option("--rho", kernel_rho, "canonical correlation")->required();
  kernel_eval->add_option("--x", kernel_x, "first coordinate")->required();
  kernel_eval->add_option("--y", kernel_y, "second coordinate")->required();

  // kappa
  auto* kappa_cmd = app.add_subcommand("kappa", "indicator covariance with oracle cross-check");
  FamilyFlags kappa_family;
  TruncFlags kappa_trunc(400);
  double kappa_rho = 0, kappa_t = 0.05, kappa_tol = 1e-6;
  bool kappa_no_oracle = false, kappa_alpha_override = false;
  kappa_family.attach(kappa_cmd);
  kappa_trunc.attach(kappa_cmd);
  kappa_cmd->add_option("--rho", kappa_rho, "canonical correlation")->required();
  kappa_cmd->add_option("--t", kappa_t, "rejection threshold")->capture_default_str();
  kappa_cmd->add_option("--tolerance", kappa_tol, "allowed |series - oracle|")->capture_default_str();
  kappa_cmd->add_flag("--no-oracle", kappa_no_oracle, "skip the brute-force check");
  kappa_cmd->add_flag("--allow-alpha-above-one", kappa_alpha_override,
                      "permit gamma shapes above 1");

  // kappa-scan
  auto* scan = app.add_subcommand("kappa-scan", "kappa over a rho grid and the comparison constant");
  FamilyFlags scan_family;
  TruncFlags scan_trunc(5000);
  double scan_t = 0.05, scan_step = 0.05, scan_max = 0.95;
  bool scan_alpha_override = false;
  std::string scan_csv;
  scan_family.attach(scan);
  scan_trunc.attach(scan);
  scan->add_option("--t", scan_t, "rejection threshold")->capture_default_str();
  scan->add_option("--step", scan_step, "grid step")->capture_default_str();
  scan->add_option("--rho-max", scan_max, "largest rho (capped at the family limit)")
      ->capture_default_str();
  scan->add_option("--csv", scan_csv, "also write rho,kappa,ratio rows here");
  scan->add_flag("--allow-alpha-above-one", scan_alpha_override, "permit gamma shapes above 1");

  // simulate, slln-sweep, weak-dep, lyons
  std::string sim_config, sim_csv, sim_summary;
  auto* sim = app.add_subcommand("simulate", "replications of one design");
  sim->add_option("--config", sim_config, "JSON config")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", sim_csv, "CSV of m,replication,R,V,fdp,theta (default: stdout)");
  sim->add_option("--summary", sim_summary, "JSON summary file");

  std::string sweep_config, sweep_out;
  auto* sweep = app.add_subcommand("slln-sweep", "dispersion of R/m and V/m0 over growing m");
  sweep->add_option("--config", sweep_config, "JSON config")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "JSON summary file (default: stdout)");

  std::string weak_config, weak_out;
  auto* weak = app.add_subcommand("weak-dep", "empirical G0 and G1 curves");
  weak->add_option("--config", weak_config, "JSON config")->required()->check(CLI::ExistingFile);
  weak->add_option("--out", weak_out, "JSON file (default: stdout)");

  std::string lyons_config;
  auto* lyons = app.add_subcommand("lyons", "Lyons partial sums over a design sequence");
  lyons->add_option("--config", lyons_config, "JSON config")->required()->check(CLI::ExistingFile);

  // validate
  bool validate_quick = false;
  std::vector<int> validate_only;
  auto* validate = app.add_subcommand("validate", "run the acceptance checks");
  validate->add_flag("--quick", validate_quick, "smaller Monte Carlo sizes");
  validate->add_option("--only", validate_only, "check ids to run")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const unsigned threads = resolve_threads(threads_flag);

    if (poly_eval->parsed()) {
      PolyValue v;
      if (poly_kind == "laguerre") {
        v = laguerre(PolyOrder(poly_n), poly_alpha, poly_x);
      } else if (poly_kind == "charlier" || poly_kind == "meixner") {
        if (poly_x < 0 || std::floor(poly_x) != poly_x) {
          throw ConfigError("--x must be a non-negative integer for " + poly_kind);
        }
        const auto x = static_cast<Count>(poly_x);
        v = poly_kind == "charlier" ? charlier(PolyOrder(poly_n), poly_a, x)
                                    : meixner(PolyOrder(poly_n), poly_beta, poly_c, x);
      } else {
        throw ConfigError("--kind must be laguerre, charlier or meixner");
      }
      write_json(out, {{"kind", poly_kind},
                       {"n", poly_n},
                       {"x", poly_x},
                       {"value", v.value},
                       {"log_abs", v.log_form.log_abs},
                       {"sign", v.log_form.sign}});
      return kOk;
    }

    if (kernel_eval->parsed()) {
      const LancasterPair pair(kernel_family.build(), kernel_rho);
      const SeriesValue s = joint_density(pair, kernel_x, kernel_y, kernel_trunc.build());
      write_json(out, {{"family", family_to_json(pair.family())},
                       {"rho", kernel_rho},
                       {"x", kernel_x},
                       {"y", kernel_y},
                       {"density", s.value},
                       {"terms", s.terms},
                       {"last_term", s.last_term}});
      return kOk;
    }

    if (kappa_cmd->parsed()) {
      const LancasterPair pair(kappa_family.build(), kappa_rho);
      const Truncation trunc = kappa_trunc.build();
      const KappaResult k = kappa(pair, Probability(kappa_t), trunc, {kappa_alpha_override});
      Json j = {{"family", family_to_json(pair.family())},
                {"rho", kappa_rho},
                {"t", kappa_t},
                {"series", k.value},
                {"terms", k.n_used},
                {"tail_bound", k.tail_bound}};
      bool agree = true;
      if (!kappa_no_oracle) {
        const double oracle = kappa_oracle(pair, Probability(kappa_t), OracleSpec{1e-12, 1e-11, trunc});
        const double diff = std::abs(k.value - oracle);
        agree = diff <= kappa_tol;
        j["oracle"] = oracle;
        j["abs_diff"] = diff;
        j["agree"] = agree;
      }
      write_json(out, j);
      return agree ? kOk : kValidation;
    }

    if (scan->parsed()) {
      const FamilyParams family = scan_family.build();
      const auto grid = default_rho_grid(family, scan_step, scan_max);
      const ComparisonConstant cc = comparison_constant(family, Probability(scan_t), grid,
                                                        scan_trunc.build(), {scan_alpha_override});
      Json rows = Json::array();
      std::ostringstream csv;
      csv << "rho,kappa,ratio\n";
      char buf[128];
      for (std::size_t i = 0; i < cc.rho.size(); ++i) {
        rows.push_back({{"rho", cc.rho[i]}, {"kappa", cc.kappa[i]}, {"ratio", cc.ratio[i]}});
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", cc.rho[i], cc.kappa[i], cc.ratio[i]);
        csv << buf;
      }
      if (!scan_csv.empty()) write_file(scan_csv, csv.str());
      write_json(out, {{"family", family_to_json(family)},
                       {"t", scan_t},
                       {"comparison_constant", cc.value},
                       {"argmax_rho", cc.argmax_rho},
                       {"grid", rows}});
      return kOk;
    }

    if (sim->parsed()) {
      SimulateConfig c = parse_simulate(load_json(sim_config));
      c.run.threads = threads;
      const auto outcomes = simulate(c.design, c.replications, c.run, c.trunc);
      std::ostringstream csv;
      write_outcomes_csv(csv, outcomes);
      if (sim_csv.empty()) {
        out << csv.str();
      } else {
        write_file(sim_csv, csv.str());
      }
      if (!sim_summary.empty()) {
        std::vector<double> fdp, theta, r_rate;
        for (const auto& o : outcomes) {
          fdp.push_back(o.fdp);
          theta.push_back(o.theta);
          r_rate.push_back(static_cast<double>(o.R) / static_cast<double>(o.m));
        }
        const Json j = {{"design", design_to_json(c.design)},
                        {"replications", c.replications},
                        {"t", c.run.t},
                        {"storey_lambda", c.run.storey_lambda},
                        {"m0", c.design.m0()},
                        {"fdp", dispersion_json(dispersion(fdp))},
                        {"theta", dispersion_json(dispersion(theta))},
                        {"rejection_rate", dispersion_json(dispersion(r_rate))},
                        {"l1_norm_over_m2", l1_norm(c.design) / std::pow(static_cast<double>(c.design.m), 2)}};
        write_file(sim_summary, j.dump(2) + "\n");
      }
      return kOk;
    }

    if (sweep->parsed()) {
      SweepConfig c = parse_sweep(load_json(sweep_config), false);
      c.run.threads = threads;
      const SllnTrace tr = slln_sweep(c.tmpl, c.m_grid, c.replications, c.seed, c.run, c.trunc);
      Json rows = Json::array();
      for (const auto& r : tr.rows) {
        rows.push_back({{"m", r.m},
                        {"m0", r.m0},
                        {"block_size", r.block_size},
                        {"rejection_rate", dispersion_json(r.rejection_rate)},
                        {"false_rejection_rate", dispersion_json(r.false_rate)}});
      }
      const Json j = {{"t", c.run.t},
                      {"replications", c.replications},
                      {"seed", c.seed},
                      {"rows", rows},
                      {"slope_rejection_sd", nullable(tr.slope_rejection)},
                      {"slope_false_rejection_sd", nullable(tr.slope_false)}};
      if (sweep_out.empty()) {
        write_json(out, j);
      } else {
        write_file(sweep_out, j.dump(2) + "\n");
      }
      return kOk;
    }

    if (weak->parsed()) {
      const SweepConfig c = parse_sweep(load_json(weak_config), true);
      const auto curves = weak_dependence_curves(c.tmpl, c.m_grid, c.t_grid, c.replications, c.seed,
                                                 threads, c.trunc);
      Json all = Json::array();
      for (const auto& cv : curves) {
        Json pts = Json::array();
        for (const auto& p : cv.points) {
          Json pt = {{"t", p.t}};
          if (cv.m0 > 0) pt["g0"] = dispersion_json(p.g0), pt["g0_band"] = p.g0_band;
          if (cv.m0 < cv.m) pt["g1"] = dispersion_json(p.g1), pt["g1_band"] = p.g1_band;
          pts.push_back(pt);
        }
        all.push_back({{"m", cv.m}, {"m0", cv.m0}, {"points", pts}});
      }
      const Json j = {{"replications", c.replications}, {"seed", c.seed}, {"curves", all}};
      if (weak_out.empty()) {
        write_json(out, j);
      } else {
        write_file(weak_out, j.dump(2) + "\n");
      }
      return kOk;
    }

    if (lyons->parsed()) {
      const LyonsConfig c = parse_lyons(load_json(lyons_config));
      const Probability t(c.t);
      const double extra[] = {c.tmpl.rho};
      const bool e2 = c.tmpl.rho > 0.0 && c.tmpl.rho < 1.0;
      const double C = e2 ? comparison_constant_for(c.tmpl.family, t, extra, c.trunc) : 0.0;
      std::vector<double> varseq(static_cast<std::size_t>(c.k_max));
      for (Count n = 1; n <= c.k_max; ++n) {
        varseq[n - 1] = variance_bound(c.tmpl.instantiate(n, 0), t, C).value;
      }
      const auto sums = lyons_partial_sums(varseq);
      Json decades = Json::array();
      for (Count k = 1; k <= c.k_max; k *= 10) {
        decades.push_back({{"K", k}, {"S_K", sums[k - 1]}});
      }
      Json j = {{"t", c.t},
                {"comparison_constant", C},
                {"k_max", c.k_max},
                {"S_K", sums.back()},
                {"decades", decades},
                {"last_decade_growth",
                 (sums.back() - sums[c.k_max / 10 - 1]) / sums.back()}};
      // E|Q_N|^2 <= A N^-delta with delta = 1 - gamma for b = ceil(N^gamma)
      double delta = 0.0;
      if (c.tmpl.block.kind == BlockRule::Kind::fixed) delta = 1.0;
      if (c.tmpl.block.kind == BlockRule::Kind::power) delta = 1.0 - c.tmpl.block.exponent;
      if (delta > 0.0) {
        double A = 0.0;
        for (Count n = 1; n <= c.k_max; ++n) {
          A = std::max(A, varseq[n - 1] * std::pow(static_cast<double>(n), delta));
        }
        j["delta"] = delta;
        j["scale"] = A;
        j["majorant"] = lyons_majorant(A, delta);
      } else {
        j["delta"] = nullptr;
        j["majorant"] = nullptr;
      }
      write_json(out, j);
      return kOk;
    }

    if (validate->parsed()) {
      ValidationOptions opts;
      opts.quick = validate_quick;
      opts.threads = threads;
      opts.only = validate_only;
      const auto results = run_validation(opts, out);
      const bool ok = all_passed(results);
      out << (ok ? "all checks passed" : "some checks failed") << '\n';
      return ok ? kOk : kValidation;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace lancaster::cli

#include "lancaster/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include "lancaster/covariance.hpp"
#include "lancaster/mtp.hpp"
#include "lancaster/orthopoly.hpp"
#include "lancaster/quadrature.hpp"
#include "lancaster/sampler.hpp"

namespace lancaster {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Outcome {
  bool passed;
  std::string detail;
};

// --- 1: orthonormality ---------------------------------------------------------------

constexpr int kOrthoDegree = 15;

// Raw inner products of L_n^(alpha-1) under Gamma(alpha), scaled by the norms
// Gamma(alpha+n) / (Gamma(alpha) n!).
double gamma_orthonormality_error(double alpha) {
  const GammaParams gp(alpha);
  const quad::Options opts{1e-13, 1e-12, 4000};
  double worst = 0.0;
  for (int n = 0; n <= kOrthoDegree; ++n) {
    for (int m = 0; m <= n; ++m) {
      auto integrand = [&](double x) {
        return gamma_pdf(x, gp) * laguerre(PolyOrder(n), alpha - 1.0, x).value *
               laguerre(PolyOrder(m), alpha - 1.0, x).value;
      };
      const double raw = quad::integrate_power_singular(integrand, alpha, 250.0, opts).value;
      const double log_norm = 0.5 * (log_gamma(alpha + n) - log_gamma(alpha) - log_gamma(n + 1.0)) +
                              0.5 * (log_gamma(alpha + m) - log_gamma(alpha) - log_gamma(m + 1.0));
      const double scaled = raw / std::exp(log_norm);
      worst = std::max(worst, std::abs(scaled - (n == m ? 1.0 : 0.0)));
    }
  }
  return worst;
}

// Gram matrix of the orthonormal rows under the pmf, summed until the
// weighted squares drop below 1e-24 past the mode.
template <typename MakeRow>
double discrete_orthonormality_error(const MarginalLaw& law, MakeRow make_row) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(kOrthoDegree + 1, kOrthoDegree + 1);
  Eigen::VectorXd v(kOrthoDegree + 1);
  int quiet = 0;
  double previous_pmf = 0.0;
  for (Count x = 0; x < 20000 && quiet < 5; ++x) {
    auto row = make_row(x);
    const double log_f = law.log_pdf(static_cast<double>(x));
    double largest = 0.0;
    for (int n = 0; n <= kOrthoDegree; ++n) {
      const LogValue p = row(n);
      v(n) = p.is_zero() ? 0.0 : p.sign * std::exp(p.log_abs + 0.5 * log_f);
      largest = std::max(largest, v(n) * v(n));
    }
    gram.noalias() += v * v.transpose();
    const double pmf = std::exp(log_f);
    const bool past_mode = pmf < previous_pmf;
    previous_pmf = pmf;
    quiet = past_mode && largest < 1e-24 ? quiet + 1 : 0;
  }
  return (gram - Eigen::MatrixXd::Identity(kOrthoDegree + 1, kOrthoDegree + 1))
      .cwiseAbs()
      .maxCoeff();
}

Outcome check_orthonormality() {
  double worst = 0.0;
  for (const double alpha : {0.5, 1.0, 2.5}) worst = std::max(worst, gamma_orthonormality_error(alpha));
  for (const double a : {0.5, 2.0, 5.0}) {
    const MarginalLaw law(PoissonParams{a});
    worst = std::max(worst, discrete_orthonormality_error(law, [&](Count x) { return CharlierRow(a, x); }));
  }
  for (const auto& [beta, c] : {std::pair{1.0, 0.3}, std::pair{2.0, 0.5}, std::pair{3.5, 0.7}}) {
    const MarginalLaw law(NBParams{beta, c});
    worst = std::max(worst,
                     discrete_orthonormality_error(law, [&](Count x) { return MeixnerRow(beta, c, x); }));
  }
  return {worst <= 1e-7, "max |<phi_n, phi_m> - delta| = " + fmt("%.2e", worst) +
                             " over n, m <= 15, 9 parameter points"};
}

// --- 2: partial integral ------------------------------------------------------------------

Outcome check_partial_integral() {
  const quad::Options opts{0.0, 1e-13, 4000};
  double worst = 0.0;
  for (const double alpha : {0.5, 1.0}) {
    for (const double y : {0.5, 1.0, 5.0}) {
      for (int n = 1; n <= 20; ++n) {
        auto integrand = [&](double x) {
          return std::pow(x, alpha) * std::exp(-x) * laguerre(PolyOrder(n), alpha, x).value;
        };
        const double q = quad::integrate(integrand, 0.0, y, opts).value;
        const double closed = laguerre_partial_integral(n, alpha, y);
        worst = std::max(worst, std::abs(closed - q) / std::abs(q));
      }
    }
  }
  return {worst <= 1e-9, "max relative error " + fmt("%.2e", worst) +
                             " for n <= 20, alpha in {0.5, 1}, y in {0.5, 1, 5}"};
}

// --- 3: kappa vs oracle -----------------------------------------------------------------------

struct KappaPoint {
  FamilyParams family;
  double rho;
  double t;
};

std::vector<KappaPoint> kappa_panel() {
  auto gamma = [](double a) { return FamilyParams{GammaFamily{GammaParams(a)}}; };
  auto poisson = [](double a) { return FamilyParams{PoissonFamily{PoissonParams(a)}}; };
  auto nb = [](double b, double c) { return FamilyParams{NegBinomialFamily{NBParams(b, c)}}; };
  auto gnb = [](double a, double b, double c) {
    return FamilyParams{GammaNBFamily{GammaParams(a), NBParams(b, c)}};
  };
  return {{gamma(1.0), 0.7, 0.2},         {gamma(1.0), 0.5, 0.05},       {gamma(0.5), 0.3, 0.05},
          {gamma(0.25), 0.6, 0.1},        {poisson(2.0), 0.4, 0.05},     {poisson(0.5), 0.8, 0.05},
          {poisson(5.0), 0.3, 0.1},       {nb(2.0, 0.5), 0.25, 0.05},    {nb(1.0, 0.3), 0.6, 0.05},
          {nb(2.0, 0.5), 0.8, 0.1},       {gnb(1.0, 2.0, 0.25), 0.4, 0.05},
          {gnb(2.0, 2.0, 0.25), 0.3, 0.05}, {gnb(0.5, 1.0, 0.5), 0.6, 0.1}};
}

Outcome check_kappa_oracle() {
  bool ok = true;
  double worst = 0.0;
  for (const auto& pt : kappa_panel()) {
    const LancasterPair pair(pt.family, pt.rho);
    const double series = kappa(pair, Probability(pt.t)).value;
    const double oracle = kappa_oracle(pair, Probability(pt.t));
    const double diff = std::abs(series - oracle);
    const double tol = std::holds_alternative<GammaNBFamily>(pt.family) ? 1e-5 : 1e-6;
    ok = ok && diff <= tol;
    worst = std::max(worst, diff);
  }
  return {ok, "max |series - oracle| = " + fmt("%.2e", worst) + " over 13 points, 4 families"};
}

// --- 4: comparison constant --------------------------------------------------------------------

Outcome check_comparison_constant() {
  const Truncation trunc{5000, 1e-12};
  const Probability t(0.05);
  std::vector<FamilyParams> families;
  for (const double a : {0.25, 0.5, 1.0}) families.push_back(GammaFamily{GammaParams(a)});
  for (const double a : {0.5, 2.0, 5.0}) families.push_back(PoissonFamily{PoissonParams(a)});
  families.push_back(NegBinomialFamily{NBParams(1.0, 0.3)});
  families.push_back(NegBinomialFamily{NBParams(2.0, 0.5)});
  families.push_back(GammaNBFamily{GammaParams(1.0), NBParams(2.0, 0.25)});
  families.push_back(GammaNBFamily{GammaParams(0.5), NBParams(1.0, 0.5)});
  bool ok = true;
  double worst = 0.0;
  double largest = 0.0;
  double interior = 0;
  for (const auto& f : families) {
    const auto coarse = default_rho_grid(f, 0.05);
    const auto fine = default_rho_grid(f, 0.025);
    const double c1 = comparison_constant(f, t, coarse, trunc).value;
    const ComparisonConstant fine_c = comparison_constant(f, t, fine, trunc);
    const double c2 = fine_c.value;
    if (fine_c.argmax_rho < fine.back()) ++interior;
    const double change = std::abs(c2 - c1) / c1;
    ok = ok && std::isfinite(c1) && std::isfinite(c2) && change < 0.01;
    worst = std::max(worst, change);
    largest = std::max(largest, c2);
  }
  return {ok, "max relative change under 2x refinement " + fmt("%.2e", worst) +
                  ", largest C = " + fmt("%.4f", largest) + " over 10 parameter sets, " +
                  fmt("%.0f", interior) + " with an interior argmax"};
}

// --- 5: Tricomi expansion -----------------------------------------------------------------------

Outcome check_tricomi() {
  bool ok = true;
  std::string detail;
  for (const auto& [a, g] : {std::pair{1.0, 0.5}, std::pair{0.5, 0.0}}) {
    std::vector<double> ks;
    for (double z = 20.0; z <= 200.0 + 1e-9; z += 10.0) {
      const double exact = gamma_ratio_exact(z, a, g);
      const double rel = std::abs(gamma_ratio_tricomi(z, a, g) - exact) / exact;
      ks.push_back(rel * z * z);
    }
    std::vector<double> sorted = ks;
    std::sort(sorted.begin(), sorted.end());
    const double fitted = sorted[sorted.size() / 2];
    double spread = 0.0;
    for (const double k : ks) spread = std::max(spread, std::abs(k / fitted - 1.0));
    ok = ok && fitted > 0.0 && spread <= 0.2;
    detail += "(alpha " + fmt("%g", a) + ", gamma " + fmt("%g", g) + ") K = " + fmt("%.4f", fitted) +
              " spread " + fmt("%.1f%%", 100.0 * spread) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail + " over z in [20, 200]"};
}

// --- 6: sampler vs kernel ------------------------------------------------------------------------

struct GateRow {
  std::string name;
  double z;
};

GateRow gate(const std::string& name, const FamilyParams& family, double rho, double t, long n,
             std::uint64_t seed, const std::function<std::pair<double, double>(Rng&)>& draw) {
  const MarginalLaw lx = marginal_law(family, Coordinate::first);
  const MarginalLaw ly = marginal_law(family, Coordinate::second);
  const double ax = lx.upper_threshold(Probability(t));
  const double ay = ly.upper_threshold(Probability(t));
  Rng rng = stream(seed, 0, 0);
  std::vector<unsigned char> I(n), J(n);
  double si = 0.0, sj = 0.0;
  for (long k = 0; k < n; ++k) {
    const auto [x, y] = draw(rng);
    I[k] = lx.discrete() ? x > ax : x >= ax;
    J[k] = ly.discrete() ? y > ay : y >= ay;
    si += I[k];
    sj += J[k];
  }
  const double p = si / n, q = sj / n;
  double s = 0.0, s2 = 0.0;
  for (long k = 0; k < n; ++k) {
    const double z = (I[k] - p) * (J[k] - q);
    s += z;
    s2 += z * z;
  }
  const double cov = s / n;
  const double se = std::sqrt((s2 / n - cov * cov) / n);
  const double k = kappa(LancasterPair(family, rho), Probability(t)).value;
  return {name, (cov - k) / se};
}

// Coordinates 0 and 2 of a three-coordinate block, so the block driver is exercised.
std::function<std::pair<double, double>(Rng&)> block_pair(const FamilyParams& family, double rho) {
  auto sampler = std::make_shared<VectorSampler>(DependenceDesign{
      .m = 3, .block_size = 3, .rho = rho, .family = family, .pi0 = 1.0, .alt = {}, .seed = 99});
  auto counter = std::make_shared<std::uint64_t>(0);
  return [sampler, counter](Rng&) {
    const StatisticVector v = (*sampler)((*counter)++);
    return std::pair{v.values[0], v.values[2]};
  };
}

Outcome check_sampler_gate(bool quick) {
  const long n = quick ? 100000 : 1000000;
  const double t = 0.05;
  const GammaParams g1(1.0), g05(0.5), g2(2.0);
  const PoissonParams p2(2.0);
  const NBParams nb(2.0, 0.5), nb25(2.0, 0.25);
  const auto as_real = [](auto xy) { return std::pair<double, double>(xy.first, xy.second); };
  std::vector<GateRow> rows;
  rows.push_back(gate("gamma kibble (1, 0.5)", GammaFamily{g1}, 0.5, t, n, 11,
                      [&](Rng& r) { return sample_pair_gamma(g1, 0.5, r); }));
  rows.push_back(gate("gamma kibble (0.5, 0.3)", GammaFamily{g05}, 0.3, t, n, 12,
                      [&](Rng& r) { return sample_pair_gamma(g05, 0.3, r); }));
  rows.push_back(gate("gamma block (1, 0.5)", GammaFamily{g1}, 0.5, t, n, 0,
                      block_pair(GammaFamily{g1}, 0.5)));
  rows.push_back(gate("poisson shock (2, 0.4)", PoissonFamily{p2}, 0.4, t, n, 13,
                      [&](Rng& r) { return as_real(sample_pair_poisson(p2, 0.4, r)); }));
  rows.push_back(gate("poisson block (2, 0.4)", PoissonFamily{p2}, 0.4, t, n, 0,
                      block_pair(PoissonFamily{p2}, 0.4)));
  rows.push_back(gate("nb kibble (2, 0.5, 0.25)", NegBinomialFamily{nb}, 0.25, t, n, 14,
                      [&](Rng& r) { return as_real(sample_pair_nb(nb, 0.25, r)); }));
  rows.push_back(gate("nb block (2, 0.5, 0.4)", NegBinomialFamily{nb}, 0.4, t, n, 0,
                      block_pair(NegBinomialFamily{nb}, 0.4)));
  {
    const GridPairSampler grid(LancasterPair(NegBinomialFamily{nb}, 0.7));
    rows.push_back(gate("nb grid (2, 0.5, 0.7)", NegBinomialFamily{nb}, 0.7, t, n, 15,
                        [&](Rng& r) { return grid(r); }));
  }
  {
    const GridPairSampler grid(LancasterPair(PoissonFamily{p2}, 0.4));
    rows.push_back(gate("poisson grid (2, 0.4)", PoissonFamily{p2}, 0.4, t, n, 16,
                        [&](Rng& r) { return grid(r); }));
  }
  {
    const GammaNBFamily f{g1, nb25};
    const GridPairSampler grid(LancasterPair(f, 0.3));
    rows.push_back(gate("gamma-nb grid (1, 2, 0.25, 0.3)", f, 0.3, t, n, 17,
                        [&](Rng& r) { return grid(r); }));
  }
  {
    const GammaNBFamily f{g2, nb25};
    rows.push_back(gate("gamma-nb mixture (2, 2, 0.25, 0.3)", f, 0.3, t, n, 18,
                        [&](Rng& r) { return sample_pair_gamma_nb(g2, nb25, 0.3, r); }));
  }
  bool ok = true;
  double worst = 0.0;
  std::string detail;
  for (const auto& row : rows) {
    ok = ok && std::abs(row.z) <= 3.0;
    worst = std::max(worst, std::abs(row.z));
    detail += row.name + " z=" + fmt("%+.2f", row.z) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, std::to_string(rows.size()) + " paths, " + std::to_string(n) + " pairs each, max |z| " +
                  fmt("%.2f", worst) + " [" + detail + "]"};
}

// --- 7: SLLN sweep ---------------------------------------------------------------------------------

DesignTemplate acceptance_template(double rho, BlockRule rule) {
  return {GammaFamily{GammaParams(1.0)}, rho, 0.8, Alternative{20.0, 0.0}, rule, NullLayout::random};
}

Outcome check_slln(bool quick, unsigned threads) {
  const std::vector<Count> grid = quick ? std::vector<Count>{1000, 4000, 16000}
                                        : std::vector<Count>{1000, 10000, 100000};
  const Count reps = quick ? 100 : 200;
  const RunOptions opts{0.05, 0.5, threads};
  const auto good = slln_sweep(acceptance_template(0.5, {BlockRule::Kind::power, 1, 0.5}), grid, reps,
                               2024, opts);
  const auto bad = slln_sweep(acceptance_template(0.8, {BlockRule::Kind::full, 1, 0.5}), grid, reps,
                              2025, opts);
  auto decreasing = [](const SllnTrace& tr, bool false_rate) {
    for (std::size_t k = 1; k < tr.rows.size(); ++k) {
      const auto& a = false_rate ? tr.rows[k - 1].false_rate : tr.rows[k - 1].rejection_rate;
      const auto& b = false_rate ? tr.rows[k].false_rate : tr.rows[k].rejection_rate;
      if (!(b.sd < a.sd)) return false;
    }
    return true;
  };
  double plateau = 1.0;
  for (const auto& r : bad.rows) plateau = std::min({plateau, r.rejection_rate.sd, r.false_rate.sd});
  const bool good_ok = decreasing(good, false) && decreasing(good, true) &&
                       good.slope_rejection <= -0.2 && good.slope_false <= -0.2;
  const bool bad_ok = plateau > 0.01 && std::abs(bad.slope_rejection) < 0.1 &&
                      std::abs(bad.slope_false) < 0.1;
  return {good_ok && bad_ok,
          "b=ceil(sqrt m): sd slopes R " + fmt("%.3f", good.slope_rejection) + ", V " +
              fmt("%.3f", good.slope_false) + " (sd at largest m " +
              fmt("%.4f", good.rows.back().rejection_rate.sd) + "); b=m control: slopes " +
              fmt("%.3f", bad.slope_rejection) + ", " + fmt("%.3f", bad.slope_false) + ", min sd " +
              fmt("%.4f", plateau)};
}

// --- 8: theta consistency ----------------------------------------------------------------------------

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome check_theta(bool quick, unsigned threads) {
  const Count reps = quick ? 100 : 200;
  const auto tmpl = acceptance_template(0.4, {BlockRule::Kind::fixed, 10, 0.5});
  std::vector<double> medians;
  for (const Count m : {Count{1000}, Count{10000}}) {
    const auto outcomes = simulate(tmpl.instantiate(m, 31337), reps, RunOptions{0.05, 0.5, threads});
    std::vector<double> err;
    for (const auto& o : outcomes) err.push_back(std::abs(o.theta - o.fdp));
    medians.push_back(median(err));
  }
  const double reduction = 1.0 - medians[1] / medians[0];
  return {reduction >= 0.3, "median |theta - FDP| " + fmt("%.5f", medians[0]) + " at m=1000, " +
                                fmt("%.5f", medians[1]) + " at m=10000, reduction " +
                                fmt("%.1f%%", 100.0 * reduction)};
}

// --- 9: Lyons criterion --------------------------------------------------------------------------------

Outcome check_lyons(bool quick) {
  const Count k_max = quick ? 100000 : 1000000;
  const Probability t(0.05);
  const FamilyParams family = GammaFamily{GammaParams(1.0)};
  const double rho = 0.5;
  const double extra[] = {rho};
  const double C = comparison_constant_for(family, t, extra);
  const DesignTemplate tmpl{family, rho, 1.0, {}, {BlockRule::Kind::power, 1, 0.5}, NullLayout::leading};
  std::vector<double> varseq(static_cast<std::size_t>(k_max));
  for (Count n = 1; n <= k_max; ++n) {
    varseq[n - 1] = variance_bound(tmpl.instantiate(n, 0), t, C).value;
  }
  const auto sums = lyons_partial_sums(varseq);
  const double s_k = sums.back();
  const double s_decade = sums[static_cast<std::size_t>(k_max / 10) - 1];
  const double growth = (s_k - s_decade) / s_k;

  const double sigma2 = t.value() * (1.0 - t.value());
  std::vector<double> iid(static_cast<std::size_t>(k_max));
  for (Count n = 1; n <= k_max; ++n) iid[n - 1] = sigma2 / static_cast<double>(n);
  const double s_iid = lyons_partial_sums(iid).back();
  const double limit = sigma2 * M_PI * M_PI / 6.0;
  const double iid_err = std::abs(s_iid - limit);
  const double majorant_err = std::abs(lyons_majorant(sigma2, 1.0) - limit);
  return {growth < 0.01 && iid_err <= 1e-6 && majorant_err <= 1e-12,
          "C = " + fmt("%.5f", C) + ", S_K = " + fmt("%.6f", s_k) + " at K = " +
              std::to_string(k_max) + ", last-decade growth " + fmt("%.3f%%", 100.0 * growth) +
              "; i.i.d. |S_K - s2 pi^2/6| = " + fmt("%.2e", iid_err)};
}

// --- 10: determinism -------------------------------------------------------------------------------------

Outcome check_determinism(unsigned threads) {
  const auto tmpl = acceptance_template(0.5, {BlockRule::Kind::power, 1, 0.5});
  const DependenceDesign design = tmpl.instantiate(5000, 4242);
  auto csv = [&](unsigned th) {
    std::ostringstream os;
    const auto outcomes = simulate(design, 100, RunOptions{0.05, 0.5, th});
    write_outcomes_csv(os, outcomes);
    return os.str();
  };
  const std::string a = csv(1);
  const std::string b = csv(std::max(2u, threads));
  const std::string c = csv(1);
  return {a == b && a == c, "3 runs (1, " + std::to_string(std::max(2u, threads)) +
                                 ", 1 threads), " + std::to_string(a.size()) + " bytes, identical = " +
                                 (a == b && a == c ? "yes" : "no")};
}

struct Check {
  int id;
  const char* name;
  double budget;
  std::function<Outcome()> run;
};

}  // namespace

std::string format_result(const CheckResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "%s  %2d  %-32s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
  std::string line = head;
  line += "  " + r.detail + "  (" + fmt("%.2f", r.seconds) + " s, budget " + fmt("%.0f", r.budget_seconds) +
          " s)";
  return line;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

std::vector<CheckResult> run_validation(const ValidationOptions& opts, std::ostream& os) {
  const bool quick = opts.quick;
  const unsigned threads = std::max(1u, opts.threads);
  const std::vector<Check> checks = {
      {1, "orthonormality", 10, check_orthonormality},
      {2, "partial integral identity", 5, check_partial_integral},
      {3, "kappa series vs oracle", 120, check_kappa_oracle},
      {4, "comparison constant", 120, check_comparison_constant},
      {5, "Tricomi expansion", 1, check_tricomi},
      {6, "sampler-kernel agreement", 60 * 11, [&] { return check_sampler_gate(quick); }},
      {7, "SLLN sweep", 600, [&] { return check_slln(quick, threads); }},
      {8, "theta consistency", 300, [&] { return check_theta(quick, threads); }},
      {9, "Lyons partial sums", 10, [&] { return check_lyons(quick); }},
      {10, "determinism", 60, [&] { return check_determinism(threads); }},
  };
  std::vector<CheckResult> results;
  for (const auto& check : checks) {
    if (!opts.only.empty() &&
        std::find(opts.only.begin(), opts.only.end(), check.id) == opts.only.end()) {
      continue;
    }
    CheckResult r;
    r.id = check.id;
    r.name = check.name;
    r.budget_seconds = check.budget;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = check.run();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.budget_seconds) {
      r.passed = false;
      r.detail += "; over the time budget";
    }
    os << format_result(r) << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace lancaster

#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

namespace lancaster::cli {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

void allow_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; });
    if (!known) fail("unknown key '" + key + "' in " + where);
  }
}

const Json& need(const Json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail("missing key '" + std::string(key) + "' in " + where);
  return j.at(key);
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) fail(what + " must be a number");
  return j.get<double>();
}

Count integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) fail(what + " must be an integer");
  return j.get<Count>();
}

double number_or(const Json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j.at(key), where + "." + key) : fallback;
}

std::uint64_t seed_of(const Json& j, const std::string& where) {
  const Json& s = need(j, where, "seed");
  if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
    fail(where + ".seed must be a non-negative integer");
  }
  return s.get<std::uint64_t>();
}

Alternative parse_alternative(const Json& j) {
  allow_keys(j, "alternative", {"scale_factor", "mean_shift"});
  return {number_or(j, "scale_factor", 1.0, "alternative"), number_or(j, "mean_shift", 0.0, "alternative")};
}

NullLayout parse_layout(const Json& j) {
  if (!j.is_string()) fail("null_layout must be a string");
  const auto s = j.get<std::string>();
  if (s == "random") return NullLayout::random;
  if (s == "leading") return NullLayout::leading;
  fail("null_layout must be 'random' or 'leading'");
}

BlockRule parse_block(const Json& j) {
  allow_keys(j, "block", {"rule", "size", "exponent"});
  const Json& rule = need(j, "block", "rule");
  if (!rule.is_string()) fail("block.rule must be a string");
  const auto r = rule.get<std::string>();
  BlockRule out;
  if (r == "fixed") {
    out.kind = BlockRule::Kind::fixed;
    out.size = integer(need(j, "block", "size"), "block.size");
    if (j.contains("exponent")) fail("block.exponent applies to the power rule only");
  } else if (r == "power") {
    out.kind = BlockRule::Kind::power;
    out.exponent = number(need(j, "block", "exponent"), "block.exponent");
    if (j.contains("size")) fail("block.size applies to the fixed rule only");
  } else if (r == "full") {
    out.kind = BlockRule::Kind::full;
    if (j.contains("size") || j.contains("exponent")) fail("block rule 'full' takes no parameters");
  } else {
    fail("block.rule must be 'fixed', 'power' or 'full'");
  }
  return out;
}

std::vector<Count> parse_m_grid(const Json& j) {
  if (!j.is_array() || j.empty()) fail("m_grid must be a non-empty array");
  std::vector<Count> out;
  for (const auto& v : j) out.push_back(integer(v, "m_grid entry"));
  return out;
}

RunOptions parse_run(const Json& j, const std::string& where) {
  RunOptions run;
  run.t = number_or(j, "t", 0.05, where);
  run.storey_lambda = number_or(j, "storey_lambda", 0.5, where);
  return run;
}

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail("config '" + path + "' is not valid JSON: " + e.what());
  }
}

FamilyParams parse_family(const Json& j) {
  if (!j.is_object()) fail("family must be a JSON object");
  const Json& name = need(j, "family", "name");
  if (!name.is_string()) fail("family.name must be a string");
  const auto n = name.get<std::string>();
  if (n == "gamma") {
    allow_keys(j, "family", {"name", "alpha"});
    return GammaFamily{GammaParams(number(need(j, "family", "alpha"), "family.alpha"))};
  }
  if (n == "poisson") {
    allow_keys(j, "family", {"name", "a"});
    return PoissonFamily{PoissonParams(number(need(j, "family", "a"), "family.a"))};
  }
  if (n == "nb") {
    allow_keys(j, "family", {"name", "beta", "c"});
    return NegBinomialFamily{NBParams(number(need(j, "family", "beta"), "family.beta"),
                                      number(need(j, "family", "c"), "family.c"))};
  }
  if (n == "gamma-nb") {
    allow_keys(j, "family", {"name", "alpha", "beta", "c"});
    return GammaNBFamily{GammaParams(number(need(j, "family", "alpha"), "family.alpha")),
                         NBParams(number(need(j, "family", "beta"), "family.beta"),
                                  number(need(j, "family", "c"), "family.c"))};
  }
  fail("family.name must be one of gamma, poisson, nb, gamma-nb");
}

Json family_to_json(const FamilyParams& family) {
  return std::visit(
      [](const auto& f) -> Json {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, GammaFamily>) {
          return {{"name", "gamma"}, {"alpha", f.params.alpha()}};
        } else if constexpr (std::is_same_v<F, PoissonFamily>) {
          return {{"name", "poisson"}, {"a", f.params.mean()}};
        } else if constexpr (std::is_same_v<F, NegBinomialFamily>) {
          return {{"name", "nb"}, {"beta", f.params.beta()}, {"c", f.params.c()}};
        } else {
          return {{"name", "gamma-nb"}, {"alpha", f.gamma.alpha()}, {"beta", f.nb.beta()}, {"c", f.nb.c()}};
        }
      },
      family);
}

DependenceDesign parse_design(const Json& j) {
  allow_keys(j, "design",
             {"m", "block_size", "rho", "family", "pi0", "alternative", "seed", "null_layout"});
  DependenceDesign d{.m = integer(need(j, "design", "m"), "design.m"),
                     .block_size = j.contains("block_size")
                                       ? integer(j.at("block_size"), "design.block_size")
                                       : 1,
                     .rho = number_or(j, "rho", 0.0, "design"),
                     .family = parse_family(need(j, "design", "family")),
                     .pi0 = number_or(j, "pi0", 1.0, "design"),
                     .alt = j.contains("alternative") ? parse_alternative(j.at("alternative"))
                                                      : Alternative{},
                     .seed = seed_of(j, "design"),
                     .null_layout = j.contains("null_layout") ? parse_layout(j.at("null_layout"))
                                                              : NullLayout::random};
  d.validate();
  return d;
}

Json design_to_json(const DependenceDesign& d) {
  return {{"m", d.m},
          {"block_size", d.block_size},
          {"rho", d.rho},
          {"family", family_to_json(d.family)},
          {"pi0", d.pi0},
          {"alternative", {{"scale_factor", d.alt.scale_factor}, {"mean_shift", d.alt.mean_shift}}},
          {"seed", d.seed},
          {"null_layout", d.null_layout == NullLayout::random ? "random" : "leading"}};
}

DesignTemplate parse_template(const Json& j) {
  allow_keys(j, "template", {"family", "rho", "pi0", "alternative", "block", "null_layout"});
  return {.family = parse_family(need(j, "template", "family")),
          .rho = number_or(j, "rho", 0.0, "template"),
          .pi0 = number_or(j, "pi0", 1.0, "template"),
          .alt = j.contains("alternative") ? parse_alternative(j.at("alternative")) : Alternative{},
          .block = parse_block(need(j, "template", "block")),
          .null_layout = j.contains("null_layout") ? parse_layout(j.at("null_layout"))
                                                   : NullLayout::random};
}

Truncation parse_truncation(const Json& j) {
  allow_keys(j, "truncation", {"n_max", "tail_tol"});
  Truncation t;
  if (j.contains("n_max")) t.n_max = static_cast<int>(integer(j.at("n_max"), "truncation.n_max"));
  t.tail_tol = number_or(j, "tail_tol", t.tail_tol, "truncation");
  t.validate();
  return t;
}

SimulateConfig parse_simulate(const Json& j) {
  allow_keys(j, "simulate config", {"design", "replications", "t", "storey_lambda", "truncation"});
  SimulateConfig c{.design = parse_design(need(j, "simulate config", "design")),
                   .replications = 0,
                   .run = {},
                   .trunc = {}};
  c.replications = integer(need(j, "simulate config", "replications"), "replications");
  if (c.replications < 1) fail("replications must be >= 1");
  c.run = parse_run(j, "simulate config");
  if (j.contains("truncation")) c.trunc = parse_truncation(j.at("truncation"));
  return c;
}

SweepConfig parse_sweep(const Json& j, bool weak_dependence) {
  const std::string where = weak_dependence ? "weak-dep config" : "slln-sweep config";
  if (weak_dependence) {
    allow_keys(j, where, {"template", "m_grid", "t_grid", "replications", "seed", "truncation"});
  } else {
    allow_keys(j, where,
               {"template", "m_grid", "replications", "seed", "t", "storey_lambda", "truncation"});
  }
  SweepConfig c{.tmpl = parse_template(need(j, where, "template")),
                .m_grid = {},
                .t_grid = {},
                .replications = 0,
                .seed = 0,
                .run = {},
                .trunc = {}};
  c.m_grid = parse_m_grid(need(j, where, "m_grid"));
  c.replications = integer(need(j, where, "replications"), "replications");
  c.seed = seed_of(j, where);
  if (weak_dependence) {
    const Json& tg = need(j, where, "t_grid");
    if (!tg.is_array() || tg.empty()) fail("t_grid must be a non-empty array");
    for (const auto& v : tg) c.t_grid.push_back(number(v, "t_grid entry"));
    if (c.replications < 1) fail("replications must be >= 1");
  } else {
    c.run = parse_run(j, where);
    if (c.replications < 100) fail("slln-sweep needs replications >= 100");
  }
  if (j.contains("truncation")) c.trunc = parse_truncation(j.at("truncation"));
  return c;
}

LyonsConfig parse_lyons(const Json& j) {
  allow_keys(j, "lyons config", {"template", "k_max", "t", "truncation"});
  LyonsConfig c{.tmpl = parse_template(need(j, "lyons config", "template")),
                .k_max = 0,
                .t = 0.05,
                .trunc = {}};
  c.k_max = integer(need(j, "lyons config", "k_max"), "k_max");
  if (c.k_max < 10) fail("k_max must be >= 10");
  c.t = number_or(j, "t", 0.05, "lyons config");
  if (j.contains("truncation")) c.trunc = parse_truncation(j.at("truncation"));
  return c;
}

}  // namespace lancaster::cli

// forestlab: command-line front end for tree-class systems.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "forestlab/error.hpp"
#include "forestlab/evaluate.hpp"
#include "forestlab/gexpr.hpp"
#include "forestlab/laws.hpp"
#include "forestlab/polya.hpp"
#include "forestlab/series.hpp"
#include "forestlab/structure.hpp"
#include "forestlab/system.hpp"
#include "forestlab/trees.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace forestlab;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string system_path;
  std::string class_name;
  std::string expr;
  std::optional<std::size_t> order;
  std::string window;
  std::optional<std::size_t> size;
  std::string format = "json";
  std::size_t max_order = 10000;
  std::size_t max_size = 16;
  std::string module;
};

std::string approx(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json coefficients_json(const TruncatedSeries& a) {
  json arr = json::array();
  for (const auto& c : a.coeffs()) arr.push_back(to_string(c));
  return arr;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::size_t env_order_cap() {
  const char* raw = std::getenv("FORESTLAB_MAX_ORDER");
  if (!raw || !*raw) return static_cast<std::size_t>(-1);
  std::string s(raw);
  if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 12) {
    throw UsageError("FORESTLAB_MAX_ORDER must be a positive integer");
  }
  const auto v = std::stoul(s);
  if (v == 0) throw UsageError("FORESTLAB_MAX_ORDER must be a positive integer");
  return v;
}

EvalLimits eval_limits(const RunConfig& cfg) {
  if (cfg.max_order == 0) throw UsageError("--max-order must be positive");
  return EvalLimits{std::min(cfg.max_order, env_order_cap())};
}

OracleLimits oracle_limits(const RunConfig& cfg) {
  if (cfg.max_size == 0) throw UsageError("--max-size must be positive");
  OracleLimits limits;
  limits.max_size = cfg.max_size;
  return limits;
}

std::size_t order_or(const RunConfig& cfg, std::size_t fallback) {
  const std::size_t n = cfg.order.value_or(fallback);
  if (n == 0) throw UsageError("--order must be positive");
  return n;
}

std::optional<DegreeWindow> window_of(const RunConfig& cfg, std::size_t order) {
  if (cfg.window.empty()) return std::nullopt;
  DegreeWindow w;
  try {
    w = DegreeWindow::parse(cfg.window);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--window: ") + e.what());
  }
  if (w.end > order) throw UsageError("--order must be at least the window end");
  return w;
}

ComptonSystem load_system(const RunConfig& cfg) {
  if (cfg.system_path.empty()) throw UsageError("--system is required");
  std::ifstream in(cfg.system_path);
  if (!in) throw DomainError("cannot read system file '" + cfg.system_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

// --expr wins over --class; empty when neither is given.
std::optional<std::pair<std::string, ClassExpr>> query_of(const RunConfig& cfg, const ComptonSystem& system) {
  if (!cfg.expr.empty()) {
    ClassExpr e = parse_class_expr(cfg.expr, system);
    return std::pair{to_string(e), std::move(e)};
  }
  if (!cfg.class_name.empty()) return std::pair{cfg.class_name, system.expression_for(cfg.class_name)};
  return std::nullopt;
}

// eval

int run_eval(const RunConfig& cfg) {
  const ComptonSystem system = load_system(cfg);
  const std::size_t order = order_or(cfg, 20);
  const SystemSeries series = evaluate_system(system, order, eval_limits(cfg));

  std::vector<std::pair<std::string, TruncatedSeries>> rows;
  bool trees_only = true;
  if (auto q = query_of(cfg, system)) {
    rows.emplace_back(q->first, evaluate_class_expr(system, series, q->second));
    trees_only = system.is_tree_valued(q->second);
  } else {
    for (std::size_t i = 0; i < system.class_count(); ++i) rows.emplace_back(system.decl(i).name, series.at(i));
    for (const auto& d : system.definitions()) {
      rows.emplace_back(d.name, evaluate_class_expr(system, series, d.expr));
      trees_only = trees_only && system.is_tree_valued(d.expr);
    }
  }

  if (cfg.format == "csv") {
    const std::size_t first = trees_only ? 1 : 0;
    if (rows.size() == 1) {
      write_csv(std::cout, rows.front().second, first);
      return 0;
    }
    std::cout << "n";
    for (const auto& [name, _] : rows) std::cout << ',' << csv_field(name);
    std::cout << '\n';
    for (std::size_t n = first; n <= order; ++n) {
      std::cout << n;
      for (const auto& [_, a] : rows) std::cout << ',' << to_string(a[n]);
      std::cout << '\n';
    }
    return 0;
  }
  json out;
  out["system"] = system.name();
  out["order"] = order;
  json arr = json::array();
  for (const auto& [name, a] : rows) arr.push_back({{"name", name}, {"coefficients", coefficients_json(a)}});
  out["series"] = std::move(arr);
  emit(out);
  return 0;
}

// classify

int run_classify(const RunConfig& cfg) {
  const ComptonSystem system = load_system(cfg);
  const auto report = validate(system);
  const auto digraph = build_digraph(system);
  const auto classification = classify_radius(system, digraph);
  const std::size_t order = order_or(cfg, 200);
  const SystemSeries series = evaluate_system(system, order, eval_limits(cfg));
  const auto crosscheck = growth_crosscheck(system, classification, series);
  const auto query = query_of(cfg, system);

  if (cfg.format == "csv") {
    std::cout << "name,verdict,component,rank,productive,growth_check\n";
    for (std::size_t i = 0; i < system.class_count(); ++i) {
      const auto& c = classification.classes[i];
      std::cout << csv_field(system.decl(i).name) << ',' << to_string(c.verdict) << ',' << c.component << ','
                << c.rank << ',' << (report.classes[i].productive ? "true" : "false") << ','
                << to_string(crosscheck.classes[i].status) << '\n';
    }
    if (query) std::cout << csv_field(query->first) << ',' << to_string(classification.verdict_for(system, query->second))
                         << ",,,,\n";
    return 0;
  }

  json out;
  out["system"] = system.name();
  if (system.quantifier_rank()) out["qrank"] = *system.quantifier_rank();
  json classes = json::array();
  for (std::size_t i = 0; i < system.class_count(); ++i) {
    const auto& c = classification.classes[i];
    json j;
    j["name"] = system.decl(i).name;
    j["verdict"] = to_string(c.verdict);
    j["productive"] = report.classes[i].productive;
    j["reachable"] = report.classes[i].reachable;
    j["component"] = c.component;
    j["rank"] = c.rank;
    j["evidence"] = c.evidence;
    if (c.polynomial) {
      j["degree_bound"] = *c.degree_bound;
      j["polynomial"] = coefficients_json(*c.polynomial);
    }
    classes.push_back(std::move(j));
  }
  out["classes"] = std::move(classes);

  json comps = json::array();
  for (std::size_t k = 0; k < classification.components.size(); ++k) {
    const auto& ev = classification.components[k];
    json j;
    json members = json::array();
    for (std::size_t m : ev.members) members.push_back(system.decl(m).name);
    j["members"] = std::move(members);
    j["nontrivial"] = ev.nontrivial;
    if (ev.nontrivial) j["unit_cycle"] = ev.unit_cycle;
    if (!ev.reason.empty()) j["reason"] = ev.reason;
    if (const auto* cyc = classification.cycle_for_component(k)) {
      json names = json::array();
      for (std::size_t m : cyc->cycle) names.push_back(system.decl(m).name);
      j["cycle"] = std::move(names);
      j["step_sizes"] = cyc->step_sizes;
      j["pump_size"] = cyc->pump_size();
    }
    comps.push_back(std::move(j));
  }
  out["components"] = std::move(comps);

  json defs = json::array();
  for (const auto& d : system.definitions()) {
    defs.push_back({{"name", d.name}, {"verdict", to_string(classification.verdict_for(system, d.expr))}});
  }
  out["definitions"] = std::move(defs);
  if (query) out["query"] = {{"expr", query->first}, {"verdict", to_string(classification.verdict_for(system, query->second))}};
  out["warnings"] = report.warnings;

  json growth = json::array();
  for (const auto& g : crosscheck.classes) {
    json j;
    j["name"] = g.name;
    j["status"] = to_string(g.status);
    if (g.estimate) j["estimate_approx"] = approx(*g.estimate);
    growth.push_back(std::move(j));
  }
  out["growth_crosscheck"] = {{"order", crosscheck.order},
                              {"disagreement", crosscheck.any_disagreement()},
                              {"classes", std::move(growth)}};
  emit(out);
  return 0;
}

// explicit

int run_explicit(const RunConfig& cfg) {
  const ComptonSystem system = load_system(cfg);
  const auto digraph = build_digraph(system);
  const auto classification = classify_radius(system, digraph);
  const ExplicitForms forms = to_explicit(system, digraph, classification);
  const auto query = query_of(cfg, system);

  if (cfg.format == "csv") {
    std::cout << "name,gexpr\n";
    if (query) {
      std::cout << csv_field(query->first) << ',' << csv_field(to_string(forms.for_expression(system, query->second)))
                << '\n';
    } else {
      for (std::size_t i : forms.order) {
        std::cout << csv_field(system.decl(i).name) << ',' << csv_field(to_string(forms.bodies[i])) << '\n';
      }
    }
    return 0;
  }
  json out;
  out["system"] = system.name();
  json bindings = json::array();
  for (std::size_t i : forms.order) {
    bindings.push_back({{"name", system.decl(i).name},
                        {"verdict", to_string(classification.classes[i].verdict)},
                        {"gexpr", to_string(forms.bodies[i])}});
  }
  out["bindings"] = std::move(bindings);
  if (query) out["query"] = {{"expr", query->first}, {"gexpr", to_string(forms.for_expression(system, query->second))}};
  emit(out);
  return 0;
}

// law

json ratio_json(const RatioReport& r) {
  json out;
  out["period"] = r.period;
  out["window"] = {r.window.begin, r.window.end};
  json ratios = json::array();
  for (const auto& s : r.ratios) {
    ratios.push_back({{"n", s.degree}, {"exact", to_string(s.ratio)}, {"approx", approx(s.value)}});
  }
  out["ratios"] = std::move(ratios);
  out["verdict"] = to_string(r.verdict);
  out["trend"] = {{"last_ratio_approx", approx(r.trend.last)},
                  {"first_gap_approx", approx(r.trend.first_gap)},
                  {"last_gap_approx", approx(r.trend.last_gap)},
                  {"gap_strictly_decreasing", r.trend.gap_strictly_decreasing},
                  {"gap_shrinking", r.trend.gap_shrinking},
                  {"gap_decay_exponent_approx", approx(r.trend.decay_exponent)},
                  {"extrapolated_gap_approx", approx(r.trend.extrapolated_gap)},
                  {"final_half_max_ratio_approx", approx(r.trend.final_half_max)}};
  return out;
}

void ratio_csv(const RatioReport& r) {
  std::cout << "n,ratio,approx\n";
  for (const auto& s : r.ratios) std::cout << s.degree << ',' << to_string(s.ratio) << ',' << approx(s.value) << '\n';
}

int run_law(const RunConfig& cfg) {
  const std::size_t order = order_or(cfg, 2000);
  const auto window = window_of(cfg, order);
  const EvalLimits limits = eval_limits(cfg);

  if (cfg.system_path.empty()) {
    if (cfg.expr.empty()) throw UsageError("law needs --system with --class/--expr, or a closed form via --expr");
    const TruncatedSeries a = evaluate_gexpr(parse_gexpr(cfg.expr), order, limits);
    const RatioReport r = ratio_test(a, window.value_or(DegreeWindow{order / 2, order}));
    if (cfg.format == "csv") {
      ratio_csv(r);
      return 0;
    }
    json out = ratio_json(r);
    out = json{{"expr", cfg.expr}, {"order", order}, {"ratio_test", std::move(out)}};
    emit(out);
    return 0;
  }

  const ComptonSystem system = load_system(cfg);
  const auto query = query_of(cfg, system);
  if (!query) throw UsageError("law needs --class or --expr naming a tree class");
  const CoherenceReport rep = check_main_theorem(system, query->second, order, window, limits);
  if (cfg.format == "csv") {
    if (!rep.ratio) throw DomainError("no ratio data: " + rep.note);
    ratio_csv(*rep.ratio);
    return 0;
  }
  json out;
  out["system"] = system.name();
  out["class"] = query->first;
  out["order"] = order;
  out["structural"] = to_string(rep.structural);
  out["forest_series"] = "Egeq(1, T)";
  if (rep.period) out["period"] = rep.period->period;
  if (rep.ratio) {
    out["verdict"] = to_string(rep.ratio->verdict);
    out["ratio_test"] = ratio_json(*rep.ratio);
  }
  out["coherence"] = to_string(rep.coherence);
  if (!rep.note.empty()) out["note"] = rep.note;
  emit(out);
  return 0;
}

// enumerate

int run_enumerate(const RunConfig& cfg) {
  if (!cfg.size) throw UsageError("--size is required");
  const std::size_t n = *cfg.size;
  const OracleLimits limits = oracle_limits(cfg);
  std::vector<std::string> members;
  std::string what = "trees";
  if (cfg.system_path.empty()) {
    for (const auto& t : enumerate_trees(n, limits)) members.push_back(t.encoding());
  } else {
    const ComptonSystem system = load_system(cfg);
    const auto query = query_of(cfg, system);
    if (!query) throw UsageError("enumerate with --system needs --class or --expr");
    what = query->first;
    EnumerationOracle oracle(system, limits);
    const bool trees = system.is_tree_valued(query->second);
    for (const auto& f : oracle.members(query->second, n)) {
      members.push_back(trees ? f.components().front().encoding() : f.to_string());
    }
  }
  if (cfg.format == "csv") {
    std::cout << "member\n";
    for (const auto& m : members) std::cout << csv_field(m) << '\n';
    return 0;
  }
  emit(json{{"class", what}, {"size", n}, {"count", members.size()}, {"members", members}});
  return 0;
}

// gfun

int run_gfun(const RunConfig& cfg) {
  if (cfg.expr.empty()) throw UsageError("--expr is required");
  const GExpr e = parse_gexpr(cfg.expr);
  const std::size_t order = order_or(cfg, 20);
  const TruncatedSeries a = evaluate_gexpr(e, order, eval_limits(cfg));
  if (cfg.format == "csv") {
    write_csv(std::cout, a, 0);
    return 0;
  }
  emit(json{{"expr", to_string(e)}, {"order", order}, {"coefficients", coefficients_json(a)}});
  return 0;
}

// factor

int run_factor(const RunConfig& cfg) {
  const TreeModule m = TreeModule::parse(cfg.module);
  const auto factors = factor_module(m);
  if (cfg.format == "csv") {
    std::cout << "module,size\n";
    for (const auto& f : factors) std::cout << f.to_string() << ',' << f.size() << '\n';
    return 0;
  }
  json arr = json::array();
  for (const auto& f : factors) arr.push_back({{"module", f.to_string()}, {"size", f.size()}});
  emit(json{{"module", m.to_string()}, {"size", m.size()}, {"factors", std::move(arr)}});
  return 0;
}

json error_json(const std::exception& e) {
  json j;
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    j["error"] = ParseError::kind_name(p->kind());
    j["line"] = p->line();
    j["column"] = p->column();
  } else if (dynamic_cast<const BoundError*>(&e)) {
    j["error"] = "BoundError";
  } else {
    j["error"] = "DomainError";
  }
  j["message"] = e.what();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"forestlab: generating functions, radius analysis and zero-one law checks for recursive tree classes"};
  app.require_subcommand(1);

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_system = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--system", cfg.system_path, "System file (.fst)");
    if (required) opt->required();
    sub->add_option("--class", cfg.class_name, "Class or definition name");
  };
  auto add_order = [&](CLI::App* sub) {
    sub->add_option("--order", cfg.order, "Truncation order N");
    sub->add_option("--max-order", cfg.max_order, "Refuse orders above this bound")->capture_default_str();
  };

  auto* eval = app.add_subcommand(
      "eval",
      "Counting series of a tree-class system, T_i = x * sum over productions of prod_j E_{gamma_j}(T_j), "
      "computed degree by degree with the Polya multiset operators E_m and E_{>=m}");
  add_system(eval, true);
  eval->add_option("--expr", cfg.expr, "Class expression over the system (overrides --class)");
  add_order(eval);
  add_format(eval);

  auto* classify = app.add_subcommand(
      "classify",
      "Dependency digraph, strong components and ranks, and the radius trichotomy "
      "(FINITE / RADIUS_ONE / RADIUS_SUB_ONE via the unit-cycle test), with a numeric growth cross-check");
  add_system(classify, true);
  classify->add_option("--expr", cfg.expr, "Class expression to classify");
  add_order(classify);
  add_format(classify);

  auto* expl = app.add_subcommand(
      "explicit",
      "Explicit closed form in the class G (x, x/(1-x^m), +, *, E_m, E_{>=m}) of radius->=1 tree classes, "
      "built from pump modules M_ii, connectors M^_ik and escape productions");
  add_system(expl, true);
  expl->add_option("--expr", cfg.expr, "Class expression to express");
  add_format(expl);

  auto* law = app.add_subcommand(
      "law",
      "Compton's ratio test a((n-1)d)/a(nd) -> 1 on the forest class E_{>=1}(T), checked against the "
      "structural radius verdict (MSO 0-1 law iff radius >= 1)");
  add_system(law, false);
  law->add_option("--expr", cfg.expr, "Tree class expression, or a closed form when no --system is given");
  add_order(law);
  law->add_option("--window", cfg.window, "Degree window a..b (default N/2..N)");
  add_format(law);

  auto* enumerate = app.add_subcommand(
      "enumerate",
      "Brute-force enumeration of unlabeled rooted trees by canonical form, optionally filtered by "
      "class membership in a system (the oracle used to cross-check eval)");
  add_system(enumerate, false);
  enumerate->add_option("--expr", cfg.expr, "Class expression to enumerate");
  enumerate->add_option("--size", cfg.size, "Number of nodes")->required();
  enumerate->add_option("--max-size", cfg.max_size, "Refuse sizes above this bound")->capture_default_str();
  add_format(enumerate);

  auto* gfun = app.add_subcommand(
      "gfun", "Coefficients of a closed-form generating function from the class G (let-bindings allowed)");
  gfun->add_option("--expr", cfg.expr, "Closed-form expression")->required();
  add_order(gfun);
  add_format(gfun);

  auto* factor = app.add_subcommand(
      "factor",
      "Unique factorization of a tree module (stack) into indecomposable modules of the free module monoid");
  factor->add_option("module", cfg.module, "Module literal, e.g. (()(()))@1.0")->required();
  add_format(factor);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return run_eval(cfg);
    if (*classify) return run_classify(cfg);
    if (*expl) return run_explicit(cfg);
    if (*law) return run_law(cfg);
    if (*enumerate) return run_enumerate(cfg);
    if (*gfun) return run_gfun(cfg);
    if (*factor) return run_factor(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << error_json(e).dump() << "\n";
    return 1;
  }
  return 2;
}

#include "forestlab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "forestlab/error.hpp"

namespace forestlab {

bool DependencyDigraph::has_edge(std::size_t i, std::size_t j) const {
  const auto& s = successors.at(i);
  return std::binary_search(s.begin(), s.end(), j);
}

std::vector<std::size_t> DependencyDigraph::reachable_from(std::size_t i) const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack{i}, out;
  seen[i] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (std::size_t w : successors[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

DependencyDigraph build_digraph(const ComptonSystem& system) {
  const std::size_t n = system.class_count();
  const auto productive = productive_classes(system);
  DependencyDigraph g;
  g.successors.resize(n);
  for (std::size_t i = 1; i < n; ++i) {
    std::set<std::size_t> succ;
    for (const auto& gamma : system.decl(i).productions) {
      if (!is_live(gamma, productive)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (is_effective(gamma[j], productive[j])) succ.insert(j);
      }
    }
    g.successors[i].assign(succ.begin(), succ.end());
  }

  // Tarjan; components come out sinks first.
  g.component_of.assign(n, 0);
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::size_t counter = 0;
  std::function<void(std::size_t)> connect = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : g.successors[v]) {
      if (index[w] == SIZE_MAX) {
        connect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        g.component_of[w] = g.components.size();
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      g.components.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == SIZE_MAX) connect(v);
  }

  g.nontrivial.assign(g.components.size(), false);
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    const auto& comp = g.components[c];
    g.nontrivial[c] = comp.size() > 1 || g.has_edge(comp.front(), comp.front());
  }
  std::vector<std::size_t> comp_rank(g.components.size(), 0);
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    for (std::size_t v : g.components[c]) {
      for (std::size_t w : g.successors[v]) {
        const std::size_t d = g.component_of[w];
        if (d != c) comp_rank[c] = std::max(comp_rank[c], comp_rank[d] + 1);
      }
    }
  }
  g.rank.resize(n);
  for (std::size_t v = 0; v < n; ++v) g.rank[v] = comp_rank[g.component_of[v]];
  return g;
}

const char* to_string(Radius r) {
  switch (r) {
    case Radius::SubOne: return "RADIUS_SUB_ONE";
    case Radius::One: return "RADIUS_ONE";
    case Radius::Finite: return "FINITE";
  }
  return "?";
}

std::size_t CycleModuleInfo::pump_size() const { return std::accumulate(step_sizes.begin(), step_sizes.end(), std::size_t{0}); }

std::size_t CycleModuleInfo::connector_size(std::size_t from, std::size_t to) const {
  const auto pos = [&](std::size_t v) {
    auto it = std::find(cycle.begin(), cycle.end(), v);
    if (it == cycle.end()) throw DomainError("class is not on this cycle");
    return static_cast<std::size_t>(it - cycle.begin());
  };
  std::size_t k = pos(from);
  const std::size_t target = pos(to);
  std::size_t total = 0;
  while (k != target) {
    total += step_sizes[k];
    k = (k + 1) % cycle.size();
  }
  return total;
}

namespace {

struct FiniteInfo {
  std::vector<bool> productive;
  std::vector<bool> finite;
  std::vector<std::size_t> degree_bound;  // finite classes only
  std::vector<std::optional<TruncatedSeries>> polynomial;
  std::vector<Integer> member_count;
  std::vector<std::optional<std::size_t>> singleton_size;
};

FiniteInfo analyze_finite(const ComptonSystem& system, const DependencyDigraph& g) {
  const std::size_t n = system.class_count();
  FiniteInfo info;
  info.productive = productive_classes(system);
  std::vector<bool> source(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.nontrivial[g.component_of[i]]) source[i] = true;
    for (const auto& gamma : system.decl(i).productions) {
      if (!is_live(gamma, info.productive)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (gamma[j].is_at_least() && info.productive[j]) source[i] = true;
      }
    }
  }
  info.finite.assign(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : g.reachable_from(i)) {
      if (source[j]) info.finite[i] = false;
    }
  }
  // Finite classes form a DAG; components are listed sinks first.
  info.degree_bound.assign(n, 0);
  std::size_t max_bound = 1;
  for (const auto& comp : g.components) {
    for (std::size_t i : comp) {
      if (!info.finite[i] || !info.productive[i]) continue;
      if (i == 0) {
        info.degree_bound[i] = 1;
        continue;
      }
      std::size_t best = 0;
      for (const auto& gamma : system.decl(i).productions) {
        if (!is_live(gamma, info.productive)) continue;
        std::size_t total = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (is_effective(gamma[j], info.productive[j])) total += gamma[j].m() * info.degree_bound[j];
        }
        best = std::max(best, total);
      }
      info.degree_bound[i] = 1 + best;
      max_bound = std::max(max_bound, info.degree_bound[i]);
    }
  }
  info.polynomial.resize(n);
  info.member_count.resize(n);
  info.singleton_size.resize(n);
  const SystemSeries series = evaluate_system(system, max_bound, EvalLimits{std::max<std::size_t>(max_bound, 10000)});
  for (std::size_t i = 0; i < n; ++i) {
    if (!info.finite[i]) continue;
    const TruncatedSeries poly = series.at(i).truncate(std::max<std::size_t>(info.degree_bound[i], 1));
    Integer count;
    std::size_t last_degree = 0;
    for (std::size_t d = 0; d <= poly.order(); ++d) {
      if (sgn(poly[d]) != 0) last_degree = d;
      count += poly[d].get_num();
    }
    info.polynomial[i] = poly;
    info.member_count[i] = count;
    if (count == 1) info.singleton_size[i] = last_degree;
  }
  return info;
}

struct UnitCycleResult {
  bool passes = false;
  std::string reason;
  // Per member of the component: index of its unique production meeting the component.
  std::map<std::size_t, std::size_t> meeting;
};

UnitCycleResult unit_cycle_test(const ComptonSystem& system, const DependencyDigraph& g, const FiniteInfo& info,
                                std::size_t component) {
  const auto& members = g.components[component];
  const std::set<std::size_t> in_c(members.begin(), members.end());
  const std::size_t n = system.class_count();
  UnitCycleResult r;
  for (std::size_t k : members) {
    const auto& name = system.decl(k).name;
    std::vector<std::size_t> meeting;
    const auto& prods = system.decl(k).productions;
    for (std::size_t p = 0; p < prods.size(); ++p) {
      if (!is_live(prods[p], info.productive)) continue;
      for (std::size_t j : members) {
        if (is_effective(prods[p][j], info.productive[j])) {
          meeting.push_back(p);
          break;
        }
      }
    }
    if (meeting.size() != 1) {
      r.reason = "class " + name + " has " + std::to_string(meeting.size()) + " productions meeting its component";
      return r;
    }
    const auto& gamma = prods[meeting.front()];
    unsigned in_weight = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_effective(gamma[j], info.productive[j])) continue;
      if (in_c.count(j)) {
        if (gamma[j].is_at_least()) {
          r.reason = "class " + name + " has unbounded multiplicity " + gamma[j].to_string() + " on cycle class " +
                     system.decl(j).name;
          return r;
        }
        in_weight += gamma[j].m();
      } else if (gamma[j].is_at_least() || !info.singleton_size[j]) {
        r.reason = "class " + name + " attaches " + gamma[j].to_string() + " copies of " + system.decl(j).name +
                   ", which is not a single fixed tree";
        return r;
      }
    }
    if (in_weight != 1) {
      r.reason = "class " + name + " uses " + std::to_string(in_weight) + " cycle subtrees in one production";
      return r;
    }
    r.meeting[k] = meeting.front();
  }
  r.passes = true;
  r.reason = "unit cycle";
  return r;
}

std::string member_names(const ComptonSystem& system, const std::vector<std::size_t>& members) {
  std::string s = "{";
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (k) s += ", ";
    s += system.decl(members[k]).name;
  }
  return s + "}";
}

CycleModuleInfo build_cycle(const ComptonSystem& system, const DependencyDigraph& g, const FiniteInfo& info,
                            std::size_t component, const UnitCycleResult& test) {
  const auto& members = g.components[component];
  const std::set<std::size_t> in_c(members.begin(), members.end());
  const std::size_t n = system.class_count();
  CycleModuleInfo c;
  c.component = component;
  std::size_t v = members.front();
  do {
    if (std::find(c.cycle.begin(), c.cycle.end(), v) != c.cycle.end()) {
      throw DomainError("component " + member_names(system, members) + " is not a single directed cycle");
    }
    const std::size_t p = test.meeting.at(v);
    const auto& gamma = system.decl(v).productions[p];
    std::size_t step = 1;
    std::optional<std::size_t> succ;
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_effective(gamma[j], info.productive[j])) continue;
      if (in_c.count(j)) {
        succ = j;
      } else {
        step += gamma[j].m() * *info.singleton_size[j];
      }
    }
    c.cycle.push_back(v);
    c.step_sizes.push_back(step);
    c.cycle_production.push_back(p);
    v = *succ;
  } while (v != members.front());
  if (c.cycle.size() != members.size()) {
    throw DomainError("component " + member_names(system, members) + " is not a single directed cycle");
  }
  for (std::size_t k : members) {
    auto& esc = c.escapes[k];
    const auto& prods = system.decl(k).productions;
    for (std::size_t p = 0; p < prods.size(); ++p) {
      if (!is_live(prods[p], info.productive)) continue;
      bool touches = false;
      for (std::size_t j : members) touches |= is_effective(prods[p][j], info.productive[j]);
      if (!touches) esc.push_back(p);
    }
  }
  return c;
}

}  // namespace

Radius RadiusClassification::verdict_for(const ComptonSystem& system, const ClassExpr& expr) const {
  Radius r = Radius::Finite;
  for (std::size_t i : system.referenced_classes(expr)) r = std::min(r, classes.at(i).verdict);
  return r;
}

const CycleModuleInfo* RadiusClassification::cycle_for_component(std::size_t component) const {
  for (const auto& c : cycles) {
    if (c.component == component) return &c;
  }
  return nullptr;
}

RadiusClassification classify_radius(const ComptonSystem& system, const DependencyDigraph& g) {
  const std::size_t n = system.class_count();
  const FiniteInfo info = analyze_finite(system, g);
  RadiusClassification out;
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    ComponentEvidence ev;
    ev.members = g.components[c];
    ev.nontrivial = g.nontrivial[c];
    if (ev.nontrivial) {
      const auto test = unit_cycle_test(system, g, info, c);
      ev.unit_cycle = test.passes;
      ev.reason = test.reason;
      if (test.passes) out.cycles.push_back(build_cycle(system, g, info, c, test));
    } else {
      ev.reason = "acyclic";
    }
    out.components.push_back(std::move(ev));
  }
  out.classes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& cr = out.classes[i];
    cr.component = g.component_of[i];
    cr.rank = g.rank[i];
    if (info.finite[i]) {
      cr.verdict = Radius::Finite;
      cr.polynomial = info.polynomial[i];
      cr.degree_bound = info.productive[i] ? info.degree_bound[i] : 0;
      cr.member_count = info.member_count[i];
      cr.evidence = info.productive[i] ? "finite: no reachable cycle or unbounded multiplicity" : "empty class";
      continue;
    }
    cr.verdict = Radius::One;
    std::vector<std::string> passing;
    for (std::size_t j : g.reachable_from(i)) {
      const std::size_t c = g.component_of[j];
      if (!g.nontrivial[c]) continue;
      if (!out.components[c].unit_cycle) {
        cr.verdict = Radius::SubOne;
        cr.evidence = "reaches component " + member_names(system, g.components[c]) + ": " + out.components[c].reason;
        break;
      }
      const std::string names = member_names(system, g.components[c]);
      if (std::find(passing.begin(), passing.end(), names) == passing.end()) passing.push_back(names);
    }
    if (cr.verdict == Radius::One) {
      if (passing.empty()) {
        cr.evidence = "acyclic with unbounded multiplicities only";
      } else {
        cr.evidence = "every reachable cycle is a unit cycle:";
        for (const auto& p : passing) cr.evidence += " " + p;
      }
    }
  }
  return out;
}

CycleModuleInfo extract_cycle_modules(const ComptonSystem& system, const DependencyDigraph& g, std::size_t component) {
  if (component >= g.components.size() || !g.nontrivial[component]) {
    throw DomainError("extract_cycle_modules: component is not a nontrivial strong component");
  }
  const FiniteInfo info = analyze_finite(system, g);
  const auto test = unit_cycle_test(system, g, info, component);
  if (!test.passes) {
    throw DomainError("extract_cycle_modules: component " + member_names(system, g.components[component]) +
                      " fails the unit-cycle test: " + test.reason);
  }
  return build_cycle(system, g, info, component, test);
}

bool CrosscheckReport::any_disagreement() const {
  return std::any_of(classes.begin(), classes.end(),
                     [](const GrowthEstimate& e) { return e.status == GrowthEstimate::Status::Disagree; });
}

const char* to_string(GrowthEstimate::Status s) {
  switch (s) {
    case GrowthEstimate::Status::Consistent: return "CONSISTENT";
    case GrowthEstimate::Status::Disagree: return "DISAGREE";
    case GrowthEstimate::Status::Skipped: return "SKIPPED";
    case GrowthEstimate::Status::Insufficient: return "INSUFFICIENT_ORDER";
  }
  return "?";
}

namespace {

double log_of(const Integer& v) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

CrosscheckReport growth_crosscheck(const ComptonSystem& system, const RadiusClassification& classification,
                                   const SystemSeries& series) {
  CrosscheckReport report;
  report.order = series.order;
  const std::size_t lo = std::max<std::size_t>(1, series.order / 2);
  for (std::size_t i = 0; i < system.class_count(); ++i) {
    GrowthEstimate e;
    e.name = system.decl(i).name;
    e.verdict = classification.classes.at(i).verdict;
    e.window_begin = lo;
    e.window_end = series.order;
    const auto& s = series.at(i);
    for (std::size_t n = lo; n <= series.order; ++n) {
      if (sgn(s[n]) <= 0) continue;
      const double est = std::exp(log_of(s[n].get_num()) / static_cast<double>(n));
      e.estimate = e.estimate ? std::max(*e.estimate, est) : est;
    }
    if (!e.estimate) {
      e.status = GrowthEstimate::Status::Skipped;
    } else if (series.order < 200) {
      e.status = GrowthEstimate::Status::Insufficient;
    } else if (e.verdict == Radius::SubOne) {
      e.status = *e.estimate <= 1.05 ? GrowthEstimate::Status::Disagree : GrowthEstimate::Status::Consistent;
    } else {
      e.status = *e.estimate >= 1.5 ? GrowthEstimate::Status::Disagree : GrowthEstimate::Status::Consistent;
    }
    report.classes.push_back(std::move(e));
  }
  return report;
}

}  // namespace forestlab

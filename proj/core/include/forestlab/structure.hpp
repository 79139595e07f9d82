#pragma once

// Dependency analysis of a system and the radius classification it supports.
//
// i -> j when some live production of class i has an effective slot on class j.
// A strong component is nontrivial when it has two or more classes or a
// self-loop. Ranks are heights in the condensation (sinks have rank 0).

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forestlab/evaluate.hpp"
#include "forestlab/gexpr.hpp"
#include "forestlab/series.hpp"
#include "forestlab/system.hpp"

namespace forestlab {

struct DependencyDigraph {
  std::vector<std::vector<std::size_t>> successors;  // sorted, includes self-loops
  std::vector<std::size_t> component_of;
  std::vector<std::vector<std::size_t>> components;  // members sorted; components in reverse topological order
  std::vector<bool> nontrivial;                      // per component
  std::vector<std::size_t> rank;                     // per class

  std::size_t size() const noexcept { return successors.size(); }
  bool has_edge(std::size_t i, std::size_t j) const;
  // Classes reachable from i, including i.
  std::vector<std::size_t> reachable_from(std::size_t i) const;
};

DependencyDigraph build_digraph(const ComptonSystem& system);

// Ordered so that min() along an edge is the verdict of the source.
enum class Radius { SubOne = 0, One = 1, Finite = 2 };

const char* to_string(Radius r);

struct CycleModuleInfo {
  std::size_t component = 0;
  std::vector<std::size_t> cycle;       // c_0 -> c_1 -> ... -> c_{r-1} -> c_0, c_0 the smallest index
  std::vector<std::size_t> step_sizes;  // size of the module from cycle[k] to cycle[k+1]
  std::vector<std::size_t> cycle_production;  // per cycle position: index into Gamma of the class
  std::map<std::size_t, std::vector<std::size_t>> escapes;  // class -> indices of Gamma^0 productions

  // |M_ii|: sum of all step sizes.
  std::size_t pump_size() const;
  // |M^_ik|: steps from i forward to k along the cycle.
  std::size_t connector_size(std::size_t from, std::size_t to) const;
};

struct ComponentEvidence {
  std::vector<std::size_t> members;
  bool nontrivial = false;
  bool unit_cycle = false;  // meaningful for nontrivial components
  std::string reason;
};

struct ClassRadius {
  Radius verdict = Radius::Finite;
  std::string evidence;
  std::size_t component = 0;
  std::size_t rank = 0;
  // FINITE classes: exact polynomial up to the structural degree bound.
  std::optional<TruncatedSeries> polynomial;
  std::optional<std::size_t> degree_bound;
  Integer member_count;
};

struct RadiusClassification {
  std::vector<ClassRadius> classes;
  std::vector<ComponentEvidence> components;
  std::vector<CycleModuleInfo> cycles;  // one per nontrivial component passing the unit-cycle test

  // Minimum verdict over the classes an expression refers to.
  Radius verdict_for(const ComptonSystem& system, const ClassExpr& expr) const;
  const CycleModuleInfo* cycle_for_component(std::size_t component) const;
};

RadiusClassification classify_radius(const ComptonSystem& system, const DependencyDigraph& digraph);

// Throws DomainError when the component fails the unit-cycle test.
CycleModuleInfo extract_cycle_modules(const ComptonSystem& system, const DependencyDigraph& digraph,
                                      std::size_t component);

// Non-recursive expressions for every class, bound in rank order.
struct ExplicitForms {
  std::vector<std::size_t> order;  // class indices in binding order
  std::vector<GExpr> bodies;       // per class index

  // `let ... in <target>` over exactly the bindings the target needs.
  GExpr for_class(const ComptonSystem& system, std::size_t cls) const;
  GExpr for_expression(const ComptonSystem& system, const ClassExpr& expr) const;
};

// Refuses (DomainError "RADIUS_SUB_ONE: ...") when any class has radius below one.
ExplicitForms to_explicit(const ComptonSystem& system, const DependencyDigraph& digraph,
                          const RadiusClassification& classification);

// Closed-form expression for a class expression (defs inline, classes by name).
GExpr class_expr_to_gexpr(const ComptonSystem& system, const ClassExpr& expr);

struct GrowthEstimate {
  std::string name;
  Radius verdict = Radius::Finite;
  std::optional<double> estimate;  // sup of t(n)^(1/n) over the window, absent for empty windows
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
  enum class Status { Consistent, Disagree, Skipped, Insufficient } status = Status::Skipped;
};

struct CrosscheckReport {
  std::size_t order = 0;
  std::vector<GrowthEstimate> classes;
  bool any_disagreement() const;
};

const char* to_string(GrowthEstimate::Status s);

// Flags DISAGREE when a radius->=1 class estimates >= 1.5, or a sub-one class <= 1.05,
// using the window [order/2, order]. Orders below 200 report Insufficient.
CrosscheckReport growth_crosscheck(const ComptonSystem& system, const RadiusClassification& classification,
                                   const SystemSeries& series);

}  // namespace forestlab

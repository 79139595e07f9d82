#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "forestlab/error.hpp"
#include "forestlab/evaluate.hpp"
#include "forestlab/structure.hpp"

using namespace forestlab;

namespace {

std::size_t idx(const ComptonSystem& s, const char* name) { return *s.find_class(name); }

}  // namespace

TEST_CASE("build_digraph") {
  const auto lin = corpus::load("lin.fst");
  const auto g = build_digraph(lin);
  CHECK(g.has_edge(1, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(g.components[g.component_of[1]] == std::vector<std::size_t>{1});
  CHECK(g.nontrivial[g.component_of[1]]);
  CHECK(g.rank[1] == 1);
  CHECK(g.rank[0] == 0);

  const auto bam = corpus::load("bamboo.fst");
  const auto gb = build_digraph(bam);
  const auto a = idx(bam, "Ta"), b = idx(bam, "Tb");
  CHECK(gb.component_of[a] == gb.component_of[b]);
  CHECK(gb.components[gb.component_of[a]].size() == 2);

  const auto h = corpus::load("height1.fst");
  const auto gh = build_digraph(h);
  for (bool nt : gh.nontrivial) CHECK_FALSE(nt);

  // Edges into empty classes and out of dead productions are dropped.
  const auto dead = parse_system("class T0 = node\nclass E = node / [E:1]\nclass A = node / [T0:1] | [E:1, A:1]\n");
  const auto gd = build_digraph(dead);
  CHECK_FALSE(gd.has_edge(2, 1));
  CHECK_FALSE(gd.has_edge(2, 2));
}

TEST_CASE("classify_radius on the corpus") {
  for (const auto& entry : corpus::entries()) {
    const auto s = corpus::load(entry.file);
    const auto c = classify_radius(s, build_digraph(s));
    CHECK_MESSAGE(c.verdict_for(s, s.expression_for(entry.query)) == entry.verdict, entry.file);
    CHECK(c.classes[0].verdict == Radius::Finite);
  }
}

TEST_CASE("classification details") {
  const auto bin = corpus::load("binary.fst");
  const auto cb = classify_radius(bin, build_digraph(bin));
  CHECK(cb.classes[1].verdict == Radius::SubOne);
  const auto& ev = cb.components[cb.classes[1].component];
  CHECK(ev.nontrivial);
  CHECK_FALSE(ev.unit_cycle);
  CHECK_FALSE(ev.reason.empty());

  // A finite class hanging below a cycle: chains capped by a fixed two-node tree.
  const auto s = parse_system(
      "class T0 = node\nclass P = node / [T0:1]\nclass Q = node / [P:2] | [T0:3]\nclass C = node / [P:1] | [C:1]\n");
  const auto c = classify_radius(s, build_digraph(s));
  CHECK(c.classes[idx(s, "P")].verdict == Radius::Finite);
  CHECK(c.classes[idx(s, "Q")].verdict == Radius::Finite);
  CHECK(c.classes[idx(s, "C")].verdict == Radius::One);
  REQUIRE(c.classes[idx(s, "Q")].polynomial.has_value());
  CHECK(c.classes[idx(s, "Q")].member_count == 2);
  CHECK(*c.classes[idx(s, "Q")].degree_bound >= 5);

  // Off-cycle slot over a two-member finite class breaks the unit-cycle test.
  const auto s2 = parse_system(
      "class T0 = node\nclass Q = node / [T0:1] | [T0:2]\nclass C = node / [T0:1] | [C:1, Q:1]\n");
  CHECK(classify_radius(s2, build_digraph(s2)).classes[idx(s2, "C")].verdict == Radius::SubOne);

  // An AtLeast slot on a cycle class fails.
  const auto s3 = parse_system("class T0 = node\nclass C = node / [T0:1] | [C:>=1]\n");
  CHECK(classify_radius(s3, build_digraph(s3)).classes[1].verdict == Radius::SubOne);
}

TEST_CASE("FINITE degree bounds are respected") {
  const auto s = parse_system(
      "class T0 = node\nclass P = node / [T0:1] | [T0:2]\nclass Q = node / [P:2, T0:1] | [P:1]\n");
  const auto c = classify_radius(s, build_digraph(s));
  const auto series = evaluate_system(s, 60);
  for (std::size_t i = 0; i < s.class_count(); ++i) {
    REQUIRE(c.classes[i].verdict == Radius::Finite);
    const std::size_t bound = *c.classes[i].degree_bound;
    for (std::size_t n = bound + 1; n <= 60; ++n) CHECK(series.at(i)[n] == 0);
    for (std::size_t n = 0; n <= bound; ++n) CHECK(series.at(i)[n] == (*c.classes[i].polynomial)[n]);
  }
}

TEST_CASE("extract_cycle_modules") {
  const auto lin = corpus::load("lin.fst");
  const auto gl = build_digraph(lin);
  const auto ml = extract_cycle_modules(lin, gl, gl.component_of[1]);
  CHECK(ml.pump_size() == 1);
  CHECK(ml.connector_size(1, 1) == 0);
  REQUIRE(ml.escapes.at(1).size() == 1);
  CHECK(lin.decl(1).productions[ml.escapes.at(1)[0]][0] == MultiplicityBound::exactly(1));

  const auto bam = corpus::load("bamboo.fst");
  const auto gb = build_digraph(bam);
  const auto a = idx(bam, "Ta"), b = idx(bam, "Tb");
  const auto mb = extract_cycle_modules(bam, gb, gb.component_of[a]);
  CHECK(mb.cycle == std::vector<std::size_t>{a, b});
  CHECK(mb.step_sizes == std::vector<std::size_t>{1, 2});
  CHECK(mb.pump_size() == 3);
  CHECK(mb.connector_size(a, b) == 1);
  CHECK(mb.connector_size(b, a) == 2);

  const auto ev = corpus::load("evenchains.fst");
  const auto ge = build_digraph(ev);
  CHECK(extract_cycle_modules(ev, ge, ge.component_of[1]).pump_size() == 2);

  const auto bin = corpus::load("binary.fst");
  const auto gbin = build_digraph(bin);
  CHECK_THROWS_AS(extract_cycle_modules(bin, gbin, gbin.component_of[1]), DomainError);
}

TEST_CASE("to_explicit") {
  const auto lin = corpus::load("lin.fst");
  const auto gl = build_digraph(lin);
  const auto fl = to_explicit(lin, gl, classify_radius(lin, gl));
  const auto tl = evaluate_gexpr(fl.for_class(lin, 1), 30);
  CHECK(tl == evaluate_system(lin, 30).at(1));
  for (std::size_t n = 0; n <= 30; ++n) CHECK(tl[n] == (n >= 2 ? 1 : 0));
  CHECK(to_string(fl.bodies[1]) == "x/(1-x^1) * T0");

  const auto bam = corpus::load("bamboo.fst");
  const auto gb = build_digraph(bam);
  const auto fb = to_explicit(bam, gb, classify_radius(bam, gb));
  const auto ta = evaluate_gexpr(fb.for_class(bam, idx(bam, "Ta")), 300);
  for (std::size_t n = 0; n <= 300; ++n) CHECK(ta[n] == (n >= 3 && n % 3 == 0 ? 1 : 0));

  const auto h = corpus::load("height1.fst");
  const auto gh = build_digraph(h);
  const auto fh = to_explicit(h, gh, classify_radius(h, gh));
  CHECK(to_string(fh.bodies[1]) == "x * Egeq(1, T0)");
  CHECK(evaluate_gexpr(fh.for_expression(h, h.expression_for("H")), 20) ==
        evaluate_gexpr(parse_gexpr("x + x * Egeq(1, x)"), 20));

  const auto all = corpus::load("alltrees.fst");
  const auto ga = build_digraph(all);
  try {
    to_explicit(all, ga, classify_radius(all, ga));
    FAIL("expected refusal");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).starts_with("RADIUS_SUB_ONE: explicit form unavailable"));
  }
}

TEST_CASE("growth_crosscheck") {
  for (const auto& entry : corpus::entries()) {
    const auto s = corpus::load(entry.file);
    const auto c = classify_radius(s, build_digraph(s));
    const auto r = growth_crosscheck(s, c, evaluate_system(s, 200));
    CHECK_MESSAGE(!r.any_disagreement(), entry.file);
  }
  const auto all = corpus::load("alltrees.fst");
  const auto ca = classify_radius(all, build_digraph(all));
  const auto ra = growth_crosscheck(all, ca, evaluate_system(all, 200));
  CHECK(*ra.classes[1].estimate >= 1.5);
  const auto lin = corpus::load("lin.fst");
  const auto rl = growth_crosscheck(lin, classify_radius(lin, build_digraph(lin)), evaluate_system(lin, 200));
  CHECK(*rl.classes[1].estimate == doctest::Approx(1.0));
  CHECK(growth_crosscheck(all, ca, evaluate_system(all, 50)).classes[1].status == GrowthEstimate::Status::Insufficient);
  const auto empty = parse_system("class T0 = node\nclass E = node / [E:1] | [T0:1, E:1]\n");
  const auto re = growth_crosscheck(empty, classify_radius(empty, build_digraph(empty)), evaluate_system(empty, 200));
  CHECK(re.classes[1].status == GrowthEstimate::Status::Skipped);
  CHECK_FALSE(re.classes[1].estimate.has_value());
}

namespace {

ComptonSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> classes(2, 5);
  const int n = classes(rng);
  std::vector<ClassDecl> decls{{"T0", {}}};
  std::uniform_int_distribution<int> nprod(1, 3);
  std::uniform_int_distribution<int> kind(0, 9);
  for (int i = 1; i <= n; ++i) {
    ClassDecl d{"C" + std::to_string(i), {}};
    const int np = nprod(rng);
    while (static_cast<int>(d.productions.size()) < np) {
      Production p(n + 1, MultiplicityBound::exactly(0));
      bool any = false;
      for (auto& slot : p) {
        const int k = kind(rng);
        if (k < 6) continue;
        slot = k < 8 ? MultiplicityBound::exactly(1) : k == 8 ? MultiplicityBound::exactly(2) : MultiplicityBound::at_least(1);
        any = true;
      }
      if (any) d.productions.push_back(std::move(p));
    }
    decls.push_back(std::move(d));
  }
  return ComptonSystem("random", std::nullopt, std::move(decls));
}

}  // namespace

TEST_CASE("verdicts are monotone along edges on random systems") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_system(rng);
    const auto g = build_digraph(s);
    const auto c = classify_radius(s, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j : g.successors[i]) CHECK(c.classes[i].verdict <= c.classes[j].verdict);
    }
    // Passing components are single directed cycles.
    for (const auto& cyc : c.cycles) {
      for (std::size_t k : cyc.cycle) {
        std::size_t inside = 0;
        for (std::size_t j : g.successors[k]) inside += g.component_of[j] == cyc.component;
        CHECK(inside == 1);
      }
    }
    bool all_ok = true;
    for (const auto& cr : c.classes) all_ok = all_ok && cr.verdict != Radius::SubOne;
    if (all_ok) {
      const auto forms = to_explicit(s, g, c);
      const auto series = evaluate_system(s, 60);
      for (std::size_t i = 0; i < s.class_count(); ++i) CHECK(evaluate_gexpr(forms.for_class(s, i), 60) == series.at(i));
    }
  }
}

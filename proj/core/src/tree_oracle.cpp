#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "forestlab/error.hpp"
#include "forestlab/trees.hpp"

namespace forestlab {

namespace {

void check_size(std::size_t n, const OracleLimits& limits) {
  if (n > limits.max_size) {
    throw BoundError("enumeration size " + std::to_string(n) + " exceeds the configured maximum " +
                     std::to_string(limits.max_size));
  }
}

// Calls emit(counts-per-index) for every multiset of items with nondecreasing index,
// total weight n, and a component count accepted by `count_ok`.
void for_each_multiset(const std::vector<std::size_t>& weights, std::size_t n,
                       const std::function<bool(std::size_t)>& count_ok,
                       const std::function<void(const std::vector<std::size_t>&)>& emit) {
  std::vector<std::size_t> picked;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t remaining) {
    if (remaining == 0) {
      if (count_ok(picked.size())) emit(picked);
      return;
    }
    for (std::size_t k = from; k < weights.size(); ++k) {
      if (weights[k] > remaining) continue;
      picked.push_back(k);
      rec(k, remaining - weights[k]);
      picked.pop_back();
    }
  };
  rec(0, n);
}

}  // namespace

const std::vector<RootedTree>& TreeEnumerator::trees(std::size_t n) {
  if (n == 0) throw DomainError("trees have at least one node");
  check_size(n, limits_);
  if (auto it = trees_.find(n); it != trees_.end()) return it->second;
  std::vector<RootedTree> out;
  for (const auto& f : forests(n - 1)) out.push_back(root_append(f));
  std::sort(out.begin(), out.end());
  return trees_.emplace(n, std::move(out)).first->second;
}

const std::vector<Forest>& TreeEnumerator::forests(std::size_t n) {
  check_size(n, limits_);
  if (auto it = forests_.find(n); it != forests_.end()) return it->second;
  std::vector<RootedTree> pool;
  std::vector<std::size_t> weights;
  for (std::size_t s = 1; s <= n; ++s) {
    for (const auto& t : trees(s)) {
      pool.push_back(t);
      weights.push_back(s);
    }
  }
  std::vector<Forest> out;
  for_each_multiset(
      weights, n, [](std::size_t) { return true; },
      [&](const std::vector<std::size_t>& picked) {
        std::vector<RootedTree> comps;
        comps.reserve(picked.size());
        for (std::size_t k : picked) comps.push_back(pool[k]);
        out.emplace_back(std::move(comps));
      });
  std::sort(out.begin(), out.end());
  return forests_.emplace(n, std::move(out)).first->second;
}

std::vector<RootedTree> enumerate_trees(std::size_t n, OracleLimits limits) {
  TreeEnumerator e(limits);
  return e.trees(n);
}

TreeClassifier::TreeClassifier(const ComptonSystem& system, OracleLimits limits)
    : system_(system), productive_(productive_classes(system)), limits_(limits) {}

bool TreeClassifier::matches(const std::vector<const std::vector<bool>*>& child_masks,
                             const std::vector<std::size_t>& multiplicity, const Production& gamma) {
  const std::size_t classes = gamma.size();
  std::vector<std::size_t> counts(classes, 0);
  std::function<bool(std::size_t)> assign_group;
  std::function<bool(std::size_t, std::size_t, std::size_t)> distribute;

  // Spread `left` copies of group g over candidate classes starting at index j.
  distribute = [&](std::size_t g, std::size_t j, std::size_t left) -> bool {
    if (++steps_ > limits_.max_backtrack_steps) throw BoundError("classification backtracking limit exceeded");
    if (left == 0) return assign_group(g + 1);
    for (std::size_t c = j; c < classes; ++c) {
      if (!(*child_masks[g])[c] || gamma[c].is_zero()) continue;
      const std::size_t cap = gamma[c].is_exactly() ? (gamma[c].m() > counts[c] ? gamma[c].m() - counts[c] : 0) : left;
      for (std::size_t take = std::min(cap, left); take >= 1; --take) {
        counts[c] += take;
        const bool ok = distribute(g, c + 1, left - take);
        counts[c] -= take;
        if (ok) return true;
      }
    }
    return false;
  };
  assign_group = [&](std::size_t g) -> bool {
    if (g == child_masks.size()) {
      for (std::size_t c = 0; c < classes; ++c) {
        if (gamma[c].is_exactly() ? counts[c] != gamma[c].m() : counts[c] < gamma[c].m()) return false;
      }
      return true;
    }
    return distribute(g, 0, multiplicity[g]);
  };
  return assign_group(0);
}

const std::vector<bool>& TreeClassifier::mask(const RootedTree& tree) {
  if (auto it = memo_.find(tree.encoding()); it != memo_.end()) return it->second;
  const std::size_t classes = system_.class_count();
  std::vector<const std::vector<bool>*> groups;
  std::vector<std::size_t> multiplicity;
  const auto& ch = tree.children();
  for (std::size_t k = 0; k < ch.size(); ++k) {
    if (k > 0 && ch[k] == ch[k - 1]) {
      ++multiplicity.back();
      continue;
    }
    groups.push_back(&mask(ch[k]));
    multiplicity.push_back(1);
  }
  std::vector<bool> result(classes, false);
  result[0] = tree.is_leaf();
  for (std::size_t i = 1; i < classes; ++i) {
    if (!productive_[i]) continue;
    for (const auto& gamma : system_.decl(i).productions) {
      if (matches(groups, multiplicity, gamma)) {
        result[i] = true;
        break;
      }
    }
  }
  return memo_.emplace(tree.encoding(), std::move(result)).first->second;
}

std::vector<std::size_t> TreeClassifier::classify(const RootedTree& tree) {
  const auto& m = mask(tree);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i]) out.push_back(i);
  }
  return out;
}

bool TreeClassifier::contains(const RootedTree& tree, std::size_t cls) { return mask(tree).at(cls); }

std::vector<std::size_t> classify_tree(const RootedTree& tree, const ComptonSystem& system) {
  TreeClassifier classifier(system);
  return classifier.classify(tree);
}

EnumerationOracle::EnumerationOracle(const ComptonSystem& system, OracleLimits limits)
    : system_(system), limits_(limits), enumerator_(limits), classifier_(system, limits) {}

void EnumerationOracle::check(std::size_t n) const { check_size(n, limits_); }

std::vector<RootedTree> EnumerationOracle::tree_members_upto(const ClassExpr& expr, std::size_t n) {
  std::vector<RootedTree> out;
  for (std::size_t s = 1; s <= n; ++s) {
    for (const auto& f : members(expr, s)) {
      if (f.components().size() != 1) throw DomainError("multiset operand produced a forest: " + f.to_string());
      out.push_back(f.components().front());
    }
  }
  return out;
}

std::vector<Forest> EnumerationOracle::members(const ClassExpr& expr, std::size_t n) {
  check(n);
  std::vector<Forest> out;
  switch (expr.kind) {
    case ClassExpr::Kind::NodeClass:
      if (n == 1) out.emplace_back(std::vector<RootedTree>{RootedTree()});
      return out;
    case ClassExpr::Kind::Ref: {
      if (auto i = system_.find_class(expr.name)) {
        if (n == 0) return out;
        for (const auto& t : enumerator_.trees(n)) {
          if (classifier_.contains(t, *i)) out.emplace_back(std::vector<RootedTree>{t});
        }
        return out;
      }
      if (const Definition* d = system_.find_definition(expr.name)) return members(d->expr, n);
      throw ParseError(ParseError::Kind::UnknownClass, 0, 0, expr.name);
    }
    case ClassExpr::Kind::Union: {
      std::set<Forest> all;
      for (const auto& o : expr.operands) {
        for (auto& f : members(o, n)) all.insert(std::move(f));
      }
      return {all.begin(), all.end()};
    }
    case ClassExpr::Kind::Sum: {
      // Fold left: partial sums of the first r operands by size.
      std::vector<std::set<Forest>> partial(n + 1);
      for (std::size_t s = 0; s <= n; ++s) {
        for (auto& f : members(expr.operands[0], s)) partial[s].insert(std::move(f));
      }
      for (std::size_t r = 1; r < expr.operands.size(); ++r) {
        std::vector<std::vector<Forest>> next_members(n + 1);
        for (std::size_t s = 0; s <= n; ++s) next_members[s] = members(expr.operands[r], s);
        std::vector<std::set<Forest>> next(n + 1);
        for (std::size_t total = 0; total <= n; ++total) {
          for (std::size_t a = 0; a <= total; ++a) {
            for (const auto& f1 : partial[a]) {
              for (const auto& f2 : next_members[total - a]) next[total].insert(f1 + f2);
            }
          }
        }
        partial = std::move(next);
      }
      return {partial[n].begin(), partial[n].end()};
    }
    case ClassExpr::Kind::Multiset: {
      const MultiplicityBound bound = expr.bound;
      const auto pool = tree_members_upto(expr.operands.front(), n);
      std::vector<std::size_t> weights;
      for (const auto& t : pool) weights.push_back(t.size());
      for_each_multiset(
          weights, n,
          [bound](std::size_t count) { return bound.is_exactly() ? count == bound.m() : count >= bound.m(); },
          [&](const std::vector<std::size_t>& picked) {
            std::vector<RootedTree> comps;
            for (std::size_t k : picked) comps.push_back(pool[k]);
            out.emplace_back(std::move(comps));
          });
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
    case ClassExpr::Kind::RootAppend: {
      if (n == 0) return out;
      std::set<Forest> all;
      for (const auto& f : members(expr.operands.front(), n - 1)) {
        all.insert(Forest(std::vector<RootedTree>{root_append(f)}));
      }
      return {all.begin(), all.end()};
    }
  }
  return out;
}

Integer count_by_enumeration(const ComptonSystem& system, const ClassExpr& expr, std::size_t n, OracleLimits limits) {
  EnumerationOracle oracle(system, limits);
  return oracle.count(expr, n);
}

}  // namespace forestlab

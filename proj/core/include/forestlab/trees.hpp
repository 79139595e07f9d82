#pragma once

// Concrete unordered rooted trees, forests and tree modules (trees with a
// designated leaf), plus the brute-force enumeration oracle.
//
// Literal format: nested parentheses, `()` is the one-node tree, `(()())` the
// cherry. Children are kept sorted by their encoding, so two trees are
// isomorphic iff their encodings are equal. Module literals append `@` and a
// dot-separated path of child indices to the designated leaf, e.g. `(()(()))@1.0`.

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "forestlab/series.hpp"
#include "forestlab/system.hpp"

namespace forestlab {

class RootedTree {
 public:
  // The one-node tree.
  RootedTree();
  explicit RootedTree(std::vector<RootedTree> children);

  static RootedTree parse(std::string_view literal);

  const std::vector<RootedTree>& children() const noexcept { return children_; }
  std::size_t size() const noexcept { return size_; }
  bool is_leaf() const noexcept { return children_.empty(); }
  const std::string& encoding() const noexcept { return encoding_; }

  friend bool operator==(const RootedTree& a, const RootedTree& b) { return a.encoding_ == b.encoding_; }
  friend std::strong_ordering operator<=>(const RootedTree& a, const RootedTree& b) {
    return a.encoding_ <=> b.encoding_;
  }

 private:
  std::vector<RootedTree> children_;
  std::size_t size_ = 1;
  std::string encoding_;
};

class Forest {
 public:
  Forest() = default;
  explicit Forest(std::vector<RootedTree> components);

  const std::vector<RootedTree>& components() const noexcept { return components_; }
  std::size_t size() const noexcept { return size_; }
  std::string to_string() const;

  friend Forest operator+(const Forest& a, const Forest& b);
  friend bool operator==(const Forest&, const Forest&) = default;
  friend auto operator<=>(const Forest& a, const Forest& b) { return a.components_ <=> b.components_; }

 private:
  std::vector<RootedTree> components_;
  std::size_t size_ = 0;
};

using TreePath = std::vector<std::size_t>;

RootedTree root_append(const Forest& forest);

// Throws DomainError on an invalid path.
RootedTree full_subtree(const RootedTree& tree, const TreePath& path);
RootedTree replace_subtree(const RootedTree& tree, const TreePath& path, const RootedTree& replacement);

class TreeModule {
 public:
  // The identity module: a single node that is its own designated leaf.
  TreeModule() = default;
  // Canonicalizes; the path must address a leaf of `tree`.
  TreeModule(const RootedTree& tree, const TreePath& leaf_path);

  static TreeModule identity() { return {}; }
  static TreeModule parse(std::string_view literal);

  const RootedTree& tree() const noexcept { return tree_; }
  const TreePath& leaf_path() const noexcept { return leaf_path_; }
  // One less than the number of nodes.
  std::size_t size() const noexcept { return tree_.size() - 1; }
  std::string to_string() const;

  friend bool operator==(const TreeModule&, const TreeModule&) = default;

 private:
  RootedTree tree_;
  TreePath leaf_path_;
};

TreeModule stack_compose(const TreeModule& outer, const TreeModule& inner);
RootedTree stack_apply(const TreeModule& module, const RootedTree& tree);

// Indecomposable factors along the root-to-leaf chain; empty for the identity.
std::vector<TreeModule> factor_module(const TreeModule& module);

struct StackDecomposition {
  std::vector<TreeModule> modules;
  RootedTree bottom;
};

// Splits `tree` along the chain root > ... > node at `chain`: tree = M_0 o ... o M_{k-1} o bottom.
StackDecomposition stack_decompose(const RootedTree& tree, const TreePath& chain);

struct OracleLimits {
  std::size_t max_size = 16;
  std::size_t max_backtrack_steps = 10'000'000;
};

// Canonical trees by size, memoized per instance.
class TreeEnumerator {
 public:
  explicit TreeEnumerator(OracleLimits limits = {}) : limits_(limits) {}

  const std::vector<RootedTree>& trees(std::size_t n);
  // All forests of total size n (n = 0 gives the empty forest).
  const std::vector<Forest>& forests(std::size_t n);

  const OracleLimits& limits() const noexcept { return limits_; }

 private:
  std::map<std::size_t, std::vector<RootedTree>> trees_;
  std::map<std::size_t, std::vector<Forest>> forests_;
  OracleLimits limits_;
};

std::vector<RootedTree> enumerate_trees(std::size_t n, OracleLimits limits = {});

// Membership under least-fixed-point semantics, memoized per instance.
class TreeClassifier {
 public:
  explicit TreeClassifier(const ComptonSystem& system, OracleLimits limits = {});

  // Sorted class indices containing `tree`.
  std::vector<std::size_t> classify(const RootedTree& tree);
  bool contains(const RootedTree& tree, std::size_t cls);

 private:
  const std::vector<bool>& mask(const RootedTree& tree);
  bool matches(const std::vector<const std::vector<bool>*>& child_masks, const std::vector<std::size_t>& multiplicity,
               const Production& gamma);

  const ComptonSystem& system_;
  std::vector<bool> productive_;
  OracleLimits limits_;
  std::size_t steps_ = 0;
  std::map<std::string, std::vector<bool>> memo_;
};

std::vector<std::size_t> classify_tree(const RootedTree& tree, const ComptonSystem& system);

// Members of size n of the class (or forest class) denoted by `expr`, by exhaustive
// enumeration and classification. Trees are returned as one-component forests.
class EnumerationOracle {
 public:
  explicit EnumerationOracle(const ComptonSystem& system, OracleLimits limits = {});

  std::vector<Forest> members(const ClassExpr& expr, std::size_t n);
  Integer count(const ClassExpr& expr, std::size_t n) { return members(expr, n).size(); }

  TreeEnumerator& enumerator() { return enumerator_; }
  TreeClassifier& classifier() { return classifier_; }

 private:
  std::vector<RootedTree> tree_members_upto(const ClassExpr& expr, std::size_t n);
  void check(std::size_t n) const;

  const ComptonSystem& system_;
  OracleLimits limits_;
  TreeEnumerator enumerator_;
  TreeClassifier classifier_;
};

Integer count_by_enumeration(const ComptonSystem& system, const ClassExpr& expr, std::size_t n,
                             OracleLimits limits = {});

}  // namespace forestlab

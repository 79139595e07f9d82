#include <algorithm>
#include <sstream>
#include <utility>

#include "forestlab/error.hpp"
#include "forestlab/trees.hpp"

namespace forestlab {

RootedTree::RootedTree() : encoding_("()") {}

RootedTree::RootedTree(std::vector<RootedTree> children) : children_(std::move(children)) {
  std::sort(children_.begin(), children_.end());
  std::size_t bytes = 2;
  for (const auto& c : children_) {
    size_ += c.size_;
    bytes += c.encoding_.size();
  }
  encoding_.reserve(bytes);
  encoding_ += '(';
  for (const auto& c : children_) encoding_ += c.encoding_;
  encoding_ += ')';
}

namespace {

struct RawNode {
  std::vector<RawNode> children;
};

RawNode parse_raw(std::string_view text, std::size_t& pos) {
  if (pos >= text.size() || text[pos] != '(') {
    throw DomainError("tree literal: expected '(' at offset " + std::to_string(pos));
  }
  ++pos;
  RawNode node;
  while (pos < text.size() && text[pos] == '(') node.children.push_back(parse_raw(text, pos));
  if (pos >= text.size() || text[pos] != ')') {
    throw DomainError("tree literal: expected ')' at offset " + std::to_string(pos));
  }
  ++pos;
  return node;
}

std::size_t first_equal(const RootedTree& parent, const RootedTree& child) {
  const auto& ch = parent.children();
  return static_cast<std::size_t>(std::find(ch.begin(), ch.end(), child) - ch.begin());
}

// Builds a canonical tree from a raw one, mapping the as-written path (from `depth`)
// to the canonical path.
std::pair<RootedTree, TreePath> build(const RawNode& raw, const TreePath& path, std::size_t depth, bool track) {
  std::vector<RootedTree> children;
  children.reserve(raw.children.size());
  TreePath sub;
  std::size_t tracked = 0;
  for (std::size_t k = 0; k < raw.children.size(); ++k) {
    const bool on_path = track && depth < path.size() && path[depth] == k;
    auto [child, child_path] = build(raw.children[k], path, depth + 1, on_path);
    if (on_path) {
      sub = std::move(child_path);
      tracked = k;
    }
    children.push_back(std::move(child));
  }
  if (track && depth < path.size() && path[depth] >= raw.children.size()) {
    throw DomainError("path index " + std::to_string(path[depth]) + " out of range at depth " + std::to_string(depth));
  }
  if (raw.children.empty()) return {RootedTree(), {}};
  RootedTree marked_child = children[tracked];
  RootedTree tree(std::move(children));
  if (!track || depth >= path.size()) return {std::move(tree), {}};
  TreePath out{first_equal(tree, marked_child)};
  out.insert(out.end(), sub.begin(), sub.end());
  return {std::move(tree), std::move(out)};
}

// Replaces the node at path[depth..] and returns the canonical path to the replaced node.
std::pair<RootedTree, TreePath> replace_tracking(const RootedTree& tree, const TreePath& path, std::size_t depth,
                                                 const RootedTree& replacement) {
  if (depth == path.size()) return {replacement, {}};
  const auto& ch = tree.children();
  if (path[depth] >= ch.size()) {
    throw DomainError("invalid tree path: index " + std::to_string(path[depth]) + " at depth " +
                      std::to_string(depth) + " with " + std::to_string(ch.size()) + " children");
  }
  auto [child, sub] = replace_tracking(ch[path[depth]], path, depth + 1, replacement);
  std::vector<RootedTree> children = ch;
  children[path[depth]] = child;
  RootedTree out(std::move(children));
  TreePath p{first_equal(out, child)};
  p.insert(p.end(), sub.begin(), sub.end());
  return {std::move(out), std::move(p)};
}

std::string path_to_string(const TreePath& path) {
  std::string s;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k) s += '.';
    s += std::to_string(path[k]);
  }
  return s;
}

}  // namespace

RootedTree RootedTree::parse(std::string_view literal) {
  std::size_t pos = 0;
  RawNode raw = parse_raw(literal, pos);
  if (pos != literal.size()) throw DomainError("tree literal: trailing characters at offset " + std::to_string(pos));
  return build(raw, {}, 0, false).first;
}

Forest::Forest(std::vector<RootedTree> components) : components_(std::move(components)) {
  std::sort(components_.begin(), components_.end());
  for (const auto& c : components_) size_ += c.size();
}

std::string Forest::to_string() const {
  std::string s = "{";
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (k) s += ',';
    s += components_[k].encoding();
  }
  return s + "}";
}

Forest operator+(const Forest& a, const Forest& b) {
  std::vector<RootedTree> all = a.components_;
  all.insert(all.end(), b.components_.begin(), b.components_.end());
  return Forest(std::move(all));
}

RootedTree root_append(const Forest& forest) { return RootedTree(forest.components()); }

RootedTree full_subtree(const RootedTree& tree, const TreePath& path) {
  const RootedTree* node = &tree;
  for (std::size_t depth = 0; depth < path.size(); ++depth) {
    if (path[depth] >= node->children().size()) {
      throw DomainError("invalid tree path " + path_to_string(path));
    }
    node = &node->children()[path[depth]];
  }
  return *node;
}

RootedTree replace_subtree(const RootedTree& tree, const TreePath& path, const RootedTree& replacement) {
  return replace_tracking(tree, path, 0, replacement).first;
}

TreeModule::TreeModule(const RootedTree& tree, const TreePath& leaf_path) {
  if (!full_subtree(tree, leaf_path).is_leaf()) {
    throw DomainError("module path " + path_to_string(leaf_path) + " does not address a leaf");
  }
  // Re-canonicalize the path: equal siblings are interchangeable, take the first.
  auto [t, p] = replace_tracking(tree, leaf_path, 0, RootedTree());
  tree_ = std::move(t);
  leaf_path_ = std::move(p);
}

TreeModule TreeModule::parse(std::string_view literal) {
  const auto at = literal.find('@');
  std::string_view tree_part = literal.substr(0, at);
  TreePath path;
  if (at != std::string_view::npos) {
    std::string_view rest = literal.substr(at + 1);
    while (!rest.empty()) {
      const auto dot = rest.find('.');
      std::string_view piece = rest.substr(0, dot);
      if (piece.empty() || piece.find_first_not_of("0123456789") != std::string_view::npos || piece.size() > 9) {
        throw DomainError("module literal: malformed path component '" + std::string(piece) + "'");
      }
      path.push_back(std::stoul(std::string(piece)));
      if (dot == std::string_view::npos) break;
      rest = rest.substr(dot + 1);
      if (rest.empty()) throw DomainError("module literal: trailing '.' in path");
    }
  }
  std::size_t pos = 0;
  RawNode raw = parse_raw(tree_part, pos);
  if (pos != tree_part.size()) throw DomainError("module literal: trailing characters in tree");
  auto [tree, canonical] = build(raw, path, 0, true);
  return TreeModule(tree, canonical);
}

std::string TreeModule::to_string() const { return tree_.encoding() + "@" + path_to_string(leaf_path_); }

TreeModule stack_compose(const TreeModule& outer, const TreeModule& inner) {
  auto [tree, graft] = replace_tracking(outer.tree(), outer.leaf_path(), 0, inner.tree());
  TreePath leaf = graft;
  leaf.insert(leaf.end(), inner.leaf_path().begin(), inner.leaf_path().end());
  return TreeModule(tree, leaf);
}

RootedTree stack_apply(const TreeModule& module, const RootedTree& tree) {
  return replace_subtree(module.tree(), module.leaf_path(), tree);
}

StackDecomposition stack_decompose(const RootedTree& tree, const TreePath& chain) {
  StackDecomposition out;
  const RootedTree* node = &tree;
  for (std::size_t depth = 0; depth < chain.size(); ++depth) {
    if (chain[depth] >= node->children().size()) throw DomainError("invalid chain path " + path_to_string(chain));
    auto [top, leaf] = replace_tracking(*node, {chain[depth]}, 0, RootedTree());
    out.modules.emplace_back(top, leaf);
    node = &node->children()[chain[depth]];
  }
  out.bottom = *node;
  return out;
}

std::vector<TreeModule> factor_module(const TreeModule& module) {
  return stack_decompose(module.tree(), module.leaf_path()).modules;
}

}  // namespace forestlab

#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "globop/base.hpp"

namespace globop {

// A node of a pasting-diagram shape. Children are ordered; a node at depth k
// stands for a k-cell slot of the diagram, so the whole tree is a globular
// pasting scheme once a dimension is fixed.
struct TreeNode {
  std::vector<TreeNode> children;
};

inline bool operator==(const TreeNode& a, const TreeNode& b) {
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!(a.children[i] == b.children[i])) return false;
  return true;
}
inline bool operator!=(const TreeNode& a, const TreeNode& b) { return !(a == b); }

inline bool operator<(const TreeNode& a, const TreeNode& b) {
  return std::lexicographical_compare(
      a.children.begin(), a.children.end(), b.children.begin(), b.children.end(),
      [](const TreeNode& x, const TreeNode& y) { return x < y; });
}

// A pasting-diagram shape: an ordered rooted tree of height <= dim. The
// dimension is part of the value, so the point diagram at dim n is distinct
// from the point diagram at dim n-1.
struct PastingTree {
  int dim = 0;
  TreeNode root;
};

inline bool operator==(const PastingTree& a, const PastingTree& b) {
  return a.dim == b.dim && a.root == b.root;
}
inline bool operator!=(const PastingTree& a, const PastingTree& b) { return !(a == b); }
inline bool operator<(const PastingTree& a, const PastingTree& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  return a.root < b.root;
}

inline int tree_height(const TreeNode& n) {
  int h = 0;
  for (const auto& c : n.children) h = std::max(h, 1 + tree_height(c));
  return h;
}
inline int tree_height(const PastingTree& t) { return tree_height(t.root); }

inline int node_count(const TreeNode& n) {
  int c = 1;
  for (const auto& ch : n.children) c += node_count(ch);
  return c;
}
inline int node_count(const PastingTree& t) { return node_count(t.root); }

// Number of nodes at exactly the given depth.
inline int node_count_at(const TreeNode& n, int depth) {
  if (depth == 0) return 1;
  int c = 0;
  for (const auto& ch : n.children) c += node_count_at(ch, depth - 1);
  return c;
}
inline int node_count_at(const PastingTree& t, int depth) { return node_count_at(t.root, depth); }

inline void check_tree(const PastingTree& t) {
  if (t.dim < 0) throw invalid_argument_error("pasting tree dimension must be >= 0");
  if (tree_height(t) > t.dim)
    throw invalid_argument_error("pasting tree height exceeds its dimension");
}

// The linear tree of height n at dim n: the shape of a single n-cell.
inline PastingTree simple_tree(int n) {
  if (n < 0) throw invalid_argument_error("simple_tree: dimension must be >= 0");
  TreeNode node;
  for (int i = 0; i < n; ++i) {
    TreeNode parent;
    parent.children.push_back(std::move(node));
    node = std::move(parent);
  }
  return PastingTree{n, std::move(node)};
}

inline PastingTree point_tree(int n) { return PastingTree{n, TreeNode{}}; }

namespace detail {
inline TreeNode drop_below(const TreeNode& n, int remaining) {
  TreeNode out;
  if (remaining == 0) return out;
  out.children.reserve(n.children.size());
  for (const auto& c : n.children) out.children.push_back(drop_below(c, remaining - 1));
  return out;
}
} // namespace detail

// Truncate to dimension k: drop all nodes deeper than k.
inline PastingTree truncate_tree(const PastingTree& t, int k) {
  if (k < 0 || k > t.dim) throw invalid_argument_error("truncate_tree: level out of range");
  return PastingTree{k, detail::drop_below(t.root, k)};
}

// The shared source-and-target shape: drop top-dimension nodes, lower dim by 1.
inline PastingTree boundary(const PastingTree& t) {
  if (t.dim < 1) throw invalid_argument_error("boundary: dimension-zero tree has no boundary");
  return truncate_tree(t, t.dim - 1);
}

// Same tree viewed as a degenerate diagram at a higher dimension.
inline PastingTree promote(const PastingTree& t, int dim) {
  if (dim < t.dim) throw invalid_argument_error("promote: target dimension below tree dimension");
  return PastingTree{dim, t.root};
}

enum class TreeClass { simple, degenerate, neither };

inline TreeClass classify(const PastingTree& t) {
  if (tree_height(t) < t.dim) return TreeClass::degenerate;
  if (t == simple_tree(t.dim)) return TreeClass::simple;
  return TreeClass::neither;
}

// A childless node: the slot of a maximal cell. Reported in depth-first
// pre-order; height doubles as the dimension of the cell labelling the slot.
struct LeafPosition {
  std::vector<int> path;
  int height = 0;
};

inline bool operator==(const LeafPosition& a, const LeafPosition& b) {
  return a.path == b.path && a.height == b.height;
}

namespace detail {
inline void collect_leaves(const TreeNode& n, std::vector<int>& path,
                           std::vector<LeafPosition>& out) {
  if (n.children.empty()) {
    out.push_back(LeafPosition{path, static_cast<int>(path.size())});
    return;
  }
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_leaves(n.children[i], path, out);
    path.pop_back();
  }
}
} // namespace detail

inline std::vector<LeafPosition> leaves(const PastingTree& t) {
  std::vector<LeafPosition> out;
  std::vector<int> path;
  detail::collect_leaves(t.root, path, out);
  return out;
}

// --- substitution -----------------------------------------------------------

// Where an input slot (leaf of the base tree x leaf of its substitute) ended
// up in the substituted tree. Either it survives as a leaf of the result, or
// it was covered during gluing and sits on a boundary edge of an interior
// node: `edge_index` counts gaps between that node's children (0..n_children),
// and the cell at the slot is the source side of the child at `edge_index`
// (or the target side of the last child when the edge is the trailing one).
struct SlotFate {
  bool survived = false;
  int result_leaf = -1;
  std::vector<int> node_path;
  int edge_index = -1;
};

struct SubstResult {
  PastingTree tree;
  // slots[i][p]: fate of leaf p of the i-th substitute.
  std::vector<std::vector<SlotFate>> slots;
  // origins of each result leaf, in result-leaf order; an entry may list
  // several slots when boundaries were merged.
  std::vector<std::vector<std::pair<int, int>>> leaf_origins;
};

namespace detail {

struct ANode {
  std::vector<ANode> children;
  std::vector<std::pair<int, int>> origins;
  std::vector<std::pair<std::pair<int, int>, int>> covered;
};

inline ANode annotate(const TreeNode& n, int outer, int& counter) {
  ANode out;
  if (n.children.empty()) {
    out.origins.emplace_back(outer, counter++);
    return out;
  }
  out.children.reserve(n.children.size());
  for (const auto& c : n.children) out.children.push_back(annotate(c, outer, counter));
  return out;
}

inline std::string path_string(const std::vector<int>& path) {
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(path[i]);
  }
  return s + "]";
}

// Glue b onto a along dimension k. `depth` is the depth of the node pair
// being merged; gluing happens at depth k, matching above it.
inline void compose_into(ANode& a, ANode&& b, int k, int depth, std::vector<int>& path) {
  if (depth == k) {
    int offset = static_cast<int>(a.children.size());
    if (!b.children.empty() && a.children.empty() && !a.origins.empty()) {
      for (auto& o : a.origins) a.covered.emplace_back(o, offset);
      a.origins.clear();
    }
    if (b.children.empty() && !a.children.empty() && !b.origins.empty()) {
      for (auto& o : b.origins) a.covered.emplace_back(o, offset);
      b.origins.clear();
    }
    for (auto& o : b.origins) a.origins.push_back(o);
    for (auto& [o, e] : b.covered) a.covered.emplace_back(o, e + offset);
    for (auto& c : b.children) a.children.push_back(std::move(c));
    return;
  }
  if (a.children.size() != b.children.size())
    throw invalid_argument_error("subst: boundary-incoherent assignment near node " +
                                 path_string(path) + " (child counts " +
                                 std::to_string(a.children.size()) + " vs " +
                                 std::to_string(b.children.size()) + ")");
  for (auto& o : b.origins) a.origins.push_back(o);
  for (auto& oc : b.covered) a.covered.push_back(oc);
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    compose_into(a.children[i], std::move(b.children[i]), k, depth + 1, path);
    path.pop_back();
  }
}

inline ANode flatten(const TreeNode& node, int depth, int& leaf_counter,
                     const std::vector<PastingTree>& subs, std::vector<int>& path) {
  if (node.children.empty()) {
    int idx = leaf_counter++;
    const PastingTree& sub = subs[static_cast<std::size_t>(idx)];
    if (sub.dim != depth)
      throw invalid_argument_error("subst: substitute " + std::to_string(idx) + " has dimension " +
                                   std::to_string(sub.dim) + ", slot at " + path_string(path) +
                                   " requires " + std::to_string(depth));
    int inner = 0;
    return annotate(sub.root, idx, inner);
  }
  path.push_back(0);
  ANode acc = flatten(node.children[0], depth + 1, leaf_counter, subs, path);
  path.pop_back();
  for (std::size_t i = 1; i < node.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    ANode piece = flatten(node.children[i], depth + 1, leaf_counter, subs, path);
    path.pop_back();
    std::vector<int> at;
    compose_into(acc, std::move(piece), depth, 0, at);
  }
  return acc;
}

inline void harvest(const ANode& n, std::vector<int>& path, int& leaf_counter, SubstResult& out,
                    TreeNode& plain) {
  if (n.children.empty()) {
    int leaf = leaf_counter++;
    out.leaf_origins.emplace_back();
    for (auto& [i, p] : n.origins) {
      out.leaf_origins.back().emplace_back(i, p);
      auto& fate = out.slots[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
      fate.survived = true;
      fate.result_leaf = leaf;
    }
  }
  for (auto& [origin, edge] : n.covered) {
    auto& fate = out.slots[static_cast<std::size_t>(origin.first)]
                          [static_cast<std::size_t>(origin.second)];
    fate.survived = false;
    fate.node_path = path;
    fate.edge_index = edge;
  }
  plain.children.resize(n.children.size());
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    harvest(n.children[i], path, leaf_counter, out, plain.children[i]);
    path.pop_back();
  }
}

} // namespace detail

// Replace each maximal cell of `t` by a diagram of the matching dimension and
// flatten. Substitutes are listed in depth-first leaf order. This is the
// multiplication of the free strict higher category monad at the terminal
// globular set, restricted to the shape `t`.
inline SubstResult subst(const PastingTree& t, const std::vector<PastingTree>& subs) {
  auto ls = leaves(t);
  if (subs.size() != ls.size())
    throw invalid_argument_error("subst: expected " + std::to_string(ls.size()) +
                                 " substitutes, got " + std::to_string(subs.size()));
  SubstResult out;
  out.slots.resize(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    check_tree(subs[i]);
    out.slots[i].resize(leaves(subs[i]).size());
  }
  int leaf_counter = 0;
  std::vector<int> path;
  detail::ANode root = detail::flatten(t.root, 0, leaf_counter, subs, path);
  out.tree.dim = t.dim;
  int result_leaves = 0;
  detail::harvest(root, path, result_leaves, out, out.tree.root);
  return out;
}

// Convenience: identity substitution sends each slot to the simple diagram of
// its height, so subst(t, identity_subs(t)).tree == t.
inline std::vector<PastingTree> identity_subs(const PastingTree& t) {
  std::vector<PastingTree> subs;
  for (const auto& l : leaves(t)) subs.push_back(simple_tree(l.height));
  return subs;
}

// --- enumeration ------------------------------------------------------------

namespace detail {
inline void enumerate_nodes(int max_height, int budget, std::vector<TreeNode>& out);

// All ordered child lists with total node count <= budget, heights <= max_height.
inline void enumerate_lists(int max_height, int budget, std::vector<std::vector<TreeNode>>& out) {
  out.push_back({});
  if (budget <= 0 || max_height < 0) return;
  std::vector<TreeNode> firsts;
  enumerate_nodes(max_height, budget, firsts);
  for (const auto& first : firsts) {
    int used = node_count(first);
    std::vector<std::vector<TreeNode>> rests;
    enumerate_lists(max_height, budget - used, rests);
    for (auto& rest : rests) {
      std::vector<TreeNode> list;
      list.reserve(rest.size() + 1);
      list.push_back(first);
      for (auto& r : rest) list.push_back(std::move(r));
      out.push_back(std::move(list));
    }
  }
}

inline void enumerate_nodes(int max_height, int budget, std::vector<TreeNode>& out) {
  if (budget < 1 || max_height < 0) return;
  std::vector<std::vector<TreeNode>> lists;
  if (max_height >= 1)
    enumerate_lists(max_height - 1, budget - 1, lists);
  else
    lists.push_back({});
  for (auto& list : lists) out.push_back(TreeNode{std::move(list)});
}
} // namespace detail

// All dim-n trees with node count (root included) <= max_nodes, ordered by
// node count and then lexicographically on the child structure.
inline std::vector<PastingTree> enumerate_trees(int n, int max_nodes) {
  if (max_nodes < 1) throw invalid_argument_error("enumerate_trees: max_nodes must be >= 1");
  std::vector<TreeNode> nodes;
  detail::enumerate_nodes(n, max_nodes, nodes);
  std::stable_sort(nodes.begin(), nodes.end(), [](const TreeNode& a, const TreeNode& b) {
    int ca = node_count(a), cb = node_count(b);
    if (ca != cb) return ca < cb;
    return a < b;
  });
  std::vector<PastingTree> out;
  out.reserve(nodes.size());
  for (auto& nd : nodes) out.push_back(PastingTree{n, std::move(nd)});
  return out;
}

// --- text form --------------------------------------------------------------

namespace detail {
inline void print_node(const TreeNode& n, std::string& out) {
  out += '[';
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ',';
    print_node(n.children[i], out);
  }
  out += ']';
}

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
}

inline TreeNode parse_node(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size() || s[i] != '[') throw parse_error("expected '[' in tree literal", i);
  ++i;
  TreeNode n;
  skip_ws(s, i);
  if (i < s.size() && s[i] == ']') {
    ++i;
    return n;
  }
  while (true) {
    n.children.push_back(parse_node(s, i));
    skip_ws(s, i);
    if (i >= s.size()) throw parse_error("unterminated tree literal", i);
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] == ']') {
      ++i;
      return n;
    }
    throw parse_error("expected ',' or ']' in tree literal", i);
  }
}
} // namespace detail

// Canonical literal: `<dim>:[...]`, no whitespace.
inline std::string print_tree(const PastingTree& t) {
  std::string out = std::to_string(t.dim);
  out += ':';
  detail::print_node(t.root, out);
  return out;
}

inline PastingTree parse_tree(const std::string& s, std::size_t& i) {
  detail::skip_ws(s, i);
  std::size_t start = i;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  if (i == start) throw parse_error("expected dimension in tree literal", i);
  int dim = std::stoi(s.substr(start, i - start));
  detail::skip_ws(s, i);
  if (i >= s.size() || s[i] != ':') throw parse_error("expected ':' in tree literal", i);
  ++i;
  PastingTree t{dim, detail::parse_node(s, i)};
  if (tree_height(t) > t.dim)
    throw parse_error("tree height exceeds declared dimension", i);
  return t;
}

inline PastingTree parse_tree(const std::string& s) {
  std::size_t i = 0;
  PastingTree t = parse_tree(s, i);
  detail::skip_ws(s, i);
  if (i != s.size()) throw parse_error("trailing input after tree literal", i);
  return t;
}

} // namespace globop

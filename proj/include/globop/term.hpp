#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "globop/base.hpp"
#include "globop/tree.hpp"

namespace globop {

// --- terms -------------------------------------------------------------------

class Term;
using TermPtr = std::shared_ptr<const Term>;

// An element of the free operad over a signature: an identity cell, a named
// generator, or an operadic composite. Immutable and freely shareable.
class Term {
public:
  enum class Kind { identity, generator, composite };

  Kind kind;
  int id_dim = -1;           // identity only
  std::string name;          // generator only
  TermPtr head;              // composite only
  std::vector<TermPtr> args; // composite only

  static TermPtr make_identity(int k) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::identity;
    t->id_dim = k;
    return t;
  }
  static TermPtr make_generator(std::string n) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::generator;
    t->name = std::move(n);
    return t;
  }
  static TermPtr make_composite(TermPtr h, std::vector<TermPtr> as) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::composite;
    t->head = std::move(h);
    t->args = std::move(as);
    return t;
  }
};

inline bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
  case Term::Kind::identity: return a->id_dim == b->id_dim;
  case Term::Kind::generator: return a->name == b->name;
  case Term::Kind::composite:
    if (a->args.size() != b->args.size()) return false;
    if (!term_equal(a->head, b->head)) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
      if (!term_equal(a->args[i], b->args[i])) return false;
    return true;
  }
  return false;
}

inline int term_compare(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return 0;
  auto rank = [](Term::Kind k) {
    return k == Term::Kind::identity ? 0 : k == Term::Kind::generator ? 1 : 2;
  };
  if (rank(a->kind) != rank(b->kind)) return rank(a->kind) < rank(b->kind) ? -1 : 1;
  switch (a->kind) {
  case Term::Kind::identity:
    return a->id_dim == b->id_dim ? 0 : (a->id_dim < b->id_dim ? -1 : 1);
  case Term::Kind::generator: return a->name.compare(b->name);
  case Term::Kind::composite: {
    int c = term_compare(a->head, b->head);
    if (c) return c;
    if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
      c = term_compare(a->args[i], b->args[i]);
      if (c) return c;
    }
    return 0;
  }
  }
  return 0;
}

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return term_compare(a, b) < 0; }
};

inline int term_size(const TermPtr& t) {
  if (t->kind != Term::Kind::composite) return 1;
  int s = term_size(t->head);
  for (const auto& a : t->args) s += term_size(a);
  return s;
}

inline bool contains_generator(const TermPtr& t, const std::set<std::string>& names) {
  switch (t->kind) {
  case Term::Kind::identity: return false;
  case Term::Kind::generator: return names.count(t->name) > 0;
  case Term::Kind::composite:
    if (contains_generator(t->head, names)) return true;
    for (const auto& a : t->args)
      if (contains_generator(a, names)) return true;
    return false;
  }
  return false;
}

// --- signatures --------------------------------------------------------------

struct GeneratorDecl {
  std::string name;
  int dim = 1;
  PastingTree shape;
  TermPtr src; // null for dim 1: boundaries are the identity 0-cell
  TermPtr tgt;
};

// Per-dimension ordered generator lists. There are never 0-dimensional
// generators; dimension 0 holds only the identity cell.
class Signature {
public:
  int top_dim = 0;

  explicit Signature(int n = 0) : top_dim(n), by_dim_(static_cast<std::size_t>(n) + 1) {}

  const std::vector<GeneratorDecl>& at_dim(int k) const {
    return by_dim_.at(static_cast<std::size_t>(k));
  }

  const GeneratorDecl* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &by_dim_[it->second.first][it->second.second];
  }

  const GeneratorDecl& require(const std::string& name) const {
    const GeneratorDecl* d = find(name);
    if (!d) throw invalid_argument_error("unknown generator '" + name + "'");
    return *d;
  }

  void add(GeneratorDecl decl) {
    if (decl.dim < 1 || decl.dim > top_dim)
      throw invalid_argument_error("generator '" + decl.name + "' has dimension " +
                                   std::to_string(decl.dim) + " outside 1.." +
                                   std::to_string(top_dim));
    if (decl.shape.dim != decl.dim)
      throw invalid_argument_error("generator '" + decl.name + "': shape dimension mismatch");
    check_tree(decl.shape);
    if (index_.count(decl.name))
      throw invalid_argument_error("duplicate generator name '" + decl.name + "'");
    if (decl.name.size() >= 3 && decl.name.compare(0, 2, "id") == 0 &&
        decl.name.find_first_not_of("0123456789", 2) == std::string::npos)
      throw invalid_argument_error("generator name '" + decl.name + "' is reserved");
    auto k = static_cast<std::size_t>(decl.dim);
    index_[decl.name] = {k, by_dim_[k].size()};
    by_dim_[k].push_back(std::move(decl));
  }

  // Declaration index used for deterministic orderings.
  int order_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return -1;
    int off = 0;
    for (std::size_t d = 0; d < it->second.first; ++d) off += static_cast<int>(by_dim_[d].size());
    return off + static_cast<int>(it->second.second);
  }

private:
  std::vector<std::vector<GeneratorDecl>> by_dim_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> index_;
};

// --- basic term queries -------------------------------------------------------

inline int term_dim(const TermPtr& t, const Signature& sig) {
  switch (t->kind) {
  case Term::Kind::identity: return t->id_dim;
  case Term::Kind::generator: return sig.require(t->name).dim;
  case Term::Kind::composite: return term_dim(t->head, sig);
  }
  return -1;
}

inline PastingTree shape_of(const TermPtr& t, const Signature& sig) {
  switch (t->kind) {
  case Term::Kind::identity: return simple_tree(t->id_dim);
  case Term::Kind::generator: return sig.require(t->name).shape;
  case Term::Kind::composite: {
    PastingTree hs = shape_of(t->head, sig);
    auto ls = leaves(hs);
    if (ls.size() != t->args.size())
      throw invalid_argument_error("composite arity mismatch: head shape has " +
                                   std::to_string(ls.size()) + " slots, got " +
                                   std::to_string(t->args.size()) + " arguments");
    std::vector<PastingTree> subs;
    subs.reserve(t->args.size());
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (term_dim(t->args[i], sig) != ls[i].height)
        throw invalid_argument_error("composite argument " + std::to_string(i) +
                                     " has dimension " +
                                     std::to_string(term_dim(t->args[i], sig)) +
                                     ", slot requires " + std::to_string(ls[i].height));
      subs.push_back(shape_of(t->args[i], sig));
    }
    return subst(hs, subs).tree;
  }
  }
  return point_tree(0);
}

// --- sources and targets -------------------------------------------------------

inline TermPtr source_of(const TermPtr& t, const Signature& sig);
inline TermPtr target_of(const TermPtr& t, const Signature& sig);

namespace detail {

// Boundary label of the sub-diagram hanging at `node` (depth `depth` in the
// shape whose leaves are labelled by `labels`): iterated source of the first
// label for the source side, iterated target of the last for the target side.
inline TermPtr side_label(const TreeNode* node, std::vector<int>& path, int /*depth*/,
                          const std::map<std::vector<int>, int>& leaf_index,
                          const std::vector<TermPtr>& labels, bool source_side,
                          const Signature& sig) {
  if (node->children.empty()) {
    const TermPtr& l = labels[static_cast<std::size_t>(leaf_index.at(path))];
    return source_side ? source_of(l, sig) : target_of(l, sig);
  }
  std::size_t idx = source_side ? 0 : node->children.size() - 1;
  path.push_back(static_cast<int>(idx));
  TermPtr inner = side_label(&node->children[idx], path, 0, leaf_index, labels, source_side, sig);
  path.pop_back();
  return source_side ? source_of(inner, sig) : target_of(inner, sig);
}

inline std::map<std::vector<int>, int> leaf_index_map(const PastingTree& t) {
  std::map<std::vector<int>, int> m;
  auto ls = leaves(t);
  for (std::size_t i = 0; i < ls.size(); ++i) m[ls[i].path] = static_cast<int>(i);
  return m;
}

inline TermPtr boundary_of(const TermPtr& t, const Signature& sig, bool source_side) {
  switch (t->kind) {
  case Term::Kind::identity:
    if (t->id_dim < 1)
      throw invalid_argument_error("source/target of a dimension-zero cell");
    return Term::make_identity(t->id_dim - 1);
  case Term::Kind::generator: {
    const GeneratorDecl& d = sig.require(t->name);
    if (d.dim == 1) return Term::make_identity(0);
    TermPtr b = source_side ? d.src : d.tgt;
    if (!b)
      throw invalid_argument_error("generator '" + t->name + "' lacks a declared boundary");
    return b;
  }
  case Term::Kind::composite: {
    TermPtr hb = boundary_of(t->head, sig, source_side);
    PastingTree hs = shape_of(t->head, sig);
    int n = hs.dim;
    if (n < 1) throw invalid_argument_error("source/target of a dimension-zero cell");
    PastingTree bs = boundary(hs);
    auto hs_leaves = leaf_index_map(hs);
    std::vector<TermPtr> routed;
    for (const auto& bl : leaves(bs)) {
      const TreeNode* orig = &hs.root;
      for (int i : bl.path) orig = &orig->children[static_cast<std::size_t>(i)];
      if (orig->children.empty()) {
        routed.push_back(t->args[static_cast<std::size_t>(hs_leaves.at(bl.path))]);
      } else {
        // a column of top cells: contribute the boundary of its first/last label
        std::size_t idx = source_side ? 0 : orig->children.size() - 1;
        auto cpath = bl.path;
        cpath.push_back(static_cast<int>(idx));
        const TermPtr& label = t->args[static_cast<std::size_t>(hs_leaves.at(cpath))];
        routed.push_back(boundary_of(label, sig, source_side));
      }
    }
    return Term::make_composite(hb, std::move(routed));
  }
  }
  return nullptr;
}

} // namespace detail

inline TermPtr source_of(const TermPtr& t, const Signature& sig) {
  return detail::boundary_of(t, sig, true);
}
inline TermPtr target_of(const TermPtr& t, const Signature& sig) {
  return detail::boundary_of(t, sig, false);
}

// --- normalization -------------------------------------------------------------

inline TermPtr normalize(const TermPtr& t, const Signature& sig);

namespace detail {

inline bool all_identities(const std::vector<TermPtr>& args) {
  for (const auto& a : args)
    if (a->kind != Term::Kind::identity) return false;
  return true;
}

// Label for a slot that was covered while flattening: the boundary of the
// stack sitting at the covering edge, derived from the surviving labels.
inline TermPtr covered_label(const PastingTree& result,
                             const std::vector<TermPtr>& result_labels, const SlotFate& fate,
                             int height, const Signature& sig) {
  if (height == 0) return Term::make_identity(0);
  const TreeNode* q = &result.root;
  for (int i : fate.node_path) q = &q->children[static_cast<std::size_t>(i)];
  bool source_side = fate.edge_index < static_cast<int>(q->children.size());
  std::size_t child =
      source_side ? static_cast<std::size_t>(fate.edge_index) : q->children.size() - 1;
  auto leaf_index = leaf_index_map(result);
  std::vector<int> path = fate.node_path;
  path.push_back(static_cast<int>(child));
  return side_label(&q->children[child], path, 0, leaf_index, result_labels, source_side, sig);
}

} // namespace detail

// Canonical form under the operad axioms: every composite is generator-headed,
// no composite has all-identity arguments, arguments are canonical.
inline TermPtr normalize(const TermPtr& t, const Signature& sig) {
  if (t->kind != Term::Kind::composite) return t;
  std::vector<TermPtr> nargs;
  nargs.reserve(t->args.size());
  for (const auto& a : t->args) nargs.push_back(normalize(a, sig));
  TermPtr nh = normalize(t->head, sig);

  if (nh->kind == Term::Kind::identity) {
    if (nargs.size() != 1)
      throw invalid_argument_error("identity-headed composite must have exactly one argument");
    return nargs[0];
  }
  if (nh->kind == Term::Kind::generator) {
    if (detail::all_identities(nargs)) return nh;
    return Term::make_composite(nh, std::move(nargs));
  }

  // composite head: one associativity step routes the outer arguments into the
  // inner ones, then we recurse on the generator-headed result
  const TermPtr& g = nh->head;
  const std::vector<TermPtr>& inner = nh->args;
  PastingTree gshape = shape_of(g, sig);
  std::vector<PastingTree> inner_shapes;
  inner_shapes.reserve(inner.size());
  for (const auto& a : inner) inner_shapes.push_back(shape_of(a, sig));
  SubstResult flat = subst(gshape, inner_shapes);
  if (leaves(flat.tree).size() != nargs.size())
    throw invalid_argument_error("composite arity mismatch while normalizing");

  std::vector<TermPtr> new_inner;
  new_inner.reserve(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    auto inner_leaves = leaves(inner_shapes[i]);
    std::vector<TermPtr> routed;
    routed.reserve(inner_leaves.size());
    for (std::size_t p = 0; p < inner_leaves.size(); ++p) {
      const SlotFate& fate = flat.slots[i][p];
      if (fate.survived)
        routed.push_back(nargs[static_cast<std::size_t>(fate.result_leaf)]);
      else
        routed.push_back(
            detail::covered_label(flat.tree, nargs, fate, inner_leaves[p].height, sig));
    }
    new_inner.push_back(normalize(Term::make_composite(inner[i], std::move(routed)), sig));
  }
  return normalize(Term::make_composite(g, std::move(new_inner)), sig);
}

// Free-operad equality: agreement of canonical forms.
inline bool free_equal(const TermPtr& a, const TermPtr& b, const Signature& sig) {
  return term_equal(normalize(a, sig), normalize(b, sig));
}

// --- well-formedness -------------------------------------------------------------

using LowerEq = std::function<bool(const TermPtr&, const TermPtr&)>;

struct WellFormedReport {
  bool ok = true;
  std::string message;
};

namespace detail {
inline bool well_formed_rec(const TermPtr& t, const Signature& sig, const LowerEq& lower_eq,
                            std::string where, WellFormedReport& report) {
  switch (t->kind) {
  case Term::Kind::identity:
    if (t->id_dim < 0) {
      report = {false, where + ": negative identity dimension"};
      return false;
    }
    return true;
  case Term::Kind::generator:
    if (!sig.find(t->name)) {
      report = {false, where + ": unknown generator '" + t->name + "'"};
      return false;
    }
    return true;
  case Term::Kind::composite: {
    if (!well_formed_rec(t->head, sig, lower_eq, where + ".head", report)) return false;
    PastingTree hs;
    try {
      hs = shape_of(t->head, sig);
    } catch (const invalid_argument_error& e) {
      report = {false, where + ": " + e.what()};
      return false;
    }
    auto ls = leaves(hs);
    if (ls.size() != t->args.size()) {
      report = {false, where + ": arity mismatch (" + std::to_string(ls.size()) + " slots, " +
                           std::to_string(t->args.size()) + " arguments)"};
      return false;
    }
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (!well_formed_rec(t->args[i], sig, lower_eq, where + ".arg" + std::to_string(i), report))
        return false;
      int ad;
      try {
        ad = term_dim(t->args[i], sig);
      } catch (const invalid_argument_error& e) {
        report = {false, where + ": " + e.what()};
        return false;
      }
      if (ad != ls[i].height) {
        report = {false, where + ": argument " + std::to_string(i) + " has dimension " +
                             std::to_string(ad) + ", slot height is " +
                             std::to_string(ls[i].height)};
        return false;
      }
    }
    // composability through the head shape: consecutive stacks under every
    // interior node must agree on their shared boundary
    auto leaf_index = leaf_index_map(hs);
    std::function<bool(const TreeNode*, std::vector<int>&)> walk =
        [&](const TreeNode* node, std::vector<int>& path) -> bool {
      for (std::size_t i = 0; i + 1 < node->children.size(); ++i) {
        std::vector<int> pa = path, pb = path;
        pa.push_back(static_cast<int>(i));
        pb.push_back(static_cast<int>(i) + 1);
        TermPtr earlier =
            side_label(&node->children[i], pa, 0, leaf_index, t->args, false, sig);
        TermPtr later =
            side_label(&node->children[i + 1], pb, 0, leaf_index, t->args, true, sig);
        if (!lower_eq(earlier, later)) {
          report = {false, where + ": incompatible boundaries at leaf " +
                               std::to_string(leaf_index.count(pb) ? leaf_index.at(pb)
                                                                   : static_cast<int>(i) + 1) +
                               " under node " + path_string(path)};
          return false;
        }
      }
      for (std::size_t i = 0; i < node->children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        if (!walk(&node->children[i], path)) return false;
        path.pop_back();
      }
      return true;
    };
    std::vector<int> path;
    return walk(&hs.root, path);
  }
  }
  return true;
}
} // namespace detail

inline WellFormedReport well_formed(const TermPtr& t, const Signature& sig,
                                    const LowerEq& lower_eq) {
  WellFormedReport report;
  detail::well_formed_rec(t, sig, lower_eq, "term", report);
  return report;
}

inline WellFormedReport well_formed(const TermPtr& t, const Signature& sig) {
  return well_formed(t, sig, [&sig](const TermPtr& a, const TermPtr& b) {
    return free_equal(a, b, sig);
  });
}

// --- enumeration -----------------------------------------------------------------

struct EnumerateOptions {
  std::set<std::string> exclude_generators;
  // equality used for boundary compatibility; defaults to free-operad equality
  LowerEq lower_eq;
  // optional canonicalizer applied when deduplicating (e.g. a rewrite normal
  // form); enumeration emits one term per canonical form
  std::function<TermPtr(const TermPtr&)> canonical;
};

namespace detail {

struct TermEnumerator {
  const Signature& sig;
  const EnumerateOptions& opts;
  LowerEq lower_eq;
  std::map<std::pair<int, int>, std::vector<TermPtr>> cache; // (dim, budget) -> terms

  TermEnumerator(const Signature& s, const EnumerateOptions& o) : sig(s), opts(o) {
    lower_eq = opts.lower_eq ? opts.lower_eq : [this](const TermPtr& a, const TermPtr& b) {
      return free_equal(a, b, sig);
    };
  }

  const std::vector<TermPtr>& all(int dim, int budget) {
    auto key = std::make_pair(dim, budget);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<TermPtr> out;
    if (budget >= 1) {
      if (dim == 0) {
        out.push_back(Term::make_identity(0));
      } else {
        out.push_back(Term::make_identity(dim));
        for (const auto& d : sig.at_dim(dim)) {
          if (opts.exclude_generators.count(d.name)) continue;
          out.push_back(Term::make_generator(d.name));
        }
        for (const auto& d : sig.at_dim(dim)) {
          if (opts.exclude_generators.count(d.name)) continue;
          auto ls = leaves(d.shape);
          std::vector<TermPtr> tuple(ls.size());
          emit_composites(d, ls, 0, budget - 1, tuple, out);
        }
      }
    }
    std::stable_sort(out.begin(), out.end(), [&](const TermPtr& a, const TermPtr& b) {
      int sa = term_size(a), sb = term_size(b);
      if (sa != sb) return sa < sb;
      return term_compare(a, b) < 0;
    });
    // dedupe by canonical form when requested
    if (opts.canonical) {
      std::vector<TermPtr> unique;
      std::set<TermPtr, TermLess> seen;
      for (auto& t : out) {
        TermPtr c = opts.canonical(t);
        if (seen.insert(c).second) unique.push_back(c);
      }
      out = std::move(unique);
    }
    return cache.emplace(key, std::move(out)).first->second;
  }

  void emit_composites(const GeneratorDecl& d, const std::vector<LeafPosition>& ls,
                       std::size_t slot, int budget, std::vector<TermPtr>& tuple,
                       std::vector<TermPtr>& out) {
    if (slot == ls.size()) {
      if (all_identities(tuple)) return;
      TermPtr t = Term::make_composite(Term::make_generator(d.name), tuple);
      if (well_formed(t, sig, lower_eq).ok) out.push_back(t);
      return;
    }
    int remaining_min = static_cast<int>(ls.size() - slot - 1);
    for (const auto& cand : all(ls[slot].height, budget - remaining_min)) {
      if (term_size(cand) > budget - remaining_min) continue;
      tuple[slot] = cand;
      emit_composites(d, ls, slot + 1, budget - term_size(cand), tuple, out);
    }
    tuple[slot] = nullptr;
  }
};

} // namespace detail

// All canonical well-formed terms of the given dimension with term size at
// most `size_budget`, optionally restricted to a fixed shape. Deterministic
// order: by size, then structurally.
inline std::vector<TermPtr> enumerate_terms(const Signature& sig, int dim, int size_budget,
                                            const PastingTree* shape_filter = nullptr,
                                            const EnumerateOptions& opts = {}) {
  if (size_budget < 1) throw invalid_argument_error("enumerate_terms: budget must be >= 1");
  detail::TermEnumerator en(sig, opts);
  std::vector<TermPtr> out;
  for (const auto& t : en.all(dim, size_budget)) {
    if (shape_filter && !(shape_of(t, sig) == *shape_filter)) continue;
    out.push_back(t);
  }
  return out;
}

// --- text form --------------------------------------------------------------------

namespace detail {
inline void print_term_rec(const TermPtr& t, std::string& out) {
  switch (t->kind) {
  case Term::Kind::identity:
    out += "id";
    out += std::to_string(t->id_dim);
    return;
  case Term::Kind::generator: out += t->name; return;
  case Term::Kind::composite:
    if (t->head->kind == Term::Kind::generator) {
      out += t->head->name;
      out += '(';
    } else {
      out += "comp(";
      print_term_rec(t->head, out);
      out += ';';
    }
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) out += ',';
      print_term_rec(t->args[i], out);
    }
    out += ')';
    return;
  }
}
} // namespace detail

inline std::string print_term(const TermPtr& t) {
  std::string out;
  detail::print_term_rec(t, out);
  return out;
}

namespace detail {

inline bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '\'';
}

inline TermPtr parse_term_rec(const std::string& s, std::size_t& i);

inline std::vector<TermPtr> parse_term_list(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size() || s[i] != '(') throw parse_error("expected '(' in term", i);
  ++i;
  std::vector<TermPtr> args;
  while (true) {
    args.push_back(parse_term_rec(s, i));
    skip_ws(s, i);
    if (i >= s.size()) throw parse_error("unterminated argument list", i);
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] == ')') {
      ++i;
      return args;
    }
    throw parse_error("expected ',' or ')' in term", i);
  }
}

inline TermPtr parse_term_rec(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size()) throw parse_error("expected a term", i);
  std::size_t start = i;
  while (i < s.size() && ident_char(s[i])) ++i;
  if (i == start) throw parse_error("expected a term", i);
  std::string word = s.substr(start, i - start);
  // contraction cells carry a bracketed structural key as part of their name
  if (word == "ctr" && i < s.size() && s[i] == '[') {
    int depth = 0;
    std::size_t j = i;
    while (j < s.size()) {
      if (s[j] == '[') ++depth;
      if (s[j] == ']' && --depth == 0) break;
      ++j;
    }
    if (j >= s.size()) throw parse_error("unterminated contraction-cell name", i);
    word += s.substr(i, j - i + 1);
    i = j + 1;
  }
  if (word.size() >= 3 && word.compare(0, 2, "id") == 0 &&
      word.find_first_not_of("0123456789", 2) == std::string::npos) {
    int k = std::stoi(word.substr(2));
    return Term::make_identity(k);
  }
  if (word == "comp") {
    skip_ws(s, i);
    if (i >= s.size() || s[i] != '(') throw parse_error("expected '(' after comp", i);
    ++i;
    TermPtr head = parse_term_rec(s, i);
    skip_ws(s, i);
    if (i >= s.size() || s[i] != ';') throw parse_error("expected ';' in comp(...)", i);
    ++i;
    // arguments up to the closing ')', comma separated
    std::vector<TermPtr> args;
    while (true) {
      args.push_back(parse_term_rec(s, i));
      skip_ws(s, i);
      if (i >= s.size()) throw parse_error("unterminated comp(...)", i);
      if (s[i] == ',') {
        ++i;
        continue;
      }
      if (s[i] == ')') {
        ++i;
        break;
      }
      throw parse_error("expected ',' or ')' in comp(...)", i);
    }
    return Term::make_composite(head, std::move(args));
  }
  skip_ws(s, i);
  if (i < s.size() && s[i] == '(') {
    auto args = parse_term_list(s, i);
    return Term::make_composite(Term::make_generator(word), std::move(args));
  }
  return Term::make_generator(word);
}

} // namespace detail

inline TermPtr parse_term(const std::string& s, std::size_t& i) {
  return detail::parse_term_rec(s, i);
}

inline TermPtr parse_term(const std::string& s) {
  std::size_t i = 0;
  TermPtr t = detail::parse_term_rec(s, i);
  detail::skip_ws(s, i);
  if (i != s.size()) throw parse_error("trailing input after term", i);
  return t;
}

} // namespace globop

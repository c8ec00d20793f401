#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "globop/tree.hpp"

using namespace globop;

namespace {

// Independent counting oracle: number of ordered rooted trees with exactly
// `size` nodes and height <= maxh, by convolution over child forests. Kept
// free of the enumerator's recursion on purpose.
long count_trees_oracle(int maxh, int size) {
  if (size < 1) return 0;
  if (maxh == 0) return size == 1 ? 1 : 0;
  // forests[m] = number of ordered forests of total size m with trees of height <= maxh-1
  std::vector<long> forests(static_cast<std::size_t>(size), 0);
  forests[0] = 1;
  for (int m = 1; m < size; ++m) {
    long total = 0;
    for (int s = 1; s <= m; ++s)
      total += count_trees_oracle(maxh - 1, s) * forests[static_cast<std::size_t>(m - s)];
    forests[static_cast<std::size_t>(m)] = total;
  }
  return forests[static_cast<std::size_t>(size - 1)];
}

long count_trees_oracle_upto(int maxh, int max_nodes) {
  long total = 0;
  for (int s = 1; s <= max_nodes; ++s) total += count_trees_oracle(maxh, s);
  return total;
}

// Random dim-k tree extending the given (k-1)-boundary by sprouting childless
// depth-k nodes. For k == 0 the point is the only choice.
PastingTree sprout(const PastingTree* base, int k, std::mt19937& rng) {
  if (k == 0) return point_tree(0);
  PastingTree out = base ? promote(*base, k) : point_tree(k);
  std::uniform_int_distribution<int> howmany(0, 2);
  std::function<void(TreeNode&, int)> grow = [&](TreeNode& node, int depth) {
    if (depth == k - 1) {
      int extra = howmany(rng);
      for (int i = 0; i < extra; ++i) node.children.push_back(TreeNode{});
      return;
    }
    for (auto& c : node.children) grow(c, depth + 1);
  };
  grow(out.root, 0);
  return out;
}

// Boundary-coherent random assignment for the leaves of t: common boundaries
// are chosen once per internal node and threaded down.
void gen_coherent(const TreeNode& node, int depth, const PastingTree* inherited,
                  std::vector<PastingTree>& out, std::mt19937& rng) {
  if (node.children.empty()) {
    out.push_back(sprout(inherited, depth, rng));
    return;
  }
  PastingTree common = sprout(inherited, depth, rng);
  for (const auto& c : node.children) gen_coherent(c, depth + 1, &common, out, rng);
}

std::vector<PastingTree> random_coherent_assignment(const PastingTree& t, std::mt19937& rng) {
  std::vector<PastingTree> out;
  gen_coherent(t.root, 0, nullptr, out, rng);
  return out;
}

const TreeNode* node_at(const TreeNode& root, const std::vector<int>& path) {
  const TreeNode* n = &root;
  for (int i : path) n = &n->children[static_cast<std::size_t>(i)];
  return n;
}

// Leaf indices of `t` lying under `path`, in DFS order.
std::vector<int> leaves_under(const PastingTree& t, const std::vector<int>& path) {
  auto ls = leaves(t);
  std::vector<int> out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (ls[i].path.size() < path.size()) continue;
    if (std::equal(path.begin(), path.end(), ls[i].path.begin()))
      out.push_back(static_cast<int>(i));
  }
  return out;
}

// Flatten the subtree of R at `path` under the restriction of pi, returning
// the piece as a full-dimension tree. Used to derive values for covered slots.
PastingTree flatten_piece(const PastingTree& R, const std::vector<int>& path,
                          const std::vector<PastingTree>& pi) {
  // wrapper: chain from the root carrying only the subtree at `path`
  TreeNode wrapper = *node_at(R.root, path);
  for (std::size_t i = 0; i < path.size(); ++i) {
    TreeNode parent;
    parent.children.push_back(std::move(wrapper));
    wrapper = std::move(parent);
  }
  PastingTree wt{R.dim, std::move(wrapper)};
  std::vector<PastingTree> restricted;
  for (int li : leaves_under(R, path)) restricted.push_back(pi[static_cast<std::size_t>(li)]);
  return subst(wt, restricted).tree;
}

// The assignment on t that composes sigma followed by pi, routed through the
// provenance of subst(t, sigma).
std::vector<PastingTree> compose_assignments(const PastingTree& t,
                                             const std::vector<PastingTree>& sigma,
                                             const std::vector<PastingTree>& pi) {
  SubstResult R = subst(t, sigma);
  std::vector<PastingTree> composed;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    std::vector<PastingTree> routed;
    auto inner_leaves = leaves(sigma[i]);
    for (std::size_t p = 0; p < inner_leaves.size(); ++p) {
      const SlotFate& fate = R.slots[i][p];
      if (fate.survived) {
        routed.push_back(pi[static_cast<std::size_t>(fate.result_leaf)]);
      } else {
        const TreeNode* q = node_at(R.tree.root, fate.node_path);
        int child = fate.edge_index < static_cast<int>(q->children.size())
                        ? fate.edge_index
                        : static_cast<int>(q->children.size()) - 1;
        std::vector<int> cpath = fate.node_path;
        cpath.push_back(child);
        PastingTree piece = flatten_piece(R.tree, cpath, pi);
        routed.push_back(truncate_tree(piece, inner_leaves[p].height));
      }
    }
    composed.push_back(subst(sigma[i], routed).tree);
  }
  return composed;
}

} // namespace

TEST_CASE("simple trees") {
  CHECK(print_tree(simple_tree(0)) == "0:[]");
  CHECK(print_tree(simple_tree(1)) == "1:[[]]");
  CHECK(print_tree(simple_tree(2)) == "2:[[[]]]");
  CHECK(classify(simple_tree(3)) == TreeClass::simple);
  CHECK(classify(simple_tree(0)) == TreeClass::simple);
}

TEST_CASE("boundary") {
  CHECK(boundary(parse_tree("2:[[[],[],[]],[],[[],[]]]")) == parse_tree("1:[[],[],[]]"));
  for (int n = 1; n <= 4; ++n) CHECK(boundary(simple_tree(n)) == simple_tree(n - 1));
  CHECK(boundary(parse_tree("2:[[]]")) == parse_tree("1:[[]]"));
  CHECK_THROWS_AS(boundary(point_tree(0)), invalid_argument_error);
  // iterated boundary reaches dim 0
  PastingTree t = parse_tree("3:[[[[]],[]],[]]");
  CHECK(boundary(boundary(boundary(t))) == point_tree(0));
}

TEST_CASE("classification") {
  CHECK(classify(parse_tree("2:[[],[],[]]")) == TreeClass::degenerate);
  CHECK(classify(parse_tree("2:[[[],[]],[]]")) == TreeClass::neither);
  CHECK(classify(parse_tree("2:[]")) == TreeClass::degenerate);
  // degenerate diagrams at different dimensions are distinct values
  CHECK(parse_tree("2:[]") != parse_tree("1:[]"));
  CHECK(promote(parse_tree("1:[]"), 2) == parse_tree("2:[]"));
}

TEST_CASE("leaves") {
  auto tau = parse_tree("2:[[[],[]],[]]");
  auto ls = leaves(tau);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0].path == std::vector<int>{0, 0});
  CHECK(ls[0].height == 2);
  CHECK(ls[1].path == std::vector<int>{0, 1});
  CHECK(ls[1].height == 2);
  CHECK(ls[2].path == std::vector<int>{1});
  CHECK(ls[2].height == 1);

  for (int n = 0; n <= 4; ++n) {
    auto sl = leaves(simple_tree(n));
    REQUIRE(sl.size() == 1);
    CHECK(sl[0].height == n);
  }

  auto pl = leaves(parse_tree("2:[]"));
  REQUIRE(pl.size() == 1);
  CHECK(pl[0].height == 0);
  CHECK(pl[0].path.empty());
}

TEST_CASE("substitution reproduces the composite shape") {
  auto tau = parse_tree("2:[[[],[]],[]]");
  std::vector<PastingTree> sigma = {parse_tree("2:[[[]]]"), parse_tree("2:[[[],[]]]"),
                                    parse_tree("1:[[],[],[]]")};
  auto result = subst(tau, sigma);
  CHECK(print_tree(result.tree) == "2:[[[],[],[]],[],[],[]]");
  // provenance: all three substitutes' top cells survive
  CHECK(result.slots[0][0].survived);
  CHECK(result.slots[1][0].survived);
  CHECK(result.slots[1][1].survived);
}

TEST_CASE("substituting a point collapses its column") {
  auto t = parse_tree("2:[[[]],[[]]]");
  auto result = subst(t, {parse_tree("2:[]"), simple_tree(2)});
  CHECK(result.tree == parse_tree("2:[[[]]]"));
  CHECK_FALSE(result.slots[0][0].survived);
  CHECK(result.slots[1][0].survived);
}

TEST_CASE("identity substitution law") {
  for (int n = 0; n <= 4; ++n) {
    for (const auto& t : enumerate_trees(n, 8)) {
      CHECK(subst(t, identity_subs(t)).tree == t);
    }
  }
}

TEST_CASE("unit law: substituting into a simple tree returns the substitute") {
  std::mt19937 rng(7);
  for (int n = 1; n <= 4; ++n) {
    for (const auto& s : enumerate_trees(n, 5)) {
      CHECK(subst(simple_tree(n), {s}).tree == s);
    }
  }
}

TEST_CASE("substitution errors") {
  auto tau = parse_tree("2:[[[],[]],[]]");
  CHECK_THROWS_AS(subst(tau, {simple_tree(2)}), invalid_argument_error);
  CHECK_THROWS_AS(subst(tau, {simple_tree(1), simple_tree(2), simple_tree(1)}),
                  invalid_argument_error);
  // boundary-incoherent column: the two 2-cells' substitutes disagree on their
  // 1-dimensional boundary
  auto col = parse_tree("2:[[[],[]]]");
  CHECK_THROWS_AS(subst(col, {parse_tree("2:[[[]]]"), parse_tree("2:[[[]],[[]]]")}),
                  invalid_argument_error);
}

TEST_CASE("top-height node count additivity") {
  std::mt19937 rng(11);
  for (int n = 1; n <= 3; ++n) {
    for (const auto& t : enumerate_trees(n, 6)) {
      for (int rep = 0; rep < 5; ++rep) {
        auto sigma = random_coherent_assignment(t, rng);
        auto result = subst(t, sigma);
        int expect = 0;
        for (const auto& s : sigma) expect += node_count_at(s, n);
        CHECK(node_count_at(result.tree, n) == expect);
      }
    }
  }
}

TEST_CASE("monad associativity on sampled coherent assignments") {
  std::mt19937 rng(13);
  int samples = 0;
  for (int pass = 0; pass < 4 && samples < 200; ++pass) {
    for (int n = 1; n <= 3 && samples < 200; ++n) {
      for (const auto& t : enumerate_trees(n, 6)) {
        if (samples >= 200) break;
        auto sigma = random_coherent_assignment(t, rng);
        auto R = subst(t, sigma);
        auto pi = random_coherent_assignment(R.tree, rng);
        auto lhs = subst(R.tree, pi).tree;
        auto composed = compose_assignments(t, sigma, pi);
        auto rhs = subst(t, composed).tree;
        CHECK(lhs == rhs);
        ++samples;
      }
    }
  }
  CHECK(samples >= 200);
}

TEST_CASE("boundary commutes with substitution") {
  std::mt19937 rng(17);
  for (int n = 1; n <= 3; ++n) {
    for (const auto& t : enumerate_trees(n, 6)) {
      auto sigma = random_coherent_assignment(t, rng);
      auto R = subst(t, sigma);
      // assignment on boundary(t): whisker leaves keep their trees, collapsed
      // columns contribute the common boundary of their children's substitutes
      auto bt = boundary(t);
      auto tl = leaves(t);
      std::map<std::vector<int>, int> leaf_index;
      for (std::size_t i = 0; i < tl.size(); ++i) leaf_index[tl[i].path] = static_cast<int>(i);
      std::vector<PastingTree> bsigma;
      for (const auto& bl : leaves(bt)) {
        const TreeNode* orig = node_at(t.root, bl.path);
        if (orig->children.empty()) {
          bsigma.push_back(sigma[static_cast<std::size_t>(leaf_index.at(bl.path))]);
        } else {
          auto cpath = bl.path;
          cpath.push_back(0);
          bsigma.push_back(boundary(sigma[static_cast<std::size_t>(leaf_index.at(cpath))]));
        }
      }
      CHECK(boundary(R.tree) == subst(bt, bsigma).tree);
    }
  }
}

TEST_CASE("tree enumeration") {
  auto dim1 = enumerate_trees(1, 4);
  REQUIRE(dim1.size() == 4);
  CHECK(print_tree(dim1[0]) == "1:[]");
  CHECK(print_tree(dim1[1]) == "1:[[]]");
  CHECK(print_tree(dim1[2]) == "1:[[],[]]");
  CHECK(print_tree(dim1[3]) == "1:[[],[],[]]");

  CHECK(enumerate_trees(0, 1).size() == 1);

  // frozen from the counting oracle (convolution over child forests)
  CHECK(count_trees_oracle_upto(2, 4) == 8);
  CHECK(enumerate_trees(2, 4).size() == 8);

  for (int n = 0; n <= 4; ++n) {
    for (int b = 1; b <= 7; ++b) {
      auto ts = enumerate_trees(n, b);
      CHECK(static_cast<long>(ts.size()) == count_trees_oracle_upto(n, b));
      std::set<std::string> seen;
      for (const auto& t : ts) {
        CHECK(tree_height(t) <= n);
        CHECK(node_count(t) <= b);
        seen.insert(print_tree(t));
      }
      CHECK(seen.size() == ts.size()); // no duplicates
    }
  }
}

TEST_CASE("tree literals round-trip") {
  CHECK(parse_tree("2:[[[],[]],[]]") == PastingTree{2, TreeNode{{TreeNode{{TreeNode{}, TreeNode{}}}, TreeNode{}}}});
  CHECK(parse_tree("0:[]") == point_tree(0));
  CHECK(parse_tree(" 2 : [ [ [],[] ] , [] ] ") == parse_tree("2:[[[],[]],[]]"));

  for (int n = 0; n <= 4; ++n)
    for (const auto& t : enumerate_trees(n, 6)) CHECK(parse_tree(print_tree(t)) == t);

  CHECK_THROWS_AS(parse_tree("2:[[["), parse_error);
  CHECK_THROWS_AS(parse_tree("2:[],[]"), parse_error);
  CHECK_THROWS_AS(parse_tree("1:[[[]]]"), parse_error); // height exceeds dim
  CHECK_THROWS_AS(parse_tree("x:[]"), parse_error);
}

#pragma once

// Subtrees of the infinite binary tree whose branch set is a prescribed
// closed subset X of the Cantor set, and their decomposition into rays that
// pairwise share at most one vertex.
//
// Vertices are nonempty binary words; (0) and (1) are joined by the root edge.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "monsterkit/cantor_ends.hpp"
#include "monsterkit/error.hpp"

namespace monsterkit {

using Word = std::string;

/// Shortlex order: shorter words first, then lexicographic.
inline bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct TreeTruncation {
  EndsSpec spec;
  unsigned depth = 1;
  AnnotatedPrefixTree prefix;  // branch set of X down to `depth`
  std::set<Word> vertices;
  std::vector<std::pair<Word, Word>> edges;

  bool has(const Word& v) const { return vertices.count(v) > 0; }
  /// Children of v lying on some branch of X.
  std::vector<Word> children(const Word& v) const {
    std::vector<Word> out;
    for (char b : {'0', '1'})
      if (prefix.nodes.count(v + b)) out.push_back(v + b);
    return out;
  }
};

inline TreeTruncation build_tree(const EndsSpec& spec, unsigned depth) {
  if (depth < 1) throw Error(ErrorCode::InvalidSpec, "tree depth must be at least 1");
  validate_spec(spec);
  if (spec.is_empty()) throw Error(ErrorCode::InvalidSpec, "empty ends space has no tree");
  TreeTruncation t;
  t.spec = spec;
  t.depth = depth;
  t.prefix = refine(AnnotatedPrefixTree::root(spec), depth);
  t.vertices = {"0", "1"};
  t.edges.push_back({"0", "1"});
  for (const auto& w : t.prefix.nodes) {
    if (w.empty()) continue;
    t.vertices.insert(w);
    if (w.size() > 1) t.edges.push_back({w.substr(0, w.size() - 1), w});
  }
  return t;
}

/// Reconstructs the ends space from the annotated truncation.
inline EndsSpec tree_ends(const TreeTruncation& t) {
  EndsSpec s = EndsSpec::prefix_tree(t.prefix);
  try {
    return representative(canonical_class(s));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unclassifiable) throw;
    return s;
  }
}

/// One ray of the decomposition, truncated at the tree depth.
struct Ray {
  Word origin;
  std::vector<Word> vertices;

  Word last() const { return vertices.back(); }
  bool contains(const Word& v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
  }
  /// Step labels: the appended bit for a child step, '^' for the root edge.
  std::string turns() const {
    std::string s;
    for (std::size_t i = 1; i < vertices.size(); ++i)
      s += vertices[i].size() == vertices[i - 1].size() ? '^' : vertices[i].back();
    return s;
  }
  friend bool operator==(const Ray&, const Ray&) = default;
};

inline bool ray_less(const Ray& a, const Ray& b) {
  return std::lexicographical_compare(a.vertices.begin(), a.vertices.end(), b.vertices.begin(),
                                      b.vertices.end(), shortlex_less);
}

struct RayFamily {
  EndsSpec spec;
  unsigned depth = 0;
  std::map<Word, Annotation> frontier;
  std::vector<Ray> rays;

  /// Indices of the rays through v, in family order.
  std::vector<std::size_t> rays_through(const Word& v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (rays[i].contains(v)) out.push_back(i);
    return out;
  }
};

namespace detail {

/// Size of the branch set below a vertex, used to decide which child a ray
/// follows: uncountable beats countable, then more boundary points, then
/// higher rank, then more top-rank points.
struct BranchWeight {
  bool uncountable = false;
  unsigned boundary = 0;
  unsigned k = 0;
  std::uint64_t n = 0;

  auto key() const { return std::make_tuple(uncountable, boundary, k, n); }
  friend bool operator<(const BranchWeight& a, const BranchWeight& b) { return a.key() < b.key(); }
  friend bool operator==(const BranchWeight& a, const BranchWeight& b) { return a.key() == b.key(); }

  static BranchWeight of(const Annotation& a) {
    BranchWeight w;
    EndsSpec s = a.as_spec();
    if (contains_cantor(s)) {
      w.uncountable = true;
      w.boundary = profile(s).boundary;
      return w;
    }
    auto cs = characteristic_system(s);
    w.k = cs.k;
    w.n = cs.n;
    return w;
  }
  static BranchWeight join(const BranchWeight& a, const BranchWeight& b) {
    BranchWeight w;
    w.uncountable = a.uncountable || b.uncountable;
    w.boundary = a.boundary + b.boundary;
    w.k = std::max(a.k, b.k);
    w.n = (a.k == w.k ? a.n : 0) + (b.k == w.k ? b.n : 0);
    return w;
  }
};

class Decomposer {
 public:
  explicit Decomposer(const TreeTruncation& t) : t_(t) {
    for (const auto& [w, a] : t.prefix.frontier) weight_[w] = BranchWeight::of(a);
    std::vector<Word> nodes(t.prefix.nodes.begin(), t.prefix.nodes.end());
    std::sort(nodes.begin(), nodes.end(), [](const Word& a, const Word& b) { return a.size() > b.size(); });
    for (const auto& w : nodes) {
      if (w.size() == t.depth) continue;
      std::optional<BranchWeight> acc;
      for (const auto& c : t.children(w)) acc = acc ? BranchWeight::join(*acc, weight_.at(c)) : weight_.at(c);
      weight_[w] = *acc;
    }
  }

  std::vector<Ray> run() {
    bool live0 = t_.prefix.nodes.count("0") > 0;
    bool live1 = t_.prefix.nodes.count("1") > 0;
    if (!live1) {
      Ray r{"1", {"1"}};
      follow(r, "0");
    } else {
      Ray a{"0", {"0"}};
      follow(a, "1");
      if (live0) {
        Ray b{"0", {}};
        follow(b, "0");
      }
    }
    std::sort(rays_.begin(), rays_.end(), ray_less);
    return rays_;
  }

 private:
  Word preferred(const Word& v, const std::vector<Word>& kids) const {
    if (kids.size() == 1) return kids[0];
    const auto& w0 = weight_.at(kids[0]);
    const auto& w1 = weight_.at(kids[1]);
    if (w1 < w0) return kids[0];
    if (w0 < w1) return kids[1];
    return v + v.back();
  }

  // Appends v and walks down preferred children; each other child starts a
  // new ray originating at the branching vertex.
  void follow(Ray r, Word v) {
    while (true) {
      r.vertices.push_back(v);
      auto kids = t_.children(v);
      if (kids.empty()) break;
      Word next = preferred(v, kids);
      for (const auto& c : kids) {
        if (c == next) continue;
        Ray side{v, {v}};
        follow(side, c);
      }
      v = next;
    }
    rays_.push_back(std::move(r));
  }

  const TreeTruncation& t_;
  std::map<Word, BranchWeight> weight_;
  std::vector<Ray> rays_;
};

}  // namespace detail

inline RayFamily decompose_paths(const TreeTruncation& tree) {
  RayFamily f;
  f.spec = tree.spec;
  f.depth = tree.depth;
  f.frontier = tree.prefix.frontier;
  f.rays = detail::Decomposer(tree).run();
  return f;
}

enum class PathMode { CB_top, BoundaryOfU, First };

inline const char* to_string(PathMode m) {
  switch (m) {
    case PathMode::CB_top: return "CB_top";
    case PathMode::BoundaryOfU: return "BoundaryOfU";
    case PathMode::First: return "First";
  }
  return "?";
}

/// Index of the distinguished ray in the family.
inline std::size_t select_distinguished_index(const RayFamily& f, PathMode mode) {
  if (f.rays.empty()) throw Error(ErrorCode::InvalidSpec, "empty ray family");
  if (mode == PathMode::First) return 0;
  std::optional<Word> target;
  if (mode == PathMode::CB_top) {
    if (contains_cantor(f.spec)) throw Error(ErrorCode::ModeSpecMismatch, "CB_top needs a countable spec");
    auto cs = characteristic_system(f.spec);
    if (cs.n != 1)
      throw Error(ErrorCode::ModeSpecMismatch, "CB_top needs characteristic system (k,1), got " + cs.str());
    for (const auto& [w, a] : f.frontier)
      if (characteristic_system(a.as_spec()).k == cs.k) target = w;
  } else {
    ClassTag c;
    try {
      c = canonical_class(f.spec);
    } catch (const Error&) {
      throw Error(ErrorCode::ModeSpecMismatch, "BoundaryOfU needs a Cantor-plus-discrete spec");
    }
    if (c.kind != ClassTag::Kind::CantorPlusOneBoundaryDiscrete)
      throw Error(ErrorCode::ModeSpecMismatch, "BoundaryOfU needs a Cantor-plus-discrete spec");
    for (const auto& [w, a] : f.frontier)
      if (detail::profile(a.as_spec()).boundary == 1) target = w;
  }
  for (std::size_t i = 0; i < f.rays.size(); ++i)
    if (f.rays[i].last() == *target) return i;
  throw Error(ErrorCode::ModeSpecMismatch, "no ray ends at " + *target);
}

inline Ray select_distinguished_path(const RayFamily& f, PathMode mode) {
  return f.rays[select_distinguished_index(f, mode)];
}

/// All descending paths (D_1, ..., D_depth) of the truncation.
inline std::vector<std::vector<Word>> descending_paths(const TreeTruncation& t) {
  std::vector<std::vector<Word>> out;
  for (const auto& [w, a] : t.prefix.frontier) {
    std::vector<Word> p;
    for (std::size_t i = 1; i <= w.size(); ++i) p.push_back(w.substr(0, i));
    out.push_back(std::move(p));
  }
  return out;
}

/// Graphviz rendering with rays colored by index.
inline std::string to_dot(const TreeTruncation& t, const RayFamily& f) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::string s = "graph T {\n  node [shape=point];\n";
  for (const auto& v : t.vertices) s += "  \"" + v + "\" [xlabel=\"" + v + "\"];\n";
  for (std::size_t i = 0; i < f.rays.size(); ++i) {
    const auto& r = f.rays[i];
    for (std::size_t j = 1; j < r.vertices.size(); ++j)
      s += "  \"" + r.vertices[j - 1] + "\" -- \"" + r.vertices[j] + "\" [color=\"" + palette[i % 10] +
           "\", label=\"" + std::to_string(i) + "\"];\n";
  }
  return s + "}\n";
}

}  // namespace monsterkit

#pragma once

// Symbolic calculus for closed subsets of the Cantor set 2^w.
//
// A space is described by an EndsSpec. Every EndsSpec also carries a fixed
// encoding as a set of infinite binary words (see expand()), which is what the
// tree builder materializes level by level. Derivatives and classification
// work on the symbolic form and never look at a truncation.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "monsterkit/error.hpp"

namespace monsterkit {

struct OrdinalTerm {
  unsigned exponent = 0;
  std::uint64_t coefficient = 1;
  friend bool operator==(const OrdinalTerm&, const OrdinalTerm&) = default;
};

/// w^{k1}*m1 + ... + w^{kr}*mr with strictly decreasing exponents and
/// positive coefficients.
struct OrdinalCNF {
  std::vector<OrdinalTerm> terms;

  friend bool operator==(const OrdinalCNF&, const OrdinalCNF&) = default;

  bool canonical() const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].coefficient == 0) return false;
      if (i > 0 && terms[i].exponent >= terms[i - 1].exponent) return false;
    }
    return true;
  }
  bool is_zero() const { return terms.empty(); }
  bool is_successor() const { return !terms.empty() && terms.back().exponent == 0; }
  bool is_finite() const { return terms.empty() || (terms.size() == 1 && terms[0].exponent == 0); }
  std::uint64_t finite_value() const { return terms.empty() ? 0 : terms[0].coefficient; }

  /// Adds one (successor).
  OrdinalCNF succ() const {
    OrdinalCNF r = *this;
    if (!r.terms.empty() && r.terms.back().exponent == 0)
      ++r.terms.back().coefficient;
    else
      r.terms.push_back({0, 1});
    return r;
  }
  /// Predecessor of a successor ordinal.
  OrdinalCNF pred() const {
    OrdinalCNF r = *this;
    if (!is_successor()) throw Error(ErrorCode::InvalidSpec, "pred of a non-successor ordinal");
    if (--r.terms.back().coefficient == 0) r.terms.pop_back();
    return r;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i) s += "+";
      const auto& t = terms[i];
      if (t.exponent == 0) {
        s += std::to_string(t.coefficient);
        continue;
      }
      s += "w";
      if (t.exponent > 1) s += "^" + std::to_string(t.exponent);
      if (t.coefficient > 1) s += "*" + std::to_string(t.coefficient);
    }
    return s;
  }
};

/// w^k * n + 1
inline OrdinalCNF omega_power_plus_one(unsigned k, std::uint64_t n = 1) {
  OrdinalCNF c;
  if (k == 0) {
    c.terms.push_back({0, n + 1});
  } else {
    c.terms.push_back({k, n});
    c.terms.push_back({0, 1});
  }
  return c;
}

struct AnnotatedPrefixTree;

enum class EndsKind { Finite, Ordinal, Cantor, CantorPlusDiscrete, PrefixTree };

/// A closed subset of the Cantor set.
///
/// Finite(0) is the EmptySpace sentinel returned by over-derivation and
/// Finite(1) is the singleton. CantorPlusDiscrete with u_count == 0 means
/// |U| is infinite.
struct EndsSpec {
  EndsKind kind = EndsKind::Finite;
  std::uint64_t count = 0;
  OrdinalCNF cnf;
  std::shared_ptr<const AnnotatedPrefixTree> tree;

  static EndsSpec empty() { return finite(0); }
  static EndsSpec singleton() { return finite(1); }
  static EndsSpec finite(std::uint64_t n) {
    EndsSpec s;
    s.kind = EndsKind::Finite;
    s.count = n;
    return s;
  }
  static EndsSpec cantor() {
    EndsSpec s;
    s.kind = EndsKind::Cantor;
    return s;
  }
  static constexpr std::uint64_t kInfinite = 0;
  static EndsSpec cantor_plus_discrete(std::uint64_t u_count = kInfinite) {
    EndsSpec s;
    s.kind = EndsKind::CantorPlusDiscrete;
    s.count = u_count;
    return s;
  }
  /// The space of ordinals below `successor`. Finite ordinals collapse to
  /// FiniteSet.
  static EndsSpec ordinal(const OrdinalCNF& successor) {
    if (!successor.canonical())
      throw Error(ErrorCode::InvalidSpec, "ordinal not in Cantor normal form");
    if (!successor.is_successor())
      throw Error(ErrorCode::InvalidSpec, "ordinal space must be a successor ordinal");
    if (successor.is_finite()) return finite(successor.finite_value());
    EndsSpec s;
    s.kind = EndsKind::Ordinal;
    s.cnf = successor;
    return s;
  }
  static EndsSpec omega_power(unsigned k, std::uint64_t n = 1) {
    return ordinal(omega_power_plus_one(k, n));
  }
  static EndsSpec prefix_tree(AnnotatedPrefixTree t);

  bool is_empty() const { return kind == EndsKind::Finite && count == 0; }
  bool is_singleton() const { return kind == EndsKind::Finite && count == 1; }

  std::string str() const;
};

enum class AnnotationKind { Dies, SingleRay, FullCantor, Spec };

struct Annotation {
  AnnotationKind kind = AnnotationKind::SingleRay;
  EndsSpec spec;

  static Annotation dies() { return {AnnotationKind::Dies, {}}; }
  static Annotation single_ray() { return {AnnotationKind::SingleRay, {}}; }
  static Annotation full_cantor() { return {AnnotationKind::FullCantor, {}}; }
  /// Wraps a spec, folding the singleton and the Cantor set into their
  /// dedicated annotations.
  static Annotation of(const EndsSpec& s) {
    if (s.is_singleton()) return single_ray();
    if (s.kind == EndsKind::Cantor) return full_cantor();
    if (s.is_empty()) return dies();
    return {AnnotationKind::Spec, s};
  }
  /// The space of branches through a node carrying this annotation.
  EndsSpec as_spec() const {
    switch (kind) {
      case AnnotationKind::Dies: return EndsSpec::empty();
      case AnnotationKind::SingleRay: return EndsSpec::singleton();
      case AnnotationKind::FullCantor: return EndsSpec::cantor();
      case AnnotationKind::Spec: return spec;
    }
    return EndsSpec::empty();
  }
  std::string str() const {
    switch (kind) {
      case AnnotationKind::Dies: return "Dies";
      case AnnotationKind::SingleRay: return "SingleRay";
      case AnnotationKind::FullCantor: return "FullCantor";
      case AnnotationKind::Spec: return "Spec(" + spec.str() + ")";
    }
    return "?";
  }
};

/// Finite prefix-closed set of binary words (the empty word is the root) with
/// an annotation on every node of maximal length.
struct AnnotatedPrefixTree {
  unsigned depth = 0;
  std::set<std::string> nodes{""};
  std::map<std::string, Annotation> frontier;

  /// Tree of depth 0 whose root carries the spec.
  static AnnotatedPrefixTree root(const EndsSpec& s) {
    AnnotatedPrefixTree t;
    t.frontier[""] = Annotation::of(s);
    return t;
  }

  void validate() const;
};

bool operator==(const EndsSpec& a, const EndsSpec& b);
inline bool operator==(const Annotation& a, const Annotation& b) {
  if (a.kind != b.kind) return false;
  return a.kind != AnnotationKind::Spec || a.spec == b.spec;
}
inline bool operator==(const AnnotatedPrefixTree& a, const AnnotatedPrefixTree& b) {
  return a.depth == b.depth && a.nodes == b.nodes && a.frontier == b.frontier;
}
inline bool operator==(const EndsSpec& a, const EndsSpec& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case EndsKind::Finite:
    case EndsKind::CantorPlusDiscrete: return a.count == b.count;
    case EndsKind::Ordinal: return a.cnf == b.cnf;
    case EndsKind::Cantor: return true;
    case EndsKind::PrefixTree: return *a.tree == *b.tree;
  }
  return false;
}

inline std::string EndsSpec::str() const {
  switch (kind) {
    case EndsKind::Finite:
      if (count == 0) return "EmptySpace";
      if (count == 1) return "Singleton";
      return "FiniteSet(" + std::to_string(count) + ")";
    case EndsKind::Ordinal: return "Ordinal(" + cnf.str() + ")";
    case EndsKind::Cantor: return "Cantor";
    case EndsKind::CantorPlusDiscrete:
      return "CantorPlusDiscrete(" + (count == kInfinite ? std::string("inf") : std::to_string(count)) +
             ")";
    case EndsKind::PrefixTree: {
      std::string s = "PrefixTree(depth=" + std::to_string(tree->depth);
      for (const auto& [w, a] : tree->frontier) s += "," + (w.empty() ? std::string("e") : w) + ":" + a.str();
      return s + ")";
    }
  }
  return "?";
}

inline EndsSpec EndsSpec::prefix_tree(AnnotatedPrefixTree t) {
  t.validate();
  EndsSpec s;
  s.kind = EndsKind::PrefixTree;
  s.tree = std::make_shared<const AnnotatedPrefixTree>(std::move(t));
  return s;
}

void validate_spec(const EndsSpec& s);

inline void AnnotatedPrefixTree::validate() const {
  if (!nodes.count("")) throw Error(ErrorCode::InvalidSpec, "prefix tree without root");
  for (const auto& w : nodes) {
    if (w.size() > depth) throw Error(ErrorCode::InvalidSpec, "node deeper than tree depth: " + w);
    for (char c : w)
      if (c != '0' && c != '1') throw Error(ErrorCode::InvalidSpec, "non-binary node word: " + w);
    if (!w.empty() && !nodes.count(w.substr(0, w.size() - 1)))
      throw Error(ErrorCode::InvalidSpec, "node set not prefix-closed at " + w);
    if (w.size() < depth && !nodes.count(w + "0") && !nodes.count(w + "1"))
      throw Error(ErrorCode::InvalidSpec, "dead interior branch at '" + w + "'");
    if (w.size() == depth && !frontier.count(w))
      throw Error(ErrorCode::InvalidSpec, "frontier node without annotation: '" + w + "'");
  }
  for (const auto& [w, a] : frontier) {
    if (!nodes.count(w) || w.size() != depth)
      throw Error(ErrorCode::InvalidSpec, "annotation on non-frontier node '" + w + "'");
    if (a.kind == AnnotationKind::Dies)
      throw Error(ErrorCode::InvalidSpec, "frontier annotation Dies at '" + w + "'");
    if (a.kind == AnnotationKind::Spec) {
      if (a.spec.is_empty()) throw Error(ErrorCode::InvalidSpec, "empty spec annotation at '" + w + "'");
      validate_spec(a.spec);
    }
  }
}

inline void validate_spec(const EndsSpec& s) {
  switch (s.kind) {
    case EndsKind::Finite: return;
    case EndsKind::Ordinal:
      if (!s.cnf.canonical() || !s.cnf.is_successor() || s.cnf.is_finite())
        throw Error(ErrorCode::InvalidSpec, "bad ordinal " + s.cnf.str());
      return;
    case EndsKind::Cantor:
    case EndsKind::CantorPlusDiscrete: return;
    case EndsKind::PrefixTree:
      if (!s.tree) throw Error(ErrorCode::InvalidSpec, "prefix tree spec without tree");
      s.tree->validate();
      return;
  }
}

namespace detail {

/// Splits the ordinal space [0, beta) into its clopen atoms: one [0, w^k]
/// per unit of a term with k >= 1, plus isolated points.
struct OrdinalAtoms {
  std::vector<unsigned> infinite;  // exponents, in CNF order
  std::uint64_t points = 0;
};

inline OrdinalAtoms atoms_of(const OrdinalCNF& successor) {
  OrdinalAtoms a;
  OrdinalCNF space = successor.pred();  // the space is [0, space]
  for (const auto& t : space.terms) {
    if (t.exponent == 0) {
      a.points += t.coefficient;
    } else {
      for (std::uint64_t i = 0; i < t.coefficient; ++i) a.infinite.push_back(t.exponent);
    }
  }
  return a;
}

inline EndsSpec from_atoms(const std::vector<unsigned>& inf, std::size_t first, std::uint64_t points) {
  if (first >= inf.size()) return EndsSpec::finite(points);
  OrdinalCNF c;
  for (std::size_t i = first; i < inf.size(); ++i) {
    if (!c.terms.empty() && c.terms.back().exponent == inf[i])
      ++c.terms.back().coefficient;
    else
      c.terms.push_back({inf[i], 1});
  }
  if (points > 0) c.terms.push_back({0, points});
  return EndsSpec::ordinal(c.succ());
}

inline AnnotatedPrefixTree subtree(const AnnotatedPrefixTree& t, char bit) {
  AnnotatedPrefixTree s;
  s.depth = t.depth - 1;
  s.nodes.clear();
  std::string prefix(1, bit);
  for (const auto& w : t.nodes)
    if (!w.empty() && w[0] == bit) s.nodes.insert(w.substr(1));
  for (const auto& [w, a] : t.frontier)
    if (!w.empty() && w[0] == bit) s.frontier[w.substr(1)] = a;
  return s;
}

}  // namespace detail

/// Children of a node carrying `a` in the canonical encoding. SingleRay runs
/// along 0s; [0, w^k] is a spine along 0s with a copy of [0, w^{k-1}] hanging
/// off every 1-turn; finite unions are laid out as caterpillars (first part
/// under 0, the rest under 1); B+U with infinite U is a 0-spine whose 1-children
/// are Cantor-plus-one-point bundles.
inline std::array<std::optional<Annotation>, 2> expand(const Annotation& a) {
  using A = Annotation;
  switch (a.kind) {
    case AnnotationKind::Dies: return {std::nullopt, std::nullopt};
    case AnnotationKind::SingleRay: return {A::single_ray(), std::nullopt};
    case AnnotationKind::FullCantor: return {A::full_cantor(), A::full_cantor()};
    case AnnotationKind::Spec: break;
  }
  const EndsSpec& s = a.spec;
  switch (s.kind) {
    case EndsKind::Finite:
      if (s.count == 0) return {std::nullopt, std::nullopt};
      if (s.count == 1) return {A::single_ray(), std::nullopt};
      return {A::single_ray(), A::of(EndsSpec::finite(s.count - 1))};
    case EndsKind::Cantor: return {A::full_cantor(), A::full_cantor()};
    case EndsKind::CantorPlusDiscrete:
      if (s.count == EndsSpec::kInfinite)
        return {A::of(s), A::of(EndsSpec::cantor_plus_discrete(1))};
      return {A::full_cantor(), A::of(EndsSpec::finite(s.count))};
    case EndsKind::Ordinal: {
      auto atoms = detail::atoms_of(s.cnf);
      std::size_t total = atoms.infinite.size() + atoms.points;
      if (total == 1) {
        unsigned k = atoms.infinite[0];
        return {A::of(s), A::of(k == 1 ? EndsSpec::singleton() : EndsSpec::omega_power(k - 1))};
      }
      EndsSpec first = EndsSpec::omega_power(atoms.infinite[0]);
      return {A::of(first), A::of(detail::from_atoms(atoms.infinite, 1, atoms.points))};
    }
    case EndsKind::PrefixTree: {
      const auto& t = *s.tree;
      if (t.depth == 0) return expand(t.frontier.at(""));
      std::array<std::optional<Annotation>, 2> out;
      for (char bit : {'0', '1'}) {
        if (!t.nodes.count(std::string(1, bit))) continue;
        auto sub = detail::subtree(t, bit);
        out[bit - '0'] = sub.depth == 0 ? sub.frontier.at("") : A::of(EndsSpec::prefix_tree(sub));
      }
      return out;
    }
  }
  return {std::nullopt, std::nullopt};
}

/// Expands every frontier annotation until the tree has depth `new_depth`.
/// Truncating the result back to the old depth returns the input.
inline AnnotatedPrefixTree refine(const AnnotatedPrefixTree& tree, unsigned new_depth) {
  if (new_depth < tree.depth)
    throw Error(ErrorCode::InvalidSpec, "refine target shallower than tree");
  AnnotatedPrefixTree t = tree;
  while (t.depth < new_depth) {
    std::map<std::string, Annotation> next;
    for (const auto& [w, a] : t.frontier) {
      auto kids = expand(a);
      for (int b = 0; b < 2; ++b) {
        if (!kids[b] || kids[b]->kind == AnnotationKind::Dies) continue;
        std::string c = w + char('0' + b);
        t.nodes.insert(c);
        next[c] = *kids[b];
      }
    }
    t.frontier = std::move(next);
    ++t.depth;
  }
  return t;
}

/// Cuts a tree back to `depth`, re-annotating the new frontier with the spec
/// of the branches below each node.
inline AnnotatedPrefixTree truncate(const AnnotatedPrefixTree& tree, unsigned depth) {
  if (depth >= tree.depth) return tree;
  AnnotatedPrefixTree t;
  t.depth = depth;
  t.nodes.clear();
  for (const auto& w : tree.nodes)
    if (w.size() <= depth) t.nodes.insert(w);
  for (const auto& w : t.nodes) {
    if (w.size() != depth) continue;
    AnnotatedPrefixTree sub;
    sub.depth = tree.depth - depth;
    sub.nodes.clear();
    for (const auto& v : tree.nodes)
      if (v.compare(0, w.size(), w) == 0 && v.size() >= w.size()) sub.nodes.insert(v.substr(w.size()));
    for (const auto& [v, a] : tree.frontier)
      if (v.compare(0, w.size(), w) == 0) sub.frontier[v.substr(w.size())] = a;
    t.frontier[w] = Annotation::of(EndsSpec::prefix_tree(sub));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Cantor-Bendixson calculus

inline bool contains_cantor(const EndsSpec& s) {
  switch (s.kind) {
    case EndsKind::Cantor:
    case EndsKind::CantorPlusDiscrete: return true;
    case EndsKind::PrefixTree:
      for (const auto& [w, a] : s.tree->frontier)
        if (a.kind == AnnotationKind::FullCantor ||
            (a.kind == AnnotationKind::Spec && contains_cantor(a.spec)))
          return true;
      return false;
    default: return false;
  }
}

/// The set of limit points. Total: over-derivation yields EmptySpace.
inline EndsSpec cb_derivative(const EndsSpec& s) {
  switch (s.kind) {
    case EndsKind::Finite: return EndsSpec::empty();
    case EndsKind::Cantor:
    case EndsKind::CantorPlusDiscrete: return EndsSpec::cantor();
    case EndsKind::Ordinal: {
      // [0, a]' = limit ordinals in (0, a]; for a = w*d + n this is
      // {w*x : 1 <= x <= d}, of order type d (finite d) or d+1.
      OrdinalCNF alpha = s.cnf.pred();
      OrdinalCNF delta;
      for (const auto& t : alpha.terms)
        if (t.exponent >= 1) delta.terms.push_back({t.exponent - 1, t.coefficient});
      if (delta.is_zero()) return EndsSpec::empty();
      if (delta.is_finite()) return EndsSpec::finite(delta.finite_value());
      return EndsSpec::ordinal(delta.succ());
    }
    case EndsKind::PrefixTree: {
      const auto& t = *s.tree;
      AnnotatedPrefixTree d;
      d.depth = t.depth;
      d.nodes.clear();
      for (const auto& [w, a] : t.frontier) {
        Annotation da = Annotation::of(cb_derivative(a.as_spec()));
        if (da.kind == AnnotationKind::Dies) continue;
        d.frontier[w] = da;
        for (std::size_t i = 0; i <= w.size(); ++i) d.nodes.insert(w.substr(0, i));
      }
      if (d.frontier.empty()) return EndsSpec::empty();
      return EndsSpec::prefix_tree(std::move(d));
    }
  }
  return EndsSpec::empty();
}

inline EndsSpec cb_derivative(const EndsSpec& s, unsigned times) {
  EndsSpec r = s;
  for (unsigned i = 0; i < times; ++i) r = cb_derivative(r);
  return r;
}

struct CharacteristicSystem {
  unsigned k = 0;
  std::uint64_t n = 1;
  friend bool operator==(const CharacteristicSystem&, const CharacteristicSystem&) = default;
  std::string str() const { return "(" + std::to_string(k) + "," + std::to_string(n) + ")"; }
};

namespace detail {
/// Number of points when the space is finite.
inline std::optional<std::uint64_t> finite_size(const EndsSpec& s) {
  switch (s.kind) {
    case EndsKind::Finite: return s.count;
    case EndsKind::PrefixTree: {
      std::uint64_t n = 0;
      for (const auto& [w, a] : s.tree->frontier) {
        auto f = finite_size(a.as_spec());
        if (!f) return std::nullopt;
        n += *f;
      }
      return n;
    }
    default: return std::nullopt;
  }
}
}  // namespace detail

inline CharacteristicSystem characteristic_system(const EndsSpec& s) {
  if (contains_cantor(s)) throw Error(ErrorCode::UncountableSpec, s.str());
  EndsSpec cur = s;
  for (unsigned k = 0;; ++k) {
    if (auto n = detail::finite_size(cur)) {
      if (*n == 0) throw Error(ErrorCode::InvalidSpec, "empty space has no characteristic system");
      return {k, *n};
    }
    cur = cb_derivative(cur);
  }
}

struct ClassTag {
  enum class Kind { EmptySpace, Finite, CountableRank, Cantor, CantorPlusOneBoundaryDiscrete };
  Kind kind = Kind::EmptySpace;
  unsigned k = 0;
  std::uint64_t n = 0;

  friend bool operator==(const ClassTag&, const ClassTag&) = default;

  static ClassTag countable(unsigned k, std::uint64_t n) {
    if (k == 0) return {Kind::Finite, 0, n};
    return {Kind::CountableRank, k, n};
  }
  std::string str() const {
    switch (kind) {
      case Kind::EmptySpace: return "EmptySpace";
      case Kind::Finite: return "Finite(" + std::to_string(n) + ")";
      case Kind::CountableRank: return "CountableRank(" + std::to_string(k) + "," + std::to_string(n) + ")";
      case Kind::Cantor: return "Cantor";
      case Kind::CantorPlusOneBoundaryDiscrete: return "CantorPlusOneBoundaryDiscrete";
    }
    return "?";
  }
};

namespace detail {
/// Decomposition of a space containing a Cantor part as B + U.
struct Profile {
  std::uint64_t points = 0;  // isolated points away from any accumulation
  unsigned boundary = 0;     // accumulation points of U inside B
  bool higher_rank = false;  // a countable part that is not discrete
};

inline Profile profile(const EndsSpec& s) {
  Profile p;
  switch (s.kind) {
    case EndsKind::Finite: p.points = s.count; break;
    case EndsKind::Ordinal: p.higher_rank = true; break;
    case EndsKind::Cantor: break;
    case EndsKind::CantorPlusDiscrete:
      if (s.count == EndsSpec::kInfinite)
        p.boundary = 1;
      else
        p.points = s.count;
      break;
    case EndsKind::PrefixTree:
      for (const auto& [w, a] : s.tree->frontier) {
        auto q = profile(a.as_spec());
        p.points += q.points;
        p.boundary += q.boundary;
        p.higher_rank = p.higher_rank || q.higher_rank;
      }
      break;
  }
  return p;
}
}  // namespace detail

/// Normal form deciding homeomorphism among the classes this library builds.
/// Mixed presentations outside those classes are reported as Unclassifiable.
inline ClassTag canonical_class(const EndsSpec& s) {
  using K = ClassTag::Kind;
  validate_spec(s);
  if (s.is_empty()) return {K::EmptySpace, 0, 0};
  if (!contains_cantor(s)) {
    auto cs = characteristic_system(s);
    return ClassTag::countable(cs.k, cs.n);
  }
  switch (s.kind) {
    case EndsKind::Cantor: return {K::Cantor, 0, 0};
    case EndsKind::CantorPlusDiscrete:
      if (s.count == EndsSpec::kInfinite) return {K::CantorPlusOneBoundaryDiscrete, 0, 0};
      throw Error(ErrorCode::Unclassifiable,
                  "Cantor set plus finitely many isolated points has empty boundary of U");
    case EndsKind::PrefixTree: {
      auto p = detail::profile(s);
      if (p.higher_rank) throw Error(ErrorCode::Unclassifiable, "countable part of positive rank beside a Cantor part");
      if (p.boundary == 0 && p.points == 0) return {K::Cantor, 0, 0};
      if (p.boundary == 1) return {K::CantorPlusOneBoundaryDiscrete, 0, 0};
      throw Error(ErrorCode::Unclassifiable, "boundary of U is not a single point in " + s.str());
    }
    default: break;
  }
  throw Error(ErrorCode::Unclassifiable, s.str());
}

/// A representative spec of a class tag.
inline EndsSpec representative(const ClassTag& c) {
  using K = ClassTag::Kind;
  switch (c.kind) {
    case K::EmptySpace: return EndsSpec::empty();
    case K::Finite: return EndsSpec::finite(c.n);
    case K::CountableRank: return EndsSpec::omega_power(c.k, c.n);
    case K::Cantor: return EndsSpec::cantor();
    case K::CantorPlusOneBoundaryDiscrete: return EndsSpec::cantor_plus_discrete();
  }
  return EndsSpec::empty();
}

}  // namespace monsterkit

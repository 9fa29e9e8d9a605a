#pragma once

// Puzzles: copies g.S_elem of the elementary piece over a ball of the Cayley
// graph, glued along Cayley edges; the symbolic ends catalog of the assembled
// surface and the checks that pin its Veech group.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "monsterkit/binary_tree.hpp"
#include "monsterkit/cantor_ends.hpp"
#include "monsterkit/error.hpp"
#include "monsterkit/flat_kernel.hpp"
#include "monsterkit/monster_builders.hpp"
#include "monsterkit/rational.hpp"

namespace monsterkit {

struct GroupSpec {
  std::string name;
  std::vector<Mat2> generators;

  /// Generators actually used for Cayley edges: Id dropped, duplicates merged.
  std::vector<Mat2> effective() const { return detail::clean_generators(generators); }

  void validate() const {
    if (generators.empty()) throw Error(ErrorCode::InvalidGroup, "group " + name + " has no generators");
    for (const auto& h : generators)
      if (h.det() <= 0) throw Error(ErrorCode::InvalidGroup, "generator " + h.str() + " has det <= 0");
    effective();
  }
};

struct BallElement {
  Mat2 g;
  std::vector<int> word;  // generator indices, 1-based into effective()
  int length() const { return int(word.size()); }
  std::string word_str() const {
    if (word.empty()) return "Id";
    std::string s;
    for (int j : word) s += (s.empty() ? "h" : ".h") + std::to_string(j);
    return s;
  }
};

struct CayleyEdge {
  int from = 0;
  int to = 0;
  int j = 0;  // to = from * h_j
};

struct CayleyBall {
  std::vector<Mat2> generators;
  int radius = 0;
  std::vector<BallElement> elements;
  std::vector<CayleyEdge> edges;  // directed, every (g, g h_j) inside the ball

  std::optional<int> index_of(const Mat2& g) const {
    auto it = index_.find(g);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t undirected_edge_count() const {
    std::set<std::pair<int, int>> s;
    for (const auto& e : edges) s.insert({std::min(e.from, e.to), std::max(e.from, e.to)});
    return s.size();
  }
  /// True when no generator leads out of the ball, so the whole group is listed.
  bool closed() const { return closed_; }

  std::map<Mat2, int> index_;
  bool closed_ = false;
};

/// Breadth-first enumeration in generator order with exact deduplication.
inline CayleyBall cayley_ball(const GroupSpec& group, int L) {
  if (L < 0) throw Error(ErrorCode::Config, "ball radius must be >= 0");
  group.validate();
  CayleyBall b;
  b.generators = group.effective();
  b.radius = L;
  b.elements.push_back({Mat2::identity(), {}});
  b.index_[Mat2::identity()] = 0;
  std::size_t level_start = 0;
  for (int len = 1; len <= L; ++len) {
    std::size_t level_end = b.elements.size();
    for (std::size_t i = level_start; i < level_end; ++i)
      for (std::size_t j = 0; j < b.generators.size(); ++j) {
        Mat2 x = b.elements[i].g * b.generators[j];
        if (b.index_.count(x)) continue;
        auto w = b.elements[i].word;
        w.push_back(int(j) + 1);
        b.index_[x] = int(b.elements.size());
        b.elements.push_back({x, w});
      }
    level_start = level_end;
  }
  b.closed_ = true;
  for (std::size_t i = 0; i < b.elements.size(); ++i)
    for (std::size_t j = 0; j < b.generators.size(); ++j) {
      auto t = b.index_of(b.elements[i].g * b.generators[j]);
      if (t) b.edges.push_back({int(i), *t, int(j) + 1});
      else b.closed_ = false;
    }
  return b;
}

inline std::string to_dot(const CayleyBall& b) {
  std::string s = "digraph Cay {\n";
  for (std::size_t i = 0; i < b.elements.size(); ++i)
    s += "  g" + std::to_string(i) + " [label=\"" + b.elements[i].word_str() + "\"];\n";
  for (const auto& e : b.edges)
    s += "  g" + std::to_string(e.from) + " -> g" + std::to_string(e.to) + " [label=\"h" + std::to_string(e.j) + "\"];\n";
  return s + "}\n";
}

struct ContractingReport {
  int word_bound = 0;
  std::size_t checked = 0;
};

/// Checks every element of word length <= bound. Throws ContractingWitness
/// naming the first contracting element found.
inline ContractingReport check_no_contracting(const GroupSpec& group, int word_bound) {
  auto b = cayley_ball(group, word_bound);
  for (const auto& e : b.elements)
    if (is_contracting(e.g))
      throw Error(ErrorCode::ContractingWitness, e.word_str() + " = " + e.g.str());
  return {word_bound, b.elements.size()};
}

struct CrossGluing {
  int edge = 0;  // index into ball.edges
  int i = 0;     // mark index
  int a = 0;     // h_j checked mark in S_g
  int b = 0;     // M^{-j} mark in S_{g h_j}
};

struct AssembledSurface {
  SurfaceComplex complex{Rational(1)};
  ElementaryPiece elem;
  GroupSpec group;
  CayleyBall ball;
  std::size_t sheets_per_piece = 0;
  std::size_t marks_per_piece = 0;
  std::vector<CrossGluing> cross_gluings;
  std::vector<std::string> boundary_notes;  // free families left unglued at the ball boundary

  int element_of_sheet(int sheet) const { return int(sheet / sheets_per_piece); }
  int local_sheet(int sheet) const { return int(sheet % sheets_per_piece); }
  int sheet_of(int element, int local) const { return int(element * sheets_per_piece) + local; }
  int mark_of(int element, int local) const { return int(element * marks_per_piece) + local; }
};

namespace detail {

inline std::map<std::pair<std::string, int>, int> marks_by_family(const SurfaceComplex& c) {
  std::map<std::pair<std::string, int>, int> out;
  for (const auto& m : c.marks) out[{m.family, m.index}] = m.id;
  return out;
}

/// Appends g . src to dst, shifting ids and cover numbers. Partner tables of
/// dst are stale until reindex().
inline void append_copy(SurfaceComplex& dst, const SurfaceComplex& src, const Mat2& g, const std::string& prefix,
                        int cover_shift) {
  int sheet_off = int(dst.sheets.size());
  int mark_off = int(dst.marks.size());
  for (Sheet s : src.sheets) {
    s.id += sheet_off;
    if (s.cover >= 0) s.cover += cover_shift;
    s.label = g * s.label;
    s.tag = prefix + s.tag;
    dst.sheets.push_back(std::move(s));
  }
  for (Mark m : src.marks) {
    m.id += mark_off;
    m.sheet += sheet_off;
    dst.marks.push_back(std::move(m));
  }
  for (Gluing gl : src.gluings) {
    gl.a += mark_off;
    gl.b += mark_off;
    dst.gluings.push_back(gl);
  }
}

}  // namespace detail

/// Copies g . S_elem for g in the ball of radius L, glued along every
/// Cayley edge (g, g h_j) inside the ball, one gluing per mark of M^-j
/// (max(N, length of the distinguished ray) marks).
inline AssembledSurface assemble(const EndsSpec& spec, const GroupSpec& group, const BuilderParams& params, int L,
                                 int contracting_bound = 6) {
  check_no_contracting(group, contracting_bound);
  AssembledSurface a;
  a.group = group;
  a.ball = cayley_ball(group, L);
  if (!is_decorated(params.mode) && !a.ball.generators.empty())
    throw Error(ErrorCode::Config, std::string("mode ") + to_string(params.mode) + " has no buffers to assemble along");
  a.elem = build_elementary_piece(spec, group.generators, params);
  const SurfaceComplex& e = a.elem.complex;
  a.sheets_per_piece = e.sheets.size();
  a.marks_per_piece = e.marks.size();
  a.complex = SurfaceComplex(params.window_radius);
  for (std::size_t k = 0; k < a.ball.elements.size(); ++k)
    detail::append_copy(a.complex, e, a.ball.elements[k].g, "g" + std::to_string(k) + ":", int(k) * e.cover_count());
  a.complex.reindex();
  auto local = detail::marks_by_family(e);
  for (std::size_t ei = 0; ei < a.ball.edges.size(); ++ei) {
    const auto& edge = a.ball.edges[ei];
    int n = int(marks_of_family(e, detail::jname("M^-", edge.j)).size());
    for (int i = 1; i <= n; ++i) {
      int x = a.mark_of(edge.from, local.at({detail::jname("hMc^-", edge.j), i}));
      int y = a.mark_of(edge.to, local.at({detail::jname("M^-", edge.j), i}));
      a.complex.glue(x, y);
      a.cross_gluings.push_back({int(ei), i, x, y});
    }
  }
  for (std::size_t k = 0; k < a.ball.elements.size(); ++k) {
    std::set<std::string> open;
    for (std::size_t m = 0; m < e.marks.size(); ++m) {
      int id = a.mark_of(int(k), int(m));
      const auto& fam = a.complex.marks[id].family;
      if (!a.complex.is_glued(id) &&
          std::find(a.elem.free_families.begin(), a.elem.free_families.end(), fam) != a.elem.free_families.end())
        open.insert(fam);
    }
    for (const auto& f : open) a.boundary_notes.push_back(a.ball.elements[k].word_str() + ": " + f + " unglued");
  }
  a.complex.meta = e.meta;
  a.complex.meta["construction"] = "assembled";
  a.complex.meta["group"] = group.name;
  a.complex.meta["ball"] = std::to_string(L);
  return a;
}

// ---------------------------------------------------------------------------
// Ends

enum class TopologyMode { Yk, CantorMerge, BUMerge, Single };

inline const char* to_string(TopologyMode m) {
  switch (m) {
    case TopologyMode::Yk: return "Yk";
    case TopologyMode::CantorMerge: return "CantorMerge";
    case TopologyMode::BUMerge: return "BUMerge";
    case TopologyMode::Single: return "Single";
  }
  return "?";
}

/// Ends of one piece S_g with its distinguished end taken out.
struct PieceEnds {
  int element = 0;
  std::string word;
  EndsSpec spec;
  Word distinguished;  // tree word whose prefixes shrink to the distinguished end
};

struct EndsCatalog {
  std::string secret_end = "[U~_n]";
  std::vector<PieceEnds> per_element;
  TopologyMode topology = TopologyMode::Single;
  unsigned k = 0;
  ClassTag canonical;
  bool group_finite = false;

  std::string str() const {
    std::string s = "secret end " + secret_end + "\n";
    for (const auto& p : per_element)
      s += "i_" + p.word + "(" + p.spec.str() + " minus the end along " + p.distinguished + ")\n";
    s += std::string("topology ") + to_string(topology);
    if (topology == TopologyMode::Yk) s += "(" + std::to_string(k) + ")";
    return s + "\nclass " + canonical.str() + "\n";
  }
};

inline EndsCatalog compute_ends(const AssembledSurface& a) {
  if (!a.elem.distinguished) throw Error(ErrorCode::UnsupportedSpec, "ends catalog needs a decorated mode");
  EndsCatalog c;
  c.group_finite = a.ball.closed();
  ClassTag t = canonical_class(a.elem.ends_spec);
  bool trivial = a.ball.elements.size() == 1 && c.group_finite;
  using K = ClassTag::Kind;
  if (t.kind == K::Cantor) c.topology = TopologyMode::CantorMerge;
  else if (t.kind == K::CantorPlusOneBoundaryDiscrete) c.topology = TopologyMode::BUMerge;
  else if (t.kind == K::CountableRank && t.n == 1) {
    c.topology = TopologyMode::Yk;
    c.k = t.k;
  } else if (trivial) c.topology = TopologyMode::Single;
  else throw Error(ErrorCode::UnsupportedSpec, "no ends catalog entry covers " + a.elem.ends_spec.str());
  c.canonical = t;
  Word dist = a.elem.family.rays[*a.elem.distinguished].last();
  for (std::size_t k = 0; k < a.ball.elements.size(); ++k)
    c.per_element.push_back({int(k), a.ball.elements[k].word_str(), a.elem.ends_spec, dist});
  return c;
}

/// Component labels of the complement of the r-th compact set predicted by the
/// catalog: the secret end plus, for each |g| <= r, every cylinder of depth r+1
/// away from the distinguished end.
inline std::set<std::string> expected_components(const EndsCatalog& c, const CayleyBall& ball, unsigned r) {
  std::set<std::string> out{"secret"};
  if (c.per_element.empty()) return out;
  auto pt = refine(AnnotatedPrefixTree::root(c.per_element[0].spec), r + 1);
  for (const auto& p : c.per_element) {
    if (ball.elements[p.element].length() > int(r)) continue;
    Word cut = p.distinguished.substr(0, r + 1);
    for (const auto& [w, ann] : pt.frontier)
      if (w.size() == r + 1 && w != cut) out.insert(std::to_string(p.element) + ":" + w);
  }
  return out;
}

/// Coarse adjacency structure of the assembled surface: one node per
/// (piece g, ray, mark slot), joined along each ray and across every gluing.
struct AdjacencyModel {
  struct Node {
    int element = 0;
    int ray = 0;
    int slot = 1;
    unsigned depth = 0;
    Word vertex;
  };
  std::vector<Node> nodes;
  std::vector<std::pair<int, int>> edges;
  std::map<std::tuple<int, int, int>, int> index;
  std::vector<int> tails;  // last slot of the distinguished ray, per element

  int at(int element, int ray, int slot) const { return index.at({element, ray, slot}); }
};

inline AdjacencyModel adjacency_model(const AssembledSurface& a) {
  AdjacencyModel m;
  const auto& rays = a.elem.family.rays;
  for (std::size_t k = 0; k < a.ball.elements.size(); ++k)
    for (std::size_t r = 0; r < rays.size(); ++r)
      for (std::size_t s = 1; s <= rays[r].vertices.size(); ++s) {
        const Word& v = rays[r].vertices[s - 1];
        m.index[{int(k), int(r), int(s)}] = int(m.nodes.size());
        m.nodes.push_back({int(k), int(r), int(s), unsigned(v.size()), v});
        if (s > 1) m.edges.push_back({int(m.nodes.size()) - 2, int(m.nodes.size()) - 1});
      }
  auto node_of = [&](int mark) {
    const Mark& mk = a.complex.marks[mark];
    int k = a.element_of_sheet(mk.sheet);
    int r = a.complex.sheets[mk.sheet].piece;
    int len = int(rays[r].vertices.size());
    return m.at(k, r, std::clamp(mk.index, 1, len));
  };
  for (const auto& g : a.complex.gluings) m.edges.push_back({node_of(g.a), node_of(g.b)});
  if (a.elem.distinguished) {
    int d = int(*a.elem.distinguished);
    for (std::size_t k = 0; k < a.ball.elements.size(); ++k)
      m.tails.push_back(m.at(int(k), d, int(rays[d].vertices.size())));
  }
  return m;
}

struct ComponentReport {
  unsigned level = 0;
  std::set<std::string> labels;
  std::vector<std::vector<int>> components;  // node ids
  int secret = -1;                           // index into components
  std::vector<std::string> problems;
};

/// Components of the model minus K_r = {|g| <= r, vertex depth <= r}, each
/// labeled "secret" or "element:w" with w its unique shallowest vertex.
inline ComponentReport end_components(const AssembledSurface& a, const AdjacencyModel& m, unsigned r) {
  ComponentReport rep;
  rep.level = r;
  auto outside = [&](int n) {
    const auto& x = m.nodes[n];
    return a.ball.elements[x.element].length() > int(r) || x.depth > r;
  };
  detail::UnionFind uf(m.nodes.size());
  for (const auto& [x, y] : m.edges)
    if (outside(x) && outside(y)) uf.unite(x, y);
  std::map<int, std::vector<int>> groups;
  for (std::size_t n = 0; n < m.nodes.size(); ++n)
    if (outside(int(n))) groups[uf.find(int(n))].push_back(int(n));
  std::set<int> tail_roots;
  for (int t : m.tails) tail_roots.insert(uf.find(t));
  if (tail_roots.size() > 1) rep.problems.push_back("distinguished ends fall into " + std::to_string(tail_roots.size()) + " components");
  for (auto& [root, ns] : groups) {
    rep.components.push_back(ns);
    if (tail_roots.count(root)) {
      rep.secret = int(rep.components.size()) - 1;
      if (!rep.labels.insert("secret").second) rep.problems.push_back("second secret component");
      for (std::size_t k = 0; k < a.ball.elements.size(); ++k)
        if (a.ball.elements[k].length() > int(r))
          for (std::size_t n = 0; n < m.nodes.size(); ++n)
            if (m.nodes[n].element == int(k) && uf.find(int(n)) != root) {
              rep.problems.push_back("piece " + a.ball.elements[k].word_str() + " not inside the secret region");
              break;
            }
      continue;
    }
    std::set<int> elems;
    unsigned dmin = ~0u;
    std::set<Word> shallow;
    for (int n : ns) {
      elems.insert(m.nodes[n].element);
      if (m.nodes[n].depth < dmin) {
        dmin = m.nodes[n].depth;
        shallow.clear();
      }
      if (m.nodes[n].depth == dmin) shallow.insert(m.nodes[n].vertex);
    }
    if (elems.size() != 1 || shallow.size() != 1) {
      rep.problems.push_back("component spans " + std::to_string(elems.size()) + " pieces and " +
                             std::to_string(shallow.size()) + " top vertices");
      continue;
    }
    std::string label = std::to_string(*elems.begin()) + ":" + *shallow.begin();
    if (!rep.labels.insert(label).second) rep.problems.push_back("cylinder " + label + " split in two");
  }
  return rep;
}

struct AuditResult {
  bool pass = true;
  std::vector<std::string> witnesses;
};

/// Set-level comparison of the brute-force components against the catalog at
/// every level 1..depth-1.
inline AuditResult audit_ends(const AssembledSurface& a, const EndsCatalog& c) {
  AuditResult out;
  if (a.elem.family.rays.empty() || !a.elem.distinguished) throw Error(ErrorCode::UnsupportedSpec, "ends audit needs a decorated mode");
  std::size_t need = a.elem.family.rays[*a.elem.distinguished].vertices.size();
  int n = 0;
  for (const auto& g : a.cross_gluings) n = std::max(n, g.i);
  if (!a.ball.edges.empty() && std::size_t(n) < need)
    throw Error(ErrorCode::Config, "ends audit needs mark count >= " + std::to_string(need) + " to link every level");
  auto m = adjacency_model(a);
  for (unsigned r = 1; r < a.elem.tree.depth; ++r) {
    auto rep = end_components(a, m, r);
    auto want = expected_components(c, a.ball, r);
    for (const auto& p : rep.problems) out.witnesses.push_back("level " + std::to_string(r) + ": " + p);
    if (rep.labels != want) {
      for (const auto& l : want)
        if (!rep.labels.count(l)) out.witnesses.push_back("level " + std::to_string(r) + ": missing " + l);
      for (const auto& l : rep.labels)
        if (!want.count(l)) out.witnesses.push_back("level " + std::to_string(r) + ": unexpected " + l);
    }
  }
  out.pass = out.witnesses.empty();
  return out;
}

struct SecretChain {
  AdjacencyModel model;
  std::vector<std::vector<int>> regions;  // U~_1 > U~_2 > ... as node sets
};

/// Nested regions U~_1 > ... > U~_n around the secret end, each checked to be
/// connected, strictly smaller than the previous one, to hold every
/// distinguished end and to meet the free marks of every ball-boundary piece.
inline SecretChain secret_end_witness(const AssembledSurface& a, unsigned n) {
  if (!a.elem.distinguished) throw Error(ErrorCode::UnsupportedSpec, "no distinguished ends without a decorated piece");
  if (n < 1 || n >= a.elem.tree.depth || int(n) > a.ball.radius)
    throw Error(ErrorCode::BallTooSmall, "chain length " + std::to_string(n) + " needs tree depth > n and ball radius >= n");
  SecretChain ch;
  ch.model = adjacency_model(a);
  const auto& m = ch.model;
  const auto& rays = a.elem.family.rays;
  int d = int(*a.elem.distinguished);
  for (unsigned r = 1; r <= n; ++r) {
    auto rep = end_components(a, m, r);
    if (rep.secret < 0) throw Error(ErrorCode::EvidenceFailure, "no secret component at level " + std::to_string(r));
    auto region = rep.components[rep.secret];
    std::sort(region.begin(), region.end());
    if (!ch.regions.empty()) {
      const auto& prev = ch.regions.back();
      if (!std::includes(prev.begin(), prev.end(), region.begin(), region.end()) || prev.size() == region.size())
        throw Error(ErrorCode::EvidenceFailure, "level " + std::to_string(r) + " is not strictly nested");
    }
    std::set<int> in(region.begin(), region.end());
    for (int t : m.tails)
      if (!in.count(t)) throw Error(ErrorCode::EvidenceFailure, "a distinguished end escapes level " + std::to_string(r));
    for (std::size_t k = 0; k < a.ball.elements.size(); ++k) {
      if (a.ball.elements[k].length() != a.ball.radius) continue;
      bool meets = false;
      for (const auto& mk : a.complex.marks) {
        if (a.element_of_sheet(mk.sheet) != int(k) || a.complex.is_glued(mk.id)) continue;
        if (std::find(a.elem.free_families.begin(), a.elem.free_families.end(), mk.family) == a.elem.free_families.end())
          continue;
        int len = int(rays[d].vertices.size());
        if (in.count(m.at(int(k), d, std::clamp(mk.index, 1, len)))) meets = true;
      }
      if (!meets)
        throw Error(ErrorCode::EvidenceFailure, "level " + std::to_string(r) + " misses the free marks of " +
                                                    a.ball.elements[k].word_str());
    }
    ch.regions.push_back(std::move(region));
  }
  return ch;
}

// ---------------------------------------------------------------------------
// Veech group checks

struct CheckReport {
  std::string name;
  bool pass = true;
  std::optional<ErrorCode> code;
  std::string witness;
  std::string evidence;
  std::vector<std::string> details;

  void fail(ErrorCode c, std::string w) {
    if (!pass) return;
    pass = false;
    code = c;
    witness = std::move(w);
  }
};

/// Checks that S_g -> S_{g' g} (same local sheets and marks) is an affine map
/// with differential g' on every piece g with |g| + |g'| <= L.
inline CheckReport verify_veech_lower(const AssembledSurface& a, const Mat2& gp) {
  CheckReport rep;
  rep.name = "veech-lower " + gp.str();
  auto gi = a.ball.index_of(gp);
  if (!gi) throw Error(ErrorCode::BallTooSmall, gp.str() + " is not in the ball");
  int lp = a.ball.elements[*gi].length();
  std::vector<int> image(a.ball.elements.size(), -1);
  std::size_t domain = 0;
  for (std::size_t k = 0; k < a.ball.elements.size(); ++k) {
    if (a.ball.elements[k].length() + lp > a.ball.radius) continue;
    auto t = a.ball.index_of(gp * a.ball.elements[k].g);
    if (!t) throw Error(ErrorCode::BallTooSmall, "image of " + a.ball.elements[k].word_str() + " leaves the ball");
    image[k] = *t;
    ++domain;
  }
  if (domain == 0) throw Error(ErrorCode::BallTooSmall, "no interior piece for " + gp.str());
  const auto& c = a.complex;
  std::size_t glued = 0;
  for (std::size_t k = 0; k < image.size() && rep.pass; ++k) {
    if (image[k] < 0) continue;
    for (std::size_t s = 0; s < a.sheets_per_piece; ++s) {
      const Sheet& x = c.sheets[a.sheet_of(int(k), int(s))];
      const Sheet& y = c.sheets[a.sheet_of(image[k], int(s))];
      if (y.label != gp * x.label || y.kind != x.kind || y.fold_index != x.fold_index)
        rep.fail(ErrorCode::MismatchWitness, "sheet " + x.tag + " does not map to " + y.tag + " with differential " + gp.str());
    }
    for (std::size_t mi = 0; mi < a.marks_per_piece && rep.pass; ++mi) {
      int xa = a.mark_of(int(k), int(mi)), ya = a.mark_of(image[k], int(mi));
      const Mark& x = c.marks[xa];
      const Mark& y = c.marks[ya];
      if (x.p != y.p || x.q != y.q || x.family != y.family || x.index != y.index || x.label != y.label ||
          a.local_sheet(x.sheet) != a.local_sheet(y.sheet)) {
        rep.fail(ErrorCode::MismatchWitness, "mark " + c.describe(xa) + " does not map to " + c.describe(ya));
        break;
      }
      int px = c.partner(xa);
      if (px < 0) continue;
      int kx = a.element_of_sheet(c.marks[px].sheet);
      if (image[kx] < 0) continue;
      int want = a.mark_of(image[kx], px - a.mark_of(kx, 0));
      ++glued;
      if (c.partner(ya) != want) {
        std::string edge = "(" + a.ball.elements[k].word_str() + ", " + a.ball.elements[kx].word_str() + ")";
        rep.fail(ErrorCode::MismatchWitness, "gluing " + c.describe(xa) + " ~ " + c.describe(px) + " on edge " + edge +
                                                 " has no image: " + c.describe(ya) + " is glued to " +
                                                 (c.partner(ya) < 0 ? std::string("nothing") : c.describe(c.partner(ya))));
      }
    }
  }
  rep.evidence = std::to_string(domain) + " pieces, " + std::to_string(glued) + " glued marks carried";
  return rep;
}

/// Per piece: exactly one 6pi point x(g); saddle connections from x(g) of
/// holonomy g v with |v| <= max_length only for v in {+-e1, +-e2}; every other
/// cone point of angle 4pi. Lengths are measured in the chart of S_g, i.e.
/// on the pulled-back surface g^{-1} . S.
inline CheckReport verify_veech_upper_evidence(const AssembledSurface& a, const Rational& max_length) {
  CheckReport rep;
  rep.name = "veech-upper max-length " + format_rational(max_length);
  if (!a.elem.distinguished) throw Error(ErrorCode::UnsupportedSpec, "upper evidence needs a decorated mode");
  auto sing = singularities(a.complex);
  std::vector<std::vector<int>> markers(a.ball.elements.size());
  for (const auto& s : sing) {
    int k = a.element_of_sheet(s.points[0].sheet);
    if (s.order == 3) markers[k].push_back(s.id);
    else if (s.order != 2)
      rep.fail(ErrorCode::EvidenceFailure, "cone point of angle " + std::to_string(2 * s.order) + "pi in piece " +
                                               a.ball.elements[k].word_str());
  }
  const std::set<Vec2> base{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (std::size_t k = 0; k < markers.size() && rep.pass; ++k) {
    const auto& e = a.ball.elements[k];
    if (markers[k].size() != 1) {
      rep.fail(ErrorCode::EvidenceFailure, "piece " + e.word_str() + " has " + std::to_string(markers[k].size()) + " 6pi points");
      break;
    }
    auto local = transform_surface(a.complex, e.g.inverse());
    std::set<Vec2> seen;
    for (const auto& sc : enumerate_saddle_connections(local, markers[k][0], max_length)) {
      Vec2 h = e.g * sc.holonomy;
      seen.insert(h);
      if (!base.count(sc.holonomy)) {
        std::ostringstream os;
        os << "piece " << e.word_str() << ": saddle connection with holonomy " << h << " outside the frame";
        rep.fail(ErrorCode::EvidenceFailure, os.str());
      }
    }
    if (seen.empty()) rep.fail(ErrorCode::EvidenceFailure, "piece " + e.word_str() + ": no short saddle connection at x(g)");
    std::ostringstream os;
    os << e.word_str() << ":";
    for (const auto& v : seen) os << " " << v;
    rep.details.push_back(os.str());
  }
  rep.evidence = "window-limited: radius " + format_rational(a.complex.window_radius) + ", " +
                 std::to_string(sing.size()) + " cone points";
  return rep;
}

/// Exact check that in every piece S_g the marks gMc^j and g h_j hMc^-j of
/// each buffer are at least 1/sqrt(2) apart (squared distances >= 1/2).
inline CheckReport verify_buffer_separation(const AssembledSurface& a) {
  CheckReport rep;
  rep.name = "buffer-separation";
  if (!a.elem.distinguished) throw Error(ErrorCode::UnsupportedSpec, "buffers exist only in decorated modes");
  const Rational bound(1, 2);
  double worst = -1;
  std::size_t pairs = 0;
  for (std::size_t k = 0; k < a.ball.elements.size() && rep.pass; ++k)
    for (std::size_t j = 1; j <= a.elem.generators.size(); ++j) {
      std::vector<int> A, B;
      for (std::size_t m = 0; m < a.marks_per_piece; ++m) {
        const Mark& mk = a.complex.marks[a.mark_of(int(k), int(m))];
        if (mk.family == detail::jname("Mc^", int(j))) A.push_back(mk.id);
        if (mk.family == detail::jname("hMc^-", int(j))) B.push_back(mk.id);
      }
      auto d = family_distance(a.complex, A, B);
      ++pairs;
      if (worst < 0 || d.approx() < worst) worst = d.approx();
      if (!d.at_least(bound)) {
        rep.fail(ErrorCode::EvidenceFailure, "piece " + a.ball.elements[k].word_str() + ", buffer " + std::to_string(j) +
                                                 ": distance " + std::to_string(d.approx()) + " < 1/sqrt(2)");
        break;
      }
    }
  rep.evidence = "exact, " + std::to_string(pairs) + " buffer pairs, smallest ~" + std::to_string(worst);
  return rep;
}

/// Every piece has exactly one cone point of angle 6pi and all others 4pi.
inline CheckReport verify_cone_angles(const AssembledSurface& a) {
  CheckReport rep;
  rep.name = "cone-angles";
  std::vector<std::map<int, int>> hist(a.ball.elements.size());
  auto sing = singularities(a.complex);
  for (const auto& s : sing) ++hist[a.element_of_sheet(s.points[0].sheet)][s.order];
  bool deco = a.elem.distinguished.has_value();
  for (std::size_t k = 0; k < hist.size(); ++k)
    for (const auto& [order, n] : hist[k]) {
      bool ok = order == 2 || (deco && order == 3 && n == 1);
      if (!ok)
        rep.fail(ErrorCode::EvidenceFailure, "piece " + a.ball.elements[k].word_str() + ": " + std::to_string(n) +
                                                 " cone points of angle " + std::to_string(2 * order) + "pi");
    }
  if (deco)
    for (std::size_t k = 0; k < hist.size(); ++k)
      if (hist[k][3] != 1) rep.fail(ErrorCode::EvidenceFailure, "piece " + a.ball.elements[k].word_str() + " lacks its 6pi point");
  rep.evidence = "window-limited: " + std::to_string(sing.size()) + " cone points";
  return rep;
}

/// Copy of a with the targets of the i = 1 and i = 2 cross gluings of one
/// Cayley edge exchanged.
inline AssembledSurface swap_cross_gluings(const AssembledSurface& a, int edge) {
  AssembledSurface b = a;
  int x1 = -1, x2 = -1;
  for (const auto& cg : b.cross_gluings)
    if (cg.edge == edge && cg.i == 1) x1 = cg.a;
    else if (cg.edge == edge && cg.i == 2) x2 = cg.a;
  if (x1 < 0 || x2 < 0) throw Error(ErrorCode::Config, "edge " + std::to_string(edge) + " needs two cross gluings");
  Gluing* g1 = nullptr;
  Gluing* g2 = nullptr;
  for (auto& g : b.complex.gluings) {
    if (g.a == x1) g1 = &g;
    if (g.a == x2) g2 = &g;
  }
  std::swap(g1->b, g2->b);
  for (auto& cg : b.cross_gluings)
    if (cg.edge == edge && (cg.i == 1 || cg.i == 2)) cg.b = cg.i == 1 ? g1->b : g2->b;
  b.complex.reindex();
  return b;
}

}  // namespace monsterkit

#pragma once

// Builders for the monsters: horizontal-slit Loch Ness Monsters, buffer
// pieces, the decorated monster with its single 6pi point, and the
// elementary piece assembled over a ray decomposition.
//
// Every infinite mark family is materialized up to index N inside the window
// [-R, R]^2. Every gluing goes through SurfaceComplex::glue, so the
// parallel / equal length / disjoint preconditions are checked each time.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "monsterkit/binary_tree.hpp"
#include "monsterkit/cantor_ends.hpp"
#include "monsterkit/error.hpp"
#include "monsterkit/flat_kernel.hpp"
#include "monsterkit/rational.hpp"

namespace monsterkit {

enum class TheoremMode { TPP_P, TPP_Pprime, GenusZero, TAF, TAN, TNN };

inline const char* to_string(TheoremMode m) {
  switch (m) {
    case TheoremMode::TPP_P: return "tpp-p";
    case TheoremMode::TPP_Pprime: return "tpp-pprime";
    case TheoremMode::GenusZero: return "genus-zero";
    case TheoremMode::TAF: return "taf";
    case TheoremMode::TAN: return "tan";
    case TheoremMode::TNN: return "tnn";
  }
  return "?";
}

inline TheoremMode parse_mode(const std::string& s) {
  for (auto m : {TheoremMode::TPP_P, TheoremMode::TPP_Pprime, TheoremMode::GenusZero, TheoremMode::TAF,
                 TheoremMode::TAN, TheoremMode::TNN})
    if (s == to_string(m)) return m;
  throw Error(ErrorCode::Config, "unknown mode " + s);
}

/// Modes whose distinguished piece is the decorated monster.
inline bool is_decorated(TheoremMode m) {
  return m == TheoremMode::TAF || m == TheoremMode::TAN || m == TheoremMode::TNN;
}

struct BuilderParams {
  Rational window_radius{64};
  int mark_count = 4;
  unsigned tree_depth = 3;
  TheoremMode mode = TheoremMode::TPP_P;
  unsigned k = 1;  // rank for TAN

  void validate() const {
    if (window_radius <= 0) throw Error(ErrorCode::Config, "window radius must be positive");
    if (mark_count < 1) throw Error(ErrorCode::Config, "mark count must be at least 1");
    if (tree_depth < 1) throw Error(ErrorCode::Config, "tree depth must be at least 1");
  }
};

namespace detail {

inline Point on_axis(const Rational& x) { return {x, 0}; }

inline int add_horizontal(SurfaceComplex& c, int sheet, const Rational& a, const Rational& b, const std::string& fam,
                          int i, std::string label = "") {
  return c.add_mark(sheet, on_axis(a), on_axis(b), std::move(label), fam, i);
}

/// Family M = ((4i-3)e1, (4i-2)e1) of the horizontal-slit monster.
inline Rational m_start(int i) { return 4 * i - 3; }

/// Adds L = ((4i-1)e1, 4ie1) for i <= 2*floor(n/2) and glues l_{2i-1} ~ l_{2i}.
inline void add_glued_l(SurfaceComplex& c, int sheet, int n, const std::string& fam, int sign) {
  for (int i = 1; i + 1 <= n; i += 2) {
    int a = c.add_mark(sheet, on_axis(sign * (4 * i - 1)), on_axis(sign * (4 * i)), "", fam, i);
    int b = c.add_mark(sheet, on_axis(sign * (4 * i + 3)), on_axis(sign * (4 * i + 4)), "", fam, i + 1);
    c.glue(a, b);
  }
}

inline int add_S_P(SurfaceComplex& c, int n, int piece, const std::string& tag, bool with_m = true) {
  int s = c.add_plane(Mat2::identity(), tag, piece);
  if (with_m)
    for (int i = 1; i <= n; ++i) add_horizontal(c, s, m_start(i), m_start(i) + 1, "M", i);
  add_glued_l(c, s, n, "L", 1);
  return s;
}

inline int add_S_Pprime(SurfaceComplex& c, int n, int piece, const std::string& tag) {
  int s = c.add_plane(Mat2::identity(), tag, piece);
  for (int i = 1; i <= n; ++i) {
    add_horizontal(c, s, 4 * i - 3, 4 * i - 2, "M+", i);
    add_horizontal(c, s, 3 - 4 * i, 2 - 4 * i, "M-", i);
  }
  add_glued_l(c, s, n, "L+", 1);
  add_glued_l(c, s, n, "L-", -1);
  return s;
}

inline std::string jname(const std::string& base, int j) { return base + std::to_string(j); }

struct BufferSheets {
  int upper = -1;  // sheet 1: checked marks and L1
  int lower = -1;  // sheet 2: h-checked marks and L2
  std::vector<int> checked;    // M-check^j, i = 1..n
  std::vector<int> h_checked;  // h M-check^{-j}, i = 1..n
};

/// S(Id, h_j) post-composed with g. The local coordinates do not depend on h.
inline BufferSheets add_buffer(SurfaceComplex& c, int j, const Mat2& g, int n, int piece, const std::string& tag) {
  BufferSheets b;
  b.upper = c.add_plane(g, tag + ".1", piece);
  b.lower = c.add_plane(g, tag + ".2", piece);
  for (int i = 1; i <= n; ++i) {
    b.checked.push_back(add_horizontal(c, b.upper, 4 * i, 4 * i + 1, jname("Mc^", j), i));
    b.h_checked.push_back(c.add_mark(b.lower, {0, 2 * i}, {1, 2 * i}, "", jname("hMc^-", j), i));
  }
  for (int i = 1; i <= n; ++i) {
    int l1 = add_horizontal(c, b.upper, 4 * i + 2, 4 * i + 3, jname("L1^", j), i);
    int l2 = c.add_mark(b.lower, {0, 2 * i + 1}, {1, 2 * i + 1}, "", jname("L2^", j), i);
    c.glue(l1, l2);
  }
  return b;
}

}  // namespace detail

/// Horizontal-slit Loch Ness Monster with Veech group P.
inline SurfaceComplex build_S_P(const BuilderParams& p) {
  p.validate();
  SurfaceComplex c(p.window_radius);
  detail::add_S_P(c, p.mark_count, 0, "E");
  c.meta["construction"] = "S_P";
  return c;
}

/// Centrally symmetric variant with Veech group P' = <P, -Id>.
inline SurfaceComplex build_S_Pprime(const BuilderParams& p) {
  p.validate();
  SurfaceComplex c(p.window_radius);
  detail::add_S_Pprime(c, p.mark_count, 0, "E");
  c.meta["construction"] = "S_Pprime";
  return c;
}

/// A single plane carrying only the family M.
inline SurfaceComplex build_genus_zero_P(const BuilderParams& p) {
  p.validate();
  SurfaceComplex c(p.window_radius);
  int s = c.add_plane(Mat2::identity(), "E");
  for (int i = 1; i <= p.mark_count; ++i) detail::add_horizontal(c, s, detail::m_start(i), detail::m_start(i) + 1, "M", i);
  c.meta["construction"] = "genus_zero_P";
  return c;
}

/// Buffer monster S(g, gh) = g . S(Id, h), generator index j.
inline SurfaceComplex build_buffer(const Mat2& h, const Mat2& g, const BuilderParams& p, int j = 1) {
  p.validate();
  if (h.det() <= 0) throw Error(ErrorCode::NonPositiveDeterminant, h.str());
  if (g.det() <= 0) throw Error(ErrorCode::NonPositiveDeterminant, g.str());
  SurfaceComplex c(p.window_radius);
  detail::add_buffer(c, j, g, p.mark_count, 0, "B" + std::to_string(j));
  c.meta["construction"] = "buffer";
  c.meta["h"] = h.str();
  c.meta["g"] = g.str();
  return c;
}

namespace detail {

/// Generators with Id removed and duplicates dropped, in input order.
inline std::vector<Mat2> clean_generators(const std::vector<Mat2>& H) {
  std::vector<Mat2> out;
  for (const auto& h : H) {
    if (h.det() <= 0) throw Error(ErrorCode::NonPositiveDeterminant, h.str());
    if (h.is_identity() || std::find(out.begin(), out.end(), h) != out.end()) continue;
    out.push_back(h);
  }
  for (const auto& h : out)
    if (std::find(out.begin(), out.end(), h.inverse()) == out.end())
      throw Error(ErrorCode::InvalidGroup, "generators not closed under inverses: missing inverse of " + h.str());
  return out;
}

struct DecoratedSheets {
  int plane = -1;
  int fold0 = -1;
  std::vector<BufferSheets> buffers;
  std::vector<std::pair<Rational, Rational>> anchors;  // (x_j, y_j)
};

/// First integer anchor (x, y), x > 0 and y below every earlier row, whose
/// family {(i x, y) + [0, v]} stays in the window and keeps distance >= 1 from
/// every mark already on the sheet and between its own members.
inline std::pair<Rational, Rational> place_row(const SurfaceComplex& c, int sheet, const Vec2& v, int n,
                                               const Rational& y_top) {
  std::vector<Segment> existing;
  for (const auto& m : c.marks)
    if (m.sheet == sheet) existing.push_back(m.segment());
  Integer R = boost::multiprecision::numerator(c.window_radius) / boost::multiprecision::denominator(c.window_radius);
  for (Integer yi = -1; yi >= -R; --yi) {
    Rational y(yi);
    if (y > y_top) continue;
    for (Integer xi = 1; xi <= R; ++xi) {
      Rational x(xi);
      std::vector<Segment> fam;
      bool ok = true;
      for (int i = 1; i <= n && ok; ++i) {
        Segment s{{i * x, y}, Point{i * x, y} + v};
        if (!c.in_window(s.p) || !c.in_window(s.q)) ok = false;
        for (const auto& e : existing)
          if (ok && segment_dist2(s, e) < 1) ok = false;
        for (const auto& e : fam)
          if (ok && segment_dist2(s, e) < 1) ok = false;
        fam.push_back(s);
      }
      if (ok) return {x, y};
    }
  }
  throw Error(ErrorCode::PlacementFailure, "no room for a family of holonomy " + vec_key(v) + "; enlarge the window");
}

/// Decorated monster on fresh sheets. `m_labels[i-1]` is the label of the
/// free mark m_i = ((4i-1)e1, 4ie1); nullopt leaves m_i out.
inline DecoratedSheets add_decorated(SurfaceComplex& c, const std::vector<Mat2>& H, int n, int piece,
                                     const std::string& tag, const std::vector<std::optional<std::string>>& m_labels) {
  DecoratedSheets d;
  d.plane = c.add_plane(Mat2::identity(), tag, piece);
  for (int i = 1; i <= int(m_labels.size()); ++i)
    if (m_labels[i - 1]) add_horizontal(c, d.plane, 4 * i - 1, 4 * i, "M", i, *m_labels[i - 1]);
  int jmax = int(H.size());
  std::vector<std::vector<int>> mj(jmax + 1);
  for (int j = 0; j <= jmax; ++j)
    for (int i = 1; i <= n; ++i)
      mj[j].push_back(c.add_mark(d.plane, {2 * i - 1, j + 1}, {2 * i, j + 1}, "", jname("M^", j), i));
  Rational y_top = -1;
  for (int j = 1; j <= jmax; ++j) {
    Mat2 hi = H[j - 1].inverse();
    Vec2 v{hi.a, hi.c};
    auto [x, y] = place_row(c, d.plane, v, n, y_top);
    d.anchors.push_back({x, y});
    for (int i = 1; i <= n; ++i) c.add_mark(d.plane, {i * x, y}, Point{i * x, y} + v, "", jname("M^-", j), i);
    y_top = y - 1;
  }
  d.fold0 = c.add_cover(Mat2::identity(), tag + ".cov", piece);
  for (int i = 1; i <= n; ++i) {
    int t = add_horizontal(c, d.fold0, 4 * i - 1, 4 * i, "Mt^0", i);
    c.glue(mj[0][i - 1], t);
  }
  int t1 = c.add_mark(d.fold0, {0, 1}, {0, 2}, "", "t", 1);
  int t2 = c.add_mark(d.fold0, {0, -1}, {0, -2}, "", "t", 2);
  c.glue(t1, t2);
  for (int j = 1; j <= jmax; ++j) {
    auto b = add_buffer(c, j, Mat2::identity(), n, piece, tag + ".B" + std::to_string(j));
    d.buffers.push_back(b);
    for (int i = 1; i <= n; ++i) c.glue(mj[j][i - 1], b.checked[i - 1]);
  }
  return d;
}

}  // namespace detail

/// Decorated monster for the generator list H (Id dropped, duplicates merged).
inline SurfaceComplex build_decorated(const std::vector<Mat2>& H, const BuilderParams& p) {
  p.validate();
  auto gens = detail::clean_generators(H);
  SurfaceComplex c(p.window_radius);
  std::vector<std::optional<std::string>> labels(p.mark_count, std::string());
  auto d = detail::add_decorated(c, gens, p.mark_count, 0, "E", labels);
  c.meta["construction"] = "decorated";
  for (std::size_t j = 0; j < d.anchors.size(); ++j)
    c.meta["anchor" + std::to_string(j + 1)] = format_rational(d.anchors[j].first) + "," + format_rational(d.anchors[j].second);
  return c;
}

struct ElementaryPiece {
  SurfaceComplex complex{Rational(1)};
  EndsSpec ends_spec;
  TheoremMode mode = TheoremMode::TPP_P;
  TreeTruncation tree;
  RayFamily family;
  std::optional<std::size_t> distinguished;  // ray carrying the decorated monster
  std::vector<Mat2> generators;
  std::vector<std::string> free_families;
  std::vector<int> ray_sheet;  // main plane of each ray's monster
  int marker_fold = -1;        // fold 0 of the branched cover
  std::vector<std::pair<int, int>> cross_gluings;
};

inline PathMode path_mode_for(TheoremMode m) {
  switch (m) {
    case TheoremMode::TAN: return PathMode::CB_top;
    case TheoremMode::TNN: return PathMode::BoundaryOfU;
    default: return PathMode::First;
  }
}

namespace detail {

/// Label of the mark for vertex v on ray r. A vertex on three rays gets a
/// star: the first ray carries a second mark "v#2" for the third ray.
inline std::string vertex_label(const RayFamily& f, const std::map<Word, std::vector<std::size_t>>& through,
                                std::size_t r, const Word& v) {
  const auto& t = through.at(v);
  if (t.size() == 1) return "";
  if (t.size() > 3) throw Error(ErrorCode::InvalidSpec, "vertex " + v + " lies on more than three rays");
  if (t.size() == 3 && r == t[2]) return "v" + v + "#2";
  return "v" + v;
}

}  // namespace detail

inline ElementaryPiece build_elementary_piece(const EndsSpec& spec, const std::vector<Mat2>& generators,
                                              const BuilderParams& p) {
  p.validate();
  ElementaryPiece e;
  e.mode = p.mode;
  e.ends_spec = spec;
  e.tree = build_tree(spec, p.tree_depth);
  e.family = decompose_paths(e.tree);
  e.complex = SurfaceComplex(p.window_radius);
  SurfaceComplex& c = e.complex;
  bool deco = is_decorated(p.mode);
  if (deco) {
    e.generators = detail::clean_generators(generators);
    e.distinguished = select_distinguished_index(e.family, path_mode_for(p.mode));
    if (p.mode == TheoremMode::TAN) {
      auto cs = characteristic_system(spec);
      if (cs.k != p.k)
        throw Error(ErrorCode::ModeSpecMismatch, "tan mode with k=" + std::to_string(p.k) + " but spec has " + cs.str());
    }
  }
  std::map<Word, std::vector<std::size_t>> through;
  for (std::size_t r = 0; r < e.family.rays.size(); ++r)
    for (const auto& v : e.family.rays[r].vertices) through[v].push_back(r);

  for (std::size_t r = 0; r < e.family.rays.size(); ++r) {
    const Ray& ray = e.family.rays[r];
    int len = int(ray.vertices.size());
    int n = std::max(p.mark_count, len);
    std::string tag = "R" + std::to_string(r);
    std::vector<std::optional<std::string>> labels(n);
    for (int i = 1; i <= n; ++i) {
      std::string l = i <= len ? detail::vertex_label(e.family, through, r, ray.vertices[i - 1]) : "";
      if (!l.empty() || !deco) labels[i - 1] = l;
    }
    bool hub = through.at(ray.vertices[0]).size() == 3 && through.at(ray.vertices[0])[0] == r;
    std::string extra = hub ? "v" + ray.vertices[0] + "#2" : "";
    int sheet = -1;
    if (deco && r == *e.distinguished) {
      auto d = detail::add_decorated(c, e.generators, n, int(r), tag, labels);
      sheet = d.plane;
      e.marker_fold = d.fold0;
      if (hub) c.add_mark(sheet, {-1, 0}, {0, 0}, extra, "M", 0);
    } else if (p.mode == TheoremMode::TPP_Pprime) {
      sheet = c.add_plane(Mat2::identity(), tag, int(r));
      for (int i = 1; i <= n; ++i) {
        detail::add_horizontal(c, sheet, 4 * i - 3, 4 * i - 2, "M+", i, labels[i - 1].value_or(""));
        detail::add_horizontal(c, sheet, 3 - 4 * i, 2 - 4 * i, "M-", i, i == 1 ? extra : "");
      }
      detail::add_glued_l(c, sheet, n, "L+", 1);
      detail::add_glued_l(c, sheet, n, "L-", -1);
    } else {
      sheet = c.add_plane(Mat2::identity(), tag, int(r));
      for (int i = 1; i <= n; ++i)
        if (labels[i - 1]) detail::add_horizontal(c, sheet, detail::m_start(i), detail::m_start(i) + 1, "M", i, *labels[i - 1]);
      if (hub) detail::add_horizontal(c, sheet, -3, -2, "M", 0, extra);
      if (p.mode != TheoremMode::GenusZero) detail::add_glued_l(c, sheet, n, "L", 1);
    }
    e.ray_sheet.push_back(sheet);
  }

  std::map<std::string, std::vector<int>> by_label;
  for (const auto& m : c.marks)
    if (!m.label.empty()) by_label[m.label].push_back(m.id);
  for (const auto& [l, ids] : by_label) {
    if (ids.size() != 2) throw Error(ErrorCode::InvalidSpec, "label " + l + " carried by " + std::to_string(ids.size()) + " marks");
    c.glue(ids[0], ids[1]);
    e.cross_gluings.push_back({ids[0], ids[1]});
  }

  if (deco) {
    for (std::size_t j = 1; j <= e.generators.size(); ++j) {
      e.free_families.push_back(detail::jname("hMc^-", int(j)));
      e.free_families.push_back(detail::jname("M^-", int(j)));
    }
  } else {
    std::set<std::string> fams;
    for (const auto& m : c.marks)
      if (!c.is_glued(m.id)) fams.insert(m.family);
    e.free_families.assign(fams.begin(), fams.end());
  }
  c.meta["construction"] = "elementary_piece";
  c.meta["mode"] = to_string(p.mode);
  c.meta["ends"] = spec.str();
  return e;
}

}  // namespace monsterkit

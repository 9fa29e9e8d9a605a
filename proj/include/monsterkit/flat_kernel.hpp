#pragma once

// Flat surfaces assembled from affine sheets.
//
// A sheet is a copy of the plane (or one fold of the threefold cover branched
// over the origin) seen through an affine label g: a local point x sits at g*x
// in the developed picture. Marks are segments in local coordinates; two marks
// glued crosswise become a pair of slits identified by the translation taking
// one developed segment onto the other. Everything is exact.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "monsterkit/error.hpp"
#include "monsterkit/rational.hpp"

namespace monsterkit {

enum class SheetKind { Plane, BranchedCoverFold };

struct Sheet {
  int id = 0;
  SheetKind kind = SheetKind::Plane;
  int fold_index = 0;    // 0..2 on a cover
  int cover = -1;        // shared by the three folds of one cover
  Vec2 cut_direction{1, 1};
  Mat2 label;
  std::string tag;
  int piece = 0;
};

struct Mark {
  int id = 0;
  int sheet = 0;
  Point p, q;
  std::string label;
  std::string family;
  int index = 0;

  Segment segment() const { return {p, q}; }
};

struct Gluing {
  int a = 0;
  int b = 0;
  bool reversed = false;  // p_a ~ q_b instead of p_a ~ p_b
};

/// A point of the surface: a sheet and local coordinates.
struct SurfacePoint {
  int sheet = 0;
  Point x;
  friend bool operator<(const SurfacePoint& a, const SurfacePoint& b) {
    return a.sheet != b.sheet ? a.sheet < b.sheet : a.x < b.x;
  }
  friend bool operator==(const SurfacePoint& a, const SurfacePoint& b) {
    return a.sheet == b.sheet && a.x == b.x;
  }
};

struct Singularity {
  int id = 0;
  std::vector<SurfacePoint> points;  // every sheet-local representative
  int order = 1;                     // cone angle is 2*pi*order
};

class SurfaceComplex {
 public:
  std::vector<Sheet> sheets;
  std::vector<Mark> marks;
  std::vector<Gluing> gluings;
  Rational window_radius{0};
  std::map<std::string, std::string> meta;

  SurfaceComplex() = default;
  explicit SurfaceComplex(Rational R) : window_radius(std::move(R)) {}

  int add_plane(const Mat2& label, std::string tag, int piece = 0) {
    check_label(label);
    Sheet s;
    s.id = int(sheets.size());
    s.label = label;
    s.tag = std::move(tag);
    s.piece = piece;
    sheets.push_back(std::move(s));
    glued_on_.emplace_back();
    return sheets.back().id;
  }

  /// Three folds of a cyclic cover branched over the local origin, cut along
  /// the ray t*(1,1). Returns the id of fold 0.
  int add_cover(const Mat2& label, const std::string& tag, int piece = 0) {
    check_label(label);
    int cover = next_cover_++;
    int first = int(sheets.size());
    for (int f = 0; f < 3; ++f) {
      Sheet s;
      s.id = int(sheets.size());
      s.kind = SheetKind::BranchedCoverFold;
      s.fold_index = f;
      s.cover = cover;
      s.label = label;
      s.tag = tag + "." + std::to_string(f);
      s.piece = piece;
      sheets.push_back(std::move(s));
      glued_on_.emplace_back();
    }
    return first;
  }

  /// Sheet id of the fold `steps` positions further round the same cover.
  int fold_neighbor(int sheet, int steps) const {
    const Sheet& s = sheets.at(sheet);
    int f = ((s.fold_index + steps) % 3 + 3) % 3;
    return sheet - s.fold_index + f;
  }

  int add_mark(int sheet, Point p, Point q, std::string label, std::string family, int index) {
    if (sheet < 0 || sheet >= int(sheets.size())) throw Error(ErrorCode::UnknownMark, "no sheet " + std::to_string(sheet));
    if (p == q) throw Error(ErrorCode::InvalidSpec, "degenerate mark " + label);
    if (!in_window(p) || !in_window(q))
      throw Error(ErrorCode::WindowTooSmall, "mark " + family + "[" + std::to_string(index) + "] leaves the window");
    Mark m;
    m.id = int(marks.size());
    m.sheet = sheet;
    m.p = std::move(p);
    m.q = std::move(q);
    m.label = std::move(label);
    m.family = std::move(family);
    m.index = index;
    marks.push_back(std::move(m));
    partner_.push_back(-1);
    gluing_idx_.push_back(-1);
    return marks.back().id;
  }

  bool in_window(const Point& x) const {
    return abs(x.x) <= window_radius && abs(x.y) <= window_radius;
  }

  Vec2 holonomy(const Mark& m) const { return sheets[m.sheet].label * (m.q - m.p); }
  Vec2 holonomy(int mark) const { return holonomy(marks.at(mark)); }
  Point develop(const SurfacePoint& s) const { return sheets[s.sheet].label * s.x; }

  int partner(int mark) const { return partner_.at(mark); }
  bool is_glued(int mark) const { return partner_.at(mark) >= 0; }
  const std::vector<int>& glued_on(int sheet) const { return glued_on_.at(sheet); }

  /// Identifies marks a and b crosswise, after checking that the result is a
  /// translation surface with the two new cone points isolated.
  void glue(int a, int b) {
    if (a < 0 || b < 0 || a >= int(marks.size()) || b >= int(marks.size()))
      throw Error(ErrorCode::UnknownMark, "unknown mark id");
    if (a == b) throw Error(ErrorCode::Overlapping, "mark glued to itself");
    if (is_glued(a) || is_glued(b)) throw Error(ErrorCode::AlreadyGlued, describe(is_glued(a) ? a : b));
    Vec2 ha = holonomy(a), hb = holonomy(b);
    if (cross(ha, hb) != 0) throw Error(ErrorCode::NotParallel, describe(a) + " vs " + describe(b));
    if (norm2(ha) != norm2(hb)) throw Error(ErrorCode::UnequalLength, describe(a) + " vs " + describe(b));
    const Mark& ma = marks[a];
    const Mark& mb = marks[b];
    if (ma.sheet == mb.sheet && segments_intersect(ma.segment(), mb.segment()))
      throw Error(ErrorCode::Overlapping, describe(a) + " meets " + describe(b));
    for (int id : {a, b}) check_isolated(id);
    Gluing g{a, b, ha != hb};
    partner_[a] = b;
    partner_[b] = a;
    gluing_idx_[a] = gluing_idx_[b] = int(gluings.size());
    glued_on_[ma.sheet].push_back(a);
    glued_on_[mb.sheet].push_back(b);
    gluings.push_back(g);
  }

  std::string describe(int mark) const {
    const Mark& m = marks.at(mark);
    return sheets[m.sheet].tag + ":" + m.family + "[" + std::to_string(m.index) + "]";
  }

  /// Endpoint of b identified with endpoint `end` (0 = p, 1 = q) of a.
  Point matched_endpoint(const Gluing& g, int mark, int end) const {
    int other = g.a == mark ? g.b : g.a;
    int e = g.reversed ? 1 - end : end;
    return e == 0 ? marks[other].p : marks[other].q;
  }

  const Gluing& gluing_of(int mark) const {
    int i = gluing_idx_.at(mark);
    if (i < 0) throw Error(ErrorCode::UnknownMark, "mark not glued: " + describe(mark));
    return gluings[i];
  }

  /// Rebuilds the partner tables after the mark or gluing lists were edited
  /// directly (deserialization, relabeling).
  void reindex() {
    partner_.assign(marks.size(), -1);
    gluing_idx_.assign(marks.size(), -1);
    glued_on_.assign(sheets.size(), {});
    for (std::size_t i = 0; i < gluings.size(); ++i) {
      const auto& g = gluings[i];
      partner_[g.a] = g.b;
      partner_[g.b] = g.a;
      gluing_idx_[g.a] = gluing_idx_[g.b] = int(i);
      glued_on_[marks[g.a].sheet].push_back(g.a);
      glued_on_[marks[g.b].sheet].push_back(g.b);
    }
    for (const auto& s : sheets) next_cover_ = std::max(next_cover_, s.cover + 1);
  }

  int cover_count() const { return next_cover_; }

 private:
  static void check_label(const Mat2& g) {
    if (g.det() <= 0) throw Error(ErrorCode::NonPositiveDeterminant, g.str());
  }

  void check_isolated(int id) const {
    const Mark& m = marks[id];
    for (int other : glued_on_[m.sheet])
      if (segments_intersect(m.segment(), marks[other].segment()))
        throw Error(ErrorCode::Overlapping, describe(id) + " meets glued " + describe(other));
    const Sheet& s = sheets[m.sheet];
    if (s.kind == SheetKind::BranchedCoverFold) {
      Segment cut{{0, 0}, window_radius * s.cut_direction};
      if (segments_intersect(m.segment(), cut))
        throw Error(ErrorCode::Overlapping, describe(id) + " meets the branch cut");
    }
  }

  std::vector<int> partner_;
  std::vector<int> gluing_idx_;
  std::vector<std::vector<int>> glued_on_;
  int next_cover_ = 0;
};

/// Functional form: returns a copy with a and b glued.
inline SurfaceComplex glue_marks(const SurfaceComplex& c, int a, int b) {
  SurfaceComplex out = c;
  out.glue(a, b);
  return out;
}

// ---------------------------------------------------------------------------
// Singularities

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Cone points: classes of glued-mark endpoints under the gluings (one 2*pi
/// sector per endpoint) and the branch points of covers (one per fold).
inline std::vector<Singularity> singularities(const SurfaceComplex& c) {
  std::map<SurfacePoint, int> index;
  std::vector<SurfacePoint> pts;
  auto key = [&](int sheet, const Point& x) {
    SurfacePoint sp{sheet, x};
    auto [it, fresh] = index.emplace(sp, int(pts.size()));
    if (fresh) pts.push_back(sp);
    return it->second;
  };
  std::vector<std::pair<int, int>> links;
  for (const auto& g : c.gluings) {
    const Mark& a = c.marks[g.a];
    const Mark& b = c.marks[g.b];
    links.push_back({key(a.sheet, a.p), key(b.sheet, g.reversed ? b.q : b.p)});
    links.push_back({key(a.sheet, a.q), key(b.sheet, g.reversed ? b.p : b.q)});
  }
  std::map<int, std::vector<int>> covers;
  for (const auto& s : c.sheets)
    if (s.kind == SheetKind::BranchedCoverFold) covers[s.cover].push_back(key(s.id, {0, 0}));
  detail::UnionFind uf(pts.size());
  for (auto [x, y] : links) uf.unite(x, y);
  for (const auto& [cv, ids] : covers)
    for (std::size_t i = 1; i < ids.size(); ++i) uf.unite(ids[0], ids[i]);
  std::map<int, Singularity> by_root;
  for (std::size_t i = 0; i < pts.size(); ++i) by_root[uf.find(int(i))].points.push_back(pts[i]);
  std::vector<Singularity> out;
  for (auto& [r, s] : by_root) {
    std::sort(s.points.begin(), s.points.end());
    s.order = int(s.points.size());
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Singularity& a, const Singularity& b) { return a.points[0] < b.points[0]; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = int(i);
  return out;
}

/// n with cone angle 2*pi*n at the given point; regular points give 1.
inline int cone_angle(const SurfaceComplex& c, const SurfacePoint& pt) {
  for (const auto& s : singularities(c))
    for (const auto& p : s.points)
      if (p == pt) return s.order;
  return 1;
}

/// Sum of (n - 1) over all cone points.
inline int angle_excess(const SurfaceComplex& c) {
  int e = 0;
  for (const auto& s : singularities(c)) e += s.order - 1;
  return e;
}

/// Lookup from sheet-local point to singularity id.
class SingularIndex {
 public:
  explicit SingularIndex(const std::vector<Singularity>& s) {
    for (const auto& x : s)
      for (const auto& p : x.points) where_[p] = x.id;
  }
  std::optional<int> at(const SurfacePoint& p) const {
    auto it = where_.find(p);
    if (it == where_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<SurfacePoint, int> where_;
};


// ---------------------------------------------------------------------------
// Straight-line flow

enum class TraceStatus { HitSingularity, MaxLength, WindowExit, StepLimit };

inline const char* to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::HitSingularity: return "HitSingularity";
    case TraceStatus::MaxLength: return "MaxLength";
    case TraceStatus::WindowExit: return "WindowExit";
    case TraceStatus::StepLimit: return "StepLimit";
  }
  return "?";
}

struct TraceStep {
  int sheet = 0;
  Point from, to;
};

/// Parameters are in units of the developed direction vector d: the flow
/// reaches developed displacement t*d after parameter t.
struct Trajectory {
  TraceStatus status = TraceStatus::MaxLength;
  std::vector<TraceStep> steps;
  SurfacePoint end;     // singular point, window exit, or last crossing
  Rational t_end{0};    // exact parameter of `end`
  int crossings = 0;
};

namespace detail {

struct Hit {
  Rational t;
  enum Kind { Cross, Singular, Cut } kind = Cross;
  int mark = -1;
  Rational s{0};
  Point at;
  int fold_step = 0;
};

inline bool on_cut(const Sheet& s, const Point& x) {
  return s.kind == SheetKind::BranchedCoverFold && cross(s.cut_direction, x) == 0 && dot(s.cut_direction, x) >= 0;
}

inline std::optional<Hit> next_event(const SurfaceComplex& c, int sheet, const Point& x, const Vec2& u) {
  std::optional<Hit> best;
  auto offer = [&](Hit h) {
    if (h.t <= 0) return;
    if (!best || h.t < best->t) best = std::move(h);
  };
  for (int id : c.glued_on(sheet)) {
    const Mark& m = c.marks[id];
    Vec2 w = m.q - m.p;
    Rational den = cross(u, w);
    if (den == 0) {
      if (cross(m.p - x, u) != 0) continue;  // parallel, different line
      Rational uu = dot(u, u);
      for (const Point& e : {m.p, m.q}) {
        Rational t = dot(e - x, u) / uu;
        offer({t, Hit::Singular, id, 0, e, 0});
      }
      continue;
    }
    Rational t = cross(m.p - x, w) / den;
    Rational s = cross(m.p - x, u) / den;
    if (s < 0 || s > 1) continue;
    if (s == 0 || s == 1)
      offer({t, Hit::Singular, id, s, s == 0 ? m.p : m.q, 0});
    else
      offer({t, Hit::Cross, id, s, x + t * u, 0});
  }
  const Sheet& sh = c.sheets[sheet];
  if (sh.kind == SheetKind::BranchedCoverFold) {
    const Vec2& cd = sh.cut_direction;
    if (cross(x, u) == 0) {
      Rational t = -dot(x, u) / dot(u, u);
      offer({t, Hit::Singular, -1, 0, Point{0, 0}, 0});
    }
    Rational den = cross(u, cd);
    if (den != 0) {
      Point o{0, 0};
      Rational t = cross(o - x, cd) / den;
      Rational tau = cross(o - x, u) / den;
      if (tau > 0) offer({t, Hit::Cut, -1, tau, x + t * u, cross(cd, u) > 0 ? 1 : -1});
    }
  }
  return best;
}

inline Rational window_exit(const Rational& R, const Point& x, const Vec2& u) {
  std::optional<Rational> best;
  for (int i = 0; i < 2; ++i) {
    const Rational& ui = i == 0 ? u.x : u.y;
    const Rational& xi = i == 0 ? x.x : x.y;
    if (ui == 0) continue;
    Rational t = ((ui > 0 ? R : -R) - xi) / ui;
    if (!best || t < *best) best = t;
  }
  return *best;
}

}  // namespace detail

/// Follows the straight line from `start` in developed direction d. The start
/// may be a cone point (rays then leave into the sector of its sheet).
inline Trajectory trace_from(const SurfaceComplex& c, SurfacePoint start, const Vec2& d,
                             const Rational& max_length, int step_limit = 100000) {
  if (d.is_zero()) throw Error(ErrorCode::InvalidSpec, "zero direction");
  Trajectory tr;
  Rational dd = norm2(d);
  Rational budget2 = max_length * max_length / dd;  // parameter^2 allowed
  Rational T = 0;
  SurfacePoint cur = start;
  for (int step = 0; step < step_limit; ++step) {
    Vec2 u = c.sheets[cur.sheet].label.inverse() * d;
    auto ev = detail::next_event(c, cur.sheet, cur.x, u);
    Rational t_exit = detail::window_exit(c.window_radius, cur.x, u);
    auto within_budget = [&](const Rational& t) { return (T + t) * (T + t) <= budget2; };
    if (!ev || ev->t > t_exit) {
      if (!within_budget(t_exit)) {
        tr.status = TraceStatus::MaxLength;
        tr.end = cur;
        tr.t_end = T;
        return tr;
      }
      Point out = cur.x + t_exit * u;
      tr.steps.push_back({cur.sheet, cur.x, out});
      tr.status = TraceStatus::WindowExit;
      tr.end = {cur.sheet, out};
      tr.t_end = T + t_exit;
      return tr;
    }
    if (!within_budget(ev->t)) {
      tr.status = TraceStatus::MaxLength;
      tr.end = cur;
      tr.t_end = T;
      return tr;
    }
    tr.steps.push_back({cur.sheet, cur.x, ev->at});
    T += ev->t;
    if (ev->kind == detail::Hit::Singular) {
      tr.status = TraceStatus::HitSingularity;
      tr.end = {cur.sheet, ev->at};
      tr.t_end = T;
      return tr;
    }
    ++tr.crossings;
    if (ev->kind == detail::Hit::Cut) {
      cur = {c.fold_neighbor(cur.sheet, ev->fold_step), ev->at};
      continue;
    }
    const Gluing& g = c.gluing_of(ev->mark);
    int other = g.a == ev->mark ? g.b : g.a;
    const Mark& mb = c.marks[other];
    Point y = g.reversed ? mb.q + ev->s * (mb.p - mb.q) : mb.p + ev->s * (mb.q - mb.p);
    cur = {mb.sheet, y};
  }
  tr.status = TraceStatus::StepLimit;
  tr.end = cur;
  tr.t_end = T;
  return tr;
}

/// Public entry point: the start must be off every slit and branch cut.
inline Trajectory trace_ray(const SurfaceComplex& c, const SurfacePoint& start, const Vec2& d,
                            const Rational& max_length) {
  for (int id : c.glued_on(start.sheet))
    if (on_segment(start.x, c.marks[id].segment()))
      throw Error(ErrorCode::StartsOnSlit, "start lies on " + c.describe(id));
  if (detail::on_cut(c.sheets.at(start.sheet), start.x))
    throw Error(ErrorCode::StartsOnSlit, "start lies on the branch cut");
  return trace_from(c, start, d, max_length);
}

// ---------------------------------------------------------------------------
// Saddle connections

struct SaddleConnection {
  SurfacePoint from;  // representative (sector) the connection leaves from
  int target = -1;    // singularity id
  Vec2 holonomy;
  friend bool operator<(const SaddleConnection& a, const SaddleConnection& b) {
    return std::tie(a.from, a.target, a.holonomy) < std::tie(b.from, b.target, b.holonomy);
  }
};

namespace detail {

/// Canonical representative of the direction of y (sup norm 1).
inline Vec2 direction_key(const Vec2& y) {
  Rational m = std::max(abs(y.x), abs(y.y));
  return {y.x / m, y.y / m};
}

/// True if the developed disk of radius L about the local point x fits in
/// the window of the sheet.
inline bool disk_fits(const SurfaceComplex& c, const Sheet& s, const Point& x, const Rational& L) {
  Mat2 gi = s.label.inverse();
  std::array<std::pair<Rational, Vec2>, 2> rows{{{x.x, {gi.a, gi.b}}, {x.y, {gi.c, gi.d}}}};
  for (const auto& [xi, r] : rows) {
    Rational slack = c.window_radius - abs(xi);
    if (slack < 0 || L * L * norm2(r) > slack * slack) return false;
  }
  return true;
}

}  // namespace detail

/// Every saddle connection of length <= L leaving the singularity `from`,
/// one entry per sector representative and holonomy.
inline std::vector<SaddleConnection> enumerate_saddle_connections(const SurfaceComplex& c, int from,
                                                                  const Rational& L, int max_crossings = 12) {
  auto sing = singularities(c);
  if (from < 0 || from >= int(sing.size())) throw Error(ErrorCode::InvalidSpec, "not a singularity id");
  SingularIndex where(sing);
  Rational L2 = L * L;
  std::set<SaddleConnection> found;
  for (const auto& rep : sing[from].points) {
    const Sheet& s0 = c.sheets[rep.sheet];
    if (!detail::disk_fits(c, s0, rep.x, L))
      throw Error(ErrorCode::WindowTooSmall, "length bound exceeds the window around " + s0.tag);
    // developed frame with the representative at the origin
    using State = std::pair<int, Vec2>;
    std::set<State> seen;
    std::vector<std::pair<State, int>> queue{{{rep.sheet, -(s0.label * rep.x)}, 0}};
    seen.insert(queue[0].first);
    std::set<Vec2> directions;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      auto [state, depth] = queue[qi];
      auto [sheet, tau] = state;
      const Sheet& sh = c.sheets[sheet];
      auto dev = [&](const Point& x) { return sh.label * x + tau; };
      auto consider = [&](const Point& x) {
        Vec2 y = dev(x);
        if (!y.is_zero() && norm2(y) <= L2) directions.insert(detail::direction_key(y));
      };
      for (int id : c.glued_on(sheet)) {
        const Mark& m = c.marks[id];
        consider(m.p);
        consider(m.q);
        if (depth >= max_crossings) continue;
        Segment ds{dev(m.p), dev(m.q)};
        if (point_segment_dist2({0, 0}, ds) > L2) continue;
        const Gluing& g = c.gluing_of(id);
        int other = c.partner(id);
        Point mp = c.matched_endpoint(g, id, 0);
        State next{c.marks[other].sheet, dev(m.p) - c.sheets[c.marks[other].sheet].label * mp};
        if (seen.insert(next).second) queue.push_back({next, depth + 1});
      }
      if (sh.kind == SheetKind::BranchedCoverFold) {
        consider({0, 0});
        Segment cut{dev({0, 0}), dev(c.window_radius * sh.cut_direction)};
        if (depth < max_crossings && point_segment_dist2({0, 0}, cut) <= L2)
          for (int step : {1, -1}) {
            State next{c.fold_neighbor(sheet, step), tau};
            if (seen.insert(next).second) queue.push_back({next, depth + 1});
          }
      }
    }
    for (const auto& dir : directions) {
      auto tr = trace_from(c, rep, dir, L);
      if (tr.status == TraceStatus::HitSingularity) {
        auto id = where.at(tr.end);
        if (!id) throw Error(ErrorCode::EvidenceFailure, "trace stopped at an unknown singularity");
        found.insert({rep, *id, tr.t_end * dir});
      } else if (tr.status == TraceStatus::WindowExit || tr.status == TraceStatus::StepLimit) {
        throw Error(ErrorCode::WindowTooSmall, "trace left the window before reaching length bound");
      }
    }
  }
  return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------
// Distances between mark families

/// Lower bound for the flat distance between two mark sets: either a straight
/// segment inside one sheet, or a path leaving A's sheet through a slit or cut
/// and entering B's sheet through another one. Marks of A and B are not exits.
struct DistanceBound {
  bool touching = false;
  std::optional<Rational> direct2;
  std::optional<std::pair<Rational, Rational>> via;  // squared legs

  /// Distance >= sqrt(s2)?
  bool at_least(const Rational& s2) const {
    if (touching) return s2 <= 0;
    if (direct2 && *direct2 < s2) return false;
    if (via && !sqrt_sum_at_least(via->first, via->second, s2)) return false;
    return true;
  }
  double approx() const {
    if (touching) return 0;
    double best = 1e300;
    if (direct2) best = std::sqrt(to_double(*direct2));
    if (via) best = std::min(best, std::sqrt(to_double(via->first)) + std::sqrt(to_double(via->second)));
    return best;
  }
};

namespace detail {

/// Developed exits of a sheet: its glued marks (minus `skip`) and its branch cut.
inline std::vector<Segment> portals(const SurfaceComplex& c, int sheet, const std::set<int>& skip = {}) {
  const Sheet& s = c.sheets[sheet];
  std::vector<Segment> out;
  for (int id : c.glued_on(sheet))
    if (!skip.count(id)) out.push_back({s.label * c.marks[id].p, s.label * c.marks[id].q});
  if (s.kind == SheetKind::BranchedCoverFold) out.push_back({{0, 0}, s.label * (c.window_radius * s.cut_direction)});
  return out;
}

}  // namespace detail

inline DistanceBound family_distance(const SurfaceComplex& c, const std::vector<int>& A, const std::vector<int>& B) {
  if (A.empty() || B.empty()) throw Error(ErrorCode::EmptyFamily, "family without marks");
  DistanceBound r;
  std::set<int> a_ids(A.begin(), A.end());
  for (int b : B)
    if (a_ids.count(b)) {
      r.touching = true;
      return r;
    }
  auto dev = [&](int id) {
    const Mark& m = c.marks[id];
    const Mat2& g = c.sheets[m.sheet].label;
    return Segment{g * m.p, g * m.q};
  };
  std::set<int> own(A.begin(), A.end());
  own.insert(B.begin(), B.end());
  auto leg = [&](const std::vector<int>& fam) -> std::optional<Rational> {
    std::optional<Rational> best;
    for (int id : fam)
      for (const auto& p : detail::portals(c, c.marks[id].sheet, own)) {
        Rational d = segment_dist2(dev(id), p);
        if (!best || d < *best) best = d;
      }
    return best;
  };
  for (int a : A)
    for (int b : B) {
      if (c.marks[a].sheet != c.marks[b].sheet) continue;
      Rational d = segment_dist2(dev(a), dev(b));
      if (!r.direct2 || d < *r.direct2) r.direct2 = d;
    }
  auto la = leg(A), lb = leg(B);
  if (la && lb) r.via = std::make_pair(*la, *lb);
  if (r.direct2 && *r.direct2 == 0) r.touching = true;
  return r;
}

inline std::vector<int> marks_of_family(const SurfaceComplex& c, const std::string& family,
                                        std::optional<int> piece = std::nullopt) {
  std::vector<int> out;
  for (const auto& m : c.marks)
    if (m.family == family && (!piece || c.sheets[m.sheet].piece == *piece)) out.push_back(m.id);
  return out;
}

inline DistanceBound family_distance(const SurfaceComplex& c, const std::string& famA, const std::string& famB) {
  return family_distance(c, marks_of_family(c, famA), marks_of_family(c, famB));
}

// ---------------------------------------------------------------------------
// Affine action and comparison

/// g . S: every chart post-composed with g.
inline SurfaceComplex transform_surface(const SurfaceComplex& c, const Mat2& g) {
  if (g.det() <= 0) throw Error(ErrorCode::NonPositiveDeterminant, g.str());
  SurfaceComplex out = c;
  for (auto& s : out.sheets) s.label = g * s.label;
  return out;
}

/// Rewrites every sheet in developed coordinates with identity label.
inline SurfaceComplex normalize(const SurfaceComplex& c) {
  SurfaceComplex out = c;
  for (auto& s : out.sheets) {
    if (s.label.is_identity()) continue;
    for (auto& m : out.marks)
      if (m.sheet == s.id) {
        m.p = s.label * m.p;
        m.q = s.label * m.q;
      }
    if (s.kind == SheetKind::BranchedCoverFold) s.cut_direction = s.label * s.cut_direction;
    s.label = Mat2::identity();
  }
  out.meta["normalized"] = "true";
  return out;
}

struct IsoResult {
  bool equal = false;
  std::vector<int> sheet_map;  // sheet of a -> sheet of b
  std::vector<int> mark_map;   // mark of a -> mark of b
  std::string witness;
};

namespace detail {

inline std::string vec_key(const Vec2& v) { return format_rational(v.x) + "," + format_rational(v.y); }

inline Vec2 sheet_reference(const SurfaceComplex& c, int sheet, const std::vector<std::vector<int>>& by_sheet) {
  if (c.sheets[sheet].kind == SheetKind::BranchedCoverFold || by_sheet[sheet].empty()) return {0, 0};
  Vec2 best = c.marks[by_sheet[sheet][0]].p;
  for (int id : by_sheet[sheet])
    for (const Point& e : {c.marks[id].p, c.marks[id].q})
      if (e < best) best = e;
  return best;
}

struct SheetView {
  std::vector<std::vector<int>> marks_by_sheet;  // sorted by local key
  std::vector<std::string> mark_key;
  std::vector<std::string> base;
};

inline SheetView view(const SurfaceComplex& c) {
  SheetView v;
  v.marks_by_sheet.assign(c.sheets.size(), {});
  for (const auto& m : c.marks) v.marks_by_sheet[m.sheet].push_back(m.id);
  v.mark_key.assign(c.marks.size(), "");
  v.base.assign(c.sheets.size(), "");
  for (const auto& s : c.sheets) {
    Vec2 ref = sheet_reference(c, s.id, v.marks_by_sheet);
    for (int id : v.marks_by_sheet[s.id]) {
      const Mark& m = c.marks[id];
      v.mark_key[id] = vec_key(m.p - ref) + ";" + vec_key(m.q - ref) + ";" + m.label + ";" + m.family + ";" +
                       (c.is_glued(id) ? "g" : "f");
    }
    auto& ids = v.marks_by_sheet[s.id];
    std::sort(ids.begin(), ids.end(), [&](int x, int y) { return v.mark_key[x] < v.mark_key[y]; });
    std::string b = (s.kind == SheetKind::Plane ? "P" : "F" + std::to_string(s.fold_index)) + "|" + s.label.str() +
                    "|" + vec_key(s.cut_direction) + "|";
    for (int id : ids) b += v.mark_key[id] + "/";
    v.base[s.id] = b;
  }
  return v;
}

/// Colour refinement over the gluing graph, run on both complexes jointly so
/// colour ids are comparable.
inline std::pair<std::vector<int>, std::vector<int>> refine_colors(const SurfaceComplex& a, const SheetView& va,
                                                                   const SurfaceComplex& b, const SheetView& vb) {
  std::map<std::string, int> ids;
  auto intern = [&](const std::string& s) { return ids.emplace(s, int(ids.size())).first->second; };
  std::vector<int> ca, cb;
  for (const auto& s : va.base) ca.push_back(intern(s));
  for (const auto& s : vb.base) cb.push_back(intern(s));
  for (int round = 0; round < 8; ++round) {
    ids.clear();
    auto step = [&](const SurfaceComplex& c, const SheetView& v, const std::vector<int>& col) {
      std::vector<std::string> sig(c.sheets.size());
      for (const auto& s : c.sheets) {
        std::string t = std::to_string(col[s.id]) + "#";
        for (int id : v.marks_by_sheet[s.id]) {
          int p = c.partner(id);
          if (p < 0) continue;
          t += std::to_string(col[c.marks[p].sheet]) + ":" + v.mark_key[p] + "/";
        }
        sig[s.id] = t;
      }
      return sig;
    };
    auto sa = step(a, va, ca), sb = step(b, vb, cb);
    std::vector<int> na, nb;
    for (const auto& s : sa) na.push_back(intern(s));
    for (const auto& s : sb) nb.push_back(intern(s));
    bool stable = std::set<int>(na.begin(), na.end()).size() == std::set<int>(ca.begin(), ca.end()).size() &&
                  std::set<int>(nb.begin(), nb.end()).size() == std::set<int>(cb.begin(), cb.end()).size();
    ca = std::move(na);
    cb = std::move(nb);
    if (stable) break;
  }
  return {ca, cb};
}

}  // namespace detail

/// Label-respecting translation equivalence: sheets matched with equal
/// labels, marks equal up to a per-sheet translation (none on covers), and
/// gluings carried to gluings.
inline IsoResult isomorphic(const SurfaceComplex& a, const SurfaceComplex& b) {
  IsoResult r;
  if (a.sheets.size() != b.sheets.size() || a.marks.size() != b.marks.size() || a.gluings.size() != b.gluings.size()) {
    r.witness = "size mismatch: sheets " + std::to_string(a.sheets.size()) + "/" + std::to_string(b.sheets.size()) +
                ", marks " + std::to_string(a.marks.size()) + "/" + std::to_string(b.marks.size()) + ", gluings " +
                std::to_string(a.gluings.size()) + "/" + std::to_string(b.gluings.size());
    return r;
  }
  auto va = detail::view(a), vb = detail::view(b);
  auto [ca, cb] = detail::refine_colors(a, va, b, vb);
  std::map<int, std::vector<int>> pool;
  for (std::size_t i = 0; i < cb.size(); ++i) pool[cb[i]].push_back(int(i));
  r.sheet_map.assign(a.sheets.size(), -1);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    auto& avail = pool[ca[i]];
    if (avail.empty()) {
      r.witness = "no counterpart for sheet " + a.sheets[i].tag;
      return r;
    }
    r.sheet_map[i] = avail.front();
    avail.erase(avail.begin());
  }
  r.mark_map.assign(a.marks.size(), -1);
  for (std::size_t s = 0; s < a.sheets.size(); ++s) {
    const auto& ma = va.marks_by_sheet[s];
    const auto& mb = vb.marks_by_sheet[r.sheet_map[s]];
    for (std::size_t k = 0; k < ma.size(); ++k) r.mark_map[ma[k]] = mb[k];
  }
  for (const auto& g : a.gluings) {
    int x = r.mark_map[g.a], y = r.mark_map[g.b];
    if (b.partner(x) != y) {
      r.witness = "gluing " + a.describe(g.a) + "~" + a.describe(g.b) + " has no image";
      return r;
    }
  }
  r.equal = true;
  return r;
}

}  // namespace monsterkit

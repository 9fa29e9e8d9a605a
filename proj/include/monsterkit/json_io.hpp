#pragma once

// JSON documents (sorted keys, rationals as "p/q" strings) and SVG export.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "monsterkit/puzzle.hpp"

namespace monsterkit {

using json = nlohmann::json;

namespace io {

inline std::string rational_str(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline Rational rational_of(const json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  throw Error(ErrorCode::Config, "expected a rational, got " + j.dump());
}

inline json vec_json(const Vec2& v) { return json::array({rational_str(v.x), rational_str(v.y)}); }

inline Vec2 vec_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Config, "expected a pair, got " + j.dump());
  return {rational_of(j[0]), rational_of(j[1])};
}

inline json mat_json(const Mat2& m) {
  return json::array({json::array({rational_str(m.a), rational_str(m.b)}), json::array({rational_str(m.c), rational_str(m.d)})});
}

/// Accepts [[a,b],[c,d]] or the flat [a,b,c,d].
inline Mat2 mat_of(const json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_array())
    return {rational_of(j[0].at(0)), rational_of(j[0].at(1)), rational_of(j[1].at(0)), rational_of(j[1].at(1))};
  if (j.is_array() && j.size() == 4) return {rational_of(j[0]), rational_of(j[1]), rational_of(j[2]), rational_of(j[3])};
  throw Error(ErrorCode::Config, "expected a 2x2 matrix, got " + j.dump());
}

inline void expect_schema(const json& j, const std::string& schema) {
  if (!j.is_object() || !j.contains("schema") || j["schema"] != schema)
    throw Error(ErrorCode::Config, "expected a " + schema + " document");
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Config, "cannot write " + path);
  out << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// ends-spec.v1

inline json ends_payload(const EndsSpec& s);
inline EndsSpec ends_from_payload(const json& j);

inline json annotation_json(const Annotation& a) {
  switch (a.kind) {
    case AnnotationKind::Dies: return "dies";
    case AnnotationKind::SingleRay: return "single_ray";
    case AnnotationKind::FullCantor: return "full_cantor";
    case AnnotationKind::Spec: return ends_payload(a.spec);
  }
  return nullptr;
}

inline Annotation annotation_of(const json& j) {
  if (j == "dies") return Annotation::dies();
  if (j == "single_ray") return Annotation::single_ray();
  if (j == "full_cantor") return Annotation::full_cantor();
  if (j.is_object()) return Annotation::of(ends_from_payload(j));
  throw Error(ErrorCode::Config, "bad annotation " + j.dump());
}

inline json ends_payload(const EndsSpec& s) {
  json j;
  switch (s.kind) {
    case EndsKind::Finite:
      j["variant"] = "finite";
      j["count"] = s.count;
      break;
    case EndsKind::Cantor: j["variant"] = "cantor"; break;
    case EndsKind::CantorPlusDiscrete:
      j["variant"] = "cantor_plus_discrete";
      if (s.count == EndsSpec::kInfinite) j["u_count"] = "inf";
      else j["u_count"] = s.count;
      break;
    case EndsKind::Ordinal:
      j["variant"] = "ordinal";
      j["terms"] = json::array();
      for (const auto& t : s.cnf.terms) j["terms"].push_back({t.exponent, t.coefficient});
      break;
    case EndsKind::PrefixTree:
      j["variant"] = "prefix_tree";
      j["depth"] = s.tree->depth;
      j["nodes"] = json::array();
      for (const auto& w : s.tree->nodes) j["nodes"].push_back(w);
      j["frontier"] = json::object();
      for (const auto& [w, a] : s.tree->frontier) j["frontier"][w] = annotation_json(a);
      break;
  }
  return j;
}

inline EndsSpec ends_from_payload(const json& j) {
  try {
    std::string v = j.at("variant").get<std::string>();
    if (v == "finite") return EndsSpec::finite(j.at("count").get<std::uint64_t>());
    if (v == "cantor") return EndsSpec::cantor();
    if (v == "cantor_plus_discrete") {
      if (!j.contains("u_count") || j["u_count"] == "inf") return EndsSpec::cantor_plus_discrete();
      return EndsSpec::cantor_plus_discrete(j["u_count"].get<std::uint64_t>());
    }
    if (v == "ordinal") {
      OrdinalCNF c;
      for (const auto& t : j.at("terms")) c.terms.push_back({t.at(0).get<unsigned>(), t.at(1).get<std::uint64_t>()});
      return EndsSpec::ordinal(c);
    }
    if (v == "prefix_tree") {
      AnnotatedPrefixTree t;
      t.depth = j.at("depth").get<unsigned>();
      t.nodes.clear();
      for (const auto& w : j.at("nodes")) t.nodes.insert(w.get<std::string>());
      for (const auto& [w, a] : j.at("frontier").items()) t.frontier[w] = annotation_of(a);
      return EndsSpec::prefix_tree(std::move(t));
    }
    throw Error(ErrorCode::Config, "unknown ends variant " + v);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("ends-spec: ") + e.what());
  }
}

inline json ends_json(const EndsSpec& s) {
  json j = ends_payload(s);
  j["schema"] = "ends-spec.v1";
  return j;
}

inline EndsSpec ends_from_json(const json& j) {
  expect_schema(j, "ends-spec.v1");
  return ends_from_payload(j);
}

// ---------------------------------------------------------------------------
// group.v1

inline json group_json(const GroupSpec& g) {
  json j{{"schema", "group.v1"}, {"name", g.name}, {"generators", json::array()}};
  for (const auto& h : g.generators) j["generators"].push_back(mat_json(h));
  return j;
}

inline GroupSpec group_from_json(const json& j) {
  expect_schema(j, "group.v1");
  GroupSpec g;
  g.name = j.value("name", "");
  if (!j.contains("generators") || !j["generators"].is_array()) throw Error(ErrorCode::Config, "group.v1 needs generators");
  for (const auto& m : j["generators"]) g.generators.push_back(mat_of(m));
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// tree.v1

inline json tree_json(const TreeTruncation& t, const RayFamily& f) {
  json j{{"schema", "tree.v1"}, {"spec", ends_payload(t.spec)}, {"depth", t.depth}};
  std::vector<Word> vs(t.vertices.begin(), t.vertices.end());
  std::sort(vs.begin(), vs.end(), shortlex_less);
  j["vertices"] = vs;
  j["edges"] = json::array();
  for (const auto& [a, b] : t.edges) j["edges"].push_back({a, b});
  j["rays"] = json::array();
  for (const auto& r : f.rays) j["rays"].push_back({{"origin", r.origin}, {"turns", r.turns()}});
  return j;
}

// ---------------------------------------------------------------------------
// build.v1

struct BuildConfig {
  TheoremMode mode = TheoremMode::TAN;
  unsigned k = 1;
  EndsSpec ends = EndsSpec::omega_power(1, 1);
  GroupSpec group{"trivial", {Mat2::identity()}};
  Rational R{64};
  int N = 4;
  unsigned depth = 5;
  int ball = 2;

  BuilderParams params() const {
    BuilderParams p;
    p.mode = mode;
    p.k = k;
    p.window_radius = R;
    p.mark_count = N;
    p.tree_depth = depth;
    return p;
  }
};

/// Ends space each decorated mode is built for when none is given.
inline EndsSpec default_ends(TheoremMode m, unsigned k) {
  switch (m) {
    case TheoremMode::TAF: return EndsSpec::cantor();
    case TheoremMode::TAN: return EndsSpec::omega_power(k, 1);
    case TheoremMode::TNN: return EndsSpec::cantor_plus_discrete();
    default: return EndsSpec::singleton();
  }
}

inline json build_json(const BuildConfig& c) {
  json j{{"schema", "build.v1"},
         {"theorem_mode", to_string(c.mode)},
         {"k", c.k},
         {"ends_spec", ends_payload(c.ends)},
         {"group", group_json(c.group)},
         {"R", rational_str(c.R)},
         {"N", c.N},
         {"depth", c.depth},
         {"ball", c.ball}};
  j["group"].erase("schema");
  return j;
}

inline BuildConfig build_from_json(const json& j) {
  expect_schema(j, "build.v1");
  BuildConfig c;
  try {
    c.mode = parse_mode(j.at("theorem_mode").get<std::string>());
    c.k = j.value("k", 1u);
    c.ends = j.contains("ends_spec") ? ends_from_payload(j["ends_spec"]) : default_ends(c.mode, c.k);
    if (j.contains("group")) {
      json g = j["group"];
      g["schema"] = "group.v1";
      c.group = group_from_json(g);
    }
    c.R = rational_of(j.at("R"));
    c.N = j.at("N").get<int>();
    c.depth = j.at("depth").get<unsigned>();
    c.ball = j.value("ball", 0);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("build.v1: ") + e.what());
  }
  return c;
}

inline AssembledSurface run_build(const BuildConfig& c) {
  return assemble(c.ends, c.group, c.params(), c.ball);
}

// ---------------------------------------------------------------------------
// surface.v1

inline json surface_json(const SurfaceComplex& c) {
  json j{{"schema", "surface.v1"}, {"window_radius", rational_str(c.window_radius)}, {"meta", c.meta}};
  j["sheets"] = json::array();
  for (const auto& s : c.sheets) {
    json x{{"id", s.id},
           {"kind", s.kind == SheetKind::Plane ? "plane" : "cover_fold"},
           {"matrix", {rational_str(s.label.a), rational_str(s.label.b), rational_str(s.label.c), rational_str(s.label.d)}},
           {"tag", s.tag},
           {"piece", s.piece}};
    if (s.kind == SheetKind::BranchedCoverFold) {
      x["cover"] = s.cover;
      x["fold"] = s.fold_index;
      x["cut"] = vec_json(s.cut_direction);
    }
    j["sheets"].push_back(std::move(x));
  }
  j["marks"] = json::array();
  for (const auto& m : c.marks)
    j["marks"].push_back({{"id", m.id},
                          {"sheet", m.sheet},
                          {"p", vec_json(m.p)},
                          {"q", vec_json(m.q)},
                          {"label", m.label},
                          {"family", m.family},
                          {"index", m.index}});
  j["gluings"] = json::array();
  for (const auto& g : c.gluings) j["gluings"].push_back({{"a", g.a}, {"b", g.b}, {"reversed", g.reversed}});
  return j;
}

inline SurfaceComplex surface_from_json(const json& j) {
  expect_schema(j, "surface.v1");
  try {
    SurfaceComplex c(rational_of(j.at("window_radius")));
    if (j.contains("meta")) c.meta = j["meta"].get<std::map<std::string, std::string>>();
    for (const auto& x : j.at("sheets")) {
      Sheet s;
      s.id = x.at("id").get<int>();
      if (s.id != int(c.sheets.size())) throw Error(ErrorCode::Config, "sheet ids must be 0..n-1 in order");
      s.kind = x.at("kind") == "plane" ? SheetKind::Plane : SheetKind::BranchedCoverFold;
      s.label = mat_of(x.at("matrix"));
      if (s.label.det() <= 0) throw Error(ErrorCode::NonPositiveDeterminant, s.label.str());
      s.tag = x.value("tag", "");
      s.piece = x.value("piece", 0);
      if (s.kind == SheetKind::BranchedCoverFold) {
        s.cover = x.at("cover").get<int>();
        s.fold_index = x.at("fold").get<int>();
        s.cut_direction = vec_of(x.at("cut"));
      }
      c.sheets.push_back(std::move(s));
    }
    for (const auto& x : j.at("marks")) {
      Mark m;
      m.id = x.at("id").get<int>();
      if (m.id != int(c.marks.size())) throw Error(ErrorCode::Config, "mark ids must be 0..n-1 in order");
      m.sheet = x.at("sheet").get<int>();
      if (m.sheet < 0 || m.sheet >= int(c.sheets.size())) throw Error(ErrorCode::UnknownMark, "mark on unknown sheet");
      m.p = vec_of(x.at("p"));
      m.q = vec_of(x.at("q"));
      m.label = x.value("label", "");
      m.family = x.value("family", "");
      m.index = x.value("index", 0);
      c.marks.push_back(std::move(m));
    }
    for (const auto& x : j.at("gluings")) {
      Gluing g{x.at("a").get<int>(), x.at("b").get<int>(), x.value("reversed", false)};
      if (g.a < 0 || g.b < 0 || g.a >= int(c.marks.size()) || g.b >= int(c.marks.size()))
        throw Error(ErrorCode::UnknownMark, "gluing of unknown mark");
      c.gluings.push_back(g);
    }
    c.reindex();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("surface.v1: ") + e.what());
  }
}

/// surface.v1 document of an assembled build, carrying its build.v1 config.
inline json build_output_json(const BuildConfig& cfg, const AssembledSurface& a) {
  json j = surface_json(a.complex);
  j["build"] = build_json(cfg);
  j["ball"] = json::array();
  for (const auto& e : a.ball.elements) j["ball"].push_back({{"word", e.word_str()}, {"matrix", mat_json(e.g)}});
  j["boundary_notes"] = a.boundary_notes;
  return j;
}

// ---------------------------------------------------------------------------
// verify.v1

inline json check_json(const CheckReport& r) {
  json j{{"name", r.name}, {"status", r.pass ? "pass" : "fail"}, {"evidence", r.evidence}, {"details", r.details}};
  j["code"] = r.code ? json(to_string(*r.code)) : json(nullptr);
  j["witness"] = r.witness;
  return j;
}

inline json verify_json(const std::vector<CheckReport>& checks) {
  json j{{"schema", "verify.v1"}, {"checks", json::array()}};
  bool pass = true;
  for (const auto& r : checks) {
    j["checks"].push_back(check_json(r));
    pass = pass && r.pass;
  }
  j["pass"] = pass;
  return j;
}

// ---------------------------------------------------------------------------
// SVG

constexpr int kPixelsPerUnit = 32;

inline std::string svg_num(const Rational& r) {
  std::ostringstream os;
  os << to_double(r * kPixelsPerUnit);
  return os.str();
}

/// One panel per sheet, cropped to the marks of that sheet plus one unit.
/// Glued pairs share a colour; cone points carry their order n (angle 2n pi).
inline std::string to_svg(const SurfaceComplex& c) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::vector<std::vector<int>> by_sheet(c.sheets.size());
  for (const auto& m : c.marks) by_sheet[m.sheet].push_back(m.id);
  std::vector<std::vector<std::pair<Point, int>>> cones(c.sheets.size());
  for (const auto& s : singularities(c))
    for (const auto& p : s.points) cones[p.sheet].push_back({p.x, s.order});
  std::ostringstream body;
  Rational y0 = 0, width = 4;
  for (const auto& s : c.sheets) {
    Rational lo_x = -1, hi_x = 1, lo_y = -1, hi_y = 1;
    auto grow = [&](const Point& p) {
      lo_x = std::min<Rational>(lo_x, p.x - 1);
      hi_x = std::max<Rational>(hi_x, p.x + 1);
      lo_y = std::min<Rational>(lo_y, p.y - 1);
      hi_y = std::max<Rational>(hi_y, p.y + 1);
    };
    for (int id : by_sheet[s.id]) {
      grow(c.marks[id].p);
      grow(c.marks[id].q);
    }
    for (const auto& [p, n] : cones[s.id]) grow(p);
    Rational h = hi_y - lo_y + 1;
    width = std::max<Rational>(width, hi_x - lo_x);
    // local (x, y) -> (x - lo_x, y0 + 1 + hi_y - y)
    auto X = [&](const Rational& x) { return svg_num(x - lo_x); };
    auto Y = [&](const Rational& y) { return svg_num(y0 + 1 + hi_y - y); };
    body << "<g id=\"sheet" << s.id << "\">\n";
    body << "<text x=\"4\" y=\"" << svg_num(y0 + Rational(3, 4)) << "\" font-size=\"14\">" << s.tag << " "
         << s.label.str() << "</text>\n";
    body << "<rect x=\"0\" y=\"" << svg_num(y0 + 1) << "\" width=\"" << svg_num(hi_x - lo_x) << "\" height=\""
         << svg_num(hi_y - lo_y) << "\" fill=\"none\" stroke=\"#ccc\"/>\n";
    if (s.kind == SheetKind::BranchedCoverFold) {
      Rational t = std::min(hi_x, hi_y);
      body << "<line x1=\"" << X(0) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(t * s.cut_direction.x) << "\" y2=\""
           << Y(t * s.cut_direction.y) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (int id : by_sheet[s.id]) {
      const Mark& m = c.marks[id];
      int g = c.is_glued(id) ? int(&c.gluing_of(id) - c.gluings.data()) : -1;
      const char* col = g < 0 ? "#000" : palette[g % 10];
      body << "<line x1=\"" << X(m.p.x) << "\" y1=\"" << Y(m.p.y) << "\" x2=\"" << X(m.q.x) << "\" y2=\"" << Y(m.q.y)
           << "\" stroke=\"" << col << "\" stroke-width=\"2\"><title>" << c.describe(id) << "</title></line>\n";
    }
    for (const auto& [p, n] : cones[s.id])
      body << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"3\" fill=\"" << (n == 3 ? "#d00" : "#000")
           << "\"/><text x=\"" << X(p.x + Rational(1, 8)) << "\" y=\"" << Y(p.y + Rational(1, 8)) << "\" font-size=\"10\">"
           << n << "</text>\n";
    body << "</g>\n";
    y0 += h + 1;
  }
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(width) << "\" height=\"" << svg_num(y0)
      << "\">\n"
      << body.str() << "</svg>\n";
  return out.str();
}

}  // namespace io
}  // namespace monsterkit

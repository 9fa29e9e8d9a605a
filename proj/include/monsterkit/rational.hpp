#pragma once

// Exact rational arithmetic, 2-vectors, 2x2 matrices and the segment
// predicates the flat kernel is built on. Nothing in here rounds.

#include <array>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace monsterkit {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses "p/q", "p" or a plain decimal integer. Throws std::invalid_argument.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    while (!v.empty() && (v.front() == ' ')) v.erase(v.begin());
    while (!v.empty() && (v.back() == ' ')) v.pop_back();
  };
  trim(s);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto check_int = [](const std::string& v) {
    std::size_t i = (!v.empty() && (v[0] == '-' || v[0] == '+')) ? 1 : 0;
    if (i >= v.size()) throw std::invalid_argument("bad rational: " + v);
    for (; i < v.size(); ++i)
      if (v[i] < '0' || v[i] > '9') throw std::invalid_argument("bad rational: " + v);
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    check_int(s);
    return Rational(Integer(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  trim(num);
  trim(den);
  check_int(num);
  check_int(den);
  Integer d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + s);
  return Rational(Integer(num), d);
}

/// Canonical "p/q" form; integers print without the denominator.
inline std::string format_rational(const Rational& r) {
  const Integer& n = boost::multiprecision::numerator(r);
  const Integer& d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

struct Vec2 {
  Rational x{0};
  Rational y{0};

  Vec2() = default;
  Vec2(Rational a, Rational b) : x(std::move(a)), y(std::move(b)) {}

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(const Rational& s, const Vec2& v) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }
  friend bool operator<(const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
  bool is_zero() const { return x == 0 && y == 0; }
  friend std::ostream& operator<<(std::ostream& os, const Vec2& v) {
    return os << "(" << format_rational(v.x) << "," << format_rational(v.y) << ")";
  }
};

using Point = Vec2;

inline Rational dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Rational cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Rational norm2(const Vec2& a) { return dot(a, a); }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  Rational a{1}, b{0}, c{0}, d{1};

  static Mat2 identity() { return {}; }
  static Mat2 diag(Rational p, Rational q) { return {p, 0, 0, q}; }

  Mat2() = default;
  Mat2(Rational a_, Rational b_, Rational c_, Rational d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  Rational det() const { return a * d - b * c; }
  Rational trace() const { return a + d; }
  Mat2 transpose() const { return {a, c, b, d}; }

  Mat2 inverse() const {
    Rational D = det();
    if (D == 0) throw std::domain_error("singular matrix");
    return {d / D, -b / D, -c / D, a / D};
  }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
  }
  friend Mat2 operator*(const Rational& s, const Mat2& m) {
    return {s * m.a, s * m.b, s * m.c, s * m.d};
  }
  friend bool operator==(const Mat2& m, const Mat2& n) {
    return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
  }
  friend bool operator!=(const Mat2& m, const Mat2& n) { return !(m == n); }
  friend bool operator<(const Mat2& m, const Mat2& n) {
    if (m.a != n.a) return m.a < n.a;
    if (m.b != n.b) return m.b < n.b;
    if (m.c != n.c) return m.c < n.c;
    return m.d < n.d;
  }
  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

  std::string str() const {
    return "[[" + format_rational(a) + "," + format_rational(b) + "],[" + format_rational(c) +
           "," + format_rational(d) + "]]";
  }
  friend std::ostream& operator<<(std::ostream& os, const Mat2& m) { return os << m.str(); }
};

/// Largest singular value < 1, decided exactly from the characteristic
/// polynomial of g^T g evaluated at 1.
inline bool is_contracting(const Mat2& g) {
  Mat2 s = g.transpose() * g;
  Rational tr = s.trace();
  Rational dt = s.det();
  // both eigenvalues of s are < 1 iff p(1) > 0 and the vertex tr/2 < 1
  return (1 - tr + dt) > 0 && tr < 2;
}

struct Segment {
  Point p;
  Point q;
  Vec2 direction() const { return q - p; }
};

/// Squared distance from a point to a closed segment.
inline Rational point_segment_dist2(const Point& x, const Segment& s) {
  Vec2 v = s.q - s.p;
  Rational vv = norm2(v);
  if (vv == 0) return norm2(x - s.p);
  Rational t = dot(x - s.p, v) / vv;
  if (t <= 0) return norm2(x - s.p);
  if (t >= 1) return norm2(x - s.q);
  Vec2 foot = s.p + t * v;
  return norm2(x - foot);
}

inline int orientation(const Point& a, const Point& b, const Point& c) {
  Rational o = cross(b - a, c - a);
  return o > 0 ? 1 : (o < 0 ? -1 : 0);
}

inline bool on_segment(const Point& x, const Segment& s) {
  if (orientation(s.p, s.q, x) != 0) return false;
  return dot(x - s.p, x - s.q) <= 0;
}

/// Closed segments intersect (touching counts).
inline bool segments_intersect(const Segment& s, const Segment& t) {
  int o1 = orientation(s.p, s.q, t.p), o2 = orientation(s.p, s.q, t.q);
  int o3 = orientation(t.p, t.q, s.p), o4 = orientation(t.p, t.q, s.q);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(t.p, s)) return true;
  if (o2 == 0 && on_segment(t.q, s)) return true;
  if (o3 == 0 && on_segment(s.p, t)) return true;
  if (o4 == 0 && on_segment(s.q, t)) return true;
  return false;
}

/// Squared distance between closed segments; the minimum is attained at an
/// endpoint of one of them unless they cross.
inline Rational segment_dist2(const Segment& s, const Segment& t) {
  if (segments_intersect(s, t)) return Rational(0);
  Rational best = point_segment_dist2(s.p, t);
  for (const Rational& c : {point_segment_dist2(s.q, t), point_segment_dist2(t.p, s),
                            point_segment_dist2(t.q, s)})
    if (c < best) best = c;
  return best;
}

/// Compares sqrt(a) + sqrt(b) >= sqrt(s) exactly for a, b, s >= 0.
inline bool sqrt_sum_at_least(const Rational& a, const Rational& b, const Rational& s) {
  Rational r = s - a - b;
  if (r <= 0) return true;
  return 4 * a * b >= r * r;
}

}  // namespace monsterkit

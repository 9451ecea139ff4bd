#pragma once

#include <cmath>
#include <cstdint>

namespace voidhom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }

struct IVec2 {
  int x = 0;
  int y = 0;

  bool operator==(const IVec2&) const = default;
};

// Row-major 2x2 matrix; m[r][c].
struct Mat2 {
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

  static Mat2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
  static Mat2 zero() { return {}; }

  Vec2 apply(Vec2 v) const {
    return {m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y};
  }
};

inline Mat2 sym(const Mat2& a) {
  double off = 0.5 * (a.m[0][1] + a.m[1][0]);
  return {{{a.m[0][0], off}, {off, a.m[1][1]}}};
}

inline double frobenius_sq(const Mat2& a) {
  return a.m[0][0] * a.m[0][0] + a.m[0][1] * a.m[0][1] + a.m[1][0] * a.m[1][0] +
         a.m[1][1] * a.m[1][1];
}

// |sym xi|^2, the strain magnitude entering the bulk growth bounds.
inline double sym_norm_sq(const Mat2& a) { return frobenius_sq(sym(a)); }

// Last row of xi, the antiplane gradient in scalar mode.
inline Vec2 last_row(const Mat2& a) { return {a.m[1][0], a.m[1][1]}; }

}  // namespace voidhom

#pragma once

#include <cmath>

namespace polykin {

/// 2D vector used for positions, velocities, connectors and forces.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double a) { x *= a; y *= a; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double a, Vec2 v) { return v *= a; }
inline Vec2 operator*(Vec2 v, double a) { return v *= a; }
inline Vec2 operator/(Vec2 v, double a) { return v *= 1.0 / a; }
inline Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec2& v) { return dot(v, v); }
inline double norm(const Vec2& v) { return std::sqrt(norm2(v)); }

/// 2x2 tensor (stress, velocity variance, second moments).
struct Mat2 {
    double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

    Mat2() = default;
    Mat2(double xx_, double xy_, double yx_, double yy_)
        : xx(xx_), xy(xy_), yx(yx_), yy(yy_) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Mat2& operator+=(const Mat2& o) { xx += o.xx; xy += o.xy; yx += o.yx; yy += o.yy; return *this; }
    Mat2& operator-=(const Mat2& o) { xx -= o.xx; xy -= o.xy; yx -= o.yx; yy -= o.yy; return *this; }
    Mat2& operator*=(double a) { xx *= a; xy *= a; yx *= a; yy *= a; return *this; }

    double trace() const { return xx + yy; }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
inline Mat2 operator*(double a, Mat2 m) { return m *= a; }
inline Mat2 operator*(Mat2 m, double a) { return m *= a; }

/// Dyadic (outer) product a b^T.
inline Mat2 outer(const Vec2& a, const Vec2& b) {
    return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}

inline double frobenius_norm(const Mat2& m) {
    return std::sqrt(m.xx * m.xx + m.xy * m.xy + m.yx * m.yx + m.yy * m.yy);
}

/// Full contraction A : B.
inline double ddot(const Mat2& a, const Mat2& b) {
    return a.xx * b.xx + a.xy * b.xy + a.yx * b.yx + a.yy * b.yy;
}

} // namespace polykin

#pragma once
// Planar primitives: 2-vectors, orientation predicates, segment intersection,
// and the pseudotriangle test for quadrilaterals (simple, exactly one reflex
// vertex). All predicates take an absolute tolerance; helpers scale it by the
// magnitude of the operands so callers can pass a relative base.

#include <array>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace auxetic {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Counter-clockwise quarter turn.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

// Signed double area of triangle (a,b,c): >0 CCW, <0 CW, ~0 collinear.
inline double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

// Proper crossing test for open segments (a,b) and (c,d). Collinear overlaps
// and endpoint touches are the caller's degenerate cases; with the collinear
// guard used below they cannot arise between opposite quadrilateral edges.
inline bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double o1 = orient(a, b, c);
    const double o2 = orient(a, b, d);
    const double o3 = orient(c, d, a);
    const double o4 = orient(c, d, b);
    return ((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0));
}

// A planar quadrilateral with vertices in cyclic order.
struct Quadrilateral {
    Vec2 a, b, c, d;

    Vec2 diag_ac() const { return c - a; }
    Vec2 diag_bd() const { return d - b; }
    std::array<Vec2, 4> vertices() const { return {a, b, c, d}; }
};

// Largest coordinate magnitude, used to scale tolerances.
inline double coord_scale(const Quadrilateral& q) {
    double s = 0.0;
    for (const Vec2& p : q.vertices())
        s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return s;
}

// True when the quadrilateral is simple (opposite edges do not cross).
// Assumes no three consecutive vertices are collinear.
inline bool is_simple(const Quadrilateral& q) {
    return !segments_cross(q.a, q.b, q.c, q.d) &&
           !segments_cross(q.b, q.c, q.d, q.a);
}

// Pseudotriangle test: the quadrilateral is simple and exactly one interior
// angle is reflex (equivalently, exactly three are < pi). Throws
// DegenerateAngleError when three consecutive vertices are collinear within
// tol (scaled by the squared coordinate magnitude), since convexity at that
// vertex is then undecidable.
inline bool is_pseudotriangle(const Quadrilateral& q, double tol = 1e-9) {
    const auto v = q.vertices();
    const double scale2 = std::max(1.0, coord_scale(q) * coord_scale(q));
    double turn[4];
    for (int i = 0; i < 4; ++i) {
        const Vec2 prev = v[(i + 3) % 4];
        const Vec2 here = v[i];
        const Vec2 next = v[(i + 1) % 4];
        turn[i] = orient(prev, here, next);
        if (std::abs(turn[i]) <= tol * scale2)
            throw DegenerateAngleError(
                "three consecutive vertices are collinear at vertex index " +
                std::to_string(i));
    }
    if (!is_simple(q)) return false;
    // Orientation of the boundary = sign of the shoelace sum; a vertex is
    // reflex when its turn disagrees with that orientation.
    double twice_area = 0.0;
    for (int i = 0; i < 4; ++i) twice_area += cross(v[i], v[(i + 1) % 4]);
    const bool ccw = twice_area > 0.0;
    int reflex = 0;
    for (int i = 0; i < 4; ++i)
        if ((turn[i] > 0.0) != ccw) ++reflex;
    return reflex == 1;
}

}  // namespace auxetic

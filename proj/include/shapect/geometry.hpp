#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace shapect {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Signed area of a closed polygon (shoelace); positive when counterclockwise.
double polygon_area(const std::vector<Vec2>& poly);

/// Convex hull (monotone chain), counterclockwise, no repeated endpoint.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

/// True if q lies on the closed segment [a,b].
bool on_segment(Vec2 q, Vec2 a, Vec2 b);

/// True if segments [a,b] and [c,d] intersect (touching counts).
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// True if any pair of non-adjacent edges of the closed polyline intersects.
bool polyline_self_intersects(const std::vector<Vec2>& poly);

/// Distance from q to the closed segment [a,b].
double point_segment_distance(Vec2 q, Vec2 a, Vec2 b);

} // namespace shapect

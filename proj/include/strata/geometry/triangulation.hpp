#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "strata/geomath/linalg.hpp"

namespace strata {

using Triangle = std::array<std::uint32_t, 3>;

/// Triangles (counter-clockwise) over a point list.
struct Triangulation {
    std::vector<Vec2> points;
    std::vector<Triangle> triangles;
    /// For Delaunay output: representative[i] is the index of the first point equal to
    /// points[i] (== i for unique points). Empty for ear clipping.
    std::vector<std::uint32_t> representative;
    /// Ear clipping: input was degenerate (zero area) and produced no triangles.
    bool degenerate = false;

    [[nodiscard]] double area() const;
};

struct PolygonRings {
    std::vector<Vec2> outer;               // counter-clockwise, not repeating the first point
    std::vector<std::vector<Vec2>> holes;  // clockwise
};

double signedArea(std::span<const Vec2> ring);
double polygonArea(const PolygonRings& polygon);

/// Ear-clipping triangulation of a polygon with holes. Holes are bridged to the outer ring
/// first (rightmost hole vertex to the closest visible ring vertex). Ring orientation is
/// normalized. Throws GeometryError for self-intersecting or mutually crossing rings; a
/// zero-area input yields an empty triangulation with `degenerate` set.
Triangulation earClipTriangulate(const PolygonRings& polygon);

/// Bowyer-Watson Delaunay triangulation. Duplicate points are mapped to their first
/// occurrence through `representative`. Throws GeometryError for fewer than 3 distinct
/// points or an all-collinear set.
Triangulation delaunayTriangulate(std::span<const Vec2> points);

/// Positive when d lies inside the circumcircle of counter-clockwise (a, b, c), with the
/// 1e-12 relative tolerance band treated as "not inside".
bool inCircumcircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Point location over an immutable triangulation: a visibility walk from a caller-held
/// hint, falling back to a linear scan. Safe for concurrent queries with separate hints.
class TriangleLocator {
public:
    explicit TriangleLocator(const Triangulation& t);

    /// Index of a triangle containing q (boundary inclusive), or nullopt outside the hull.
    [[nodiscard]] std::optional<std::size_t> locate(Vec2 q, std::size_t& hint) const;
    [[nodiscard]] const Triangulation& triangulation() const { return *tri_; }

private:
    const Triangulation* tri_;
    std::vector<std::array<std::int64_t, 3>> neighbors_;  // neighbors_[t][k] is across the edge opposite vertex k
};

/// Barycentric interpolation of per-point k-vectors (values.size() == points * k).
/// Returns nullopt outside the convex hull.
std::optional<std::vector<double>> interpolateBarycentric(const TriangleLocator& locator,
                                                          std::span<const double> values, std::size_t k,
                                                          Vec2 q, std::size_t& hint);

/// Convenience overload that builds a locator per call.
std::optional<std::vector<double>> interpolateBarycentric(const Triangulation& t, std::span<const double> values,
                                                          std::size_t k, Vec2 q);

}  // namespace strata

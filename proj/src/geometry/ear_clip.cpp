#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "strata/errors.hpp"
#include "strata/geometry/triangulation.hpp"

namespace strata {

double signedArea(std::span<const Vec2> ring) {
    double a = 0.0;
    for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
        a += cross(ring[i], ring[(i + 1) % n]);
    }
    return 0.5 * a;
}

double polygonArea(const PolygonRings& polygon) {
    double a = std::fabs(signedArea(polygon.outer));
    for (const auto& h : polygon.holes) a -= std::fabs(signedArea(h));
    return a;
}

double Triangulation::area() const {
    double a = 0.0;
    for (const auto& t : triangles) {
        a += 0.5 * cross(points[t[1]] - points[t[0]], points[t[2]] - points[t[0]]);
    }
    return a;
}

namespace {

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool onSegment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// True when segments ab and cd share any point.
bool segmentsIntersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const int o1 = sign(orient(a, b, c)), o2 = sign(orient(a, b, d));
    const int o3 = sign(orient(c, d, a)), o4 = sign(orient(c, d, b));
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && onSegment(a, b, c)) return true;
    if (o2 == 0 && onSegment(a, b, d)) return true;
    if (o3 == 0 && onSegment(c, d, a)) return true;
    if (o4 == 0 && onSegment(c, d, b)) return true;
    return false;
}

// Interior crossing only: endpoints touching is allowed.
bool segmentsCrossProperly(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const int o1 = sign(orient(a, b, c)), o2 = sign(orient(a, b, d));
    const int o3 = sign(orient(c, d, a)), o4 = sign(orient(c, d, b));
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    // Collinear overlap that is more than a shared endpoint.
    if (o1 == 0 && o2 == 0) {
        auto strictlyInside = [](Vec2 s, Vec2 e, Vec2 p) {
            return onSegment(s, e, p) && !(p == s) && !(p == e);
        };
        return strictlyInside(a, b, c) || strictlyInside(a, b, d) || strictlyInside(c, d, a) ||
               strictlyInside(c, d, b) || ((a == c && b == d) || (a == d && b == c));
    }
    return false;
}

struct Edge {
    std::uint32_t a, b;
    std::size_t ring;
    std::size_t pos;
};

void checkSimple(const std::vector<Vec2>& pts, const std::vector<std::vector<std::uint32_t>>& rings) {
    std::vector<Edge> edges;
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const auto& ring = rings[r];
        for (std::size_t i = 0; i < ring.size(); ++i) {
            edges.push_back({ring[i], ring[(i + 1) % ring.size()], r, i});
        }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const Edge& e = edges[i];
            const Edge& f = edges[j];
            if (e.ring == f.ring) {
                const std::size_t n = rings[e.ring].size();
                const bool adjacent = (e.pos + 1) % n == f.pos || (f.pos + 1) % n == e.pos;
                if (adjacent) {
                    // Adjacent edges may only share their common vertex.
                    if (segmentsCrossProperly(pts[e.a], pts[e.b], pts[f.a], pts[f.b])) {
                        throw GeometryError("polygon ring folds back on itself");
                    }
                    continue;
                }
            }
            if (segmentsIntersect(pts[e.a], pts[e.b], pts[f.a], pts[f.b])) {
                throw GeometryError(e.ring == f.ring ? "self-intersecting polygon ring"
                                                     : "polygon rings intersect each other");
            }
        }
    }
}

bool pointInRing(const std::vector<Vec2>& pts, const std::vector<std::uint32_t>& ring, Vec2 p) {
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const Vec2 a = pts[ring[i]], b = pts[ring[j]];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
    }
    return inside;
}

// Whether direction v->m points into the interior wedge at polygon corner (prev, v, next).
bool locallyInside(Vec2 prev, Vec2 v, Vec2 next, Vec2 m) {
    const bool convex = orient(prev, v, next) > 0.0;
    const double left = cross(next - v, m - v);
    const double right = cross(m - v, prev - v);
    return convex ? (left > 0.0 && right > 0.0) : (left > 0.0 || right > 0.0);
}

std::vector<std::uint32_t> bridgeHoles(const std::vector<Vec2>& pts, std::vector<std::uint32_t> poly,
                                       std::vector<std::vector<std::uint32_t>> holes) {
    auto rightmost = [&](const std::vector<std::uint32_t>& h) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < h.size(); ++i) {
            const Vec2 p = pts[h[i]], q = pts[h[best]];
            if (p.x > q.x || (p.x == q.x && p.y < q.y)) best = i;
        }
        return best;
    };
    std::stable_sort(holes.begin(), holes.end(), [&](const auto& a, const auto& b) {
        return pts[a[rightmost(a)]].x > pts[b[rightmost(b)]].x;
    });

    for (std::size_t h = 0; h < holes.size(); ++h) {
        const auto& hole = holes[h];
        const std::size_t mi = rightmost(hole);
        const Vec2 m = pts[hole[mi]];

        std::size_t bestPos = poly.size();
        double bestDist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const Vec2 v = pts[poly[k]];
            const double dist = (v.x - m.x) * (v.x - m.x) + (v.y - m.y) * (v.y - m.y);
            if (dist >= bestDist || dist == 0.0) continue;
            const Vec2 prev = pts[poly[(k + poly.size() - 1) % poly.size()]];
            const Vec2 next = pts[poly[(k + 1) % poly.size()]];
            if (!locallyInside(prev, v, next, m)) continue;
            bool blocked = false;
            auto blocks = [&](Vec2 a, Vec2 b) {
                if (a == v || b == v || a == m || b == m) return false;
                return segmentsIntersect(v, m, a, b);
            };
            for (std::size_t e = 0; e < poly.size() && !blocked; ++e) {
                blocked = blocks(pts[poly[e]], pts[poly[(e + 1) % poly.size()]]);
            }
            for (std::size_t o = h; o < holes.size() && !blocked; ++o) {
                const auto& r = holes[o];
                for (std::size_t e = 0; e < r.size() && !blocked; ++e) {
                    blocked = blocks(pts[r[e]], pts[r[(e + 1) % r.size()]]);
                }
            }
            if (!blocked) {
                bestDist = dist;
                bestPos = k;
            }
        }
        if (bestPos == poly.size()) throw GeometryError("no visible bridge from hole to outer ring");

        std::vector<std::uint32_t> merged;
        merged.reserve(poly.size() + hole.size() + 2);
        merged.insert(merged.end(), poly.begin(), poly.begin() + static_cast<std::ptrdiff_t>(bestPos) + 1);
        for (std::size_t i = 0; i <= hole.size(); ++i) merged.push_back(hole[(mi + i) % hole.size()]);
        merged.push_back(poly[bestPos]);
        merged.insert(merged.end(), poly.begin() + static_cast<std::ptrdiff_t>(bestPos) + 1, poly.end());
        poly = std::move(merged);
    }
    return poly;
}

bool pointInTriangle(Vec2 a, Vec2 b, Vec2 c, Vec2 p, bool inclusive) {
    const double d1 = orient(a, b, p), d2 = orient(b, c, p), d3 = orient(c, a, p);
    return inclusive ? (d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0) : (d1 > 0.0 && d2 > 0.0 && d3 > 0.0);
}

}  // namespace

Triangulation earClipTriangulate(const PolygonRings& polygon) {
    Triangulation out;
    auto cleanRing = [](std::vector<Vec2> ring) {
        if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
        ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
        while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
        return ring;
    };

    std::vector<Vec2> outer = cleanRing(polygon.outer);
    if (outer.size() < 3) {
        out.degenerate = true;
        return out;
    }
    if (signedArea(outer) < 0.0) std::reverse(outer.begin(), outer.end());

    std::vector<std::vector<std::uint32_t>> rings;
    auto appendRing = [&](const std::vector<Vec2>& ring) {
        std::vector<std::uint32_t> idx;
        for (const auto& p : ring) {
            idx.push_back(static_cast<std::uint32_t>(out.points.size()));
            out.points.push_back(p);
        }
        rings.push_back(std::move(idx));
    };
    appendRing(outer);
    for (const auto& raw : polygon.holes) {
        std::vector<Vec2> hole = cleanRing(raw);
        if (hole.size() < 3 || signedArea(hole) == 0.0) continue;
        if (signedArea(hole) > 0.0) std::reverse(hole.begin(), hole.end());
        appendRing(hole);
    }

    double minX = outer[0].x, maxX = minX, minY = outer[0].y, maxY = minY;
    for (const auto& p : outer) {
        minX = std::min(minX, p.x), maxX = std::max(maxX, p.x);
        minY = std::min(minY, p.y), maxY = std::max(maxY, p.y);
    }
    const double extent = std::max(maxX - minX, maxY - minY);
    bool collinear = true;
    for (const auto& p : outer) {
        if (std::fabs(orient(outer[0], outer[1], p)) > 1e-12 * extent * extent) {
            collinear = false;
            break;
        }
    }
    if (collinear) {
        out.degenerate = true;
        out.points.clear();
        return out;
    }
    checkSimple(out.points, rings);

    for (std::size_t h = 1; h < rings.size(); ++h) {
        for (auto i : rings[h]) {
            if (!pointInRing(out.points, rings[0], out.points[i])) {
                throw GeometryError("hole vertex outside the outer ring");
            }
        }
    }

    std::vector<std::vector<std::uint32_t>> holes(rings.begin() + 1, rings.end());
    const std::vector<std::uint32_t> poly = bridgeHoles(out.points, rings[0], std::move(holes));

    // Doubly linked list over positions in `poly`.
    const std::size_t n = poly.size();
    std::vector<std::size_t> prev(n), next(n);
    for (std::size_t i = 0; i < n; ++i) {
        prev[i] = (i + n - 1) % n;
        next[i] = (i + 1) % n;
    }
    const double zeroArea = 1e-14 * extent * extent;
    const auto& pts = out.points;

    auto isEar = [&](std::size_t c, bool inclusive) {
        const Vec2 a = pts[poly[prev[c]]], b = pts[poly[c]], d = pts[poly[next[c]]];
        for (std::size_t k = next[next[c]]; k != prev[c]; k = next[k]) {
            const Vec2 p = pts[poly[k]];
            if (p == a || p == b || p == d) continue;
            if (orient(pts[poly[prev[k]]], p, pts[poly[next[k]]]) > 0.0 && !inclusive) continue;
            if (pointInTriangle(a, b, d, p, inclusive)) return false;
        }
        return true;
    };

    std::size_t remaining = n;
    std::size_t cur = 0;
    int pass = 0;  // 0: inclusive ear test, 1: strict, 2: any convex corner
    std::size_t sinceLastClip = 0;
    while (remaining > 2) {
        const std::size_t p = prev[cur], nx = next[cur];
        const double o = orient(pts[poly[p]], pts[poly[cur]], pts[poly[nx]]);
        bool remove = false;
        if (std::fabs(o) <= zeroArea) {
            remove = true;  // collinear or spike: drop without a triangle
        } else if (o > 0.0 && (pass == 2 || isEar(cur, pass == 0))) {
            out.triangles.push_back({poly[p], poly[cur], poly[nx]});
            remove = true;
        }
        if (remove) {
            next[p] = nx;
            prev[nx] = p;
            --remaining;
            cur = nx;
            sinceLastClip = 0;
            pass = 0;
            continue;
        }
        cur = nx;
        if (++sinceLastClip > remaining) {
            if (pass == 2) throw GeometryError("ear clipping failed to converge");
            ++pass;
            sinceLastClip = 0;
        }
    }
    return out;
}

}  // namespace strata

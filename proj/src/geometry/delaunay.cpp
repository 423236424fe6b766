#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "strata/errors.hpp"
#include "strata/geometry/triangulation.hpp"

namespace strata {

namespace {

using Real = long double;

Real orientL(Vec2 a, Vec2 b, Vec2 c) {
    return (static_cast<Real>(b.x) - a.x) * (static_cast<Real>(c.y) - a.y) -
           (static_cast<Real>(b.y) - a.y) * (static_cast<Real>(c.x) - a.x);
}

}  // namespace

bool inCircumcircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const Real adx = static_cast<Real>(a.x) - d.x, ady = static_cast<Real>(a.y) - d.y;
    const Real bdx = static_cast<Real>(b.x) - d.x, bdy = static_cast<Real>(b.y) - d.y;
    const Real cdx = static_cast<Real>(c.x) - d.x, cdy = static_cast<Real>(c.y) - d.y;
    const Real alift = adx * adx + ady * ady;
    const Real blift = bdx * bdx + bdy * bdy;
    const Real clift = cdx * cdx + cdy * cdy;
    const Real t1 = alift * (bdx * cdy - cdx * bdy);
    const Real t2 = blift * (cdx * ady - adx * cdy);
    const Real t3 = clift * (adx * bdy - bdx * ady);
    const Real det = t1 + t2 + t3;
    const Real magnitude = alift * (std::fabs(bdx * cdy) + std::fabs(cdx * bdy)) +
                           blift * (std::fabs(cdx * ady) + std::fabs(adx * cdy)) +
                           clift * (std::fabs(adx * bdy) + std::fabs(bdx * ady));
    return det > 1e-12L * magnitude;
}

namespace {

struct Builder {
    std::vector<Vec2> pts;  // unique points followed by 3 super vertices
    std::vector<Triangle> tris;
    std::vector<std::array<std::int64_t, 3>> nbr;
    std::vector<char> alive;
    std::size_t lastTri = 0;

    bool contains(std::size_t t, Vec2 p) const {
        const auto& tr = tris[t];
        return orientL(pts[tr[0]], pts[tr[1]], p) >= 0 && orientL(pts[tr[1]], pts[tr[2]], p) >= 0 &&
               orientL(pts[tr[2]], pts[tr[0]], p) >= 0;
    }

    std::size_t locate(Vec2 p) {
        std::size_t t = alive[lastTri] ? lastTri : 0;
        for (std::size_t steps = 0; steps < tris.size() + 8; ++steps) {
            if (!alive[t]) break;
            const auto& tr = tris[t];
            bool moved = false;
            for (int k = 0; k < 3; ++k) {
                const Vec2 a = pts[tr[static_cast<std::size_t>((k + 1) % 3)]];
                const Vec2 b = pts[tr[static_cast<std::size_t>((k + 2) % 3)]];
                if (orientL(a, b, p) < 0 && nbr[t][static_cast<std::size_t>(k)] >= 0) {
                    t = static_cast<std::size_t>(nbr[t][static_cast<std::size_t>(k)]);
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                if (contains(t, p)) return t;
                break;
            }
        }
        for (std::size_t i = 0; i < tris.size(); ++i) {
            if (alive[i] && contains(i, p)) return i;
        }
        throw GeometryError("delaunay: point outside the super triangle");
    }

    void insert(std::uint32_t pi) {
        const Vec2 p = pts[pi];
        const std::size_t start = locate(p);

        std::vector<char> inCavity(tris.size(), 0);
        std::vector<std::size_t> cavity{start};
        inCavity[start] = 1;
        // A point on an edge of the containing triangle also belongs to the neighbor.
        for (int k = 0; k < 3; ++k) {
            const auto& tr = tris[start];
            if (orientL(pts[tr[static_cast<std::size_t>((k + 1) % 3)]], pts[tr[static_cast<std::size_t>((k + 2) % 3)]], p) == 0) {
                const auto n = nbr[start][static_cast<std::size_t>(k)];
                if (n >= 0 && !inCavity[static_cast<std::size_t>(n)]) {
                    inCavity[static_cast<std::size_t>(n)] = 1;
                    cavity.push_back(static_cast<std::size_t>(n));
                }
            }
        }
        const std::size_t forced = cavity.size();
        for (std::size_t i = 0; i < cavity.size(); ++i) {
            const std::size_t t = cavity[i];
            for (int k = 0; k < 3; ++k) {
                const auto n = nbr[t][static_cast<std::size_t>(k)];
                if (n < 0 || inCavity[static_cast<std::size_t>(n)]) continue;
                const auto& tn = tris[static_cast<std::size_t>(n)];
                if (inCircumcircle(pts[tn[0]], pts[tn[1]], pts[tn[2]], p)) {
                    inCavity[static_cast<std::size_t>(n)] = 1;
                    cavity.push_back(static_cast<std::size_t>(n));
                }
            }
        }

        struct BoundaryEdge {
            std::uint32_t a, b;
            std::int64_t outside;
            std::size_t owner;
        };
        std::vector<BoundaryEdge> boundary;
        // Shrink the cavity until every boundary edge sees p on its left.
        for (;;) {
            boundary.clear();
            std::size_t offender = tris.size();
            for (auto t : cavity) {
                if (!inCavity[t]) continue;
                for (int k = 0; k < 3; ++k) {
                    const auto n = nbr[t][static_cast<std::size_t>(k)];
                    if (n >= 0 && inCavity[static_cast<std::size_t>(n)]) continue;
                    const auto a = tris[t][static_cast<std::size_t>((k + 1) % 3)];
                    const auto b = tris[t][static_cast<std::size_t>((k + 2) % 3)];
                    if (orientL(pts[a], pts[b], p) <= 0 && offender == tris.size()) {
                        const bool isForced = std::find(cavity.begin(), cavity.begin() + static_cast<std::ptrdiff_t>(forced), t) !=
                                              cavity.begin() + static_cast<std::ptrdiff_t>(forced);
                        if (!isForced) offender = t;
                    }
                    boundary.push_back({a, b, n, t});
                }
            }
            if (offender == tris.size()) break;
            inCavity[offender] = 0;
        }

        std::vector<std::size_t> freed;
        for (auto t : cavity) {
            if (inCavity[t]) {
                alive[t] = 0;
                freed.push_back(t);
            }
        }

        std::unordered_map<std::uint32_t, std::size_t> byStart, byEnd;
        std::vector<std::size_t> created;
        for (const auto& e : boundary) {
            const std::size_t t = tris.size();
            tris.emplace_back();
            nbr.emplace_back();
            alive.push_back(0);
            tris[t] = {e.a, e.b, pi};
            nbr[t] = {-1, -1, e.outside};
            alive[t] = 1;
            if (e.outside >= 0) {
                auto& on = nbr[static_cast<std::size_t>(e.outside)];
                for (auto& slot : on) {
                    if (slot == static_cast<std::int64_t>(e.owner)) slot = static_cast<std::int64_t>(t);
                }
            }
            byStart[e.a] = t;
            byEnd[e.b] = t;
            created.push_back(t);
        }
        for (auto t : created) {
            const auto a = tris[t][0], b = tris[t][1];
            nbr[t][0] = static_cast<std::int64_t>(byStart.at(b));  // edge (b, p)
            nbr[t][1] = static_cast<std::int64_t>(byEnd.at(a));    // edge (p, a)
        }
        for (auto t : freed) nbr[t] = {-1, -1, -1};
        lastTri = created.front();
    }
};

}  // namespace

Triangulation delaunayTriangulate(std::span<const Vec2> points) {
    Triangulation out;
    out.points.assign(points.begin(), points.end());
    out.representative.resize(points.size());

    std::map<std::pair<double, double>, std::uint32_t> seen;
    std::vector<std::uint32_t> uniqueIdx;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
            throw GeometryError("delaunay: non-finite point");
        }
        auto [it, inserted] = seen.emplace(std::make_pair(points[i].x, points[i].y), static_cast<std::uint32_t>(i));
        out.representative[i] = it->second;
        if (inserted) uniqueIdx.push_back(static_cast<std::uint32_t>(i));
    }
    if (uniqueIdx.size() < 3) throw GeometryError("delaunay: fewer than 3 distinct points");

    double minX = points[uniqueIdx[0]].x, maxX = minX, minY = points[uniqueIdx[0]].y, maxY = minY;
    for (auto i : uniqueIdx) {
        minX = std::min(minX, points[i].x), maxX = std::max(maxX, points[i].x);
        minY = std::min(minY, points[i].y), maxY = std::max(maxY, points[i].y);
    }
    const double extent = std::max(maxX - minX, maxY - minY);
    {
        const Vec2 a = points[uniqueIdx[0]];
        std::size_t far = 1;
        double best = 0.0;
        for (std::size_t k = 1; k < uniqueIdx.size(); ++k) {
            const Vec2 d = points[uniqueIdx[k]] - a;
            const double len = d.x * d.x + d.y * d.y;
            if (len > best) best = len, far = k;
        }
        const Vec2 b = points[uniqueIdx[far]];
        bool collinear = true;
        for (auto i : uniqueIdx) {
            if (std::fabs(static_cast<double>(orientL(a, b, points[i]))) > 1e-12 * extent * extent) {
                collinear = false;
                break;
            }
        }
        if (collinear) throw GeometryError("delaunay: all points are collinear");
    }

    Builder b;
    b.pts.reserve(uniqueIdx.size() + 3);
    for (auto i : uniqueIdx) b.pts.push_back(points[i]);
    const double cx = 0.5 * (minX + maxX), cy = 0.5 * (minY + maxY);
    const double r = 1e4 * extent;
    const auto s0 = static_cast<std::uint32_t>(b.pts.size());
    b.pts.push_back({cx - 2.0 * r, cy - r});
    b.pts.push_back({cx + 2.0 * r, cy - r});
    b.pts.push_back({cx, cy + 2.0 * r});
    b.tris.push_back({s0, s0 + 1, s0 + 2});
    b.nbr.push_back({-1, -1, -1});
    b.alive.push_back(1);

    for (std::uint32_t i = 0; i < uniqueIdx.size(); ++i) b.insert(i);

    for (std::size_t t = 0; t < b.tris.size(); ++t) {
        if (!b.alive[t]) continue;
        const auto& tr = b.tris[t];
        if (tr[0] >= s0 || tr[1] >= s0 || tr[2] >= s0) continue;
        out.triangles.push_back({uniqueIdx[tr[0]], uniqueIdx[tr[1]], uniqueIdx[tr[2]]});
    }
    // Canonical order: rotate each triangle to start at its lowest index, then sort.
    for (auto& t : out.triangles) {
        const auto m = std::min_element(t.begin(), t.end()) - t.begin();
        std::rotate(t.begin(), t.begin() + m, t.end());
    }
    std::sort(out.triangles.begin(), out.triangles.end());
    return out;
}

}  // namespace strata

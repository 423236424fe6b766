#include <map>

#include "strata/geometry/triangulation.hpp"

namespace strata {

TriangleLocator::TriangleLocator(const Triangulation& t) : tri_(&t), neighbors_(t.triangles.size(), {-1, -1, -1}) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<std::size_t, int>> edges;
    for (std::size_t i = 0; i < t.triangles.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            const auto a = t.triangles[i][static_cast<std::size_t>((k + 1) % 3)];
            const auto b = t.triangles[i][static_cast<std::size_t>((k + 2) % 3)];
            auto it = edges.find({b, a});
            if (it != edges.end()) {
                neighbors_[i][static_cast<std::size_t>(k)] = static_cast<std::int64_t>(it->second.first);
                neighbors_[it->second.first][static_cast<std::size_t>(it->second.second)] = static_cast<std::int64_t>(i);
                edges.erase(it);
            } else {
                edges[{a, b}] = {i, k};
            }
        }
    }
}

namespace {

bool insideTriangle(const Triangulation& t, std::size_t i, Vec2 q) {
    const auto& tr = t.triangles[i];
    const Vec2 a = t.points[tr[0]], b = t.points[tr[1]], c = t.points[tr[2]];
    const double area = cross(b - a, c - a);
    const double eps = -1e-12 * std::abs(area);
    return cross(b - a, q - a) >= eps && cross(c - b, q - b) >= eps && cross(a - c, q - c) >= eps;
}

}  // namespace

std::optional<std::size_t> TriangleLocator::locate(Vec2 q, std::size_t& hint) const {
    const auto& t = *tri_;
    if (t.triangles.empty()) return std::nullopt;
    std::size_t cur = hint < t.triangles.size() ? hint : 0;
    for (std::size_t steps = 0; steps <= t.triangles.size(); ++steps) {
        const auto& tr = t.triangles[cur];
        int exit = -1;
        for (int k = 0; k < 3; ++k) {
            const Vec2 a = t.points[tr[static_cast<std::size_t>((k + 1) % 3)]];
            const Vec2 b = t.points[tr[static_cast<std::size_t>((k + 2) % 3)]];
            if (cross(b - a, q - a) < 0.0) {
                exit = k;
                break;
            }
        }
        if (exit < 0) {
            hint = cur;
            return cur;
        }
        const auto n = neighbors_[cur][static_cast<std::size_t>(exit)];
        if (n < 0) break;  // walked off the hull; confirm with a scan
        cur = static_cast<std::size_t>(n);
    }
    for (std::size_t i = 0; i < t.triangles.size(); ++i) {
        if (insideTriangle(t, i, q)) {
            hint = i;
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<double>> interpolateBarycentric(const TriangleLocator& locator,
                                                          std::span<const double> values, std::size_t k,
                                                          Vec2 q, std::size_t& hint) {
    const auto found = locator.locate(q, hint);
    if (!found) return std::nullopt;
    const Triangulation& t = locator.triangulation();
    const auto& tr = t.triangles[*found];
    const Vec2 a = t.points[tr[0]], b = t.points[tr[1]], c = t.points[tr[2]];
    const double denom = cross(b - a, c - a);
    const double wb = cross(q - a, c - a) / denom;
    const double wc = cross(b - a, q - a) / denom;
    const double wa = 1.0 - wb - wc;
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        out[j] = wa * values[tr[0] * k + j] + wb * values[tr[1] * k + j] + wc * values[tr[2] * k + j];
    }
    return out;
}

std::optional<std::vector<double>> interpolateBarycentric(const Triangulation& t, std::span<const double> values,
                                                          std::size_t k, Vec2 q) {
    TriangleLocator locator(t);
    std::size_t hint = 0;
    return interpolateBarycentric(locator, values, k, q, hint);
}

}  // namespace strata

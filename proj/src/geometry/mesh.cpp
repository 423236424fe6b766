#include "strata/geometry/mesh.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "strata/errors.hpp"

namespace strata {

bool Mesh::isValid() const {
    if (!uvs.empty() && uvs.size() != positions.size()) return false;
    if (!normals.empty() && normals.size() != positions.size()) return false;
    const std::size_t stride = topology == Topology::triangles ? 3 : 2;
    if (indices.size() % stride != 0) return false;
    for (auto i : indices) {
        if (i >= positions.size()) return false;
    }
    return true;
}

Mesh unitDiscMesh() {
    Mesh m;
    m.positions = {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}};
    m.uvs = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    m.normals.assign(4, Vec3f{0, 0, 1});
    m.indices = {0, 1, 2, 0, 2, 3};
    return m;
}

namespace {

// Appends a planar quad (a, b, c, d counter-clockwise seen from outside).
void addQuad(Mesh& m, Vec3f a, Vec3f b, Vec3f c, Vec3f d, Vec3f normal) {
    const auto base = static_cast<std::uint32_t>(m.positions.size());
    m.positions.insert(m.positions.end(), {a, b, c, d});
    m.uvs.insert(m.uvs.end(), {Vec2f{0, 0}, Vec2f{1, 0}, Vec2f{1, 1}, Vec2f{0, 1}});
    m.normals.insert(m.normals.end(), 4, normal);
    m.indices.insert(m.indices.end(), {base, base + 1, base + 2, base, base + 2, base + 3});
}

void addTriangle(Mesh& m, Vec3f a, Vec3f b, Vec3f c) {
    const Vec3f n = cross(b - a, c - a);
    const float len = std::sqrt(dot(n, n));
    const Vec3f unit = len > 0 ? n * (1.0f / len) : Vec3f{0, 0, 1};
    const auto base = static_cast<std::uint32_t>(m.positions.size());
    m.positions.insert(m.positions.end(), {a, b, c});
    m.uvs.insert(m.uvs.end(), {Vec2f{0, 0}, Vec2f{1, 0}, Vec2f{0, 1}});
    m.normals.insert(m.normals.end(), 3, unit);
    m.indices.insert(m.indices.end(), {base, base + 1, base + 2});
}

// Axis-aligned box [lo, hi] with outward faces.
void addBox(Mesh& m, Vec3f lo, Vec3f hi) {
    const Vec3f p000{lo.x, lo.y, lo.z}, p100{hi.x, lo.y, lo.z}, p110{hi.x, hi.y, lo.z}, p010{lo.x, hi.y, lo.z};
    const Vec3f p001{lo.x, lo.y, hi.z}, p101{hi.x, lo.y, hi.z}, p111{hi.x, hi.y, hi.z}, p011{lo.x, hi.y, hi.z};
    addQuad(m, p000, p010, p110, p100, {0, 0, -1});  // bottom
    addQuad(m, p001, p101, p111, p011, {0, 0, 1});   // top
    addQuad(m, p000, p100, p101, p001, {0, -1, 0});  // y min
    addQuad(m, p010, p011, p111, p110, {0, 1, 0});   // y max
    addQuad(m, p000, p001, p011, p010, {-1, 0, 0});  // x min
    addQuad(m, p100, p110, p111, p101, {1, 0, 0});   // x max
}

}  // namespace

Mesh unitCuboidMesh() {
    Mesh m;
    addBox(m, {0, 0, 0}, {1, 1, 1});
    return m;
}

Mesh arrowMesh() {
    Mesh m;
    constexpr float w = kArrowShaftHalfWidth;
    addBox(m, {0, -w, -w}, {kArrowHeadStart, w, w});
    constexpr float h = 0.25f;
    const Vec3f tip{1, 0, 0};
    const Vec3f a{kArrowHeadStart, -h, -h}, b{kArrowHeadStart, h, -h}, c{kArrowHeadStart, h, h},
        d{kArrowHeadStart, -h, h};
    addTriangle(m, a, b, tip);
    addTriangle(m, b, c, tip);
    addTriangle(m, c, d, tip);
    addTriangle(m, d, a, tip);
    addTriangle(m, a, d, c);  // base, facing -x
    addTriangle(m, a, c, b);
    return m;
}

Mesh pickingConeMesh(int segments) {
    if (segments < 8) throw RangeError("pickingConeMesh: segments must be >= 8");
    Mesh m;
    m.positions.push_back({0, 0, 0});
    m.uvs.push_back({0, 0});
    for (int i = 0; i < segments; ++i) {
        const double a = 2.0 * std::numbers::pi * i / segments;
        const Vec3f p{static_cast<float>(std::cos(a)), static_cast<float>(std::sin(a)), 1.0f};
        m.positions.push_back(p);
        m.uvs.push_back({p.x, p.y});
    }
    for (int i = 0; i < segments; ++i) {
        const auto a = static_cast<std::uint32_t>(1 + i);
        const auto b = static_cast<std::uint32_t>(1 + (i + 1) % segments);
        // Counter-clockwise seen from the apex side (looking down +z).
        m.indices.insert(m.indices.end(), {0u, a, b});
    }
    return m;
}

Mesh instancedTriangleMesh() {
    Mesh m;
    m.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.uvs = {{0, 0}, {1, 0}, {2, 0}};  // uv.x selects the instance corner
    m.indices = {0, 1, 2};
    return m;
}

Mesh segmentQuadMesh() {
    Mesh m;
    m.positions = {{0, -1, 0}, {1, -1, 0}, {1, 1, 0}, {0, 1, 0}};
    m.uvs = {{0, -1}, {1, -1}, {1, 1}, {0, 1}};
    m.indices = {0, 1, 2, 0, 2, 3};
    return m;
}

double signedVolume(const Mesh& mesh) {
    double v = 0.0;
    for (std::size_t t = 0; t + 2 < mesh.indices.size(); t += 3) {
        const auto& a = mesh.positions[mesh.indices[t]];
        const auto& b = mesh.positions[mesh.indices[t + 1]];
        const auto& c = mesh.positions[mesh.indices[t + 2]];
        const Vec3 da{a.x, a.y, a.z}, db{b.x, b.y, b.z}, dc{c.x, c.y, c.z};
        v += dot(da, cross(db, dc));
    }
    return v / 6.0;
}

}  // namespace strata

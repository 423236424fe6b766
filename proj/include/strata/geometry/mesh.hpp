#pragma once

#include <cstdint>
#include <vector>

#include "strata/geomath/linalg.hpp"

namespace strata {

enum class Topology { triangles, lines };

/// A primitive model: the geometry a layer draws once per instance.
struct Mesh {
    std::vector<Vec3f> positions;
    std::vector<Vec2f> uvs;      // empty or one per position
    std::vector<Vec3f> normals;  // empty or one per position
    std::vector<std::uint32_t> indices;
    Topology topology = Topology::triangles;

    [[nodiscard]] std::size_t vertexCount() const { return positions.size(); }
    [[nodiscard]] std::size_t triangleCount() const {
        return topology == Topology::triangles ? indices.size() / 3 : 0;
    }
    /// Index bounds, triangle-count divisibility and attribute lengths.
    [[nodiscard]] bool isValid() const;
};

/// Quad [-1,1]^2 with uv == xy. Fragments with |uv| > 1 are discarded by the disc shader.
Mesh unitDiscMesh();

/// Unit cube [0,1]^3, 24 vertices (flat face normals), 12 outward triangles.
Mesh unitCuboidMesh();

/// Arrow along +x from 0 to 1: a square shaft box (half-width kArrowShaftHalfWidth) up to
/// kArrowHeadStart, then a square pyramid head with base half-width 0.25.
Mesh arrowMesh();
inline constexpr std::size_t kArrowTriangleCount = 18;
inline constexpr float kArrowShaftHalfWidth = 0.06f;
inline constexpr float kArrowHeadStart = 0.65f;

/// Cone: apex at the origin, base ring of radius 1 at z = 1. Sides only.
Mesh pickingConeMesh(int segments);

/// Single triangle whose vertex i has uv selecting barycentric corner i; used for polygon fills.
Mesh instancedTriangleMesh();

/// Line-segment quad: x in {0,1} along the segment, y in {-1,1} across it.
Mesh segmentQuadMesh();

/// Signed volume via the divergence theorem (sum over triangles of v0 . (v1 x v2) / 6).
double signedVolume(const Mesh& mesh);

}  // namespace strata

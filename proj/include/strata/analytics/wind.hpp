#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "strata/core/data_table.hpp"
#include "strata/geomath/linalg.hpp"
#include "strata/geomath/mercator.hpp"

namespace strata {

/// Regular grid of interpolated station velocities over a world-space rectangle.
/// Velocity components: vx east, vy north, vz up, in the station data's units.
struct FieldGrid {
    WorldPoint boundsMin;
    WorldPoint boundsMax;
    int nx = 2;
    int ny = 2;
    std::vector<Vec3> velocities;     ///< row-major, j * nx + i; j grows south
    std::vector<std::uint8_t> valid;  ///< node inside the station hull

    [[nodiscard]] std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    [[nodiscard]] WorldPoint node(int i, int j) const;
    [[nodiscard]] bool contains(double x, double y) const;
    /// Bilinear sample over the nodes; nullopt outside the bounds.
    [[nodiscard]] std::optional<Vec3> sample(double x, double y) const;
    /// Validity of the node nearest to (x, y); false outside the bounds.
    [[nodiscard]] bool validAt(double x, double y) const;
};

/// Stations need numeric columns lng, lat, vx, vy, vz. The grid spans `bounds` (default:
/// the stations' bounding box in world units). Throws GeometryError for degenerate stations.
FieldGrid buildWindField(const DataTable& stations, int nx, int ny,
                         std::optional<std::pair<WorldPoint, WorldPoint>> bounds = std::nullopt);

/// One row per node: x, y (world), vx, vy, vz, speed, valid.
DataRef fieldToTable(const FieldGrid& field);

struct ParticleState {
    std::vector<Vec2> positions;  ///< world units
    std::vector<int> ages;
    int maxAge = 60;
    std::uint64_t seed = 0;
    std::uint64_t tick = 0;

    [[nodiscard]] std::size_t liveCount() const { return positions.size(); }
};

/// Deterministic in-bounds position on a valid node region for (seed, index, tick).
Vec2 respawnPosition(const FieldGrid& field, std::uint64_t seed, std::uint64_t index, std::uint64_t tick);

ParticleState seedParticles(const FieldGrid& field, std::size_t count, int maxAge, std::uint64_t seed);

/// Moves each particle by the sampled horizontal velocity (north is -y in world units) times
/// dt * speedScale; ages by one; respawns particles that are too old, leave the bounds or
/// land next to an invalid node.
ParticleState advectParticles(const ParticleState& state, const FieldGrid& field, double dt, double speedScale);

/// Writes the particle positions and ages into columns x, y, age (resized as needed).
void writeParticles(const ParticleState& state, DataTable& table);

}  // namespace strata

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "strata/core/accessor.hpp"
#include "strata/core/attribute.hpp"
#include "strata/geomath/mercator.hpp"

namespace strata {

struct GridAggregation {
    WorldPoint originWorld;
    double cellSizeWorld = 1.0;
    std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> cells;  ///< (i, j) -> count
    std::uint64_t maxCount = 0;
    std::uint64_t skippedRows = 0;  ///< rows with unusable positions
};

/// Bins positions (through `position`, interpreted per `coords`) into square cells:
/// index = floor((p - origin) / cellSize), so boundary points go to the higher cell.
/// Without an origin, the bounding-box minimum snapped down to a cell multiple is used.
GridAggregation aggregateGrid(const DataTable& table, const Accessor& position, double cellSizeWorld,
                              std::optional<WorldPoint> originWorld = std::nullopt,
                              CoordinateSystem coords = CoordinateSystem::lnglat);

using RampStop = std::array<double, 3>;

/// Yellow-orange-red ramp used for counts.
inline const std::vector<RampStop> kYlOrRd = {
    {255, 255, 178}, {254, 217, 118}, {254, 178, 76}, {253, 141, 60}, {240, 59, 32}, {189, 0, 38}};

/// Linear interpolation over evenly spaced stops; t is clamped to [0, 1].
RampStop rampColor(const std::vector<RampStop>& stops, double t);

}  // namespace strata

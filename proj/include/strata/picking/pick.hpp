#pragma once

#include <cstddef>
#include <string>

#include "strata/core/engine.hpp"

namespace strata {

struct PickInfo {
    bool found = false;
    std::string layerId;
    std::size_t instanceIndex = 0;
    /// Data row behind the instance (differs from instanceIndex for derived layers).
    std::size_t row = 0;
    int x = 0;
    int y = 0;
};

/// Reads the (2r+1)^2 block around (x, y) from the cached picking pass and returns the hit nearest
/// to the center; ties go to the first pixel in scan order. Throws RangeError outside the viewport.
PickInfo pickAt(Engine& engine, int x, int y, int radius = 0);

/// Invisible cone layer over `data` positions: each pixel within maxRadiusPixels of a point picks the
/// nearest point.
LayerSpec voronoiPickLayer(const std::string& id, DataRef data, Accessor position, double maxRadiusPixels);

/// Cone layer that draws from the position buffer of layer `source` instead of filling its own.
LayerSpec voronoiPickLayer(const std::string& id, const LayerSpec& source, double maxRadiusPixels);

}  // namespace strata

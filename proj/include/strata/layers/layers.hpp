#pragma once

#include "strata/core/layer_type.hpp"

namespace strata {

/// Registers scatterplot, line, solid-polygon, extruded-grid, icon, decorator, label,
/// vector-field, particle, voronoi-picking and the geojson, wind and graph composites.
void registerBuiltinLayers(LayerRegistry& registry);

/// A process-wide registry with the built-in layer types.
const LayerRegistry& builtinLayers();

}  // namespace strata

#include "strata/layers/layers.hpp"

#include "types.hpp"

namespace strata {

void registerBuiltinLayers(LayerRegistry& registry) {
    registry.add(layers::makeScatterplotLayer());
    registry.add(layers::makeLineLayer());
    registry.add(layers::makeSolidPolygonLayer());
    registry.add(layers::makeParticleLayer());
    registry.add(layers::makeVoronoiPickingLayer());
    registry.add(layers::makeExtrudedGridLayer());
    registry.add(layers::makeIconLayer());
    registry.add(layers::makeDecoratorLayer());
    registry.add(layers::makeLabelLayer());
    registry.add(layers::makeVectorFieldLayer());
    registry.add(layers::makeGeoJsonLayer());
    registry.add(layers::makeWindLayer());
    registry.add(layers::makeGraphLayer());
}

const LayerRegistry& builtinLayers() {
    static const LayerRegistry registry = [] {
        LayerRegistry r;
        registerBuiltinLayers(r);
        return r;
    }();
    return registry;
}

}  // namespace strata

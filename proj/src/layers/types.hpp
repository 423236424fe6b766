#pragma once

#include <memory>

#include "strata/core/layer_type.hpp"

namespace strata::layers {

std::unique_ptr<LayerType> makeScatterplotLayer();
std::unique_ptr<LayerType> makeLineLayer();
std::unique_ptr<LayerType> makeSolidPolygonLayer();
std::unique_ptr<LayerType> makeParticleLayer();
std::unique_ptr<LayerType> makeVoronoiPickingLayer();
std::unique_ptr<LayerType> makeExtrudedGridLayer();
std::unique_ptr<LayerType> makeIconLayer();
std::unique_ptr<LayerType> makeDecoratorLayer();
std::unique_ptr<LayerType> makeLabelLayer();
std::unique_ptr<LayerType> makeVectorFieldLayer();
std::unique_ptr<LayerType> makeGeoJsonLayer();
std::unique_ptr<LayerType> makeWindLayer();
std::unique_ptr<LayerType> makeGraphLayer();

}  // namespace strata::layers

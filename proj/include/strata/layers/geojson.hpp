#pragma once

#include <memory>
#include <string>
#include <vector>

#include "strata/core/data_table.hpp"
#include "strata/core/value.hpp"
#include "strata/geomath/mercator.hpp"

namespace strata {

struct Geometry {
    enum class Type { point, multiPoint, lineString, multiLineString, polygon, multiPolygon, unsupported };
    Type type = Type::unsupported;
    std::string typeName;
    /// points: one single-position ring per point; lines: one ring per line;
    /// polygons: parts[k] is one polygon whose rings are outer then holes.
    std::vector<std::vector<std::vector<LngLat>>> parts;
};

struct Feature {
    Geometry geometry;
    ValueMap properties;  ///< scalar properties only
};

struct FeatureCollection {
    std::vector<Feature> features;
};

/// A DataTable with one row per feature that carries the collection as payload.
DataRef featureTable(std::shared_ptr<const FeatureCollection> features);
std::shared_ptr<const FeatureCollection> featuresOf(const DataTable& table);

}  // namespace strata

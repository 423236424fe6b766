#pragma once

#include <memory>
#include <string>

#include "strata/layers/geojson.hpp"

namespace strata {

/// Parses a FeatureCollection, a Feature, or a bare geometry (wrapped as one feature).
/// Syntax errors throw IngestError with "source:line:column"; structural errors name the JSON pointer.
std::shared_ptr<FeatureCollection> parseGeoJson(const std::string& text, const std::string& source = "<geojson>");
std::shared_ptr<FeatureCollection> ingestGeoJson(const std::string& path);

}  // namespace strata

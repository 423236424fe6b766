#pragma once

#include "strata/errors.hpp"

namespace strata {

/// Web Mercator common space: the globe is 512 x 512 units at zoom 0,
/// x grows east, y grows south.
inline constexpr double kWorldSize = 512.0;
/// Latitudes must lie strictly inside (-kMaxLatitude, kMaxLatitude).
inline constexpr double kMaxLatitude = 85.051129;
inline constexpr double kEarthCircumferenceMeters = 40075016.686;

struct LngLat {
    double longitude = 0.0;
    double latitude = 0.0;
    friend constexpr bool operator==(const LngLat&, const LngLat&) = default;
};

struct WorldPoint {
    double x = 0.0;
    double y = 0.0;
    friend constexpr bool operator==(const WorldPoint&, const WorldPoint&) = default;
};

/// Throws DomainError for non-finite values, |longitude| > 180 or latitude outside the band.
void validateLngLat(const LngLat& p);

WorldPoint lngLatToWorld(const LngLat& p);
LngLat worldToLngLat(const WorldPoint& w);

/// Common-space units per meter at a latitude (zoom 0).
double worldUnitsPerMeter(double latitude);

}  // namespace strata

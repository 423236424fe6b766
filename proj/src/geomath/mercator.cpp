#include "strata/geomath/mercator.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace strata {

namespace {
constexpr double kPi = std::numbers::pi;
// Latitudes in the open band can land a few 1e-6 units past the world edge.
constexpr double kWorldEdgeSlack = 1e-5;
}  // namespace

void validateLngLat(const LngLat& p) {
    if (!std::isfinite(p.longitude) || !std::isfinite(p.latitude)) {
        throw DomainError("non-finite coordinate");
    }
    if (p.longitude < -180.0 || p.longitude > 180.0) {
        throw DomainError("longitude out of range: " + std::to_string(p.longitude));
    }
    if (!(p.latitude > -kMaxLatitude && p.latitude < kMaxLatitude)) {
        throw DomainError("latitude outside Mercator band: " + std::to_string(p.latitude));
    }
}

WorldPoint lngLatToWorld(const LngLat& p) {
    validateLngLat(p);
    const double x = kWorldSize * (0.5 + p.longitude / 360.0);
    const double y = kWorldSize * (0.5 - std::log(std::tan(kPi / 4.0 + p.latitude * kPi / 360.0)) / (2.0 * kPi));
    return {x, y};
}

LngLat worldToLngLat(const WorldPoint& w) {
    if (!std::isfinite(w.x) || !std::isfinite(w.y) || w.x < 0.0 || w.x > kWorldSize ||
        w.y < -kWorldEdgeSlack || w.y > kWorldSize + kWorldEdgeSlack) {
        throw DomainError("world point outside [0, 512]^2");
    }
    const double lng = 360.0 * (w.x / kWorldSize - 0.5);
    const double lat = (2.0 * std::atan(std::exp((0.5 - w.y / kWorldSize) * 2.0 * kPi)) - kPi / 2.0) * 180.0 / kPi;
    return {lng, lat};
}

double worldUnitsPerMeter(double latitude) {
    return kWorldSize / (kEarthCircumferenceMeters * std::cos(latitude * kPi / 180.0));
}

}  // namespace strata

#pragma once

#include "strata/geomath/double_float.hpp"
#include "strata/geomath/linalg.hpp"
#include "strata/geomath/mercator.hpp"

namespace strata {

/// Perspective map camera. Angles are in degrees, sizes in pixels.
struct Viewport {
    LngLat center;
    double zoom = 0.0;
    double pitch = 0.0;
    double bearing = 0.0;
    int width = 1;
    int height = 1;

    /// Throws DomainError when any field is out of range.
    void validate() const;

    [[nodiscard]] double scale() const;
    [[nodiscard]] WorldPoint centerWorld() const { return lngLatToWorld(center); }
    /// Distance from the camera to the look-at point, in pixels.
    [[nodiscard]] double cameraDistance() const { return 1.5 * height; }

    friend bool operator==(const Viewport&, const Viewport&) = default;
};

/// Vertical field of view: 2 * atan(1/3), i.e. a camera 1.5 heights away sees one height.
double verticalFov();

/// Maps camera-relative pixel offsets (x east, y south, z up; all in pixels) to clip space.
Mat4 buildOffsetViewProjection(const Viewport& v);

/// Maps common-space world coordinates (z in world units) to clip space.
Mat4 buildViewProjection(const Viewport& v);

struct ScreenPosition {
    double x = 0.0;      ///< pixels, right
    double y = 0.0;      ///< pixels, down
    double depth = 0.0;  ///< window depth in [0, 1]
    bool inFrustum = true;
};

ScreenPosition clipToScreen(const Viewport& v, const Vec4& clip);
ScreenPosition projectWorldToScreen(const Viewport& v, const WorldPoint& w, double z = 0.0);
ScreenPosition projectToScreen(const Viewport& v, const LngLat& p);

/// Inverse of the ground-plane projection (z = 0). Returns false when the ray misses the plane.
bool unprojectToWorld(const Viewport& v, double px, double py, WorldPoint& out);

/// Camera parameters in the precision a 32-bit shader sees them.
struct ShaderProjection {
    DoubleFloat centerX;
    DoubleFloat centerY;
    float scale = 1.0f;
    Mat4f offsetViewProjection;  ///< pixel offsets -> clip
    Mat4f worldViewProjection;   ///< world -> clip, narrowed to float (the 32-bit-only path)
    float viewportWidth = 1.0f;
    float viewportHeight = 1.0f;

    static ShaderProjection fromViewport(const Viewport& v);

    /// df64 path: subtract the camera center in double-float, narrow, then scale.
    [[nodiscard]] Vec4f clipFromWorld(DoubleFloat x, DoubleFloat y, float zWorld = 0.0f) const;
    /// Same, with an extra world-space offset (small, float) added after centering.
    [[nodiscard]] Vec4f clipFromWorld(DoubleFloat x, DoubleFloat y, Vec3f localWorld) const;
    /// 32-bit-only path: float world coordinates times a float matrix that contains the translation.
    [[nodiscard]] Vec4f clipFromWorldFp32(float x, float y, float zWorld = 0.0f) const;
};

/// Screen position from a float clip coordinate, evaluated in float.
Vec3f clipToScreenF(const ShaderProjection& p, Vec4f clip);

}  // namespace strata

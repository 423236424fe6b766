#include "strata/geomath/viewport.hpp"

#include <cmath>
#include <numbers>

namespace strata {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kNearFactor = 0.15;
constexpr double kFarFactor = 15.0;
}  // namespace

void Viewport::validate() const {
    validateLngLat(center);
    if (!std::isfinite(zoom) || zoom < 0.0) throw DomainError("viewport zoom must be finite and >= 0");
    if (!std::isfinite(pitch) || pitch < 0.0 || pitch > 60.0) throw DomainError("viewport pitch must be in [0, 60]");
    if (!std::isfinite(bearing) || bearing < 0.0 || bearing >= 360.0) {
        throw DomainError("viewport bearing must be in [0, 360)");
    }
    if (width <= 0 || height <= 0) throw DomainError("viewport size must be positive");
}

double Viewport::scale() const { return std::exp2(zoom); }

double verticalFov() { return 2.0 * std::atan(1.0 / 3.0); }

Mat4 buildOffsetViewProjection(const Viewport& v) {
    const double h = static_cast<double>(v.height);
    const double aspect = static_cast<double>(v.width) / h;
    const Mat4 projection = Mat4::perspective(verticalFov(), aspect, kNearFactor * h, kFarFactor * h);
    const Mat4 view = Mat4::translation(0.0, 0.0, -v.cameraDistance()) * Mat4::rotationX(-v.pitch * kDegToRad) *
                      Mat4::rotationZ(-v.bearing * kDegToRad) * Mat4::scaling(1.0, -1.0, 1.0);
    return projection * view;
}

Mat4 buildViewProjection(const Viewport& v) {
    const WorldPoint c = v.centerWorld();
    const double s = v.scale();
    return buildOffsetViewProjection(v) * Mat4::scaling(s, s, s) * Mat4::translation(-c.x, -c.y, 0.0);
}

ScreenPosition clipToScreen(const Viewport& v, const Vec4& clip) {
    ScreenPosition out;
    out.inFrustum = clip.w > 0.0 && std::fabs(clip.x) <= clip.w && std::fabs(clip.y) <= clip.w &&
                    std::fabs(clip.z) <= clip.w;
    const double nx = clip.x / clip.w;
    const double ny = clip.y / clip.w;
    const double nz = clip.z / clip.w;
    out.x = (nx + 1.0) * 0.5 * v.width;
    out.y = (1.0 - ny) * 0.5 * v.height;
    out.depth = (nz + 1.0) * 0.5;
    return out;
}

ScreenPosition projectWorldToScreen(const Viewport& v, const WorldPoint& w, double z) {
    return clipToScreen(v, buildViewProjection(v) * Vec4{w.x, w.y, z, 1.0});
}

ScreenPosition projectToScreen(const Viewport& v, const LngLat& p) {
    return projectWorldToScreen(v, lngLatToWorld(p));
}

bool unprojectToWorld(const Viewport& v, double px, double py, WorldPoint& out) {
    Mat4 inverse;
    if (!invert(buildViewProjection(v), inverse)) return false;
    const double nx = 2.0 * px / v.width - 1.0;
    const double ny = 1.0 - 2.0 * py / v.height;
    const Vec4 a = inverse * Vec4{nx, ny, -1.0, 1.0};
    const Vec4 b = inverse * Vec4{nx, ny, 1.0, 1.0};
    const Vec3 p0{a.x / a.w, a.y / a.w, a.z / a.w};
    const Vec3 p1{b.x / b.w, b.y / b.w, b.z / b.w};
    const double dz = p1.z - p0.z;
    if (dz == 0.0) return false;
    const double t = -p0.z / dz;
    if (t < 0.0) return false;
    out = {p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
    return true;
}

ShaderProjection ShaderProjection::fromViewport(const Viewport& v) {
    ShaderProjection p;
    const WorldPoint c = v.centerWorld();
    p.centerX = splitDouble(c.x);
    p.centerY = splitDouble(c.y);
    p.scale = static_cast<float>(v.scale());
    p.offsetViewProjection = buildOffsetViewProjection(v).cast<float>();
    p.worldViewProjection = buildViewProjection(v).cast<float>();
    p.viewportWidth = static_cast<float>(v.width);
    p.viewportHeight = static_cast<float>(v.height);
    return p;
}

Vec4f ShaderProjection::clipFromWorld(DoubleFloat x, DoubleFloat y, float zWorld) const {
    return clipFromWorld(x, y, Vec3f{0.0f, 0.0f, zWorld});
}

Vec4f ShaderProjection::clipFromWorld(DoubleFloat x, DoubleFloat y, Vec3f localWorld) const {
    const float dx = (narrow(dfSub(x, centerX)) + localWorld.x) * scale;
    const float dy = (narrow(dfSub(y, centerY)) + localWorld.y) * scale;
    const float dz = localWorld.z * scale;
    return offsetViewProjection * Vec4f{dx, dy, dz, 1.0f};
}

Vec4f ShaderProjection::clipFromWorldFp32(float x, float y, float zWorld) const {
    return worldViewProjection * Vec4f{x, y, zWorld, 1.0f};
}

Vec3f clipToScreenF(const ShaderProjection& p, Vec4f clip) {
    const float nx = clip.x / clip.w;
    const float ny = clip.y / clip.w;
    const float nz = clip.z / clip.w;
    return {(nx + 1.0f) * 0.5f * p.viewportWidth, (1.0f - ny) * 0.5f * p.viewportHeight, (nz + 1.0f) * 0.5f};
}

}  // namespace strata

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "strata/core/attribute.hpp"
#include "strata/core/layer_type.hpp"
#include "strata/errors.hpp"
#include "strata/gpu/device.hpp"

namespace strata::layers {

inline AttributeDescriptor positionAttr(const std::string& name, std::vector<std::string> defaultColumns = {}) {
    AttributeDescriptor d;
    d.name = name;
    d.components = 3;
    d.position = true;
    d.df64 = true;
    d.defaults = {0, 0, 0};
    if (!defaultColumns.empty()) d.defaultAccessor = Accessor::fromColumns(std::move(defaultColumns));
    d.propDependencies = {"coordinateSystem"};
    return d;
}

/// World coordinates already in common space (derived tables): split to df64, no projection.
inline AttributeDescriptor worldAttr(const std::string& name, std::vector<std::string> columns) {
    AttributeDescriptor d;
    d.name = name;
    d.components = static_cast<int>(columns.size());
    d.df64 = true;
    d.defaults.assign(columns.size(), 0.0);
    d.defaultAccessor = Accessor::fromColumns(std::move(columns));
    return d;
}

inline AttributeDescriptor colorAttr(const std::string& name, std::vector<double> fallback) {
    AttributeDescriptor d;
    d.name = name;
    d.components = 4;
    d.defaults = {0, 0, 0, 255};
    d.defaultAccessor = Accessor::fromConstant(std::move(fallback));
    return d;
}

inline AttributeDescriptor scalarAttr(const std::string& name, double fallback) {
    AttributeDescriptor d;
    d.name = name;
    d.components = 1;
    d.defaults = {fallback};
    d.defaultAccessor = Accessor::fromConstant({fallback});
    return d;
}

inline AttributeDescriptor columnsAttr(const std::string& name, std::vector<std::string> columns) {
    AttributeDescriptor d;
    d.name = name;
    d.components = static_cast<int>(columns.size());
    d.defaults.assign(columns.size(), 0.0);
    d.defaultAccessor = Accessor::fromColumns(std::move(columns));
    return d;
}

inline Vec4f projectInstance(const gpu::Uniforms& u, const gpu::BoundAttribute& pos, std::uint32_t instance,
                             Vec3f local = {0, 0, 0}) {
    const DoubleFloat x = pos.getDf(instance, 0);
    const DoubleFloat y = pos.getDf(instance, 1);
    const float z = pos.components > 2 ? pos.get(instance, 2) : 0.0f;
    return u.projection.clipFromWorld(x, y, Vec3f{local.x, local.y, local.z + z});
}

/// Shifts a clip position by a screen offset in pixels (x right, y down).
inline void offsetPixels(Vec4f& clip, float px, float pyDown, const ShaderProjection& p) {
    clip.x += px * 2.0f / p.viewportWidth * clip.w;
    clip.y -= pyDown * 2.0f / p.viewportHeight * clip.w;
}

/// A vertex the rasterizer will reject (beyond the far plane).
inline Vec4f culledVertex() { return {0.0f, 0.0f, 2.0f, 1.0f}; }

inline Vec4f unpackColor(const gpu::BoundAttribute& color, std::uint32_t instance) {
    return {color.get(instance, 0) / 255.0f, color.get(instance, 1) / 255.0f, color.get(instance, 2) / 255.0f,
            color.get(instance, 3) / 255.0f};
}

inline void writeColor(gpu::VertexOutput& out, int at, Vec4f c) {
    out.varyings[static_cast<std::size_t>(at)] = c.x;
    out.varyings[static_cast<std::size_t>(at) + 1] = c.y;
    out.varyings[static_cast<std::size_t>(at) + 2] = c.z;
    out.varyings[static_cast<std::size_t>(at) + 3] = c.w;
}

inline Vec4f readColor(const float* v, int at) { return {v[at], v[at + 1], v[at + 2], v[at + 3]}; }

/// Color prop as 0-255 RGBA (alpha defaults to 255).
inline std::vector<double> colorProp(const ValueMap& props, const std::string& name, std::vector<double> fallback) {
    auto c = propVector(props, name, std::move(fallback));
    if (c.size() == 3) c.push_back(255.0);
    if (c.size() != 4) throw SpecError("prop '" + name + "' must be an RGB or RGBA array");
    return c;
}

inline float pixelsPerMeter(const DrawContext& ctx) {
    return static_cast<float>(worldUnitsPerMeter(ctx.viewport.center.latitude) * ctx.viewport.scale());
}

}  // namespace strata::layers

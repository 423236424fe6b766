#include <algorithm>
#include <limits>

#include "common.hpp"
#include "strata/core/engine.hpp"
#include "strata/geometry/mesh.hpp"
#include "types.hpp"

namespace strata::layers {

namespace {

// attributes: position, radius, fillColor
// params: radiusScale, meters flag, pixels per meter, min px, max px
class ScatterPipeline : public gpu::Pipeline {
public:
    void vertex(const gpu::DrawCommand& cmd, std::uint32_t inst, std::uint32_t v, gpu::VertexOutput& out) const override {
        const auto& u = cmd.uniforms;
        out.clip = projectInstance(u, cmd.attributes[0], inst);
        float r = cmd.attributes[1].get(inst, 0) * u.params[0];
        if (u.params[1] != 0.0f) r *= u.params[2];
        r = std::clamp(r, u.params[3], u.params[4]);
        const Vec2f uv = cmd.mesh->uvs[v];
        offsetPixels(out.clip, uv.x * r, -uv.y * r, u.projection);
        out.varyings[0] = uv.x;
        out.varyings[1] = uv.y;
        writeColor(out, 2, unpackColor(cmd.attributes[2], inst));
    }
    bool fragment(const gpu::DrawCommand&, std::uint32_t, const float* v, Vec4f& rgba) const override {
        if (v[0] * v[0] + v[1] * v[1] > 1.0f) return false;
        rgba = readColor(v, 2);
        return true;
    }
    int varyingCount() const override { return 6; }
};

class ScatterplotLayer : public LayerType {
public:
    std::string name() const override { return "scatterplot"; }
    std::vector<std::string> propNames() const override { return {"radiusScale", "radiusUnits", "radiusMinPixels", "radiusMaxPixels"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override {
        return {positionAttr("position"), scalarAttr("radius", 1.0), colorAttr("fillColor", {0, 0, 0, 255})};
    }
    void draw(DrawContext& ctx) const override {
        static const Mesh mesh = unitDiscMesh();
        static const ScatterPipeline pipeline;
        const auto& p = ctx.layer.spec.props;
        auto& u = ctx.uniforms;
        u.params[0] = static_cast<float>(propNumber(p, "radiusScale", 1.0));
        u.params[1] = propString(p, "radiusUnits", "pixels") == "meters" ? 1.0f : 0.0f;
        u.params[2] = pixelsPerMeter(ctx);
        u.params[3] = static_cast<float>(propNumber(p, "radiusMinPixels", 0.0));
        u.params[4] = static_cast<float>(propNumber(p, "radiusMaxPixels", std::numeric_limits<float>::max()));
        ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(ctx.layer.instanceCount),
                 {ctx.bind("position"), ctx.bind("radius"), ctx.bind("fillColor")});
    }
};

// attributes: sourcePosition, targetPosition, color, width
// params: widthScale, min px
class LinePipeline : public gpu::Pipeline {
public:
    void vertex(const gpu::DrawCommand& cmd, std::uint32_t inst, std::uint32_t v, gpu::VertexOutput& out) const override {
        const auto& u = cmd.uniforms;
        const Vec4f s = projectInstance(u, cmd.attributes[0], inst);
        const Vec4f t = projectInstance(u, cmd.attributes[1], inst);
        writeColor(out, 0, unpackColor(cmd.attributes[2], inst));
        if (s.w <= 1e-6f || t.w <= 1e-6f) {
            out.clip = culledVertex();
            return;
        }
        const Vec2f uv = cmd.mesh->uvs[v];
        const float halfW = 0.5f * std::max(cmd.attributes[3].get(inst, 0) * u.params[0], u.params[1]);
        const float dx = (t.x / t.w - s.x / s.w) * 0.5f * u.projection.viewportWidth;
        const float dy = (t.y / t.w - s.y / s.w) * 0.5f * u.projection.viewportHeight;
        const float len = std::sqrt(dx * dx + dy * dy);
        out.clip = uv.x == 0.0f ? s : t;
        if (len == 0.0f) return;
        const float nx = -dy / len, ny = dx / len;  // y up
        out.clip.x += nx * halfW * uv.y * 2.0f / u.projection.viewportWidth * out.clip.w;
        out.clip.y += ny * halfW * uv.y * 2.0f / u.projection.viewportHeight * out.clip.w;
    }
    bool fragment(const gpu::DrawCommand&, std::uint32_t, const float* v, Vec4f& rgba) const override {
        rgba = readColor(v, 0);
        return true;
    }
    int varyingCount() const override { return 4; }
};

class LineLayer : public LayerType {
public:
    std::string name() const override { return "line"; }
    std::vector<std::string> propNames() const override { return {"widthScale", "widthMinPixels"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override {
        return {positionAttr("sourcePosition"), positionAttr("targetPosition"), colorAttr("color", {0, 0, 0, 255}),
                scalarAttr("width", 1.0)};
    }
    void draw(DrawContext& ctx) const override {
        static const Mesh mesh = segmentQuadMesh();
        static const LinePipeline pipeline;
        ctx.uniforms.params[0] = static_cast<float>(propNumber(ctx.layer.spec.props, "widthScale", 1.0));
        ctx.uniforms.params[1] = static_cast<float>(propNumber(ctx.layer.spec.props, "widthMinPixels", 0.0));
        ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(ctx.layer.instanceCount),
                 {ctx.bind("sourcePosition"), ctx.bind("targetPosition"), ctx.bind("color"), ctx.bind("width")});
    }
};

// attributes: vertexA, vertexB, vertexC, fillColor
class TrianglePipeline : public gpu::Pipeline {
public:
    void vertex(const gpu::DrawCommand& cmd, std::uint32_t inst, std::uint32_t v, gpu::VertexOutput& out) const override {
        const int corner = static_cast<int>(cmd.mesh->uvs[v].x);
        out.clip = projectInstance(cmd.uniforms, cmd.attributes[static_cast<std::size_t>(corner)], inst);
        writeColor(out, 0, unpackColor(cmd.attributes[3], inst));
    }
    bool fragment(const gpu::DrawCommand&, std::uint32_t, const float* v, Vec4f& rgba) const override {
        rgba = readColor(v, 0);
        return true;
    }
    int varyingCount() const override { return 4; }
};

class SolidPolygonLayer : public LayerType {
public:
    std::string name() const override { return "solid-polygon"; }
    std::vector<std::string> propNames() const override { return {}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override {
        return {positionAttr("vertexA"), positionAttr("vertexB"), positionAttr("vertexC"),
                colorAttr("fillColor", {0, 0, 0, 255})};
    }
    void draw(DrawContext& ctx) const override {
        static const Mesh mesh = instancedTriangleMesh();
        static const TrianglePipeline pipeline;
        ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(ctx.layer.instanceCount),
                 {ctx.bind("vertexA"), ctx.bind("vertexB"), ctx.bind("vertexC"), ctx.bind("fillColor")});
    }
};

// attributes: position, age. params: maxAge, radius px, rgba
class ParticlePipeline : public gpu::Pipeline {
public:
    void vertex(const gpu::DrawCommand& cmd, std::uint32_t inst, std::uint32_t v, gpu::VertexOutput& out) const override {
        const auto& u = cmd.uniforms;
        out.clip = projectInstance(u, cmd.attributes[0], inst);
        const Vec2f uv = cmd.mesh->uvs[v];
        offsetPixels(out.clip, uv.x * u.params[1], -uv.y * u.params[1], u.projection);
        out.varyings[0] = uv.x;
        out.varyings[1] = uv.y;
        out.varyings[2] = std::clamp(1.0f - cmd.attributes[1].get(inst, 0) / u.params[0], 0.0f, 1.0f);
    }
    bool fragment(const gpu::DrawCommand& cmd, std::uint32_t, const float* v, Vec4f& rgba) const override {
        if (v[0] * v[0] + v[1] * v[1] > 1.0f) return false;
        const auto& p = cmd.uniforms.params;
        rgba = {p[2], p[3], p[4], p[5] * v[2]};
        return true;
    }
    int varyingCount() const override { return 3; }
};

class ParticleLayer : public LayerType {
public:
    std::string name() const override { return "particle"; }
    std::vector<std::string> propNames() const override { return {"maxAge", "radiusPixels", "color"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override {
        return {positionAttr("position", {"x", "y"}), columnsAttr("age", {"age"})};
    }
    void draw(DrawContext& ctx) const override {
        static const Mesh mesh = unitDiscMesh();
        static const ParticlePipeline pipeline;
        const auto& p = ctx.layer.spec.props;
        auto& u = ctx.uniforms;
        u.params[0] = static_cast<float>(std::max(1.0, propNumber(p, "maxAge", 100.0)));
        u.params[1] = static_cast<float>(propNumber(p, "radiusPixels", 1.5));
        const auto c = colorProp(p, "color", {255, 255, 255, 255});
        for (int i = 0; i < 4; ++i) u.params[static_cast<std::size_t>(2 + i)] = static_cast<float>(c[static_cast<std::size_t>(i)] / 255.0);
        ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(ctx.layer.instanceCount),
                 {ctx.bind("position"), ctx.bind("age")});
    }
};

// Cone apex at the point (window depth 0.999), rim at maxRadius pixels (depth 1.0).
class ConePipeline : public gpu::Pipeline {
public:
    void vertex(const gpu::DrawCommand& cmd, std::uint32_t inst, std::uint32_t v, gpu::VertexOutput& out) const override {
        const auto& u = cmd.uniforms;
        const Vec4f c = projectInstance(u, cmd.attributes[0], inst);
        if (c.w <= 1e-6f) {
            out.clip = culledVertex();
            return;
        }
        const Vec3f p = cmd.mesh->positions[v];
        const float r = u.params[0];
        const float depth = 0.999f + 0.001f * p.z;
        out.clip = {c.x / c.w + p.x * r * 2.0f / u.projection.viewportWidth,
                    c.y / c.w + p.y * r * 2.0f / u.projection.viewportHeight, 2.0f * depth - 1.0f, 1.0f};
    }
    bool fragment(const gpu::DrawCommand&, std::uint32_t, const float*, Vec4f& rgba) const override {
        rgba = {0, 0, 0, 0};
        return true;
    }
    int varyingCount() const override { return 0; }
};

class VoronoiPickingLayer : public LayerType {
public:
    std::string name() const override { return "voronoi-picking"; }
    std::vector<std::string> propNames() const override { return {"maxRadiusPixels", "positionsFrom"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec& spec) const override {
        if (!propString(spec.props, "positionsFrom", "").empty()) return {};
        return {positionAttr("position")};
    }
    void validate(const LayerSpec& spec) const override {
        if (!propString(spec.props, "positionsFrom", "").empty()) return;
        LayerType::validate(spec);
    }
    bool functional() const override { return true; }
    void draw(DrawContext& ctx) const override {
        static const Mesh mesh = pickingConeMesh(64);
        static const ConePipeline pipeline;
        ctx.uniforms.params[0] = static_cast<float>(propNumber(ctx.layer.spec.props, "maxRadiusPixels", 50.0));
        const std::string from = propString(ctx.layer.spec.props, "positionsFrom", "");
        if (from.empty()) {
            ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(ctx.layer.instanceCount), {ctx.bind("position")});
            return;
        }
        const LayerState* source = ctx.engine.findLayer(from);
        if (source == nullptr || !source->ok() || source->attribute("position") == nullptr) return;
        ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(source->instanceCount), {ctx.bind(*source, "position")});
    }
};

}  // namespace

std::unique_ptr<LayerType> makeScatterplotLayer() { return std::make_unique<ScatterplotLayer>(); }
std::unique_ptr<LayerType> makeLineLayer() { return std::make_unique<LineLayer>(); }
std::unique_ptr<LayerType> makeSolidPolygonLayer() { return std::make_unique<SolidPolygonLayer>(); }
std::unique_ptr<LayerType> makeParticleLayer() { return std::make_unique<ParticleLayer>(); }
std::unique_ptr<LayerType> makeVoronoiPickingLayer() { return std::make_unique<VoronoiPickingLayer>(); }

}  // namespace strata::layers

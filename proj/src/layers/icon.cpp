#include "strata/layers/icon.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "common.hpp"
#include "strata/geometry/mesh.hpp"
#include "types.hpp"

namespace strata {

std::array<float, 4> iconUvRect(int index, int rows, int cols) {
    const int row = index / cols;
    const int col = index % cols;
    return {static_cast<float>(col) / static_cast<float>(cols), static_cast<float>(row) / static_cast<float>(rows),
            static_cast<float>(col + 1) / static_cast<float>(cols), static_cast<float>(row + 1) / static_cast<float>(rows)};
}

double pulseScale(double amplitude, double phase) { return 1.0 + (amplitude - 1.0) * (1.0 - std::cos(phase)) / 2.0; }

std::shared_ptr<const gpu::Image> loadImageCached(const std::filesystem::path& path) {
    static std::map<std::filesystem::path, std::shared_ptr<const gpu::Image>> cache;
    const auto key = std::filesystem::weakly_canonical(path);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto img = std::make_shared<const gpu::Image>(gpu::readPng(key));
    cache[key] = img;
    return img;
}

namespace layers {

namespace {

// attributes: position, iconIndex, size, color
// params: sizeScale, rows, cols, pulse factor
class IconPipeline : public gpu::Pipeline {
public:
    void vertex(const gpu::DrawCommand& cmd, std::uint32_t inst, std::uint32_t v, gpu::VertexOutput& out) const override {
        const auto& u = cmd.uniforms;
        out.clip = projectInstance(u, cmd.attributes[0], inst);
        const float half = 0.5f * cmd.attributes[2].get(inst, 0) * u.params[0] * u.params[3];
        const Vec2f uv = cmd.mesh->uvs[v];
        offsetPixels(out.clip, uv.x * half, -uv.y * half, u.projection);
        const auto rect = iconUvRect(static_cast<int>(cmd.attributes[1].get(inst, 0)), static_cast<int>(u.params[1]),
                                     static_cast<int>(u.params[2]));
        const float tx = (uv.x + 1.0f) * 0.5f, ty = (1.0f - uv.y) * 0.5f;
        out.varyings[0] = rect[0] + tx * (rect[2] - rect[0]);
        out.varyings[1] = rect[1] + ty * (rect[3] - rect[1]);
        writeColor(out, 2, unpackColor(cmd.attributes[3], inst));
    }
    bool fragment(const gpu::DrawCommand& cmd, std::uint32_t, const float* v, Vec4f& rgba) const override {
        const Vec4f t = cmd.uniforms.texture->sample(v[0], v[1]);
        const Vec4f tint = readColor(v, 2);
        rgba = {t.x * tint.x, t.y * tint.y, t.z * tint.z, t.w * tint.w};
        return rgba.w >= 0.05f;
    }
    int varyingCount() const override { return 6; }
};

class IconLayer : public LayerType {
public:
    std::string name() const override { return "icon"; }
    std::vector<std::string> propNames() const override { return {"atlas", "atlasRows", "atlasCols", "sizeScale"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec& spec) const override {
        const int cells = atlasRows(spec) * atlasCols(spec);
        AttributeDescriptor index = scalarAttr("iconIndex", 0.0);
        index.propDependencies = {"atlasRows", "atlasCols"};
        index.sanitizeTally = "iconIndexOutOfRange";
        index.sanitize = [cells](std::span<double> v) {
            const double i = std::floor(v[0]);
            if (std::isfinite(v[0]) && i >= 0 && i < cells) {
                v[0] = i;
                return true;
            }
            v[0] = 0.0;
            return false;
        };
        return {positionAttr("position"), index, scalarAttr("size", 24.0), colorAttr("color", {255, 255, 255, 255})};
    }
    void validate(const LayerSpec& spec) const override {
        LayerType::validate(spec);
        if (propString(spec.props, "atlas", "").empty()) throw SpecError("layer '" + spec.id + "' needs an 'atlas' image");
        if (atlasRows(spec) < 1 || atlasCols(spec) < 1) throw SpecError("atlasRows and atlasCols must be >= 1");
    }
    void prepare(LayerState& state, gpu::Device& device) const override {
        for (auto t : state.textures) device.releaseTexture(t);
        state.textures.clear();
        const auto img = loadImageCached(propString(state.spec.props, "atlas", ""));
        state.textures.push_back(device.createTexture(*img));
    }
    void draw(DrawContext& ctx) const override {
        static const Mesh mesh = unitDiscMesh();
        static const IconPipeline pipeline;
        const auto& p = ctx.layer.spec.props;
        auto& u = ctx.uniforms;
        u.params[0] = static_cast<float>(propNumber(p, "sizeScale", 1.0));
        u.params[1] = static_cast<float>(atlasRows(ctx.layer.spec));
        u.params[2] = static_cast<float>(atlasCols(ctx.layer.spec));
        u.params[3] = static_cast<float>(sizeFactor(ctx));
        u.texture = &ctx.device.texture(ctx.layer.textures.at(0));
        ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(ctx.layer.instanceCount),
                 {ctx.bind("position"), ctx.bind("iconIndex"), ctx.bind("size"), ctx.bind("color")});
    }

protected:
    virtual double sizeFactor(const DrawContext&) const { return 1.0; }

private:
    static int atlasRows(const LayerSpec& s) { return static_cast<int>(propNumber(s.props, "atlasRows", 1)); }
    static int atlasCols(const LayerSpec& s) { return static_cast<int>(propNumber(s.props, "atlasCols", 1)); }
};

/// Icon layer whose size pulses with the frame time; the phase never touches attribute buffers.
class DecoratorLayer : public IconLayer {
public:
    std::string name() const override { return "decorator"; }
    std::vector<std::string> propNames() const override { return {"atlas", "atlasRows", "atlasCols", "sizeScale", "pulseAmplitude", "pulsePeriod", "phase"}; }

protected:
    double sizeFactor(const DrawContext& ctx) const override {
        const auto& p = ctx.layer.spec.props;
        const double period = propNumber(p, "pulsePeriod", 1.0);
        const double phase = propNumber(p, "phase", 0.0) + (period > 0 ? 2.0 * std::numbers::pi * ctx.time / period : 0.0);
        return pulseScale(propNumber(p, "pulseAmplitude", 1.5), phase);
    }
};

}  // namespace

std::unique_ptr<LayerType> makeIconLayer() { return std::make_unique<IconLayer>(); }
std::unique_ptr<LayerType> makeDecoratorLayer() { return std::make_unique<DecoratorLayer>(); }

}  // namespace layers
}  // namespace strata

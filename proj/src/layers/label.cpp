#include "strata/layers/label.hpp"

#include <fstream>

#include "json.hpp"

#include "common.hpp"
#include "strata/geometry/mesh.hpp"
#include "strata/layers/icon.hpp"
#include "types.hpp"

namespace strata {

std::shared_ptr<const GlyphAtlas> loadGlyphAtlas(const std::filesystem::path& image,
                                                 const std::filesystem::path& metrics) {
    static std::map<std::pair<std::filesystem::path, std::filesystem::path>, std::shared_ptr<const GlyphAtlas>> cache;
    const auto key = std::make_pair(std::filesystem::weakly_canonical(image), std::filesystem::weakly_canonical(metrics));
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    std::ifstream in(key.second);
    if (!in) throw IngestError("cannot open glyph metrics " + metrics.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IngestError("glyph metrics " + metrics.string() + ": " + e.what());
    }
    auto atlas = std::make_shared<GlyphAtlas>();
    atlas->image = loadImageCached(key.first);
    atlas->fontSize = j.value("fontSize", 32.0);
    atlas->lineHeight = j.value("lineHeight", atlas->fontSize * 1.25);
    for (const auto& [ch, g] : j.at("glyphs").items()) {
        if (ch.size() != 1) continue;
        GlyphMetrics m;
        m.x = g.at("x").get<int>();
        m.y = g.at("y").get<int>();
        m.width = g.at("width").get<int>();
        m.height = g.at("height").get<int>();
        m.xOffset = g.value("xOffset", 0.0);
        m.yOffset = g.value("yOffset", 0.0);
        m.advance = g.at("advance").get<double>();
        atlas->glyphs[ch[0]] = m;
    }
    if (!atlas->glyphs.contains('?')) throw IngestError("glyph atlas has no '?' glyph");
    cache[key] = atlas;
    return atlas;
}

std::vector<GlyphPlacement> layoutText(const GlyphAtlas& atlas, const std::string& text, TextAnchor anchor,
                                       std::size_t& missing) {
    std::vector<GlyphPlacement> out;
    out.reserve(text.size());
    double pen = 0.0;
    for (char c : text) {
        if (!atlas.glyphs.contains(c)) {
            ++missing;
            c = '?';
        }
        out.push_back({c, pen});
        pen += atlas.glyphs.at(c).advance;
    }
    const double shift = anchor == TextAnchor::start ? 0.0 : anchor == TextAnchor::middle ? -pen / 2.0 : -pen;
    for (auto& g : out) g.penX += shift;
    return out;
}

namespace layers {

namespace {

// attributes: anchor, glyph (x, y, w, h in font pixels), rect (uv), size, color
// params: sizeScale, fontSize, pixel offset x, y
class GlyphPipeline : public gpu::Pipeline {
public:
    void vertex(const gpu::DrawCommand& cmd, std::uint32_t inst, std::uint32_t v, gpu::VertexOutput& out) const override {
        const auto& u = cmd.uniforms;
        out.clip = projectInstance(u, cmd.attributes[0], inst);
        const auto& g = cmd.attributes[1];
        const auto& r = cmd.attributes[2];
        const float k = cmd.attributes[3].get(inst, 0) * u.params[0] / u.params[1];
        const Vec2f uv = cmd.mesh->uvs[v];
        const float tx = (uv.x + 1.0f) * 0.5f, ty = (1.0f - uv.y) * 0.5f;
        offsetPixels(out.clip, (g.get(inst, 0) + tx * g.get(inst, 2)) * k + u.params[2],
                     (g.get(inst, 1) + ty * g.get(inst, 3)) * k + u.params[3], u.projection);
        out.varyings[0] = r.get(inst, 0) + tx * (r.get(inst, 2) - r.get(inst, 0));
        out.varyings[1] = r.get(inst, 1) + ty * (r.get(inst, 3) - r.get(inst, 1));
        writeColor(out, 2, unpackColor(cmd.attributes[4], inst));
    }
    bool fragment(const gpu::DrawCommand& cmd, std::uint32_t, const float* v, Vec4f& rgba) const override {
        const float coverage = cmd.uniforms.texture->sample(v[0], v[1]).w;
        const Vec4f c = readColor(v, 2);
        rgba = {c.x, c.y, c.z, c.w * coverage};
        return rgba.w >= 0.02f;
    }
    int varyingCount() const override { return 6; }
};

TextAnchor anchorOf(const ValueMap& props) {
    const std::string a = propString(props, "anchor", "middle");
    if (a == "start") return TextAnchor::start;
    if (a == "middle") return TextAnchor::middle;
    if (a == "end") return TextAnchor::end;
    throw SpecError("anchor must be start, middle or end");
}

std::shared_ptr<const GlyphAtlas> atlasOf(const LayerSpec& spec) {
    return loadGlyphAtlas(propString(spec.props, "atlas", ""), propString(spec.props, "metrics", ""));
}

class LabelLayer : public LayerType {
public:
    std::string name() const override { return "label"; }
    std::vector<std::string> propNames() const override { return {"atlas", "metrics", "anchor", "sizeScale", "pixelOffset"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override {
        AttributeDescriptor anchor = positionAttr("anchor", {"x", "y", "z"});
        return {anchor, columnsAttr("glyph", {"gx", "gy", "gw", "gh"}), columnsAttr("rect", {"u0", "v0", "u1", "v1"}),
                columnsAttr("size", {"size"}), columnsAttr("color", {"r", "g", "b", "a"})};
    }
    std::vector<std::string> requiredAccessors(const LayerSpec&) const override { return {"position", "text"}; }
    std::vector<std::string> accessorNames(const LayerSpec&) const override { return {"position", "text", "size", "color"}; }
    void validate(const LayerSpec& spec) const override {
        LayerType::validate(spec);
        const auto& text = spec.accessors.at("text");
        if (text.kind != Accessor::Kind::columns || text.columns.size() != 1) {
            throw SpecError("label 'text' accessor must name one string column");
        }
        if (propString(spec.props, "atlas", "").empty() || propString(spec.props, "metrics", "").empty()) {
            throw SpecError("layer '" + spec.id + "' needs 'atlas' and 'metrics'");
        }
        (void)anchorOf(spec.props);
    }
    bool derived() const override { return true; }
    bool deriveDependsOnProp(const std::string& p) const override { return p != "sizeScale" && p != "opacity" && p != "pixelOffset"; }

    DataRef derive(const LayerSpec& spec, Diagnostics& diag) const override {
        const auto atlas = atlasOf(spec);
        const DataTable& table = *spec.data;
        const auto* text = table.strings(spec.accessors.at("text").columns[0]);
        if (text == nullptr) throw SpecError("label text column '" + spec.accessors.at("text").columns[0] + "' is not a string column");
        const std::array<double, 3> posDefaults{0, 0, 0};
        const BoundAccessor position(spec.accessors.at("position"), table, posDefaults);
        const Accessor sizeAcc = spec.accessors.contains("size") ? spec.accessors.at("size") : Accessor::fromConstant({16});
        const std::array<double, 1> sizeDefaults{16};
        const BoundAccessor size(sizeAcc, table, sizeDefaults);
        const Accessor colorAcc =
            spec.accessors.contains("color") ? spec.accessors.at("color") : Accessor::fromConstant({0, 0, 0, 255});
        const std::array<double, 4> colorDefaults{0, 0, 0, 255};
        const BoundAccessor color(colorAcc, table, colorDefaults);
        const TextAnchor anchor = anchorOf(spec.props);
        const double W = atlas->image->width, H = atlas->image->height;

        std::vector<std::vector<double>> cols(17);
        std::size_t missing = 0;
        std::array<double, 3> p{};
        std::array<double, 1> s{};
        std::array<double, 4> c{};
        for (std::size_t row = 0; row < table.rowCount(); ++row) {
            const auto glyphs = layoutText(*atlas, (*text)[row], anchor, missing);
            if (glyphs.empty()) continue;
            position.evaluate(row, p);
            size.evaluate(row, s);
            color.evaluate(row, c);
            for (const auto& g : glyphs) {
                const GlyphMetrics& m = atlas->glyphs.at(g.glyph);
                const double vals[17] = {p[0], p[1], p[2],
                                         g.penX + m.xOffset, m.yOffset - atlas->lineHeight / 2.0, double(m.width), double(m.height),
                                         m.x / W, m.y / H, (m.x + m.width) / W, (m.y + m.height) / H,
                                         s[0], c[0], c[1], c[2], c[3], double(row)};
                for (int k = 0; k < 17; ++k) cols[static_cast<std::size_t>(k)].push_back(vals[k]);
            }
        }
        if (missing > 0) diag["missingGlyphs"] += missing;
        const char* names[17] = {"x", "y", "z", "gx", "gy", "gw", "gh", "u0", "v0", "u1", "v1", "size", "r", "g", "b", "a", "row"};
        auto out = makeTable(cols[0].size());
        for (int k = 0; k < 17; ++k) out->addNumeric(names[k], std::move(cols[static_cast<std::size_t>(k)]));
        return out;
    }

    void prepare(LayerState& state, gpu::Device& device) const override {
        for (auto t : state.textures) device.releaseTexture(t);
        state.textures.clear();
        state.textures.push_back(device.createTexture(*atlasOf(state.spec)->image));
    }

    void draw(DrawContext& ctx) const override {
        static const Mesh mesh = unitDiscMesh();
        static const GlyphPipeline pipeline;
        const auto atlas = atlasOf(ctx.layer.spec);
        ctx.uniforms.params[0] = static_cast<float>(propNumber(ctx.layer.spec.props, "sizeScale", 1.0));
        ctx.uniforms.params[1] = static_cast<float>(atlas->fontSize);
        const auto offset = propVector(ctx.layer.spec.props, "pixelOffset", {0.0, 0.0});
        if (offset.size() == 2) {
            ctx.uniforms.params[2] = static_cast<float>(offset[0]);
            ctx.uniforms.params[3] = static_cast<float>(offset[1]);
        }
        ctx.uniforms.texture = &ctx.device.texture(ctx.layer.textures.at(0));
        ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(ctx.layer.instanceCount),
                 {ctx.bind("anchor"), ctx.bind("glyph"), ctx.bind("rect"), ctx.bind("size"), ctx.bind("color")});
    }

    std::size_t sourceRow(const LayerState& state, std::size_t instance) const override {
        const auto* rows = state.instances ? state.instances->numeric("row") : nullptr;
        return rows && instance < rows->size() ? static_cast<std::size_t>((*rows)[instance]) : instance;
    }
};

}  // namespace

std::unique_ptr<LayerType> makeLabelLayer() { return std::make_unique<LabelLayer>(); }

}  // namespace layers
}  // namespace strata

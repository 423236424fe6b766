#include <cmath>

#include "common.hpp"
#include "strata/geometry/mesh.hpp"
#include "strata/layers/grid.hpp"
#include "types.hpp"

namespace strata::layers {

namespace {

// attributes: position, angle (radians, counter-clockwise from east), speed, color
// params: pixels per speed unit, viewport scale
class ArrowPipeline : public gpu::Pipeline {
public:
    void vertex(const gpu::DrawCommand& cmd, std::uint32_t inst, std::uint32_t v, gpu::VertexOutput& out) const override {
        const auto& u = cmd.uniforms;
        const float angle = cmd.attributes[1].get(inst, 0);
        const float lengthWorld = cmd.attributes[2].get(inst, 0) * u.params[0] / u.params[1];
        const Vec3f m = cmd.mesh->positions[v];
        const float c = std::cos(angle), s = std::sin(angle);
        // North is -y in world units.
        const Vec3f local{(c * m.x - s * m.y) * lengthWorld, -(s * m.x + c * m.y) * lengthWorld, 0.0f};
        out.clip = projectInstance(u, cmd.attributes[0], inst, local);
        writeColor(out, 0, unpackColor(cmd.attributes[3], inst));
    }
    bool fragment(const gpu::DrawCommand&, std::uint32_t, const float* v, Vec4f& rgba) const override {
        rgba = readColor(v, 0);
        return true;
    }
    int varyingCount() const override { return 4; }
};

class VectorFieldLayer : public LayerType {
public:
    std::string name() const override { return "vector-field"; }
    std::vector<std::string> propNames() const override { return {"lengthScale", "speedRange"}; }
    std::vector<std::string> accessorNames(const LayerSpec&) const override { return {"position", "velocity"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override {
        return {positionAttr("position", {"x", "y"}), columnsAttr("angle", {"angle"}), columnsAttr("speed", {"speed"}),
                columnsAttr("color", {"r", "g", "b", "a"})};
    }
    void validate(const LayerSpec& spec) const override {
        if (!spec.data) throw SpecError("layer '" + spec.id + "' has no data");
    }
    bool derived() const override { return true; }
    bool deriveDependsOnProp(const std::string& p) const override { return p == "speedRange" || p == "coordinateSystem"; }

    DataRef derive(const LayerSpec& spec, Diagnostics&) const override {
        const DataTable& t = *spec.data;
        const Accessor pos = spec.accessors.contains("position") ? spec.accessors.at("position")
                                                                 : Accessor::fromColumns({"x", "y"});
        const Accessor vel = spec.accessors.contains("velocity") ? spec.accessors.at("velocity")
                                                                 : Accessor::fromColumns({"vx", "vy", "vz"});
        const std::array<double, 2> pd{0, 0};
        const std::array<double, 3> vd{0, 0, 0};
        const BoundAccessor bp(pos, t, pd), bv(vel, t, vd);
        const auto* valid = t.numeric("valid");

        std::vector<double> x, y, angle, speed;
        std::array<double, 2> p{};
        std::array<double, 3> v{};
        double maxSpeed = 0.0;
        for (std::size_t r = 0; r < t.rowCount(); ++r) {
            if (valid != nullptr && (*valid)[r] == 0.0) continue;
            bv.evaluate(r, v);
            const double horizontal = std::hypot(v[0], v[1]);
            if (!(horizontal > 0.0)) continue;
            bp.evaluate(r, p);
            x.push_back(p[0]);
            y.push_back(p[1]);
            angle.push_back(std::atan2(v[1], v[0]));
            const double sp = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            speed.push_back(sp);
            maxSpeed = std::max(maxSpeed, sp);
        }
        const auto range = propVector(spec.props, "speedRange", {0.0, maxSpeed});
        if (range.size() != 2) throw SpecError("speedRange must be [min, max]");
        const std::size_t n = x.size();
        std::vector<double> cr(n), cg(n), cb(n), ca(n, 255.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double span = range[1] - range[0];
            const auto c = rampColor(kYlOrRd, span > 0 ? (speed[i] - range[0]) / span : 1.0);
            cr[i] = c[0];
            cg[i] = c[1];
            cb[i] = c[2];
        }
        auto out = makeTable(n);
        out->addNumeric("x", std::move(x));
        out->addNumeric("y", std::move(y));
        out->addNumeric("angle", std::move(angle));
        out->addNumeric("speed", std::move(speed));
        out->addNumeric("r", std::move(cr));
        out->addNumeric("g", std::move(cg));
        out->addNumeric("b", std::move(cb));
        out->addNumeric("a", std::move(ca));
        return out;
    }

    void draw(DrawContext& ctx) const override {
        static Mesh mesh = [] {
            Mesh m = arrowMesh();
            for (auto& p : m.positions) p.z = 0.0f;
            return m;
        }();
        static const ArrowPipeline pipeline;
        ctx.uniforms.params[0] = static_cast<float>(propNumber(ctx.layer.spec.props, "lengthScale", 4.0));
        ctx.uniforms.params[1] = static_cast<float>(ctx.viewport.scale());
        ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(ctx.layer.instanceCount),
                 {ctx.bind("position"), ctx.bind("angle"), ctx.bind("speed"), ctx.bind("color")});
    }
};

}  // namespace

std::unique_ptr<LayerType> makeVectorFieldLayer() { return std::make_unique<VectorFieldLayer>(); }

}  // namespace strata::layers

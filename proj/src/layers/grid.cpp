#include "strata/layers/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"
#include "strata/geometry/mesh.hpp"
#include "types.hpp"

namespace strata {

GridAggregation aggregateGrid(const DataTable& table, const Accessor& position, double cellSizeWorld,
                              std::optional<WorldPoint> originWorld, CoordinateSystem coords) {
    if (!(cellSizeWorld > 0.0) || !std::isfinite(cellSizeWorld)) throw RangeError("grid cell size must be positive");
    GridAggregation agg;
    agg.cellSizeWorld = cellSizeWorld;
    const std::array<double, 2> defaults{0, 0};
    const BoundAccessor bound(position, table, defaults);

    std::vector<WorldPoint> pts;
    pts.reserve(table.rowCount());
    std::array<double, 2> v{};
    for (std::size_t row = 0; row < table.rowCount(); ++row) {
        bound.evaluate(row, v);
        if (!std::isfinite(v[0]) || !std::isfinite(v[1])) {
            ++agg.skippedRows;
            continue;
        }
        if (coords == CoordinateSystem::lnglat) {
            if (std::fabs(v[0]) > 180.0 || std::fabs(v[1]) >= kMaxLatitude) {
                ++agg.skippedRows;
                continue;
            }
            pts.push_back(lngLatToWorld({v[0], v[1]}));
        } else {
            pts.push_back({v[0], v[1]});
        }
    }
    if (originWorld) {
        agg.originWorld = *originWorld;
    } else if (!pts.empty()) {
        double minX = std::numeric_limits<double>::infinity(), minY = minX;
        for (const auto& p : pts) {
            minX = std::min(minX, p.x);
            minY = std::min(minY, p.y);
        }
        agg.originWorld = {std::floor(minX / cellSizeWorld) * cellSizeWorld,
                           std::floor(minY / cellSizeWorld) * cellSizeWorld};
    }
    for (const auto& p : pts) {
        const auto i = static_cast<std::int64_t>(std::floor((p.x - agg.originWorld.x) / cellSizeWorld));
        const auto j = static_cast<std::int64_t>(std::floor((p.y - agg.originWorld.y) / cellSizeWorld));
        const std::uint64_t c = ++agg.cells[{i, j}];
        agg.maxCount = std::max(agg.maxCount, c);
    }
    return agg;
}

RampStop rampColor(const std::vector<RampStop>& stops, double t) {
    if (stops.empty()) return {0, 0, 0};
    if (stops.size() == 1 || !(t > 0.0)) return stops.front();
    if (t >= 1.0) return stops.back();
    const double f = t * static_cast<double>(stops.size() - 1);
    const auto k = static_cast<std::size_t>(f);
    const double w = f - static_cast<double>(k);
    RampStop c{};
    for (int ch = 0; ch < 3; ++ch) c[ch] = stops[k][ch] + (stops[k + 1][ch] - stops[k][ch]) * w;
    return c;
}

namespace layers {

namespace {

// attributes: cell (x, y min corner, world), elevation (count in world units per elevation unit), color
// params: cellSize, elevationScale, coverage
class CuboidPipeline : public gpu::Pipeline {
public:
    void vertex(const gpu::DrawCommand& cmd, std::uint32_t inst, std::uint32_t v, gpu::VertexOutput& out) const override {
        const auto& u = cmd.uniforms;
        const Vec3f p = cmd.mesh->positions[v];
        const float s = u.params[0];
        const float cov = u.params[2];
        const float margin = (1.0f - cov) * 0.5f;
        const float h = cmd.attributes[1].get(inst, 0) * u.params[1];
        const Vec3f local{(margin + p.x * cov) * s, (margin + p.y * cov) * s, p.z * h};
        const auto& cell = cmd.attributes[0];
        out.clip = u.projection.clipFromWorld(cell.getDf(inst, 0), cell.getDf(inst, 1), local);
        const Vec3f n = cmd.mesh->normals[v];
        // Light from the north-west, above.
        const float lx = -0.35f, ly = -0.45f, lz = 0.82f;
        const float shade = 0.6f + 0.4f * std::max(0.0f, n.x * lx + n.y * ly + n.z * lz);
        const Vec4f c = unpackColor(cmd.attributes[2], inst);
        writeColor(out, 0, {c.x * shade, c.y * shade, c.z * shade, c.w});
    }
    bool fragment(const gpu::DrawCommand&, std::uint32_t, const float* v, Vec4f& rgba) const override {
        rgba = readColor(v, 0);
        return true;
    }
    int varyingCount() const override { return 4; }
};

std::vector<RampStop> rampFromProps(const ValueMap& props) {
    const auto flat = propVector(props, "colorRange", {});
    if (flat.empty()) return kYlOrRd;
    if (flat.size() % 3 != 0) throw SpecError("colorRange must be a flat list of RGB triples");
    std::vector<RampStop> stops;
    for (std::size_t i = 0; i + 2 < flat.size(); i += 3) stops.push_back({flat[i], flat[i + 1], flat[i + 2]});
    return stops;
}

class ExtrudedGridLayer : public LayerType {
public:
    std::string name() const override { return "extruded-grid"; }
    std::vector<std::string> propNames() const override { return {"cellSize", "cellSizeMeters", "origin", "colorRange", "alpha", "elevationScale", "coverage"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override {
        return {worldAttr("cell", {"x", "y"}), columnsAttr("elevation", {"elevation"}),
                columnsAttr("color", {"r", "g", "b", "a"})};
    }
    std::vector<std::string> requiredAccessors(const LayerSpec&) const override { return {"position"}; }
    std::vector<std::string> accessorNames(const LayerSpec&) const override { return {"position"}; }
    BlendMode blendMode() const override { return BlendMode::extruded; }
    bool derived() const override { return true; }
    bool deriveDependsOnProp(const std::string& p) const override {
        return p != "elevationScale" && p != "coverage" && p != "opacity";
    }

    DataRef derive(const LayerSpec& spec, Diagnostics& diag) const override {
        const auto coords = coordinateSystemOf(spec.props);
        const auto& table = *spec.data;
        const auto& position = spec.accessors.at("position");
        double cell = propNumber(spec.props, "cellSize", 0.0);
        // Meters are converted at the latitude of the first usable row.
        double upmRef = 1.0;
        if (coords == CoordinateSystem::lnglat) {
            const std::array<double, 2> defaults{0, 0};
            const BoundAccessor bound(position, table, defaults);
            std::array<double, 2> v{};
            for (std::size_t r = 0; r < table.rowCount(); ++r) {
                bound.evaluate(r, v);
                if (std::isfinite(v[1]) && std::fabs(v[1]) < kMaxLatitude) {
                    upmRef = worldUnitsPerMeter(v[1]);
                    break;
                }
            }
        }
        if (cell <= 0.0) cell = propNumber(spec.props, "cellSizeMeters", 1000.0) * upmRef;
        std::optional<WorldPoint> origin;
        const auto o = propVector(spec.props, "origin", {});
        if (o.size() == 2) origin = WorldPoint{o[0], o[1]};
        const GridAggregation agg = aggregateGrid(table, position, cell, origin, coords);
        if (agg.skippedRows > 0) diag["invalidPositions"] += agg.skippedRows;

        const auto ramp = rampFromProps(spec.props);
        const double alpha = propNumber(spec.props, "alpha", 255.0);
        const std::size_t n = agg.cells.size();
        std::vector<double> x, y, elev, r, g, b, a;
        for (auto* col : {&x, &y, &elev, &r, &g, &b, &a}) col->reserve(n);
        for (const auto& [ij, count] : agg.cells) {
            const double cx = agg.originWorld.x + static_cast<double>(ij.first) * cell;
            const double cy = agg.originWorld.y + static_cast<double>(ij.second) * cell;
            x.push_back(cx);
            y.push_back(cy);
            // Elevation is given in meters for geographic data.
            double upm = 1.0;
            if (coords == CoordinateSystem::lnglat) {
                const double lat = worldToLngLat({cx + cell / 2, std::clamp(cy + cell / 2, 0.0, kWorldSize)}).latitude;
                upm = worldUnitsPerMeter(lat);
            }
            elev.push_back(static_cast<double>(count) * upm);
            const auto c = rampColor(ramp, static_cast<double>(count) / static_cast<double>(agg.maxCount));
            r.push_back(c[0]);
            g.push_back(c[1]);
            b.push_back(c[2]);
            a.push_back(alpha);
        }
        auto out = makeTable(n);
        out->addNumeric("x", std::move(x));
        out->addNumeric("y", std::move(y));
        out->addNumeric("elevation", std::move(elev));
        out->addNumeric("r", std::move(r));
        out->addNumeric("g", std::move(g));
        out->addNumeric("b", std::move(b));
        out->addNumeric("a", std::move(a));
        out->addNumeric("cellSize", std::vector<double>(n, cell));
        return out;
    }

    void draw(DrawContext& ctx) const override {
        static const Mesh mesh = unitCuboidMesh();
        static const CuboidPipeline pipeline;
        const auto& table = *ctx.layer.instances;
        if (table.rowCount() == 0) return;
        const auto& p = ctx.layer.spec.props;
        ctx.uniforms.params[0] = static_cast<float>((*table.numeric("cellSize"))[0]);
        ctx.uniforms.params[1] = static_cast<float>(propNumber(p, "elevationScale", 1.0));
        ctx.uniforms.params[2] = static_cast<float>(std::clamp(propNumber(p, "coverage", 1.0), 0.0, 1.0));
        ctx.draw(pipeline, mesh, static_cast<std::uint32_t>(ctx.layer.instanceCount),
                 {ctx.bind("cell"), ctx.bind("elevation"), ctx.bind("color")});
    }
};

}  // namespace

std::unique_ptr<LayerType> makeExtrudedGridLayer() { return std::make_unique<ExtrudedGridLayer>(); }

}  // namespace layers
}  // namespace strata

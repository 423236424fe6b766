#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "strata/analytics/graph.hpp"
#include "strata/analytics/wind.hpp"
#include "strata/geometry/triangulation.hpp"
#include "strata/layers/geojson.hpp"
#include "types.hpp"

namespace strata {

DataRef featureTable(std::shared_ptr<const FeatureCollection> features) {
    auto t = makeTable(features->features.size());
    t->payload = std::move(features);
    return t;
}

std::shared_ptr<const FeatureCollection> featuresOf(const DataTable& table) {
    if (const auto* p = std::any_cast<std::shared_ptr<const FeatureCollection>>(&table.payload)) return *p;
    return nullptr;
}

namespace layers {

namespace {

void copyProp(const LayerSpec& from, LayerSpec& to, const std::string& name, const std::string& as) {
    if (auto it = from.props.find(name); it != from.props.end()) to.props[as] = it->second;
}

Accessor constantColor(const LayerSpec& spec, const std::string& prop, std::vector<double> fallback) {
    return Accessor::fromConstant(colorProp(spec.props, prop, std::move(fallback)));
}

LayerSpec sublayer(const LayerSpec& parent, const std::string& suffix, const std::string& type, DataRef data) {
    LayerSpec s;
    s.id = parent.id + "-" + suffix;
    s.type = type;
    s.data = std::move(data);
    s.visible = parent.visible;
    s.pickable = parent.pickable;
    copyProp(parent, s, "opacity", "opacity");
    return s;
}

// ---------------------------------------------------------------- geojson

class GeoJsonLayer : public LayerType {
public:
    std::string name() const override { return "geojson"; }
    std::vector<std::string> propNames() const override { return {"pointRadius", "pointColor", "lineWidth", "lineColor", "fillColor", "stroked", "outlineColor"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override { return {}; }
    bool composite() const override { return true; }
    void draw(DrawContext&) const override {}

    std::vector<LayerSpec> expand(const LayerSpec& spec, std::shared_ptr<void>&, Diagnostics& diag) const override {
        const auto fc = featuresOf(*spec.data);
        const bool stroked = propBool(spec.props, "stroked", false);
        if (!fc) throw SpecError("layer '" + spec.id + "' needs GeoJSON data");
        std::vector<double> pLng, pLat, pRow;
        std::vector<double> lS[2], lT[2], lRow;
        std::vector<double> tri[6], tRow;
        std::vector<double> oS[2], oT[2], oRow;

        auto segment = [](std::vector<double>* s, std::vector<double>* t, std::vector<double>& rows, const LngLat& a,
                          const LngLat& b, std::size_t row) {
            s[0].push_back(a.longitude);
            s[1].push_back(a.latitude);
            t[0].push_back(b.longitude);
            t[1].push_back(b.latitude);
            rows.push_back(static_cast<double>(row));
        };
        auto openRing = [](std::vector<LngLat> ring) {
            if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
            return ring;
        };

        for (std::size_t row = 0; row < fc->features.size(); ++row) {
            const Geometry& g = fc->features[row].geometry;
            switch (g.type) {
                case Geometry::Type::point:
                case Geometry::Type::multiPoint:
                    for (const auto& ring : g.parts) {
                        for (const auto& part : ring) {
                            if (part.empty()) continue;
                            pLng.push_back(part[0].longitude);
                            pLat.push_back(part[0].latitude);
                            pRow.push_back(static_cast<double>(row));
                        }
                    }
                    break;
                case Geometry::Type::lineString:
                case Geometry::Type::multiLineString:
                    for (const auto& lines : g.parts) {
                        for (const auto& line : lines) {
                            for (std::size_t k = 1; k < line.size(); ++k) segment(lS, lT, lRow, line[k - 1], line[k], row);
                        }
                    }
                    break;
                case Geometry::Type::polygon:
                case Geometry::Type::multiPolygon:
                    for (const auto& polygon : g.parts) {
                        if (polygon.empty()) continue;
                        PolygonRings rings;
                        std::vector<std::vector<LngLat>> open;
                        for (std::size_t k = 0; k < polygon.size(); ++k) {
                            const auto ring = openRing(polygon[k]);
                            open.push_back(ring);
                            std::vector<Vec2> pts;
                            for (const auto& p : ring) pts.push_back({p.longitude, p.latitude});
                            if (k == 0) rings.outer = std::move(pts);
                            else rings.holes.push_back(std::move(pts));
                        }
                        bool outline = stroked;
                        try {
                            for (const auto& ring : open) {
                                if (ring.size() < 3) throw GeometryError("polygon ring has fewer than 4 positions");
                            }
                            const Triangulation t = earClipTriangulate(rings);
                            if (t.degenerate) diag["degeneratePolygons"] += 1;
                            for (const auto& tr : t.triangles) {
                                for (int c = 0; c < 3; ++c) {
                                    tri[2 * c].push_back(t.points[tr[static_cast<std::size_t>(c)]].x);
                                    tri[2 * c + 1].push_back(t.points[tr[static_cast<std::size_t>(c)]].y);
                                }
                                tRow.push_back(static_cast<double>(row));
                            }
                        } catch (const GeometryError&) {
                            diag["invalidPolygons"] += 1;
                            outline = true;
                        }
                        if (!outline) continue;
                        for (const auto& ring : open) {
                            for (std::size_t e = 0; e < ring.size() && ring.size() > 1; ++e) {
                                segment(oS, oT, oRow, ring[e], ring[(e + 1) % ring.size()], row);
                            }
                        }
                    }
                    break;
                case Geometry::Type::unsupported:
                    diag["unsupportedGeometries"] += 1;
                    break;
            }
        }

        std::vector<LayerSpec> out;
        if (!pRow.empty()) {
            auto t = makeTable();
            t->addNumeric("lng", std::move(pLng));
            t->addNumeric("lat", std::move(pLat));
            t->addNumeric("feature", std::move(pRow));
            LayerSpec s = sublayer(spec, "points", "scatterplot", t);
            s.accessors["position"] = Accessor::fromColumns({"lng", "lat"});
            s.accessors["radius"] = Accessor::fromConstant({propNumber(spec.props, "pointRadius", 5.0)});
            s.accessors["fillColor"] = constantColor(spec, "pointColor", {0, 120, 200, 255});
            out.push_back(std::move(s));
        }
        auto lineTable = [](std::vector<double>* s, std::vector<double>* t, std::vector<double>& rows) {
            auto tab = makeTable();
            tab->addNumeric("sourceLng", std::move(s[0]));
            tab->addNumeric("sourceLat", std::move(s[1]));
            tab->addNumeric("targetLng", std::move(t[0]));
            tab->addNumeric("targetLat", std::move(t[1]));
            tab->addNumeric("feature", std::move(rows));
            return tab;
        };
        auto lineSpec = [&](LayerSpec s, const std::string& colorProp) {
            s.accessors["sourcePosition"] = Accessor::fromColumns({"sourceLng", "sourceLat"});
            s.accessors["targetPosition"] = Accessor::fromColumns({"targetLng", "targetLat"});
            s.accessors["color"] = constantColor(spec, colorProp, {40, 40, 40, 255});
            s.accessors["width"] = Accessor::fromConstant({propNumber(spec.props, "lineWidth", 2.0)});
            return s;
        };
        if (!lRow.empty()) out.push_back(lineSpec(sublayer(spec, "lines", "line", lineTable(lS, lT, lRow)), "lineColor"));
        if (!tRow.empty()) {
            auto t = makeTable();
            const char* names[6] = {"aLng", "aLat", "bLng", "bLat", "cLng", "cLat"};
            for (int k = 0; k < 6; ++k) t->addNumeric(names[k], std::move(tri[k]));
            t->addNumeric("feature", std::move(tRow));
            LayerSpec s = sublayer(spec, "polygon-fill", "solid-polygon", t);
            s.accessors["vertexA"] = Accessor::fromColumns({"aLng", "aLat"});
            s.accessors["vertexB"] = Accessor::fromColumns({"bLng", "bLat"});
            s.accessors["vertexC"] = Accessor::fromColumns({"cLng", "cLat"});
            s.accessors["fillColor"] = constantColor(spec, "fillColor", {120, 180, 120, 160});
            out.push_back(std::move(s));
        }
        if (!oRow.empty()) {
            out.push_back(lineSpec(sublayer(spec, "polygon-outline", "line", lineTable(oS, oT, oRow)), "outlineColor"));
        }
        return out;
    }
};

// ---------------------------------------------------------------- wind

struct WindState {
    const DataTable* stations = nullptr;
    int nx = 0, ny = 0;
    FieldGrid field;
    DataRef fieldTable;
    std::size_t particleCount = 0;
    std::uint64_t seed = 0;
    int maxAge = 0;
    double dt = 0, speedScale = 0;
    ParticleState particles;
    DataRef particleTable;
};

class WindLayer : public LayerType {
public:
    std::string name() const override { return "wind"; }
    std::vector<std::string> propNames() const override { return {"nx", "ny", "particleCount", "seed", "maxAge", "dt", "speedScale", "tick", "arrowLength", "particleRadius", "particleColor", "stationRadius", "stationColor"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override { return {}; }
    bool composite() const override { return true; }
    void draw(DrawContext&) const override {}

    std::vector<LayerSpec> expand(const LayerSpec& spec, std::shared_ptr<void>& state, Diagnostics&) const override {
        auto ws = std::static_pointer_cast<WindState>(state);
        if (!ws) {
            ws = std::make_shared<WindState>();
            state = ws;
        }
        const auto& p = spec.props;
        const int nx = static_cast<int>(propNumber(p, "nx", 80));
        const int ny = static_cast<int>(propNumber(p, "ny", 40));
        const auto count = static_cast<std::size_t>(propNumber(p, "particleCount", 1000));
        const auto seed = static_cast<std::uint64_t>(propNumber(p, "seed", 1));
        const int maxAge = static_cast<int>(propNumber(p, "maxAge", 40));
        const double dt = propNumber(p, "dt", 1.0);
        const double speedScale = propNumber(p, "speedScale", 1e-4);
        const double tickProp = propNumber(p, "tick", 0.0);
        if (tickProp < 0) throw SpecError("tick must be >= 0");
        const auto tick = static_cast<std::uint64_t>(tickProp);

        bool resetParticles = false;
        if (ws->stations != spec.data.get() || ws->nx != nx || ws->ny != ny) {
            ws->field = buildWindField(*spec.data, nx, ny);
            ws->fieldTable = fieldToTable(ws->field);
            ws->stations = spec.data.get();
            ws->nx = nx;
            ws->ny = ny;
            resetParticles = true;
        }
        if (resetParticles || !ws->particleTable || ws->particleCount != count || ws->seed != seed ||
            ws->maxAge != maxAge || ws->dt != dt || ws->speedScale != speedScale || ws->particles.tick > tick) {
            ws->particles = seedParticles(ws->field, count, maxAge, seed);
            ws->particleCount = count;
            ws->seed = seed;
            ws->maxAge = maxAge;
            ws->dt = dt;
            ws->speedScale = speedScale;
            if (!ws->particleTable) ws->particleTable = makeTable();
        }
        while (ws->particles.tick < tick) ws->particles = advectParticles(ws->particles, ws->field, dt, speedScale);
        // Same table object every tick: the tick trigger alone drives the refill.
        writeParticles(ws->particles, *ws->particleTable);

        std::vector<LayerSpec> out;
        LayerSpec field = sublayer(spec, "field", "vector-field", ws->fieldTable);
        field.props["coordinateSystem"] = std::string("cartesian");
        copyProp(spec, field, "arrowLength", "lengthScale");
        field.pickable = false;
        out.push_back(std::move(field));

        LayerSpec particles = sublayer(spec, "particles", "particle", ws->particleTable);
        particles.props["coordinateSystem"] = std::string("cartesian");
        particles.props["maxAge"] = static_cast<double>(maxAge);
        copyProp(spec, particles, "particleRadius", "radiusPixels");
        copyProp(spec, particles, "particleColor", "color");
        particles.updateTriggers["position"] = static_cast<double>(tick);
        particles.updateTriggers["age"] = static_cast<double>(tick);
        particles.pickable = false;
        out.push_back(std::move(particles));

        LayerSpec stations = sublayer(spec, "stations", "scatterplot", spec.data);
        stations.accessors["position"] = Accessor::fromColumns({"lng", "lat"});
        stations.accessors["radius"] = Accessor::fromConstant({propNumber(p, "stationRadius", 4.0)});
        stations.accessors["fillColor"] = constantColor(spec, "stationColor", {30, 30, 30, 255});
        out.push_back(std::move(stations));
        return out;
    }
};

// ---------------------------------------------------------------- graph

struct GraphCompositeState {
    const DataTable* data = nullptr;
    LayoutParams params;
    GraphState layout;
};

bool sameParams(const LayoutParams& a, const LayoutParams& b) {
    return a.alpha == b.alpha && a.alphaMin == b.alphaMin && a.alphaDecay == b.alphaDecay &&
           a.velocityDamping == b.velocityDamping && a.chargeStrength == b.chargeStrength &&
           a.linkRestLength == b.linkRestLength;
}

class GraphLayer : public LayerType {
public:
    std::string name() const override { return "graph"; }
    std::vector<std::string> propNames() const override { return {"iconAtlas", "iconRows", "iconCols", "labelAtlas", "labelMetrics", "alphaDecay", "alphaMin", "velocityDamping", "chargeStrength", "linkRestLength", "origin", "layoutScale", "nodeSize", "nodeColor", "edgeColor", "edgeWidth", "highlight", "decoratorIcon", "decoratorColor", "pulseAmplitude", "pulsePeriod", "phase", "labelSize", "labelColor"}; }
    std::vector<AttributeDescriptor> attributes(const LayerSpec&) const override { return {}; }
    bool composite() const override { return true; }
    void draw(DrawContext&) const override {}

    std::vector<LayerSpec> expand(const LayerSpec& spec, std::shared_ptr<void>& state, Diagnostics&) const override {
        const auto gp = graphOf(*spec.data);
        if (!gp) throw SpecError("layer '" + spec.id + "' needs graph data");
        const GraphData& graph = *gp;
        const auto& p = spec.props;
        for (const char* required : {"iconAtlas", "labelAtlas", "labelMetrics"}) {
            if (propString(p, required, "").empty()) throw SpecError(std::string("graph layer needs '") + required + "'");
        }

        LayoutParams params;
        params.alphaDecay = propNumber(p, "alphaDecay", params.alphaDecay);
        params.alphaMin = propNumber(p, "alphaMin", params.alphaMin);
        params.velocityDamping = propNumber(p, "velocityDamping", params.velocityDamping);
        params.chargeStrength = propNumber(p, "chargeStrength", params.chargeStrength);
        params.linkRestLength = propNumber(p, "linkRestLength", params.linkRestLength);
        auto gs = std::static_pointer_cast<GraphCompositeState>(state);
        if (!gs || gs->data != spec.data.get() || !sameParams(gs->params, params)) {
            gs = std::make_shared<GraphCompositeState>();
            gs->data = spec.data.get();
            gs->params = params;
            gs->layout = runLayoutToEquilibrium(makeGraphState(graph, params));
            state = gs;
        }

        const auto origin = propVector(p, "origin", {256.0, 256.0});
        if (origin.size() != 2) throw SpecError("origin must be [x, y]");
        const double scale = propNumber(p, "layoutScale", 1.0);
        const int cells = static_cast<int>(propNumber(p, "iconRows", 1) * propNumber(p, "iconCols", 1));
        const std::size_t n = graph.nodeCount();
        std::vector<int> degree(n, 0);
        for (const auto& e : graph.edges) {
            ++degree[e.first];
            ++degree[e.second];
        }

        std::vector<double> x(n), y(n), icon(n);
        std::vector<std::string> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = origin[0] + gs->layout.positions[i].x * scale;
            y[i] = origin[1] + gs->layout.positions[i].y * scale;
            const int group = i < graph.groups.size() ? graph.groups[i] : 0;
            icon[i] = static_cast<double>(cells > 0 ? ((group % cells) + cells) % cells : 0);
            labels[i] = i < graph.labels.size() && !graph.labels[i].empty() ? graph.labels[i] : graph.ids[i];
        }
        std::vector<double> sx, sy, tx, ty;
        for (const auto& [s, t] : graph.edges) {
            sx.push_back(x[s]);
            sy.push_back(y[s]);
            tx.push_back(x[t]);
            ty.push_back(y[t]);
        }
        std::vector<double> highlight = propVector(p, "highlight", {});
        if (highlight.empty() && n > 0) {
            const int maxDegree = *std::max_element(degree.begin(), degree.end());
            for (std::size_t i = 0; i < n; ++i) {
                if (degree[i] == maxDegree) highlight.push_back(static_cast<double>(i));
            }
        }
        std::vector<double> hx, hy;
        for (double h : highlight) {
            const auto i = static_cast<std::size_t>(h);
            if (h < 0 || i >= n) continue;
            hx.push_back(x[i]);
            hy.push_back(y[i]);
        }

        auto nodes = makeTable();
        nodes->addNumeric("x", x);
        nodes->addNumeric("y", y);
        nodes->addNumeric("icon", std::move(icon));
        nodes->addString("label", std::move(labels));
        auto edges = makeTable();
        edges->addNumeric("sx", std::move(sx));
        edges->addNumeric("sy", std::move(sy));
        edges->addNumeric("tx", std::move(tx));
        edges->addNumeric("ty", std::move(ty));
        auto marks = makeTable();
        marks->addNumeric("x", std::move(hx));
        marks->addNumeric("y", std::move(hy));

        const double nodeSize = propNumber(p, "nodeSize", 20.0);
        auto cartesian = [](LayerSpec s) {
            s.props["coordinateSystem"] = std::string("cartesian");
            return s;
        };
        auto iconProps = [&](LayerSpec& s) {
            s.props["atlas"] = propString(p, "iconAtlas", "");
            s.props["atlasRows"] = propNumber(p, "iconRows", 1);
            s.props["atlasCols"] = propNumber(p, "iconCols", 1);
        };

        std::vector<LayerSpec> out;
        LayerSpec e = cartesian(sublayer(spec, "edges", "line", edges));
        e.accessors["sourcePosition"] = Accessor::fromColumns({"sx", "sy"});
        e.accessors["targetPosition"] = Accessor::fromColumns({"tx", "ty"});
        e.accessors["color"] = constantColor(spec, "edgeColor", {120, 120, 120, 200});
        e.accessors["width"] = Accessor::fromConstant({propNumber(p, "edgeWidth", 1.5)});
        e.pickable = false;
        out.push_back(std::move(e));

        LayerSpec d = cartesian(sublayer(spec, "decorators", "decorator", marks));
        iconProps(d);
        d.accessors["position"] = Accessor::fromColumns({"x", "y"});
        d.accessors["iconIndex"] = Accessor::fromConstant({propNumber(p, "decoratorIcon", std::max(0, cells - 1))});
        d.accessors["size"] = Accessor::fromConstant({nodeSize * 1.6});
        d.accessors["color"] = constantColor(spec, "decoratorColor", {255, 140, 0, 200});
        copyProp(spec, d, "pulseAmplitude", "pulseAmplitude");
        copyProp(spec, d, "pulsePeriod", "pulsePeriod");
        copyProp(spec, d, "phase", "phase");
        d.pickable = false;
        out.push_back(std::move(d));

        LayerSpec nodesSpec = cartesian(sublayer(spec, "nodes", "icon", nodes));
        iconProps(nodesSpec);
        nodesSpec.accessors["position"] = Accessor::fromColumns({"x", "y"});
        nodesSpec.accessors["iconIndex"] = Accessor::fromColumns({"icon"});
        nodesSpec.accessors["size"] = Accessor::fromConstant({nodeSize});
        nodesSpec.accessors["color"] = constantColor(spec, "nodeColor", {255, 255, 255, 255});
        out.push_back(std::move(nodesSpec));

        LayerSpec l = cartesian(sublayer(spec, "labels", "label", nodes));
        l.props["atlas"] = propString(p, "labelAtlas", "");
        l.props["metrics"] = propString(p, "labelMetrics", "");
        l.props["anchor"] = std::string("middle");
        l.props["pixelOffset"] = std::vector<double>{0.0, nodeSize * 0.5 + propNumber(p, "labelSize", 12.0) * 0.7};
        l.accessors["position"] = Accessor::fromColumns({"x", "y"});
        l.accessors["text"] = Accessor::fromColumns({"label"});
        l.accessors["size"] = Accessor::fromConstant({propNumber(p, "labelSize", 12.0)});
        l.accessors["color"] = constantColor(spec, "labelColor", {30, 30, 30, 255});
        l.pickable = false;
        out.push_back(std::move(l));
        return out;
    }
};

}  // namespace

std::unique_ptr<LayerType> makeGeoJsonLayer() { return std::make_unique<GeoJsonLayer>(); }
std::unique_ptr<LayerType> makeWindLayer() { return std::make_unique<WindLayer>(); }
std::unique_ptr<LayerType> makeGraphLayer() { return std::make_unique<GraphLayer>(); }

}  // namespace layers
}  // namespace strata

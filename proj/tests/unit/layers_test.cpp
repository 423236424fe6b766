#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "strata/analytics/graph.hpp"
#include "strata/analytics/wind.hpp"
#include "strata/io/csv.hpp"
#include "strata/io/geojson_io.hpp"
#include "strata/io/graph_io.hpp"
#include "strata/layers/geojson.hpp"
#include "strata/layers/grid.hpp"
#include "strata/layers/icon.hpp"
#include "strata/layers/label.hpp"
#include "support/fixtures.hpp"

using namespace strata;
using namespace strata::testing;

namespace {

const std::string kIcons = sourcePath("assets/icons.png");
const std::string kGlyphs = sourcePath("assets/glyphs.png");
const std::string kMetrics = sourcePath("assets/glyphs.json");

/// One spec per primitive layer type over n random rows.
std::vector<LayerSpec> everyPrimitive(std::size_t n) {
    auto t = randomPoints(n, 99);
    std::vector<double> lng2(*t->numeric("lng")), lat2(*t->numeric("lat")), zero(n, 0.0), speed(n), labels;
    for (std::size_t i = 0; i < n; ++i) {
        lng2[i] += 0.5;
        lat2[i] += 0.25;
        speed[i] = 1.0 + static_cast<double>(i % 3);
    }
    t->addNumeric("lng2", lng2);
    t->addNumeric("lat2", lat2);
    t->addNumeric("zero", zero);
    t->addNumeric("speed", speed);
    t->addString("text", std::vector<std::string>(n, "ab"));

    std::vector<LayerSpec> out;
    out.push_back(scatterSpec("scatter", t));
    LayerSpec line{.id = "line", .type = "line", .data = t};
    line.accessors = {{"sourcePosition", Accessor::fromColumns({"lng", "lat"})},
                      {"targetPosition", Accessor::fromColumns({"lng2", "lat2"})}};
    out.push_back(line);
    LayerSpec poly{.id = "poly", .type = "solid-polygon", .data = t};
    poly.accessors = {{"vertexA", Accessor::fromColumns({"lng", "lat"})},
                      {"vertexB", Accessor::fromColumns({"lng2", "lat"})},
                      {"vertexC", Accessor::fromColumns({"lng", "lat2"})}};
    out.push_back(poly);
    LayerSpec particle{.id = "particle", .type = "particle", .data = t};
    particle.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})}, {"age", Accessor::fromColumns({"zero"})}};
    out.push_back(particle);
    LayerSpec grid{.id = "grid", .type = "extruded-grid", .data = t};
    grid.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})}};
    grid.props["cellSizeMeters"] = 200000.0;
    out.push_back(grid);
    LayerSpec icon{.id = "icon", .type = "icon", .data = t};
    icon.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})}};
    icon.props = {{"atlas", kIcons}, {"atlasRows", 2.0}, {"atlasCols", 2.0}};
    out.push_back(icon);
    LayerSpec deco = icon;
    deco.id = "decorator";
    deco.type = "decorator";
    out.push_back(deco);
    LayerSpec label{.id = "label", .type = "label", .data = t};
    label.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})}, {"text", Accessor::fromColumns({"text"})}};
    label.props = {{"atlas", kGlyphs}, {"metrics", kMetrics}};
    out.push_back(label);
    LayerSpec field{.id = "field", .type = "vector-field", .data = t};
    field.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})},
                       {"velocity", Accessor::fromColumns({"speed", "speed", "zero"})}};
    out.push_back(field);
    LayerSpec cones{.id = "voronoi", .type = "voronoi-picking", .data = t};
    cones.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})}};
    out.push_back(cones);
    return out;
}

}  // namespace

TEST(Catalog, EveryTypeIsRegisteredOnce) {
    const auto names = builtinLayers().names();
    for (const char* t : {"scatterplot", "line", "solid-polygon", "particle", "voronoi-picking", "extruded-grid", "icon",
                          "decorator", "label", "vector-field", "geojson", "wind", "graph"}) {
        EXPECT_NE(builtinLayers().find(t), nullptr) << t;
    }
    EXPECT_EQ(names.size(), 13u);
}

TEST(Catalog, AttributeNamesAreUniqueAndRequiredAccessorsDeclared) {
    for (const auto& spec : everyPrimitive(4)) {
        const auto& type = builtinLayers().get(spec.type);
        std::set<std::string> names;
        for (const auto& d : type.attributes(spec)) EXPECT_TRUE(names.insert(d.name).second) << spec.type << d.name;
        const auto accessors = type.accessorNames(spec);
        for (const auto& r : type.requiredAccessors(spec)) {
            EXPECT_NE(std::find(accessors.begin(), accessors.end(), r), accessors.end()) << spec.type << r;
        }
    }
}

class DrawCallBound : public ::testing::TestWithParam<std::size_t> {};

TEST_P(DrawCallBound, AtMostThreeDrawCallsPerLayerIndependentOfCount) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto specs = everyPrimitive(GetParam());
    for (auto& s : specs) s.pickable = true;
    const auto report = engine.update(sceneOf(specs, cartesianViewport(64, 64, 1.0)));
    ASSERT_TRUE(report.errors.empty()) << report.errors.begin()->first << ": " << report.errors.begin()->second;
    for (const auto& s : specs) {
        SceneSpec single = sceneOf({s}, cartesianViewport(64, 64, 1.0));
        gpu::Device d;
        Engine e(d, builtinLayers());
        e.update(single);
        gpu::RenderTarget target(64, 64);
        const auto display = e.render(target, RenderMode::display);
        const auto picking = e.render(target, RenderMode::picking);
        EXPECT_LE(display.drawCalls, 3u) << s.type;
        EXPECT_LE(picking.drawCalls, 3u) << s.type;
        const bool functional = s.type == "voronoi-picking";
        EXPECT_EQ(display.drawCalls, functional ? 0u : 1u) << s.type;
        EXPECT_EQ(picking.drawCalls, 1u) << s.type;
    }
}

INSTANTIATE_TEST_SUITE_P(Counts, DrawCallBound, ::testing::Values(10u, 10000u));

TEST(Scatterplot, PixelRadiusCoversExactlyTheDisc) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto t = makeTable(1);
    t->addNumeric("x", {256.0});
    t->addNumeric("y", {256.0});
    LayerSpec s{.id = "s", .type = "scatterplot", .data = t};
    s.accessors = {{"position", Accessor::fromColumns({"x", "y"})},
                   {"radius", Accessor::fromConstant({10.0})},
                   {"fillColor", Accessor::fromConstant({255, 0, 0, 255})}};
    s.props["coordinateSystem"] = std::string("cartesian");
    engine.update(sceneOf({s}, cartesianViewport(64, 64, 0.0)));
    const auto img = renderImage(engine, {0, 0, 0, 255});
    // Center pixel (32, 32) has its center at (32.5, 32.5); disc centered at (32, 32).
    EXPECT_EQ(img.at(32, 32)[0], 255);
    EXPECT_EQ(img.at(32 + 8, 32)[0], 255);
    EXPECT_EQ(img.at(32 + 11, 32)[0], 0);
    EXPECT_EQ(img.at(32 + 8, 32 + 8)[0], 0);
}

TEST(Scatterplot, MeterRadiusScalesWithZoom) {
    auto t = makeTable(1);
    t->addNumeric("lng", {0.0});
    t->addNumeric("lat", {0.0});
    LayerSpec s{.id = "s", .type = "scatterplot", .data = t};
    s.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})},
                   {"radius", Accessor::fromConstant({2000.0})},
                   {"fillColor", Accessor::fromConstant({255, 255, 255, 255})}};
    s.props["radiusUnits"] = std::string("meters");
    auto litWidth = [&](double zoom) {
        gpu::Device device;
        Engine engine(device, builtinLayers());
        engine.update(sceneOf({s}, cartesianViewport(200, 200, zoom)));
        const auto img = renderImage(engine);
        int lit = 0;
        for (int x = 0; x < 200; ++x) lit += img.at(x, 100)[0] > 127 ? 1 : 0;
        return lit;
    };
    // 2 km at the equator: 2000 * 512 * 2^z / 40075016.686 px.
    const double r10 = 2000.0 * 512.0 * 1024.0 / kEarthCircumferenceMeters;
    EXPECT_NEAR(litWidth(10.0), 2.0 * r10, 2.0);
    EXPECT_NEAR(litWidth(11.0), 4.0 * r10, 2.0);
}

TEST(Grid, AggregationMatchesBruteForceBinning) {
    const auto t = randomPoints(10000, 5, -122.4, 37.7, 0.2);
    const double cell = 0.013;
    const auto agg = aggregateGrid(*t, Accessor::fromColumns({"lng", "lat"}), cell);
    const auto& lng = *t->numeric("lng");
    const auto& lat = *t->numeric("lat");
    double minX = 1e9, minY = 1e9;
    std::vector<WorldPoint> pts;
    for (std::size_t i = 0; i < lng.size(); ++i) {
        pts.push_back(lngLatToWorld({lng[i], lat[i]}));
        minX = std::min(minX, pts.back().x);
        minY = std::min(minY, pts.back().y);
    }
    const double ox = std::floor(minX / cell) * cell, oy = std::floor(minY / cell) * cell;
    std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> expected;
    for (const auto& p : pts) {
        expected[{static_cast<std::int64_t>(std::floor((p.x - ox) / cell)),
                  static_cast<std::int64_t>(std::floor((p.y - oy) / cell))}] += 1;
    }
    EXPECT_EQ(agg.cells, expected);
    std::uint64_t total = 0, maxCount = 0;
    for (const auto& [k, v] : agg.cells) {
        total += v;
        maxCount = std::max(maxCount, v);
    }
    EXPECT_EQ(total, 10000u);
    EXPECT_EQ(agg.maxCount, maxCount);
}

TEST(Grid, BoundaryPointsGoToTheHigherCell) {
    auto t = makeTable(3);
    t->addNumeric("x", {0.0, 1.0, 1.999});
    t->addNumeric("y", {0.0, 0.0, 0.0});
    const auto agg = aggregateGrid(*t, Accessor::fromColumns({"x", "y"}), 1.0, WorldPoint{0.0, 0.0},
                                   CoordinateSystem::cartesian);
    EXPECT_EQ(agg.cells.at({0, 0}), 1u);
    EXPECT_EQ(agg.cells.at({1, 0}), 2u);
}

TEST(Grid, RampHitsStopsAndInterpolatesLinearly) {
    EXPECT_EQ(rampColor(kYlOrRd, 0.0), kYlOrRd.front());
    EXPECT_EQ(rampColor(kYlOrRd, 1.0), kYlOrRd.back());
    EXPECT_EQ(rampColor(kYlOrRd, 0.4), kYlOrRd[2]);
    const auto mid = rampColor(kYlOrRd, 0.1);
    for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(mid[c], (kYlOrRd[0][c] + kYlOrRd[1][c]) / 2.0);
    EXPECT_EQ(rampColor(kYlOrRd, -3.0), kYlOrRd.front());
    EXPECT_EQ(rampColor(kYlOrRd, 7.0), kYlOrRd.back());
}

TEST(Grid, DrawPropsDoNotReDeriveButCellSizeDoes) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    LayerSpec grid{.id = "g", .type = "extruded-grid", .data = randomPoints(500, 3)};
    grid.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})}};
    grid.props["cellSizeMeters"] = 300000.0;
    EXPECT_EQ(engine.update(sceneOf({grid})).derivations, 1u);
    grid.props["elevationScale"] = 5.0;
    grid.props["coverage"] = 0.5;
    const auto r = engine.update(sceneOf({grid}));
    EXPECT_EQ(r.derivations, 0u);
    EXPECT_EQ(r.accessorEvaluations, 0u);
    grid.props["cellSizeMeters"] = 100000.0;
    EXPECT_EQ(engine.update(sceneOf({grid})).derivations, 1u);
}

TEST(Icon, UvRectsTileTheAtlasRowMajor) {
    const auto r0 = iconUvRect(0, 2, 2);
    EXPECT_EQ(r0, (std::array<float, 4>{0.0f, 0.0f, 0.5f, 0.5f}));
    const auto r1 = iconUvRect(1, 2, 2);
    EXPECT_EQ(r1, (std::array<float, 4>{0.5f, 0.0f, 1.0f, 0.5f}));
    const auto r3 = iconUvRect(3, 2, 2);
    EXPECT_EQ(r3, (std::array<float, 4>{0.5f, 0.5f, 1.0f, 1.0f}));
    const auto r5 = iconUvRect(5, 2, 3);
    EXPECT_FLOAT_EQ(r5[0], 2.0f / 3.0f);
    EXPECT_FLOAT_EQ(r5[1], 0.5f);
}

TEST(Icon, OutOfRangeIndicesSanitizeToZero) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto t = randomPoints(5, 1);
    t->addNumeric("icon", {0, 1, 9, -1, 3});
    LayerSpec icon{.id = "i", .type = "icon", .data = t};
    icon.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})}, {"iconIndex", Accessor::fromColumns({"icon"})}};
    icon.props = {{"atlas", kIcons}, {"atlasRows", 2.0}, {"atlasCols", 2.0}};
    engine.update(sceneOf({icon}));
    const auto* layer = engine.findLayer("i");
    EXPECT_EQ(layer->diagnostics.at("iconIndexOutOfRange"), 2u);
    EXPECT_EQ(layer->attribute("iconIndex")->values, (std::vector<float>{0, 1, 0, 0, 3}));
}

TEST(Icon, MissingAtlasIsALayerError) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    LayerSpec icon{.id = "i", .type = "icon", .data = randomPoints(2, 1)};
    icon.accessors = {{"position", Accessor::fromColumns({"lng", "lat"})}};
    icon.props = {{"atlas", std::string("/nonexistent/icons.png")}};
    const auto r = engine.update(sceneOf({icon}));
    EXPECT_TRUE(r.errors.contains("i"));
}

TEST(Decorator, PulseFollowsTheCosineProfile) {
    EXPECT_DOUBLE_EQ(pulseScale(1.5, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(pulseScale(1.5, std::numbers::pi), 1.5);
    EXPECT_NEAR(pulseScale(2.0, std::numbers::pi / 2.0), 1.5, 1e-12);
}

TEST(Decorator, TimeAnimatesWithoutRefills) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto t = makeTable(1);
    t->addNumeric("x", {256.0});
    t->addNumeric("y", {256.0});
    LayerSpec deco{.id = "d", .type = "decorator", .data = t};
    deco.accessors = {{"position", Accessor::fromColumns({"x", "y"})}, {"size", Accessor::fromConstant({20})}};
    deco.props = {{"atlas", kIcons},      {"atlasRows", 2.0},  {"atlasCols", 2.0},
                  {"coordinateSystem", std::string("cartesian")}, {"pulsePeriod", 2.0}};
    const auto scene = sceneOf({deco}, cartesianViewport(64, 64));
    engine.update(scene);
    auto lit = [&](double time) {
        const auto img = renderImage(engine, {0, 0, 0, 255}, time);
        int n = 0;
        for (std::size_t i = 0; i < img.pixels.size(); i += 4) n += img.pixels[i] > 127 ? 1 : 0;
        return n;
    };
    const int small = lit(0.0), big = lit(1.0);
    EXPECT_GT(big, small * 2);
    EXPECT_NEAR(static_cast<double>(big) / small, 1.5 * 1.5, 0.3);
    EXPECT_EQ(engine.update(scene).accessorEvaluations, 0u);
}

TEST(Label, LayoutAnchorsAndAdvances) {
    const auto atlas = loadGlyphAtlas(kGlyphs, kMetrics);
    std::size_t missing = 0;
    const auto start = layoutText(*atlas, "Hi", TextAnchor::start, missing);
    ASSERT_EQ(start.size(), 2u);
    const double width = atlas->glyphs.at('H').advance + atlas->glyphs.at('i').advance;
    EXPECT_DOUBLE_EQ(start[0].penX, 0.0);
    EXPECT_DOUBLE_EQ(start[1].penX, atlas->glyphs.at('H').advance);
    const auto middle = layoutText(*atlas, "Hi", TextAnchor::middle, missing);
    EXPECT_DOUBLE_EQ(middle[0].penX, -width / 2.0);
    const auto end = layoutText(*atlas, "Hi", TextAnchor::end, missing);
    EXPECT_DOUBLE_EQ(end[0].penX, -width);
    EXPECT_EQ(missing, 0u);
    const auto odd = layoutText(*atlas, "a\xC3\xA9", TextAnchor::start, missing);
    EXPECT_EQ(missing, 2u);
    EXPECT_EQ(odd[1].glyph, '?');
}

TEST(Label, OneInstancePerGlyphAndPickingMapsToRows) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto t = makeTable(3);
    t->addNumeric("x", {200.0, 256.0, 300.0});
    t->addNumeric("y", {256.0, 256.0, 256.0});
    t->addString("name", {"ab", "", "xyz"});
    LayerSpec label{.id = "l", .type = "label", .data = t};
    label.accessors = {{"position", Accessor::fromColumns({"x", "y"})}, {"text", Accessor::fromColumns({"name"})}};
    label.props = {{"atlas", kGlyphs}, {"metrics", kMetrics}, {"coordinateSystem", std::string("cartesian")}};
    engine.update(sceneOf({label}));
    const auto* layer = engine.findLayer("l");
    ASSERT_TRUE(layer->ok()) << layer->error;
    EXPECT_EQ(layer->instanceCount, 5u);
    EXPECT_EQ(layer->type->sourceRow(*layer, 0), 0u);
    EXPECT_EQ(layer->type->sourceRow(*layer, 1), 0u);
    EXPECT_EQ(layer->type->sourceRow(*layer, 2), 2u);
    EXPECT_EQ(layer->type->sourceRow(*layer, 4), 2u);
    const auto img = renderImage(engine, {255, 255, 255, 255});
    int dark = 0;
    for (std::size_t i = 0; i < img.pixels.size(); i += 4) dark += img.pixels[i] < 128 ? 1 : 0;
    EXPECT_GT(dark, 20);
}

TEST(Label, ChangingTextRederivesOnlyOnTrigger) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto t = makeTable(1);
    t->addNumeric("x", {256.0});
    t->addNumeric("y", {256.0});
    t->addString("name", {"ab"});
    LayerSpec label{.id = "l", .type = "label", .data = t};
    label.accessors = {{"position", Accessor::fromColumns({"x", "y"})}, {"text", Accessor::fromColumns({"name"})}};
    label.props = {{"atlas", kGlyphs}, {"metrics", kMetrics}, {"coordinateSystem", std::string("cartesian")}};
    engine.update(sceneOf({label}));
    label.props["pixelOffset"] = std::vector<double>{0.0, 10.0};
    EXPECT_EQ(engine.update(sceneOf({label})).derivations, 0u);
    label.updateTriggers["text"] = 1.0;
    EXPECT_EQ(engine.update(sceneOf({label})).derivations, 1u);
}

TEST(VectorField, SkipsInvalidAndStillNodesAndPointsAlongTheFlow) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto t = makeTable(3);
    t->addNumeric("x", {256.0, 100.0, 50.0});
    t->addNumeric("y", {256.0, 100.0, 50.0});
    t->addNumeric("vx", {0.0, 3.0, 1.0});
    t->addNumeric("vy", {4.0, 0.0, 1.0});
    t->addNumeric("vz", {0.0, 4.0, 0.0});
    t->addNumeric("valid", {1.0, 1.0, 0.0});
    LayerSpec f{.id = "f", .type = "vector-field", .data = t};
    f.props["coordinateSystem"] = std::string("cartesian");
    engine.update(sceneOf({f}));
    const auto* layer = engine.findLayer("f");
    ASSERT_EQ(layer->instanceCount, 2u);
    const auto& angle = layer->attribute("angle")->values;
    const auto& speed = layer->attribute("speed")->values;
    EXPECT_FLOAT_EQ(angle[0], static_cast<float>(std::numbers::pi / 2.0));
    EXPECT_FLOAT_EQ(angle[1], 0.0f);
    EXPECT_FLOAT_EQ(speed[0], 4.0f);
    EXPECT_FLOAT_EQ(speed[1], 5.0f);
}

TEST(GeoJson, MixedFixtureSplitsIntoThreeSublayersWithExpectedRows) {
    const auto fc = ingestGeoJson(sourcePath("data/mixed.geojson"));
    std::size_t points = 0, edges = 0, triangles = 0;
    for (const auto& f : fc->features) {
        const auto& g = f.geometry;
        for (const auto& part : g.parts) {
            if (g.type == Geometry::Type::point || g.type == Geometry::Type::multiPoint) points += part.size();
            if (g.type == Geometry::Type::lineString || g.type == Geometry::Type::multiLineString) {
                for (const auto& line : part) edges += line.size() - 1;
            }
            if (g.type == Geometry::Type::polygon || g.type == Geometry::Type::multiPolygon) {
                // Ear clipping a simple polygon with h holes and v distinct vertices yields v + 2h - 2 triangles.
                std::size_t v = 0;
                for (const auto& ring : part) v += ring.size() - (ring.front() == ring.back() ? 1 : 0);
                triangles += v + 2 * (part.size() - 1) - 2;
            }
        }
    }
    gpu::Device device;
    Engine engine(device, builtinLayers());
    LayerSpec g{.id = "sf", .type = "geojson", .data = featureTable(fc)};
    engine.update(sceneOf({g}));
    ASSERT_EQ(engine.layers().size(), 3u);
    EXPECT_EQ(engine.findLayer("sf-points")->instanceCount, points);
    EXPECT_EQ(engine.findLayer("sf-lines")->instanceCount, edges);
    EXPECT_EQ(engine.findLayer("sf-polygon-fill")->instanceCount, triangles);
    EXPECT_EQ(points, 3u);
    EXPECT_EQ(edges, 5u);
    EXPECT_EQ(triangles, 8u + 1u + 2u);

    g.props["stroked"] = true;
    engine.update(sceneOf({g}));
    ASSERT_EQ(engine.layers().size(), 4u);
    EXPECT_EQ(engine.findLayer("sf-polygon-outline")->instanceCount, 8u + 3u + 4u);
}

TEST(GeoJson, InvalidAndUnsupportedGeometriesAreTallied) {
    const auto fc = parseGeoJson(R"({"type": "FeatureCollection", "features": [
        {"type": "Feature", "properties": {}, "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0]]]}},
        {"type": "Feature", "properties": {}, "geometry": {"type": "GeometryCollection", "geometries": []}},
        {"type": "Feature", "properties": {}, "geometry": null},
        {"type": "Feature", "properties": {}, "geometry": {"type": "Point", "coordinates": [3, 4]}}]})");
    gpu::Device device;
    Engine engine(device, builtinLayers());
    LayerSpec g{.id = "g", .type = "geojson", .data = featureTable(fc)};
    engine.update(sceneOf({g}));
    const auto& diag = engine.compositeDiagnostics().at("g");
    EXPECT_EQ(diag.at("invalidPolygons"), 1u);
    EXPECT_EQ(diag.at("unsupportedGeometries"), 2u);
    EXPECT_NE(engine.findLayer("g-points"), nullptr);
    EXPECT_NE(engine.findLayer("g-polygon-outline"), nullptr);
}

TEST(WindComposite, TickRefillsParticlesOnly) {
    auto stations = ingestCsv(sourcePath("data/wind_stations.csv"), {"lng", "lat", "vx", "vy", "vz"});
    gpu::Device device;
    Engine engine(device, builtinLayers());
    LayerSpec w{.id = "w", .type = "wind", .data = stations};
    w.props = {{"nx", 20.0}, {"ny", 10.0}, {"particleCount", 500.0}, {"tick", 0.0}};
    Viewport vp;
    vp.center = {-96, 37};
    vp.zoom = 2;
    vp.width = 128;
    vp.height = 96;
    engine.update(sceneOf({w}, vp));
    const auto* particles = engine.findLayer("w-particles");
    ASSERT_NE(particles, nullptr);
    const auto dataBefore = particles->spec.data.get();
    for (int tick = 1; tick <= 3; ++tick) {
        w.props["tick"] = static_cast<double>(tick);
        const auto r = engine.update(sceneOf({w}, vp));
        ASSERT_TRUE(r.errors.empty());
        EXPECT_EQ(r.evaluations.size(), 1u);
        EXPECT_EQ(r.evaluations.at("w-particles").at("position"), 500u);
        EXPECT_EQ(r.evaluations.at("w-particles").at("age"), 500u);
        EXPECT_EQ(r.derivations, 0u);
    }
    EXPECT_EQ(engine.findLayer("w-particles")->spec.data.get(), dataBefore);
    EXPECT_EQ(engine.findLayer("w-particles")->attribute("position")->fillCount, 4u);
    EXPECT_EQ(engine.findLayer("w-field")->attribute("position")->fillCount, 1u);
}

TEST(GraphComposite, ExpandsToFourLayersInDrawOrder) {
    auto graph = loadGraphJson(sourcePath("data/graph.json"));
    gpu::Device device;
    Engine engine(device, builtinLayers());
    LayerSpec g{.id = "g", .type = "graph", .data = graphTable(graph)};
    g.props = {{"iconAtlas", kIcons}, {"iconRows", 2.0}, {"iconCols", 2.0}, {"labelAtlas", kGlyphs},
               {"labelMetrics", kMetrics}};
    const auto r = engine.update(sceneOf({g}));
    ASSERT_TRUE(r.errors.empty()) << r.errors.begin()->second;
    std::vector<std::string> ids;
    for (const auto& l : engine.layers()) ids.push_back(l->spec.id);
    EXPECT_EQ(ids, (std::vector<std::string>{"g-edges", "g-decorators", "g-nodes", "g-labels"}));
    EXPECT_EQ(engine.findLayer("g-nodes")->instanceCount, graph->nodeCount());
    EXPECT_EQ(engine.findLayer("g-edges")->instanceCount, graph->edges.size());
    // The layout runs once per data identity.
    EXPECT_EQ(engine.update(sceneOf({g})).compositeExpansions, 0u);
}

// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status 1 when any fails.
// `acceptance --write-goldens` re-renders tests/golden/*.png before checking.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "strata/analytics/graph.hpp"
#include "strata/geomath/double_float.hpp"
#include "strata/geomath/mercator.hpp"
#include "strata/geomath/viewport.hpp"
#include "strata/geometry/triangulation.hpp"
#include "strata/io/scene.hpp"
#include "strata/layers/grid.hpp"
#include "strata/picking/encoding.hpp"
#include "strata/picking/pick.hpp"
#include "support/fixtures.hpp"

using namespace strata;
using namespace strata::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

std::string fmt(double v, int precision = 3) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------------------------------------
// df64

double snap(double x) { return splitDouble(x).value(); }

double relErr(double got, double want) { return want == 0.0 ? std::fabs(got) : std::fabs(got - want) / std::fabs(want); }

Outcome df64Arithmetic() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> e(-40.0, 40.0), s(0.0, 1.0);
    auto operand = [&] {
        const double v = std::exp2(e(rng));
        return snap(s(rng) < 0.5 ? -v : v);
    };
    const auto start = Clock::now();
    double worstAdd = 0.0, worstMul = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const double x = operand(), y = operand();
        const DoubleFloat a = splitDouble(x), b = splitDouble(y);
        worstAdd = std::max(worstAdd, relErr(dfAdd(a, b).value(), x + y));
        worstMul = std::max(worstMul, relErr(dfMul(a, b).value(), x * y));
    }
    const double t = seconds(start);
    const double bound = 0x1p-44;
    return {worstAdd <= bound && worstMul <= bound && t < 10.0,
            "10^6 pairs, max rel err add " + fmt(worstAdd) + ", mul " + fmt(worstMul) + " (bound " + fmt(bound) +
                "), " + fmt(t) + " s"};
}

Outcome wobble() {
    Viewport v;
    v.center = {-122.4194, 37.7749};
    v.zoom = 20;
    v.width = 1024;
    v.height = 768;
    const ShaderProjection sp = ShaderProjection::fromViewport(v);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> off(-2e-4, 2e-4), angle(0.0, 2.0 * std::numbers::pi);
    double dfWorst = 0.0, fpWorst = 0.0, fpMean = 0.0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const LngLat a{v.center.longitude + off(rng), v.center.latitude + off(rng)};
        const double t = angle(rng);
        const LngLat b{a.longitude + 1e-5 * std::cos(t), a.latitude + 1e-5 * std::sin(t)};
        const ScreenPosition ra = projectToScreen(v, a), rb = projectToScreen(v, b);
        const double reference = std::hypot(rb.x - ra.x, rb.y - ra.y);
        const WorldPoint wa = lngLatToWorld(a), wb = lngLatToWorld(b);
        const Vec3f da = clipToScreenF(sp, sp.clipFromWorld(splitDouble(wa.x), splitDouble(wa.y)));
        const Vec3f db = clipToScreenF(sp, sp.clipFromWorld(splitDouble(wb.x), splitDouble(wb.y)));
        const Vec3f fa = clipToScreenF(sp, sp.clipFromWorldFp32(static_cast<float>(wa.x), static_cast<float>(wa.y)));
        const Vec3f fb = clipToScreenF(sp, sp.clipFromWorldFp32(static_cast<float>(wb.x), static_cast<float>(wb.y)));
        const double dfErr = std::fabs(std::hypot(db.x - da.x, db.y - da.y) - reference) / reference;
        const double fpErr = std::fabs(std::hypot(fb.x - fa.x, fb.y - fa.y) - reference) / reference;
        dfWorst = std::max(dfWorst, dfErr);
        fpWorst = std::max(fpWorst, fpErr);
        fpMean += fpErr / n;
    }
    return {dfWorst < 0.01 && fpMean > 0.01,
            "zoom 20, 1000 pairs 1e-5 deg apart: df64 max sep err " + fmt(dfWorst * 100) + "%, fp32 mean " +
                fmt(fpMean * 100) + "% / max " + fmt(fpWorst * 100) + "%"};
}

Outcome mercatorRoundTrip() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> lng(-180.0, 180.0), lat(-kMaxLatitude, kMaxLatitude);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const LngLat q{lng(rng), lat(rng)};
        const LngLat r = worldToLngLat(lngLatToWorld(q));
        worst = std::max({worst, std::fabs(r.longitude - q.longitude), std::fabs(r.latitude - q.latitude)});
    }
    return {worst <= 1e-9, "10^5 coordinates, max error " + fmt(worst) + " deg"};
}

// ---------------------------------------------------------------------------------------------
// Declarative updates

std::uint64_t evals(const UpdateReport& r, const std::string& layer, const std::string& attr) {
    auto l = r.evaluations.find(layer);
    if (l == r.evaluations.end()) return 0;
    auto a = l->second.find(attr);
    return a == l->second.end() ? 0 : a->second;
}

bool sameBuffers(const AttributeBuffer& a, const AttributeBuffer& b) {
    return a.values.size() == b.values.size() && a.low.size() == b.low.size() &&
           std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(float)) == 0 &&
           std::memcmp(a.low.data(), b.low.data(), a.low.size() * sizeof(float)) == 0;
}

Outcome diffMinimality() {
    const std::size_t n = 1000000;
    auto data = randomPoints(n, 17);
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto spec = scatterSpec("big", data);
    spec.updateTriggers["radius"] = 0.0;
    engine.update(sceneOf({spec}));

    const auto same = engine.update(sceneOf({spec}));
    spec.updateTriggers["radius"] = 1.0;
    const auto trig = engine.update(sceneOf({spec}));
    const std::size_t a = 123456, b = 234567;
    auto& lng = *data->numericMutable("lng");
    for (std::size_t i = a; i < b; ++i) lng[i] += 0.25;
    spec.partialUpdates = {{"position", {a, b}}};
    const auto part = engine.update(sceneOf({spec}));

    gpu::Device fresh;
    Engine full(fresh, builtinLayers());
    full.update(sceneOf({spec}));
    bool identical = true;
    for (const char* name : {"position", "radius", "fillColor"}) {
        identical = identical && sameBuffers(*engine.findLayer("big")->attribute(name), *full.findLayer("big")->attribute(name));
    }
    const bool ok = same.accessorEvaluations == 0 && evals(trig, "big", "radius") == n &&
                    trig.accessorEvaluations == n && evals(part, "big", "position") == b - a &&
                    part.accessorEvaluations == b - a && identical;
    return {ok, "10^6 rows: resubmit " + std::to_string(same.accessorEvaluations) + " evals; radius trigger " +
                    std::to_string(evals(trig, "big", "radius")) + " radius / " +
                    std::to_string(trig.accessorEvaluations) + " total; partial [" + std::to_string(a) + "," +
                    std::to_string(b) + ") " + std::to_string(part.accessorEvaluations) + " evals; partial vs full " +
                    (identical ? "byte-identical" : "DIFFERENT")};
}

// ---------------------------------------------------------------------------------------------
// Instancing

const std::string kIcons = sourcePath("assets/icons.png");
const std::string kGlyphs = sourcePath("assets/glyphs.png");
const std::string kMetrics = sourcePath("assets/glyphs.json");

std::vector<LayerSpec> everyPrimitive(std::size_t n) {
    auto t = randomPoints(n, 99);
    std::vector<double> lng2(*t->numeric("lng")), lat2(*t->numeric("lat")), zero(n, 0.0), speed(n);
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
    const Accessor pos = Accessor::fromColumns({"lng", "lat"});

    std::vector<LayerSpec> out;
    out.push_back(scatterSpec("scatterplot", t));
    auto add = [&](const std::string& type, std::map<std::string, Accessor> accessors, ValueMap props = {}) {
        LayerSpec s;
        s.id = type;
        s.type = type;
        s.data = t;
        s.accessors = std::move(accessors);
        s.props = std::move(props);
        out.push_back(std::move(s));
    };
    add("line", {{"sourcePosition", pos}, {"targetPosition", Accessor::fromColumns({"lng2", "lat2"})}});
    add("solid-polygon", {{"vertexA", pos}, {"vertexB", Accessor::fromColumns({"lng2", "lat"})},
                          {"vertexC", Accessor::fromColumns({"lng", "lat2"})}});
    add("particle", {{"position", pos}, {"age", Accessor::fromColumns({"zero"})}});
    add("extruded-grid", {{"position", pos}}, {{"cellSizeMeters", 200000.0}});
    add("icon", {{"position", pos}}, {{"atlas", kIcons}, {"atlasRows", 2.0}, {"atlasCols", 2.0}});
    add("decorator", {{"position", pos}}, {{"atlas", kIcons}, {"atlasRows", 2.0}, {"atlasCols", 2.0}});
    add("label", {{"position", pos}, {"text", Accessor::fromColumns({"text"})}}, {{"atlas", kGlyphs}, {"metrics", kMetrics}});
    add("vector-field", {{"position", pos}, {"velocity", Accessor::fromColumns({"speed", "speed", "zero"})}});
    add("voronoi-picking", {{"position", pos}});
    for (auto& s : out) s.pickable = true;
    return out;
}

Outcome instancing() {
    std::ostringstream detail;
    bool ok = true;
    std::uint64_t worst = 0;
    // Every primitive type at 10 and 10^4 rows, the scatterplot also at 10^6.
    for (std::size_t n : {std::size_t{10}, std::size_t{10000}, std::size_t{1000000}}) {
        auto specs = everyPrimitive(n == 1000000 ? 1 : n);
        if (n == 1000000) specs = {scatterSpec("scatterplot", randomPoints(n, 5))};
        for (const auto& s : specs) {
            gpu::Device d;
            Engine e(d, builtinLayers());
            const auto r = e.update(sceneOf({s}, cartesianViewport(64, 64, 1.0)));
            if (!r.errors.empty()) {
                ok = false;
                detail << s.type << " error: " << r.errors.begin()->second << "; ";
                continue;
            }
            gpu::RenderTarget target(64, 64);
            worst = std::max({worst, e.render(target, RenderMode::display).drawCalls,
                              e.render(target, RenderMode::picking).drawCalls});
        }
    }
    ok = ok && worst <= 3;
    detail << "max draw calls per layer " << worst << " over 10 primitive types at n = 10, 10^4 and scatterplot at 10^6";

    auto big = randomPoints(1000000, 8);
    gpu::Device device;
    Engine engine(device, builtinLayers());
    Viewport vp = cartesianViewport(1024, 768, 4.0);
    const auto fillStart = Clock::now();
    const auto r = engine.update(sceneOf({scatterSpec("million", big)}, vp));
    const double fill = seconds(fillStart);
    gpu::RenderTarget target(vp.width, vp.height);
    const auto frameStart = Clock::now();
    const auto stats = engine.render(target, RenderMode::display);
    const double frame = seconds(frameStart);
    ok = ok && r.accessorEvaluations == 3000000 && fill < 2.0 && stats.instancesSubmitted == 1000000;
    detail << "; 10^6-row fill " << fmt(fill) << " s (< 2 s); 10^6-point frame " << fmt(frame * 1000, 4)
           << " ms on the CPU rasterizer (reported only)";
    return {ok, detail.str()};
}

// ---------------------------------------------------------------------------------------------
// Picking

Outcome pickingCriterion() {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> slot(1, 255);
    std::uniform_int_distribution<std::uint32_t> index(0, kMaxPickIndex);
    bool bijection = true;
    for (int i = 0; i < 100000; ++i) {
        const PickCode c{static_cast<std::uint8_t>(slot(rng)), index(rng)};
        bijection = bijection && decodePickColor(encodePickColor(c.layerSlot, c.index)) == c;
    }

    // 10^4 discs of radius 3 px at pixel centers; cursors go to discs with no other disc within reach.
    const Viewport vp = cartesianViewport(800, 600);
    std::uniform_int_distribution<int> px(2, 797), py(2, 597);
    std::vector<std::pair<int, int>> centers;
    std::vector<WorldPoint> pts;
    for (int i = 0; i < 10000; ++i) {
        centers.emplace_back(px(rng), py(rng));
        pts.push_back(pixelCenterWorld(vp, centers.back().first, centers.back().second));
    }
    gpu::Device device;
    Engine engine(device, builtinLayers());
    engine.update(sceneOf({cartesianScatter("dots", worldPoints(pts, 3.0))}, vp));
    int correct = 0, queries = 0;
    bool readsOk = true;
    for (std::size_t i = 0; i < centers.size() && queries < 20; ++i) {
        const auto [cx, cy] = centers[i];
        const bool isolated = std::none_of(centers.begin(), centers.end(), [&](const auto& c) {
            return &c != &centers[i] && std::hypot(c.first - cx, c.second - cy) < 3.0 + 3.0 + 2.0;
        });
        if (!isolated) continue;
        const int r = queries % 4;
        const auto before = device.pixelsRead();
        const auto info = pickAt(engine, cx + (queries % 3) - 1, cy, r);
        const auto read = device.pixelsRead() - before;
        readsOk = readsOk && read > 0 && read <= static_cast<std::uint64_t>((2 * r + 1) * (2 * r + 1));
        correct += info.found && info.layerId == "dots" && info.instanceIndex == i && info.row == i ? 1 : 0;
        ++queries;
    }
    return {bijection && queries == 20 && correct == 20 && readsOk,
            std::string("encode/decode bijection on 10^5 pairs ") + (bijection ? "holds" : "FAILS") + "; " +
                std::to_string(correct) + "/" + std::to_string(queries) +
                " cursor picks correct on the 10^4-disc fixture; pixels read per pick <= (2r+1)^2: " +
                (readsOk ? "yes" : "NO")};
}

Outcome voronoiCriterion() {
    const Viewport vp = cartesianViewport(400, 300);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> px(0, 399), py(0, 299);
    std::vector<std::pair<int, int>> sites;
    std::vector<WorldPoint> pts;
    for (int i = 0; i < 500; ++i) {
        sites.emplace_back(px(rng), py(rng));
        pts.push_back(pixelCenterWorld(vp, sites.back().first, sites.back().second));
    }
    auto cones = voronoiPickLayer("cones", worldPoints(pts), Accessor::fromColumns({"x", "y"}), 500.0);
    cones.props["coordinateSystem"] = std::string("cartesian");
    gpu::Device device;
    Engine engine(device, builtinLayers());
    engine.update(sceneOf({cones}, vp));
    int agree = 0, checked = 0, excluded = 0;
    for (int q = 0; q < 50; ++q) {
        const int x = px(rng), y = py(rng);
        std::vector<std::pair<double, std::size_t>> d;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            d.emplace_back(std::hypot(x - sites[i].first, y - sites[i].second), i);
        }
        std::partial_sort(d.begin(), d.begin() + 2, d.end());
        if (d[1].first - d[0].first < 1.0) {
            ++excluded;
            continue;
        }
        const auto info = pickAt(engine, x, y);
        agree += info.found && info.instanceIndex == d[0].second ? 1 : 0;
        ++checked;
    }
    return {agree == checked && checked > 0, "500 points x 50 queries: " + std::to_string(agree) + "/" +
                                                 std::to_string(checked) + " agree with brute force (" +
                                                 std::to_string(excluded) + " near-equidistant excluded)"};
}

// ---------------------------------------------------------------------------------------------
// Geometry and aggregation

Outcome gridAggregation() {
    const auto t = randomPoints(10000, 5, -122.4, 37.7, 0.2);
    const double cell = 0.013;
    const auto agg = aggregateGrid(*t, Accessor::fromColumns({"lng", "lat"}), cell);
    const auto& lng = *t->numeric("lng");
    const auto& lat = *t->numeric("lat");
    std::vector<WorldPoint> w;
    double minX = 1e9, minY = 1e9;
    for (std::size_t i = 0; i < lng.size(); ++i) {
        w.push_back(lngLatToWorld({lng[i], lat[i]}));
        minX = std::min(minX, w.back().x);
        minY = std::min(minY, w.back().y);
    }
    const double ox = std::floor(minX / cell) * cell, oy = std::floor(minY / cell) * cell;
    std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> expected;
    for (const auto& p : w) {
        expected[{static_cast<std::int64_t>(std::floor((p.x - ox) / cell)),
                  static_cast<std::int64_t>(std::floor((p.y - oy) / cell))}] += 1;
    }
    return {agg.cells == expected, "10^4 points into " + std::to_string(expected.size()) + " cells: counts " +
                                       (agg.cells == expected ? "identical" : "DIFFER") + " to brute-force binning"};
}

bool strictlyInsideCircumcircle(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
    using R = long double;
    const R ax = a.x, ay = a.y, bx = b.x, by = b.y, cx = c.x, cy = c.y;
    const R d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    const R ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d;
    const R uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d;
    const R r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy);
    const R p2 = (p.x - ux) * (p.x - ux) + (p.y - uy) * (p.y - uy);
    return p2 < r2 * (1 - 1e-9L);
}

Outcome delaunay() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<Vec2> pts(1000);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const Triangulation t = delaunayTriangulate(pts);
    std::size_t violations = 0;
    for (const auto& tr : t.triangles) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i == tr[0] || i == tr[1] || i == tr[2]) continue;
            violations += strictlyInsideCircumcircle(pts[tr[0]], pts[tr[1]], pts[tr[2]], pts[i]) ? 1 : 0;
        }
    }
    std::vector<double> vals;
    for (const auto& p : pts) vals.push_back(-4.0 + 2.5 * p.x - 0.75 * p.y);
    const TriangleLocator locator(t);
    std::size_t hint = 0;
    double worst = 0.0;
    int inside = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec2 q{u(rng), u(rng)};
        const auto v = interpolateBarycentric(locator, vals, 1, q, hint);
        if (!v) continue;
        ++inside;
        worst = std::max(worst, relErr((*v)[0], -4.0 + 2.5 * q.x - 0.75 * q.y));
    }
    return {violations == 0 && !t.triangles.empty() && worst <= 1e-6 && inside > 9000,
            "1000 points, " + std::to_string(t.triangles.size()) + " triangles, " + std::to_string(violations) +
                " empty-circumcircle violations; affine field max rel err " + fmt(worst) + " over " +
                std::to_string(inside) + " queries"};
}

// ---------------------------------------------------------------------------------------------
// Golden images

gpu::Image renderScene(const std::string& path) {
    const auto loaded = loadScene(path);
    gpu::Device device;
    Engine engine(device, builtinLayers());
    const auto report = engine.update(loaded.scene);
    if (!report.errors.empty()) throw std::runtime_error(report.errors.begin()->first + ": " + report.errors.begin()->second);
    gpu::RenderTarget target(loaded.scene.viewport.width, loaded.scene.viewport.height, true);
    engine.render(target, RenderMode::display, loaded.time, loaded.background);
    return target.toImage();
}

Outcome goldens(bool write) {
    bool ok = true;
    std::ostringstream detail;
    for (const char* name : {"bike_spots", "wind", "graph"}) {
        const auto golden = sourcePath(std::string("tests/golden/") + name + ".png");
        const auto img = renderScene(sourcePath(std::string("scenes/") + name + ".json"));
        if (write) gpu::writePng(golden, img);
        if (!std::filesystem::exists(golden)) {
            ok = false;
            detail << name << ": no reference; ";
            continue;
        }
        const auto ref = gpu::readPng(golden);
        if (ref.width != img.width || ref.height != img.height) {
            ok = false;
            detail << name << ": size mismatch; ";
            continue;
        }
        const auto cmp = gpu::compareImages(img, ref, 2);
        ok = ok && cmp.fractionWithinTolerance >= 0.995;
        detail << name << " " << fmt(cmp.fractionWithinTolerance * 100, 5) << "% within 2 (max diff "
               << cmp.maxChannelDifference << "); ";
    }
    std::string d = detail.str();
    return {ok, d.substr(0, d.size() - 2)};
}

// ---------------------------------------------------------------------------------------------
// Force layout

Outcome forceLayout() {
    GraphData chain;
    for (int i = 0; i < 24; ++i) {
        chain.ids.push_back(std::to_string(i));
        chain.labels.push_back(chain.ids.back());
        chain.positions.push_back({std::nan(""), std::nan("")});
        chain.groups.push_back(0);
        chain.edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>((i * 7 + 3) % 24));
    }
    // Alpha decay, tick count and one refill per tick through the engine.
    auto state = makeGraphState(chain);
    auto nodes = makeTable(24);
    std::vector<double> xs(24), ys(24);
    for (std::size_t i = 0; i < 24; ++i) {
        xs[i] = 256.0 + state.positions[i].x;
        ys[i] = 256.0 + state.positions[i].y;
    }
    nodes->addNumeric("x", xs);
    nodes->addNumeric("y", ys);
    nodes->addNumeric("radius", std::vector<double>(24, 4.0));
    LayerSpec layer = cartesianScatter("nodes", nodes);
    layer.updateTriggers["position"] = state.alpha;
    gpu::Device device;
    Engine engine(device, builtinLayers());
    engine.update(sceneOf({layer}));
    std::size_t ticks = 0, goodRefills = 0;
    bool decreasing = true;
    double prevAlpha = state.alpha;
    const auto end = runLayoutToEquilibrium(state, [&](std::span<const Vec2> pos, double alpha) {
        decreasing = decreasing && alpha < prevAlpha;
        prevAlpha = alpha;
        auto& x = *nodes->numericMutable("x");
        auto& y = *nodes->numericMutable("y");
        for (std::size_t i = 0; i < pos.size(); ++i) {
            x[i] = 256.0 + pos[i].x;
            y[i] = 256.0 + pos[i].y;
        }
        layer.updateTriggers["position"] = alpha;
        const auto r = engine.update(sceneOf({layer}));
        goodRefills += r.accessorEvaluations == 24 && evals(r, "nodes", "position") == 24 ? 1 : 0;
        ++ticks;
    });

    // Mirror symmetry across x = 0.
    const int n = 9;
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(5.0, 60.0), v(-40.0, 40.0);
    GraphData g;
    for (int i = 0; i < 2 * n; ++i) {
        g.ids.push_back(std::to_string(i));
        g.labels.push_back(g.ids.back());
        g.groups.push_back(0);
    }
    g.positions.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        const double x = u(rng), y = v(rng);
        g.positions[i] = {x, y};
        g.positions[i + n] = {-x, y};
    }
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        g.edges.emplace_back(i, i + 1);
        g.edges.emplace_back(i + n, i + 1 + n);
    }
    g.edges.emplace_back(0, n);
    const auto sym = runLayoutToEquilibrium(makeGraphState(g));
    double asym = 0.0;
    for (int i = 0; i < n; ++i) {
        asym = std::max({asym, std::fabs(sym.positions[i].x + sym.positions[i + n].x),
                         std::fabs(sym.positions[i].y - sym.positions[i + n].y)});
    }
    const bool ok = decreasing && ticks == 300 && expectedTickCount(1.0, 0.001, 0.0228) == 300 &&
                    end.alpha < end.alphaMin && goodRefills == ticks && asym <= 1e-9;
    return {ok, std::string("alpha ") + (decreasing ? "strictly decreasing" : "NOT decreasing") + ", " +
                    std::to_string(ticks) + " ticks (closed form " +
                    std::to_string(expectedTickCount(1.0, 0.001, 0.0228)) + "), " + std::to_string(goodRefills) +
                    " ticks with exactly one position refill, mirror asymmetry " + fmt(asym)};
}

}  // namespace

int main(int argc, char** argv) {
    const bool write = argc > 1 && std::string(argv[1]) == "--write-goldens";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"df64 arithmetic", df64Arithmetic},
        {"df64 precision (wobble)", wobble},
        {"Mercator round trip", mercatorRoundTrip},
        {"diffing minimality", diffMinimality},
        {"instancing contract", instancing},
        {"picking", pickingCriterion},
        {"Voronoi picking", voronoiCriterion},
        {"grid aggregation", gridAggregation},
        {"Delaunay", delaunay},
        {"golden images", [write] { return goldens(write); }},
        {"force layout", forceLayout},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        const auto start = Clock::now();
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << fmt(seconds(start)) << " s]"
                  << std::endl;
    }
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}

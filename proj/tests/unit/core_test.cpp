#include <gtest/gtest.h>

#include <cstring>

#include "strata/core/diff.hpp"
#include "strata/core/engine.hpp"
#include "strata/errors.hpp"
#include "strata/layers/geojson.hpp"
#include "support/fixtures.hpp"

using namespace strata;
using namespace strata::testing;

namespace {

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

}  // namespace

TEST(Ranges, MergeCoalescesTouchingAndDropsEmpty) {
    const auto m = mergeRanges({{10, 20}, {0, 5}, {5, 7}, {30, 30}, {15, 25}});
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[0], (RowRange{0, 7}));
    EXPECT_EQ(m[1], (RowRange{10, 25}));
}

TEST(Diff, FirstSubmissionCreatesAndFillsEveryAttribute) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    const auto r = engine.update(sceneOf({scatterSpec("a", randomPoints(100, 1))}));
    EXPECT_EQ(r.created, std::vector<std::string>{"a"});
    EXPECT_EQ(evals(r, "a", "position"), 100u);
    EXPECT_EQ(evals(r, "a", "radius"), 100u);
    EXPECT_EQ(evals(r, "a", "fillColor"), 100u);
    EXPECT_EQ(r.accessorEvaluations, 300u);
}

TEST(Diff, SameReferenceResubmissionDoesNoWork) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    const auto scene = sceneOf({scatterSpec("a", randomPoints(1000, 1))});
    engine.update(scene);
    const auto r = engine.update(scene);
    EXPECT_EQ(r.accessorEvaluations, 0u);
    EXPECT_EQ(r.bytesUploaded, 0u);
    EXPECT_TRUE(r.updated.empty());
    EXPECT_TRUE(r.created.empty());
}

TEST(Diff, TriggerChangeRefillsOnlyThatAttribute) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto spec = scatterSpec("a", randomPoints(5000, 2));
    engine.update(sceneOf({spec}));
    spec.updateTriggers["radius"] = 1.0;
    const auto r = engine.update(sceneOf({spec}));
    EXPECT_EQ(evals(r, "a", "radius"), 5000u);
    EXPECT_EQ(evals(r, "a", "position"), 0u);
    EXPECT_EQ(evals(r, "a", "fillColor"), 0u);
    EXPECT_EQ(r.bytesUploaded, 5000u * 4u);
}

TEST(Diff, PartialRangeEvaluatesExactlyItsRowsAndUploadsItsSpan) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto spec = scatterSpec("a", randomPoints(1000, 3));
    engine.update(sceneOf({spec}));
    spec.partialUpdates = {{"position", {100, 200}}};
    const auto r = engine.update(sceneOf({spec}));
    EXPECT_EQ(evals(r, "a", "position"), 100u);
    EXPECT_EQ(r.accessorEvaluations, 100u);
    // df64 position: 3 components, hi and lo arrays.
    EXPECT_EQ(r.bytesUploaded, 100u * 3u * 4u * 2u);
    // The same directive again is not new work.
    EXPECT_EQ(engine.update(sceneOf({spec})).accessorEvaluations, 0u);
    spec.partialRevision = 1;
    EXPECT_EQ(engine.update(sceneOf({spec})).accessorEvaluations, 100u);
}

TEST(Diff, PartialFillIsByteIdenticalToFullRefill) {
    auto data = randomPoints(2000, 4);
    gpu::Device d1;
    Engine partial(d1, builtinLayers());
    auto spec = scatterSpec("a", data);
    partial.update(sceneOf({spec}));
    auto& lng = *data->numericMutable("lng");
    auto& radius = *data->numericMutable("radius");
    for (std::size_t i = 500; i < 750; ++i) {
        lng[i] += 0.123456789;
        radius[i] *= 3.0;
    }
    spec.partialUpdates = {{"position", {500, 750}}, {"radius", {500, 750}}};
    partial.update(sceneOf({spec}));

    gpu::Device d2;
    Engine full(d2, builtinLayers());
    full.update(sceneOf({scatterSpec("a", data)}));
    for (const char* name : {"position", "radius", "fillColor"}) {
        EXPECT_TRUE(sameBuffers(*partial.findLayer("a")->attribute(name), *full.findLayer("a")->attribute(name)))
            << name;
    }
    EXPECT_EQ(compareImages(renderImage(partial), renderImage(full), 0).fractionWithinTolerance, 1.0);
}

TEST(Diff, PartialRangeBeyondRowsIsClippedAndTallied) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto spec = scatterSpec("a", randomPoints(100, 5));
    engine.update(sceneOf({spec}));
    spec.partialUpdates = {{"radius", {90, 150}}};
    const auto r = engine.update(sceneOf({spec}));
    EXPECT_EQ(evals(r, "a", "radius"), 10u);
    EXPECT_EQ(engine.findLayer("a")->diagnostics.at("clippedPartialRanges"), 1u);
}

TEST(Diff, NewTableWithEqualContentsIsNewData) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    engine.update(sceneOf({scatterSpec("a", randomPoints(300, 6))}));
    const auto r = engine.update(sceneOf({scatterSpec("a", randomPoints(300, 6))}));
    EXPECT_EQ(r.accessorEvaluations, 900u);
}

TEST(Diff, DataChangeSupersedesPartialRanges) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    engine.update(sceneOf({scatterSpec("a", randomPoints(300, 6))}));
    auto spec = scatterSpec("a", randomPoints(300, 7));
    spec.partialUpdates = {{"radius", {0, 10}}};
    const auto r = engine.update(sceneOf({spec}));
    EXPECT_EQ(evals(r, "a", "radius"), 300u);
}

TEST(Diff, AccessorChangeRefillsOnlyItsAttribute) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto spec = scatterSpec("a", randomPoints(400, 8));
    engine.update(sceneOf({spec}));
    spec.accessors["fillColor"] = Accessor::fromConstant({255, 0, 0, 255});
    const auto r = engine.update(sceneOf({spec}));
    EXPECT_EQ(evals(r, "a", "fillColor"), 400u);
    EXPECT_EQ(r.accessorEvaluations, 400u);
    // An equal column accessor built anew compares equal.
    spec.accessors["position"] = Accessor::fromColumns({"lng", "lat"});
    EXPECT_EQ(engine.update(sceneOf({spec})).accessorEvaluations, 0u);
}

TEST(Diff, FunctionAccessorsCompareByIdentity) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto spec = scatterSpec("a", randomPoints(50, 9));
    auto fn = Accessor::fromFunction([](const DataTable&, std::size_t row, std::span<double> out) {
        out[0] = static_cast<double>(row % 7) + 1.0;
    });
    spec.accessors["radius"] = fn;
    engine.update(sceneOf({spec}));
    EXPECT_EQ(engine.update(sceneOf({spec})).accessorEvaluations, 0u);
    spec.accessors["radius"] = Accessor::fromFunction([](const DataTable&, std::size_t row, std::span<double> out) {
        out[0] = static_cast<double>(row % 7) + 1.0;
    });
    EXPECT_EQ(evals(engine.update(sceneOf({spec})), "a", "radius"), 50u);
}

TEST(Diff, CoordinateSystemChangeRefillsPositionsOnly) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto spec = scatterSpec("a", randomPoints(64, 10));
    engine.update(sceneOf({spec}));
    spec.props["coordinateSystem"] = std::string("cartesian");
    const auto r = engine.update(sceneOf({spec}));
    EXPECT_EQ(evals(r, "a", "position"), 64u);
    EXPECT_EQ(r.accessorEvaluations, 64u);
}

TEST(Diff, ViewportChangeDoesNoAttributeWork) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    const auto spec = scatterSpec("a", randomPoints(64, 11));
    engine.update(sceneOf({spec}));
    const auto r = engine.update(sceneOf({spec}, cartesianViewport(256, 256, 1.5)));
    EXPECT_EQ(r.accessorEvaluations, 0u);
    EXPECT_EQ(r.bytesUploaded, 0u);
}

TEST(Diff, DrawPropChangeDoesNoAttributeWork) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto spec = scatterSpec("a", randomPoints(64, 11));
    engine.update(sceneOf({spec}));
    spec.props["radiusScale"] = 3.0;
    spec.props["opacity"] = 0.5;
    const auto r = engine.update(sceneOf({spec}));
    EXPECT_EQ(r.updated, std::vector<std::string>{"a"});
    EXPECT_EQ(r.accessorEvaluations, 0u);
}

TEST(Lifecycle, TypeChangeFinalizesAndCreates) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto data = randomPoints(10, 12);
    engine.update(sceneOf({scatterSpec("a", data)}));
    LayerSpec particle;
    particle.id = "a";
    particle.type = "particle";
    particle.data = data;
    particle.accessors["position"] = Accessor::fromColumns({"lng", "lat"});
    particle.accessors["age"] = Accessor::fromConstant({0});
    const auto r = engine.update(sceneOf({particle}));
    EXPECT_EQ(r.finalized, std::vector<std::string>{"a"});
    EXPECT_EQ(r.created, std::vector<std::string>{"a"});
    EXPECT_EQ(engine.findLayer("a")->spec.type, "particle");
}

TEST(Lifecycle, RemovedLayersReleaseDeviceBuffers) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    engine.update(sceneOf({scatterSpec("a", randomPoints(10, 1)), scatterSpec("b", randomPoints(10, 2))}));
    const auto before = device.bufferCount();
    const auto r = engine.update(sceneOf({scatterSpec("a", engine.findLayer("a")->spec.data)}));
    EXPECT_EQ(r.finalized, std::vector<std::string>{"b"});
    EXPECT_LT(device.bufferCount(), before);
    EXPECT_EQ(engine.findLayer("b"), nullptr);
}

TEST(Lifecycle, DuplicateIdsAndUnknownTypesAreSceneErrors) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto data = randomPoints(4, 1);
    EXPECT_THROW(engine.update(sceneOf({scatterSpec("a", data), scatterSpec("a", data)})), SpecError);
    auto bad = scatterSpec("x", data);
    bad.type = "hexagon";
    EXPECT_THROW(engine.update(sceneOf({bad})), SpecError);
    auto noId = scatterSpec("", data);
    EXPECT_THROW(engine.update(sceneOf({noId})), SpecError);
}

TEST(Lifecycle, LayerErrorsAreIsolated) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto broken = scatterSpec("broken", randomPoints(10, 1));
    broken.accessors["radius"] = Accessor::fromColumns({"missing"});
    const auto r = engine.update(sceneOf({broken, scatterSpec("ok", randomPoints(10, 2))}));
    ASSERT_TRUE(r.errors.contains("broken"));
    EXPECT_NE(r.errors.at("broken").find("missing"), std::string::npos);
    EXPECT_FALSE(r.errors.contains("ok"));
    EXPECT_TRUE(engine.findLayer("ok")->ok());
    EXPECT_FALSE(engine.findLayer("broken")->ok());
    gpu::RenderTarget target(256, 256);
    EXPECT_EQ(engine.render(target).drawCalls, 1u);
    // Fixing the layer spec recovers the layer.
    broken.accessors["radius"] = Accessor::fromColumns({"radius"});
    const auto r2 = engine.update(sceneOf({broken, scatterSpec("ok", engine.findLayer("ok")->spec.data)}));
    EXPECT_TRUE(r2.errors.empty());
    EXPECT_TRUE(engine.findLayer("broken")->ok());
}

TEST(Lifecycle, NonFiniteRowsBecomeZeroAndAreTallied) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto data = randomPoints(10, 1);
    (*data->numericMutable("radius"))[3] = std::nan("");
    (*data->numericMutable("lat"))[4] = 89.9;
    engine.update(sceneOf({scatterSpec("a", data)}));
    const auto* layer = engine.findLayer("a");
    EXPECT_EQ(layer->diagnostics.at("nonFiniteRows"), 1u);
    EXPECT_EQ(layer->diagnostics.at("invalidPositions"), 1u);
    EXPECT_EQ(layer->attribute("radius")->values[3], 0.0f);
}

TEST(Declarative, FinalSpecDeterminesTheImage) {
    auto a = randomPoints(500, 20), b = randomPoints(300, 21);
    const Viewport vp = cartesianViewport(200, 150, 2.0);
    auto finalA = scatterSpec("a", a);
    finalA.props["radiusScale"] = 1.5;
    auto finalB = scatterSpec("b", b);
    finalB.accessors["fillColor"] = Accessor::fromConstant({0, 200, 50, 180});

    gpu::Device d1;
    Engine direct(d1, builtinLayers());
    direct.update(sceneOf({finalA, finalB}, vp));

    gpu::Device d2;
    Engine stepped(d2, builtinLayers());
    stepped.update(sceneOf({scatterSpec("b", b)}, cartesianViewport(100, 100, 0.0)));
    auto mid = scatterSpec("a", a);
    mid.updateTriggers["radius"] = 7.0;
    mid.partialUpdates = {{"position", {0, 50}}};
    stepped.update(sceneOf({mid, scatterSpec("b", b)}, vp));
    stepped.update(sceneOf({finalB}, vp));
    stepped.update(sceneOf({finalA, finalB}, vp));

    const auto cmp = compareImages(renderImage(direct), renderImage(stepped), 0);
    EXPECT_EQ(cmp.fractionWithinTolerance, 1.0);
    EXPECT_EQ(cmp.maxChannelDifference, 0);
}

TEST(Declarative, InvisibleLayersAreKeptButNotDrawn) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto spec = scatterSpec("a", randomPoints(30, 1));
    engine.update(sceneOf({spec}));
    spec.visible = false;
    const auto r = engine.update(sceneOf({spec}));
    EXPECT_EQ(r.accessorEvaluations, 0u);
    gpu::RenderTarget target(256, 256);
    EXPECT_EQ(engine.render(target).drawCalls, 0u);
    spec.visible = true;
    EXPECT_EQ(engine.update(sceneOf({spec})).accessorEvaluations, 0u);
    EXPECT_EQ(engine.render(target).drawCalls, 1u);
}

TEST(Render, EmptySceneClearsAndDrawsNothing) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    engine.update(sceneOf({}, cartesianViewport(8, 8)));
    gpu::RenderTarget target(8, 8);
    const auto stats = engine.render(target, RenderMode::display, 0.0, {10, 20, 30, 255});
    EXPECT_EQ(stats.drawCalls, 0u);
    const auto px = device.readPixels(target, {0, 0, 1, 1});
    EXPECT_EQ(px, (std::vector<std::uint8_t>{10, 20, 30, 255}));
}

TEST(Render, PickingDrawsOnlyPickableLayers) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto a = scatterSpec("a", randomPoints(30, 1));
    auto b = scatterSpec("b", randomPoints(30, 2));
    engine.update(sceneOf({a, b}));
    gpu::RenderTarget target(256, 256);
    EXPECT_EQ(engine.render(target, RenderMode::picking).drawCalls, 0u);
    b.pickable = true;
    engine.update(sceneOf({a, b}));
    EXPECT_EQ(engine.render(target, RenderMode::picking).drawCalls, 1u);
    EXPECT_EQ(engine.layerForSlot(1)->spec.id, "b");
}

TEST(Render, PickingPassDoesNotAlterTheDisplayImage) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto a = scatterSpec("a", randomPoints(200, 3));
    a.pickable = true;
    engine.update(sceneOf({a}));
    const auto before = renderImage(engine);
    (void)engine.pickingPass();
    const auto after = renderImage(engine);
    EXPECT_EQ(before.pixels, after.pixels);
}

TEST(Render, PickingPassIsCachedUntilTheSceneChanges) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto a = scatterSpec("a", randomPoints(20, 3));
    a.pickable = true;
    const auto scene = sceneOf({a});
    engine.update(scene);
    (void)engine.pickingPass();
    (void)engine.pickingPass();
    EXPECT_EQ(engine.pickingPassRenders(), 1u);
    engine.update(scene);
    (void)engine.pickingPass();
    EXPECT_EQ(engine.pickingPassRenders(), 1u);
    engine.update(sceneOf({a}, cartesianViewport(256, 256, 0.5)));
    (void)engine.pickingPass();
    EXPECT_EQ(engine.pickingPassRenders(), 2u);
}

TEST(Render, RendersAreDeterministic) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    engine.update(sceneOf({scatterSpec("a", randomPoints(2000, 3))}));
    EXPECT_EQ(renderImage(engine).pixels, renderImage(engine).pixels);
}

TEST(DeviceLoss, RenderFailsThenRecoverRebuildsIdenticalFrames) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    engine.update(sceneOf({scatterSpec("a", randomPoints(500, 3)), scatterSpec("b", randomPoints(500, 4))}));
    const auto before = renderImage(engine);
    device.simulateLoss();
    gpu::RenderTarget target(256, 256);
    EXPECT_THROW(engine.render(target), gpu::DeviceLostError);
    EXPECT_THROW(engine.update(engine.scene()), gpu::DeviceLostError);
    const auto report = engine.recover();
    EXPECT_EQ(report.created.size(), 2u);
    EXPECT_EQ(report.accessorEvaluations, 3000u);
    EXPECT_EQ(renderImage(engine).pixels, before.pixels);
}

TEST(Composite, SublayersInheritVisibilityAndPickability) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto fc = std::make_shared<FeatureCollection>();
    Feature point;
    point.geometry.type = Geometry::Type::point;
    point.geometry.parts = {{{LngLat{1, 1}}}};
    fc->features.push_back(point);
    LayerSpec g;
    g.id = "g";
    g.type = "geojson";
    g.data = featureTable(fc);
    g.pickable = true;
    g.visible = false;
    engine.update(sceneOf({g}));
    const auto* points = engine.findLayer("g-points");
    ASSERT_NE(points, nullptr);
    EXPECT_FALSE(points->spec.visible);
    EXPECT_TRUE(points->spec.pickable);
    EXPECT_EQ(engine.findLayer("g"), nullptr);
}

TEST(Composite, UnchangedCompositeIsNotReExpanded) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    auto fc = std::make_shared<FeatureCollection>();
    Feature point;
    point.geometry.type = Geometry::Type::point;
    point.geometry.parts = {{{LngLat{1, 1}}}};
    fc->features.push_back(point);
    LayerSpec g;
    g.id = "g";
    g.type = "geojson";
    g.data = featureTable(fc);
    EXPECT_EQ(engine.update(sceneOf({g})).compositeExpansions, 1u);
    const auto r = engine.update(sceneOf({g}));
    EXPECT_EQ(r.compositeExpansions, 0u);
    EXPECT_EQ(r.accessorEvaluations, 0u);
    g.props["pointRadius"] = 9.0;
    const auto r2 = engine.update(sceneOf({g}));
    EXPECT_EQ(r2.compositeExpansions, 1u);
    EXPECT_GT(r2.accessorEvaluations, 0u);
}

TEST(Composite, ExpansionErrorsAreIsolated) {
    gpu::Device device;
    Engine engine(device, builtinLayers());
    LayerSpec g;
    g.id = "g";
    g.type = "geojson";
    g.data = makeTable(3);  // no feature payload
    const auto r = engine.update(sceneOf({g, scatterSpec("ok", randomPoints(5, 1))}));
    EXPECT_TRUE(r.errors.contains("g"));
    EXPECT_TRUE(engine.compositeErrors().contains("g"));
    EXPECT_TRUE(engine.findLayer("ok")->ok());
}

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "strata/core/engine.hpp"
#include "strata/gpu/image.hpp"
#include "strata/io/scene.hpp"
#include "strata/layers/layers.hpp"
#include "strata/picking/pick.hpp"
#include "strata_scene_schema.hpp"

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 1, kSchema = 2, kIngest = 3, kRuntime = 4, kLayerErrors = 5 };

struct Options {
    std::string scene;
    std::string out = "out.png";
    strata::ViewportOverrides overrides;
    int x = 0;
    int y = 0;
    int radius = 0;
    bool schema = false;
};

void printError(const char* kind, const std::string& message) {
    Json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << "\n";
}

Json diagnosticsJson(const strata::Diagnostics& d) {
    Json j = Json::object();
    for (const auto& [k, v] : d) j[k] = v;
    return j;
}

Json layerReport(const strata::Engine& engine, const strata::LoadedScene& loaded, const strata::UpdateReport& report) {
    Json layers = Json::array();
    for (const auto& l : engine.layers()) {
        Json j;
        j["id"] = l->spec.id;
        j["type"] = l->spec.type;
        j["instances"] = l->instanceCount;
        j["visible"] = l->spec.visible;
        j["pickable"] = l->spec.pickable;
        j["diagnostics"] = diagnosticsJson(l->diagnostics);
        if (!l->error.empty()) j["error"] = l->error;
        layers.push_back(std::move(j));
    }
    Json out;
    out["layers"] = std::move(layers);
    Json composites = Json::object();
    for (const auto& [id, d] : engine.compositeDiagnostics()) composites[id]["diagnostics"] = diagnosticsJson(d);
    for (const auto& [id, e] : engine.compositeErrors()) composites[id]["error"] = e;
    out["composites"] = std::move(composites);
    Json ingest = Json::object();
    for (const auto& [id, d] : loaded.ingestDiagnostics) ingest[id] = diagnosticsJson(d);
    out["ingest"] = std::move(ingest);
    Json errors = Json::object();
    for (const auto& [id, e] : report.errors) errors[id] = e;
    out["errors"] = std::move(errors);
    return out;
}

int renderCommand(const Options& o) {
    const auto loaded = strata::loadScene(o.scene, o.overrides);
    strata::gpu::Device device;
    strata::Engine engine(device, strata::builtinLayers());
    const auto report = engine.update(loaded.scene);
    const auto& vp = loaded.scene.viewport;
    strata::gpu::RenderTarget target(vp.width, vp.height, true);
    const auto stats = engine.render(target, strata::RenderMode::display, loaded.time, loaded.background);
    strata::gpu::writePng(o.out, target.toImage());

    Json j;
    j["command"] = "render";
    j["out"] = o.out;
    j["width"] = vp.width;
    j["height"] = vp.height;
    j["drawCalls"] = stats.drawCalls;
    j["instances"] = stats.instancesSubmitted;
    j["buffersUploaded"] = report.buffersUploaded;
    j["bytesUploaded"] = report.bytesUploaded;
    j["accessorEvaluations"] = report.accessorEvaluations;
    const Json layers = layerReport(engine, loaded, report);
    for (const auto& [k, v] : layers.items()) j[k] = v;
    std::cout << j.dump(2) << "\n";
    return report.errors.empty() ? kOk : kLayerErrors;
}

int pickCommand(const Options& o) {
    const auto loaded = strata::loadScene(o.scene, o.overrides);
    const auto& vp = loaded.scene.viewport;
    if (o.x < 0 || o.y < 0 || o.x >= vp.width || o.y >= vp.height) {
        printError("usage", "pick position (" + std::to_string(o.x) + ", " + std::to_string(o.y) + ") outside the " +
                                std::to_string(vp.width) + "x" + std::to_string(vp.height) + " viewport");
        return kUsage;
    }
    strata::gpu::Device device;
    strata::Engine engine(device, strata::builtinLayers());
    const auto report = engine.update(loaded.scene);
    const auto info = strata::pickAt(engine, o.x, o.y, o.radius);
    Json j;
    j["found"] = info.found;
    if (info.found) {
        j["layerId"] = info.layerId;
        j["instanceIndex"] = info.instanceIndex;
        j["row"] = info.row;
    }
    j["x"] = info.x;
    j["y"] = info.y;
    j["radius"] = o.radius;
    j["pixelsRead"] = device.pixelsRead();
    std::cout << j.dump(2) << "\n";
    return report.errors.empty() ? kOk : kLayerErrors;
}

int infoCommand(const Options& o) {
    if (o.schema) {
        std::cout << kSceneSchema;
        return kOk;
    }
    const auto& registry = strata::builtinLayers();
    Json types = Json::object();
    for (const auto& name : registry.names()) {
        const auto& t = registry.get(name);
        strata::LayerSpec probe;
        probe.type = name;
        Json j;
        j["composite"] = t.composite();
        j["derived"] = t.derived();
        j["functional"] = t.functional();
        j["blend"] = t.blendMode() == strata::BlendMode::extruded ? "extruded" : "flat";
        j["accessors"] = t.accessorNames(probe);
        j["requiredAccessors"] = t.requiredAccessors(probe);
        auto props = t.propNames();
        props.insert(props.begin(), {"coordinateSystem", "opacity"});
        j["props"] = props;
        types[name] = std::move(j);
    }
    Json out;
    out["layerTypes"] = std::move(types);
    std::cout << out.dump(2) << "\n";
    return kOk;
}

void addViewportFlags(CLI::App* cmd, Options& o) {
    cmd->add_option("--lng", o.overrides.longitude, "Viewport longitude (overrides the scene)");
    cmd->add_option("--lat", o.overrides.latitude, "Viewport latitude (overrides the scene)");
    cmd->add_option("--zoom", o.overrides.zoom, "Viewport zoom (overrides the scene)");
    cmd->add_option("--pitch", o.overrides.pitch, "Viewport pitch in degrees (overrides the scene)");
    cmd->add_option("--bearing", o.overrides.bearing, "Viewport bearing in degrees (overrides the scene)");
    cmd->add_option("--width", o.overrides.width, "Image width in pixels (overrides the scene)");
    cmd->add_option("--height", o.overrides.height, "Image height in pixels (overrides the scene)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Headless scene renderer for strata layer scenes"};
    app.require_subcommand(1);
    Options o;
    auto* render = app.add_subcommand("render", "Render the display pass to PNG and print frame statistics");
    render->add_option("scene", o.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
    render->add_option("--out,-o", o.out, "Output PNG path");
    addViewportFlags(render, o);
    auto* pick = app.add_subcommand("pick", "Pick at a pixel and print the result");
    pick->add_option("scene", o.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
    pick->add_option("--x", o.x, "Pixel column")->required();
    pick->add_option("--y", o.y, "Pixel row")->required();
    pick->add_option("--radius,-r", o.radius, "Search radius in pixels")->check(CLI::NonNegativeNumber);
    addViewportFlags(pick, o);
    auto* info = app.add_subcommand("info", "Print the layer catalog");
    info->add_flag("--schema", o.schema, "Print the scene JSON schema instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        printError("usage", e.what());
        return kUsage;
    }
    try {
        if (*render) return renderCommand(o);
        if (*pick) return pickCommand(o);
        return infoCommand(o);
    } catch (const strata::SpecError& e) {
        printError("schema", e.what());
        return kSchema;
    } catch (const strata::IngestError& e) {
        printError("ingest", e.what());
        return kIngest;
    } catch (const std::exception& e) {
        printError("runtime", e.what());
        return kRuntime;
    }
}

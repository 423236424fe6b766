#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "strata/core/engine.hpp"
#include "strata/geomath/viewport.hpp"
#include "strata/gpu/device.hpp"
#include "strata/gpu/image.hpp"
#include "strata/layers/layers.hpp"

namespace strata::testing {

inline std::string sourcePath(const std::string& relative) { return std::string(STRATA_SOURCE_DIR) + "/" + relative; }

inline Viewport cartesianViewport(int width = 256, int height = 256, double zoom = 0.0) {
    Viewport v;
    v.center = {0.0, 0.0};
    v.zoom = zoom;
    v.width = width;
    v.height = height;
    return v;
}

/// Random points inside [-span, span] degrees around (lng0, lat0).
inline DataRef randomPoints(std::size_t n, std::uint64_t seed, double lng0 = 0.0, double lat0 = 0.0,
                            double span = 10.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-span, span);
    std::vector<double> lng(n), lat(n), radius(n), r(n), g(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        lng[i] = lng0 + u(rng);
        lat[i] = lat0 + u(rng);
        radius[i] = 2.0 + static_cast<double>(i % 5);
        r[i] = static_cast<double>(i % 256);
        g[i] = static_cast<double>((i / 256) % 256);
        b[i] = 128.0;
    }
    auto t = makeTable(n);
    t->addNumeric("lng", std::move(lng));
    t->addNumeric("lat", std::move(lat));
    t->addNumeric("radius", std::move(radius));
    t->addNumeric("r", std::move(r));
    t->addNumeric("g", std::move(g));
    t->addNumeric("b", std::move(b));
    return t;
}

inline LayerSpec scatterSpec(const std::string& id, DataRef data) {
    LayerSpec s;
    s.id = id;
    s.type = "scatterplot";
    s.data = std::move(data);
    s.accessors["position"] = Accessor::fromColumns({"lng", "lat"});
    s.accessors["radius"] = Accessor::fromColumns({"radius"});
    s.accessors["fillColor"] = Accessor::fromColumns({"r", "g", "b"});
    return s;
}

inline SceneSpec sceneOf(std::vector<LayerSpec> layers, Viewport vp = cartesianViewport()) {
    SceneSpec s;
    s.viewport = vp;
    s.layers = std::move(layers);
    return s;
}

/// World position under the center of pixel (px, py).
inline WorldPoint pixelCenterWorld(const Viewport& vp, int px, int py) {
    WorldPoint w;
    if (!unprojectToWorld(vp, px + 0.5, py + 0.5, w)) throw std::runtime_error("pixel misses the ground plane");
    return w;
}

/// Cartesian point table with columns x, y (world units) and radius.
inline DataRef worldPoints(const std::vector<WorldPoint>& pts, double radius = 1.0) {
    std::vector<double> x, y;
    for (const auto& p : pts) {
        x.push_back(p.x);
        y.push_back(p.y);
    }
    auto t = makeTable(pts.size());
    t->addNumeric("x", std::move(x));
    t->addNumeric("y", std::move(y));
    t->addNumeric("radius", std::vector<double>(pts.size(), radius));
    return t;
}

/// Scatterplot over worldPoints() in cartesian coordinates.
inline LayerSpec cartesianScatter(const std::string& id, DataRef data) {
    LayerSpec s;
    s.id = id;
    s.type = "scatterplot";
    s.data = std::move(data);
    s.accessors["position"] = Accessor::fromColumns({"x", "y"});
    s.accessors["radius"] = Accessor::fromColumns({"radius"});
    s.accessors["fillColor"] = Accessor::fromConstant({255, 0, 0, 255});
    s.props["coordinateSystem"] = std::string("cartesian");
    s.pickable = true;
    return s;
}

inline gpu::Image renderImage(Engine& engine, Rgba8 clear = {0, 0, 0, 255}, double time = 0.0) {
    const auto& vp = engine.viewport();
    gpu::RenderTarget target(vp.width, vp.height, true);
    engine.render(target, RenderMode::display, time, clear);
    return target.toImage();
}

}  // namespace strata::testing

#include "strata/picking/pick.hpp"

#include <algorithm>
#include <limits>

#include "strata/picking/encoding.hpp"

namespace strata {

PickInfo pickAt(Engine& engine, int x, int y, int radius) {
    const Viewport& vp = engine.viewport();
    if (radius < 0) throw RangeError("pick radius must be >= 0");
    if (x < 0 || y < 0 || x >= vp.width || y >= vp.height) throw RangeError("pick position outside the viewport");
    PickInfo info;
    info.x = x;
    info.y = y;
    const gpu::RenderTarget& pass = engine.pickingPass();
    const int x0 = std::max(0, x - radius), y0 = std::max(0, y - radius);
    const int x1 = std::min(pass.width() - 1, x + radius), y1 = std::min(pass.height() - 1, y + radius);
    const gpu::PixelRect rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
    const auto pixels = engine.device().readPixels(pass, rect);

    long best = std::numeric_limits<long>::max();
    std::optional<PickCode> hit;
    for (int row = 0; row < rect.height; ++row) {
        for (int col = 0; col < rect.width; ++col) {
            const std::size_t o = 4 * (static_cast<std::size_t>(row) * static_cast<std::size_t>(rect.width) +
                                       static_cast<std::size_t>(col));
            const auto code = decodePickColor({pixels[o], pixels[o + 1], pixels[o + 2], pixels[o + 3]});
            if (!code) continue;
            const long dx = x0 + col - x, dy = y0 + row - y;
            const long d2 = dx * dx + dy * dy;
            if (d2 < best) {
                best = d2;
                hit = code;
            }
        }
    }
    if (!hit) return info;
    const LayerState* layer = engine.layerForSlot(hit->layerSlot);
    if (layer == nullptr || hit->index >= layer->instanceCount) return info;
    info.found = true;
    info.layerId = layer->spec.id;
    info.instanceIndex = hit->index;
    info.row = layer->type->sourceRow(*layer, hit->index);
    return info;
}

LayerSpec voronoiPickLayer(const std::string& id, DataRef data, Accessor position, double maxRadiusPixels) {
    LayerSpec spec;
    spec.id = id;
    spec.type = "voronoi-picking";
    spec.data = std::move(data);
    spec.accessors["position"] = std::move(position);
    spec.props["maxRadiusPixels"] = maxRadiusPixels;
    spec.pickable = true;
    return spec;
}

LayerSpec voronoiPickLayer(const std::string& id, const LayerSpec& source, double maxRadiusPixels) {
    LayerSpec spec;
    spec.id = id;
    spec.type = "voronoi-picking";
    spec.data = source.data;
    spec.props["maxRadiusPixels"] = maxRadiusPixels;
    spec.props["positionsFrom"] = source.id;
    if (auto it = source.props.find("coordinateSystem"); it != source.props.end()) spec.props[it->first] = it->second;
    spec.pickable = true;
    return spec;
}

}  // namespace strata

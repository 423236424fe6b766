#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "strata/core/attribute.hpp"
#include "strata/core/layer_spec.hpp"

namespace strata {

class LayerRegistry;

struct ChangeFlags {
    bool dataChanged = false;
    std::set<std::string> attributesToInvalidate;
    /// Per attribute, merged and sorted. Clipped to the row count when applied.
    std::map<std::string, std::vector<RowRange>> partialRanges;
    bool viewportChanged = false;
    bool propsChanged = false;
    std::set<std::string> changedProps;
    /// Accessors or triggers that changed but name no attribute (inputs of derived layers).
    std::set<std::string> changedInputs;
    bool visibilityChanged = false;

    /// True when anything besides the viewport changed.
    [[nodiscard]] bool layerChanged() const;
};

ChangeFlags computeChangeFlags(const LayerSpec& prev, const LayerSpec& next,
                               const std::vector<AttributeDescriptor>& attributes);

struct ScenePlan {
    std::vector<std::string> create;
    std::vector<std::string> update;
    std::vector<std::string> finalize;
    std::map<std::string, ChangeFlags> flags;
    bool viewportChanged = false;

    [[nodiscard]] bool empty() const { return create.empty() && update.empty() && finalize.empty() && !viewportChanged; }
};

/// Throws SpecError on duplicate layer ids or unregistered types.
void checkLayerIds(const std::vector<LayerSpec>& layers);

ScenePlan diffScene(const SceneSpec& prev, const SceneSpec& next, const LayerRegistry& registry);

}  // namespace strata

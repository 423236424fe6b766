#include "strata/core/diff.hpp"

#include <algorithm>
#include <set>

#include "strata/core/layer_type.hpp"
#include "strata/errors.hpp"

namespace strata {

std::vector<RowRange> mergeRanges(std::vector<RowRange> ranges) {
    std::erase_if(ranges, [](const RowRange& r) { return r.empty(); });
    std::sort(ranges.begin(), ranges.end(), [](const RowRange& a, const RowRange& b) {
        return a.start != b.start ? a.start < b.start : a.end < b.end;
    });
    std::vector<RowRange> merged;
    for (const RowRange& r : ranges) {
        if (!merged.empty() && r.start <= merged.back().end) {
            merged.back().end = std::max(merged.back().end, r.end);
        } else {
            merged.push_back(r);
        }
    }
    return merged;
}

bool ChangeFlags::layerChanged() const {
    return dataChanged || !attributesToInvalidate.empty() || !partialRanges.empty() || propsChanged ||
           !changedInputs.empty() || visibilityChanged;
}

namespace {

template <typename Map>
std::set<std::string> changedKeys(const Map& a, const Map& b) {
    std::set<std::string> keys;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it == b.end() || !(it->second == v)) keys.insert(k);
    }
    for (const auto& [k, v] : b) {
        if (!a.contains(k)) keys.insert(k);
    }
    return keys;
}

}  // namespace

ChangeFlags computeChangeFlags(const LayerSpec& prev, const LayerSpec& next,
                               const std::vector<AttributeDescriptor>& attributes) {
    ChangeFlags f;
    f.dataChanged = prev.data != next.data;
    f.changedProps = changedKeys(prev.props, next.props);
    f.propsChanged = !f.changedProps.empty();
    f.visibilityChanged = prev.visible != next.visible || prev.pickable != next.pickable;

    std::set<std::string> names;
    for (const auto& a : attributes) names.insert(a.name);

    if (f.dataChanged) {
        f.attributesToInvalidate = names;
    } else {
        for (const auto& k : changedKeys(prev.updateTriggers, next.updateTriggers)) {
            (names.contains(k) ? f.attributesToInvalidate : f.changedInputs).insert(k);
        }
        for (const auto& k : changedKeys(prev.accessors, next.accessors)) {
            (names.contains(k) ? f.attributesToInvalidate : f.changedInputs).insert(k);
        }
        for (const auto& a : attributes) {
            for (const auto& p : a.propDependencies) {
                if (f.changedProps.contains(p)) f.attributesToInvalidate.insert(a.name);
            }
        }
        if (next.partialUpdates != prev.partialUpdates || next.partialRevision != prev.partialRevision) {
            std::map<std::string, std::vector<RowRange>> byAttr;
            for (const auto& pu : next.partialUpdates) {
                if (!names.contains(pu.attribute) || f.attributesToInvalidate.contains(pu.attribute)) continue;
                byAttr[pu.attribute].push_back(pu.range);
            }
            for (auto& [k, v] : byAttr) {
                auto merged = mergeRanges(std::move(v));
                if (!merged.empty()) f.partialRanges[k] = std::move(merged);
            }
        }
    }
    return f;
}

void checkLayerIds(const std::vector<LayerSpec>& layers) {
    std::set<std::string> seen;
    for (const auto& l : layers) {
        if (l.id.empty()) throw SpecError("layer id must not be empty");
        if (!seen.insert(l.id).second) throw SpecError("duplicate layer id '" + l.id + "'");
    }
}

ScenePlan diffScene(const SceneSpec& prev, const SceneSpec& next, const LayerRegistry& registry) {
    checkLayerIds(prev.layers);
    checkLayerIds(next.layers);
    ScenePlan plan;
    plan.viewportChanged = !(prev.viewport == next.viewport);

    std::map<std::string, const LayerSpec*> prevById;
    for (const auto& l : prev.layers) prevById[l.id] = &l;
    std::set<std::string> matched;
    for (const auto& l : next.layers) {
        const LayerType& type = registry.get(l.type);
        auto it = prevById.find(l.id);
        if (it == prevById.end() || it->second->type != l.type) {
            plan.create.push_back(l.id);
            continue;
        }
        matched.insert(l.id);
        ChangeFlags f = computeChangeFlags(*it->second, l, type.attributes(l));
        f.viewportChanged = plan.viewportChanged;
        if (f.layerChanged()) plan.update.push_back(l.id);
        plan.flags[l.id] = std::move(f);
    }
    for (const auto& l : prev.layers) {
        if (!matched.contains(l.id)) plan.finalize.push_back(l.id);
    }
    return plan;
}

}  // namespace strata

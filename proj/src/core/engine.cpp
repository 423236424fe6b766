#include "strata/core/engine.hpp"

#include <algorithm>
#include <set>

#include "strata/errors.hpp"

namespace strata {

Engine::Engine(gpu::Device& device, const LayerRegistry& registry) : device_(device), registry_(registry) {}

Engine::~Engine() {
    for (auto& l : layers_) releaseLayer(*l);
}

const LayerState* Engine::findLayer(const std::string& id) const {
    for (const auto& l : layers_) {
        if (l->spec.id == id) return l.get();
    }
    return nullptr;
}

const LayerState* Engine::layerForSlot(std::uint8_t slot) const {
    if (slot == 0 || slot > slots_.size()) return nullptr;
    return slots_[slot - 1];
}

void Engine::releaseLayer(LayerState& state) {
    for (auto& [name, buf] : state.attributes) {
        if (buf.valuesId != 0) device_.releaseBuffer(buf.valuesId);
        if (buf.lowId != 0) device_.releaseBuffer(buf.lowId);
        buf.valuesId = buf.lowId = 0;
    }
    for (auto t : state.textures) device_.releaseTexture(t);
    state.textures.clear();
}

std::vector<LayerSpec> Engine::expandComposites(const std::vector<LayerSpec>& layers, UpdateReport& report,
                                                std::map<std::string, CompositeEntry>& nextCache) {
    std::vector<LayerSpec> out;
    for (const LayerSpec& spec : layers) {
        const LayerType& type = registry_.get(spec.type);
        if (!type.composite()) {
            out.push_back(spec);
            continue;
        }
        auto it = composites_.find(spec.id);
        const bool sameType = it != composites_.end() && it->second.spec.type == spec.type;
        const bool reuse = sameType && it->second.error.empty() && it->second.spec.data == spec.data &&
                           it->second.spec.props == spec.props && it->second.spec.accessors == spec.accessors &&
                           it->second.spec.updateTriggers == spec.updateTriggers;
        CompositeEntry entry;
        if (reuse) {
            entry = it->second;
        } else {
            if (sameType) entry.state = it->second.state;
            try {
                if (!spec.data) throw SpecError("layer '" + spec.id + "' has no data");
                entry.sublayers = type.expand(spec, entry.state, entry.diagnostics);
            } catch (const std::exception& e) {
                entry.error = e.what();
                entry.sublayers.clear();
                report.errors[spec.id] = e.what();
            }
            report.compositeExpansions += 1;
        }
        entry.spec = spec;
        std::vector<LayerSpec> subs = entry.sublayers;
        for (auto& s : subs) {
            s.visible = s.visible && spec.visible;
            s.pickable = s.pickable && spec.pickable;
        }
        nextCache[spec.id] = std::move(entry);
        auto inner = expandComposites(subs, report, nextCache);
        out.insert(out.end(), std::make_move_iterator(inner.begin()), std::make_move_iterator(inner.end()));
    }
    return out;
}

void Engine::buildLayer(LayerState& state, const ChangeFlags* flags, UpdateReport& report) {
    const LayerSpec& spec = state.spec;
    const LayerType& type = *state.type;
    auto& evals = report.evaluations[spec.id];
    try {
        type.validate(spec);
        const CoordinateSystem coords = coordinateSystemOf(spec.props);
        const bool rebuild = flags == nullptr || !state.ok() || !state.instances;
        bool full = rebuild || flags->dataChanged;
        bool rederive = false;
        if (type.derived()) {
            rederive = full || !flags->changedInputs.empty() || !flags->attributesToInvalidate.empty() ||
                       std::any_of(flags->changedProps.begin(), flags->changedProps.end(),
                                   [&](const std::string& p) { return type.deriveDependsOnProp(p); });
            if (rederive) {
                state.instances = type.derive(spec, state.diagnostics);
                report.derivations += 1;
                full = true;
            }
        } else {
            state.instances = spec.data;
        }
        state.instanceCount = state.instances ? state.instances->rowCount() : 0;

        const auto descriptors = type.attributes(spec);
        if (!full) {
            std::set<std::string> have, want;
            for (const auto& [k, v] : state.attributes) have.insert(k);
            for (const auto& d : descriptors) want.insert(d.name);
            if (have != want) full = true;
        }
        if (full) {
            releaseLayer(state);
            state.attributes.clear();
            for (const auto& d : descriptors) state.attributes.emplace(d.name, AttributeBuffer(d));
        }

        static const DataTable kEmpty;
        const DataTable& table = state.instances ? *state.instances : kEmpty;
        for (const auto& d : descriptors) {
            AttributeBuffer& buf = state.attributes.at(d.name);
            // Derived attributes read the derived table.
            auto acc = type.derived() ? spec.accessors.end() : spec.accessors.find(d.name);
            const Accessor& accessor = acc != spec.accessors.end() ? acc->second : d.defaultAccessor;
            std::size_t n = 0;
            if (full || flags->attributesToInvalidate.contains(d.name)) {
                buf.resize(state.instanceCount);
                n = fillAttribute(buf, table, accessor, std::nullopt, coords, state.diagnostics);
                if (state.instanceCount == 0) buf.dirty = false;
            } else if (auto pr = flags->partialRanges.find(d.name); pr != flags->partialRanges.end()) {
                for (RowRange r : pr->second) {
                    if (r.end > state.instanceCount) {
                        state.diagnostics["clippedPartialRanges"] += 1;
                        r.end = state.instanceCount;
                    }
                    n += fillAttribute(buf, table, accessor, r, coords, state.diagnostics);
                }
            }
            if (n > 0) {
                evals[d.name] += n;
                report.accessorEvaluations += n;
            }
        }
        if (full || rederive) type.prepare(state, device_);
        for (auto& [name, buf] : state.attributes) {
            const auto before = device_.stats().buffersUploaded;
            report.bytesUploaded += uploadAttribute(buf, device_);
            report.buffersUploaded += device_.stats().buffersUploaded - before;
        }
        state.error.clear();
    } catch (const gpu::DeviceLostError&) {
        throw;
    } catch (const std::exception& e) {
        releaseLayer(state);
        state.attributes.clear();
        state.instances.reset();
        state.instanceCount = 0;
        state.error = e.what();
        report.errors[spec.id] = e.what();
    }
    if (evals.empty()) report.evaluations.erase(spec.id);
}

UpdateReport Engine::update(const SceneSpec& next) {
    if (device_.lost()) throw gpu::DeviceLostError("device lost");
    next.viewport.validate();
    checkLayerIds(next.layers);
    for (const auto& l : next.layers) (void)registry_.get(l.type);

    UpdateReport report;
    std::map<std::string, CompositeEntry> nextCache;
    std::vector<LayerSpec> expanded = expandComposites(next.layers, report, nextCache);
    checkLayerIds(expanded);

    SceneSpec prevScene{scene_.viewport, expanded_};
    SceneSpec nextScene{next.viewport, expanded};
    const ScenePlan plan = diffScene(prevScene, nextScene, registry_);

    std::map<std::string, std::unique_ptr<LayerState>> old;
    for (auto& l : layers_) old[l->spec.id] = std::move(l);
    layers_.clear();
    for (const auto& id : plan.finalize) {
        auto it = old.find(id);
        if (it == old.end()) continue;
        releaseLayer(*it->second);
        old.erase(it);
        report.finalized.push_back(id);
    }
    const std::set<std::string> toUpdate(plan.update.begin(), plan.update.end());
    for (const LayerSpec& spec : expanded) {
        auto it = old.find(spec.id);
        if (it != old.end()) {
            std::unique_ptr<LayerState> state = std::move(it->second);
            state->spec = spec;
            if (toUpdate.contains(spec.id)) {
                buildLayer(*state, &plan.flags.at(spec.id), report);
                report.updated.push_back(spec.id);
            }
            layers_.push_back(std::move(state));
        } else {
            auto state = std::make_unique<LayerState>();
            state->spec = spec;
            state->type = &registry_.get(spec.type);
            buildLayer(*state, nullptr, report);
            report.created.push_back(spec.id);
            layers_.push_back(std::move(state));
        }
    }

    const bool compositesChanged = report.compositeExpansions > 0 || nextCache.size() != composites_.size();
    composites_ = std::move(nextCache);
    compositeDiagnostics_.clear();
    compositeErrors_.clear();
    for (const auto& [id, entry] : composites_) {
        if (!entry.diagnostics.empty()) compositeDiagnostics_[id] = entry.diagnostics;
        if (!entry.error.empty()) compositeErrors_[id] = entry.error;
    }
    if (!plan.empty() || compositesChanged) pickValid_ = false;
    scene_ = next;
    expanded_ = std::move(expanded);
    return report;
}

gpu::FrameStats Engine::render(gpu::RenderTarget& target, RenderMode mode, double time, Rgba8 clearColor) {
    if (device_.lost()) throw gpu::DeviceLostError("device lost");
    device_.resetStats();
    const bool picking = mode == RenderMode::picking;
    target.clear(picking ? Rgba8{0, 0, 0, 0} : clearColor, 1.0f);

    Viewport vp = scene_.viewport;
    vp.width = target.width();
    vp.height = target.height();
    const ShaderProjection projection = ShaderProjection::fromViewport(vp);

    if (picking) slots_.clear();
    for (auto& l : layers_) l->slot = 0;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        LayerState& layer = *layers_[i];
        if (!layer.ok() || !layer.spec.visible) continue;
        const bool functional = layer.type->functional();
        if (picking) {
            if (!layer.spec.pickable && !functional) continue;
            if (slots_.size() >= static_cast<std::size_t>(kMaxPickableLayers)) {
                layer.diagnostics["noPickingSlot"] += 1;
                continue;
            }
            slots_.push_back(&layer);
            layer.slot = static_cast<std::uint8_t>(slots_.size());
        } else if (functional) {
            continue;
        }
        DrawContext ctx{device_, target, *this, layer, vp, {}, {}, time};
        ctx.uniforms.projection = projection;
        ctx.uniforms.picking = picking;
        ctx.uniforms.layerSlot = layer.slot;
        ctx.uniforms.opacity = static_cast<float>(propNumber(layer.spec.props, "opacity", 1.0));
        const bool extruded = layer.type->blendMode() == BlendMode::extruded;
        ctx.state.depthTest = true;
        ctx.state.depthWrite = picking || extruded;
        ctx.state.blend = !picking;
        ctx.state.depthBias = static_cast<float>(i) * kLayerDepthOffset;
        layer.type->draw(ctx);
    }
    return device_.stats();
}

const gpu::RenderTarget& Engine::pickingPass() {
    const int w = scene_.viewport.width, h = scene_.viewport.height;
    if (!pickTarget_ || pickTarget_->width() != w || pickTarget_->height() != h) {
        pickTarget_ = std::make_unique<gpu::RenderTarget>(w, h, true);
        pickValid_ = false;
    }
    if (!pickValid_) {
        render(*pickTarget_, RenderMode::picking);
        pickValid_ = true;
        pickPassRenders_ += 1;
    }
    return *pickTarget_;
}

UpdateReport Engine::recover() {
    device_.restore();
    for (auto& l : layers_) releaseLayer(*l);
    layers_.clear();
    expanded_.clear();
    composites_.clear();
    slots_.clear();
    pickValid_ = false;
    SceneSpec current = scene_;
    scene_ = SceneSpec{};
    return update(current);
}

}  // namespace strata

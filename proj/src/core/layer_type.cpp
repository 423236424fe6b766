#include "strata/core/layer_type.hpp"

#include <algorithm>

#include "strata/errors.hpp"

namespace strata {

const AttributeBuffer* LayerState::attribute(const std::string& name) const {
    auto it = attributes.find(name);
    return it == attributes.end() ? nullptr : &it->second;
}

gpu::BoundAttribute DrawContext::bind(const std::string& name) const { return bind(layer, name); }

gpu::BoundAttribute DrawContext::bind(const LayerState& other, const std::string& name) const {
    const AttributeBuffer* buf = other.attribute(name);
    if (buf == nullptr) throw gpu::ResourceError("layer '" + other.spec.id + "' has no attribute '" + name + "'");
    gpu::BoundAttribute b;
    b.hi = device.buffer(buf->valuesId);
    if (buf->lowId != 0) b.lo = device.buffer(buf->lowId);
    b.components = buf->components();
    const std::size_t need = other.instanceCount * static_cast<std::size_t>(b.components);
    if (b.hi.size() < need || (!b.lo.empty() && b.lo.size() < need)) {
        throw gpu::ResourceError("attribute '" + name + "' of layer '" + other.spec.id + "' is not uploaded");
    }
    return b;
}

void DrawContext::draw(const gpu::Pipeline& pipeline, const Mesh& mesh, std::uint32_t instances,
                       std::vector<gpu::BoundAttribute> attributes) {
    if (instances == 0) return;
    gpu::DrawCommand cmd;
    cmd.mesh = &mesh;
    cmd.instanceCount = instances;
    cmd.attributes = std::move(attributes);
    cmd.uniforms = uniforms;
    cmd.state = state;
    device.draw(pipeline, cmd, target);
}

std::vector<std::string> LayerType::accessorNames(const LayerSpec& spec) const {
    std::vector<std::string> names = requiredAccessors(spec);
    for (const auto& d : attributes(spec)) {
        if (std::find(names.begin(), names.end(), d.name) == names.end()) names.push_back(d.name);
    }
    return names;
}

void LayerType::validate(const LayerSpec& spec) const {
    if (!spec.data) throw SpecError("layer '" + spec.id + "' has no data");
    for (const auto& a : attributes(spec)) {
        if (!spec.accessors.contains(a.name) && !a.defaultAccessor.defined()) {
            throw SpecError("layer '" + spec.id + "' (" + name() + ") is missing the '" + a.name + "' accessor");
        }
    }
    for (const auto& r : requiredAccessors(spec)) {
        if (!spec.accessors.contains(r)) {
            throw SpecError("layer '" + spec.id + "' (" + name() + ") is missing the '" + r + "' accessor");
        }
    }
}

std::vector<LayerSpec> LayerType::expand(const LayerSpec&, std::shared_ptr<void>&, Diagnostics&) const { return {}; }

DataRef LayerType::derive(const LayerSpec& spec, Diagnostics&) const { return spec.data; }

void LayerRegistry::add(std::unique_ptr<LayerType> type) {
    const std::string n = type->name();
    types_[n] = std::move(type);
}

const LayerType* LayerRegistry::find(const std::string& name) const {
    auto it = types_.find(name);
    return it == types_.end() ? nullptr : it->second.get();
}

const LayerType& LayerRegistry::get(const std::string& name) const {
    const LayerType* t = find(name);
    if (t == nullptr) throw SpecError("unknown layer type '" + name + "'");
    return *t;
}

std::vector<std::string> LayerRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : types_) out.push_back(k);
    return out;
}

}  // namespace strata

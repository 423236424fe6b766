#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "strata/core/attribute.hpp"
#include "strata/core/layer_spec.hpp"
#include "strata/gpu/device.hpp"

namespace strata {

class Engine;
class LayerType;

enum class BlendMode { flat, extruded };

/// Engine-side state of one primitive layer.
struct LayerState {
    LayerSpec spec;
    const LayerType* type = nullptr;
    DataRef instances;  ///< spec.data, or the table derived from it
    std::size_t instanceCount = 0;
    std::map<std::string, AttributeBuffer> attributes;
    Diagnostics diagnostics;
    std::string error;  ///< non-empty: the layer failed and is skipped
    std::shared_ptr<void> typeState;
    std::vector<gpu::TextureId> textures;
    std::uint8_t slot = 0;  ///< picking slot of the last picking pass, 0 if none

    [[nodiscard]] bool ok() const { return error.empty(); }
    [[nodiscard]] const AttributeBuffer* attribute(const std::string& name) const;
};

struct DrawContext {
    gpu::Device& device;
    gpu::RenderTarget& target;
    const Engine& engine;
    const LayerState& layer;
    const Viewport& viewport;
    gpu::Uniforms uniforms;
    gpu::RasterState state;
    double time = 0.0;

    /// Binds a device buffer pair of `layer` (or of another layer).
    [[nodiscard]] gpu::BoundAttribute bind(const std::string& name) const;
    [[nodiscard]] gpu::BoundAttribute bind(const LayerState& other, const std::string& name) const;
    void draw(const gpu::Pipeline& pipeline, const Mesh& mesh, std::uint32_t instances,
              std::vector<gpu::BoundAttribute> attributes);
};

/// A registered layer kind: attribute schema, primitive and shader program.
class LayerType {
public:
    virtual ~LayerType() = default;

    [[nodiscard]] virtual std::string name() const = 0;
    /// Prop keys this type reads, beyond the shared opacity and coordinateSystem.
    [[nodiscard]] virtual std::vector<std::string> propNames() const { return {}; }
    [[nodiscard]] virtual std::vector<AttributeDescriptor> attributes(const LayerSpec& spec) const = 0;
    /// Accessors the layer spec must supply (beyond attributes with default accessors).
    [[nodiscard]] virtual std::vector<std::string> requiredAccessors(const LayerSpec&) const { return {}; }
    /// Accessor names a spec may set. The default is the attribute names plus required accessors.
    [[nodiscard]] virtual std::vector<std::string> accessorNames(const LayerSpec& spec) const;
    /// Throws SpecError. The default checks data presence and required accessors.
    virtual void validate(const LayerSpec& spec) const;
    [[nodiscard]] virtual BlendMode blendMode() const { return BlendMode::flat; }
    /// Functional layers draw only into the picking pass.
    [[nodiscard]] virtual bool functional() const { return false; }

    [[nodiscard]] virtual bool composite() const { return false; }
    /// Composite layers: sublayer specs. `state` persists between expansions of the same layer id.
    virtual std::vector<LayerSpec> expand(const LayerSpec& spec, std::shared_ptr<void>& state,
                                          Diagnostics& diagnostics) const;

    /// Derived layers build their instance table from spec.data (aggregation, glyph runs, ...).
    [[nodiscard]] virtual bool derived() const { return false; }
    [[nodiscard]] virtual bool deriveDependsOnProp(const std::string&) const { return true; }
    virtual DataRef derive(const LayerSpec& spec, Diagnostics& diagnostics) const;

    /// Called after creation and after every re-derive (textures, caches).
    virtual void prepare(LayerState&, gpu::Device&) const {}
    virtual void draw(DrawContext& ctx) const = 0;
    [[nodiscard]] virtual std::size_t sourceRow(const LayerState&, std::size_t instance) const { return instance; }
};

class LayerRegistry {
public:
    void add(std::unique_ptr<LayerType> type);
    [[nodiscard]] const LayerType* find(const std::string& name) const;
    /// Throws SpecError for unknown names.
    [[nodiscard]] const LayerType& get(const std::string& name) const;
    [[nodiscard]] std::vector<std::string> names() const;

private:
    std::map<std::string, std::unique_ptr<LayerType>> types_;
};

}  // namespace strata

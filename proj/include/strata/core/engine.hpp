#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "strata/core/diff.hpp"
#include "strata/core/layer_type.hpp"
#include "strata/gpu/device.hpp"

namespace strata {

enum class RenderMode { display, picking };

struct UpdateReport {
    std::uint64_t accessorEvaluations = 0;
    /// layer id -> attribute -> rows evaluated in this update
    std::map<std::string, std::map<std::string, std::uint64_t>> evaluations;
    std::vector<std::string> created;
    std::vector<std::string> updated;
    std::vector<std::string> finalized;
    std::uint64_t derivations = 0;
    std::uint64_t compositeExpansions = 0;
    std::uint64_t buffersUploaded = 0;
    std::uint64_t bytesUploaded = 0;
    /// layer id -> error message, for layers that failed in this update
    std::map<std::string, std::string> errors;
};

inline constexpr float kLayerDepthOffset = 1e-5f;

/// Declarative engine: owns layer state and GPU resources for the last submitted scene.
class Engine {
public:
    Engine(gpu::Device& device, const LayerRegistry& registry);
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    /// Diffs against the previous scene and performs the minimal refills. Throws SpecError on
    /// scene-level problems (duplicate ids, invalid viewport); layer failures are isolated.
    UpdateReport update(const SceneSpec& next);

    /// Draws the visible layers in order. Throws gpu::DeviceLostError when the device is lost.
    gpu::FrameStats render(gpu::RenderTarget& target, RenderMode mode = RenderMode::display, double time = 0.0,
                           Rgba8 clearColor = {0, 0, 0, 0});

    /// The picking pass for the current scene, rendered on first use after each change.
    const gpu::RenderTarget& pickingPass();
    [[nodiscard]] std::uint64_t pickingPassRenders() const { return pickPassRenders_; }

    /// Rebuilds every resource from the current scene after device loss.
    UpdateReport recover();

    [[nodiscard]] const SceneSpec& scene() const { return scene_; }
    [[nodiscard]] const Viewport& viewport() const { return scene_.viewport; }
    /// Primitive layers after composite expansion, in draw order.
    [[nodiscard]] const std::vector<std::unique_ptr<LayerState>>& layers() const { return layers_; }
    [[nodiscard]] const LayerState* findLayer(const std::string& id) const;
    [[nodiscard]] const LayerState* layerForSlot(std::uint8_t slot) const;
    /// Diagnostics and errors recorded by composite layers, by composite id.
    [[nodiscard]] const std::map<std::string, Diagnostics>& compositeDiagnostics() const { return compositeDiagnostics_; }
    [[nodiscard]] const std::map<std::string, std::string>& compositeErrors() const { return compositeErrors_; }
    [[nodiscard]] gpu::Device& device() { return device_; }
    [[nodiscard]] const LayerRegistry& registry() const { return registry_; }

private:
    struct CompositeEntry {
        LayerSpec spec;
        std::vector<LayerSpec> sublayers;
        std::shared_ptr<void> state;
        Diagnostics diagnostics;
        std::string error;
    };

    std::vector<LayerSpec> expandComposites(const std::vector<LayerSpec>& layers, UpdateReport& report,
                                            std::map<std::string, CompositeEntry>& nextCache);
    void buildLayer(LayerState& state, const ChangeFlags* flags, UpdateReport& report);
    void releaseLayer(LayerState& state);

    gpu::Device& device_;
    const LayerRegistry& registry_;
    SceneSpec scene_;
    std::vector<LayerSpec> expanded_;
    std::vector<std::unique_ptr<LayerState>> layers_;
    std::map<std::string, CompositeEntry> composites_;
    std::map<std::string, Diagnostics> compositeDiagnostics_;
    std::map<std::string, std::string> compositeErrors_;
    std::vector<const LayerState*> slots_;
    std::unique_ptr<gpu::RenderTarget> pickTarget_;
    bool pickValid_ = false;
    std::uint64_t pickPassRenders_ = 0;
};

}  // namespace strata

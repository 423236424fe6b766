#pragma once

#include <map>
#include <optional>
#include <string>

#include "strata/core/layer_spec.hpp"
#include "strata/core/layer_type.hpp"
#include "strata/layers/layers.hpp"
#include "strata/picking/encoding.hpp"

namespace strata {

/// Command-line viewport fields; each set field replaces the scene file's value.
struct ViewportOverrides {
    std::optional<double> longitude;
    std::optional<double> latitude;
    std::optional<double> zoom;
    std::optional<double> pitch;
    std::optional<double> bearing;
    std::optional<int> width;
    std::optional<int> height;
};

struct LoadedScene {
    SceneSpec scene;
    Rgba8 background{255, 255, 255, 255};
    double time = 0.0;
    /// Ingestion tallies by layer id (CSV blank and non-numeric cells).
    std::map<std::string, Diagnostics> ingestDiagnostics;
};

/// Parses and validates a scene document. Relative data and asset paths resolve against `baseDir`.
/// Schema violations and malformed JSON throw SpecError as "source:line: /json/pointer: message"; unreadable
/// scene or data files throw IngestError naming the path.
LoadedScene parseScene(const std::string& text, const std::string& baseDir, const ViewportOverrides& overrides = {},
                       const LayerRegistry& registry = builtinLayers(), const std::string& source = "<scene>");
LoadedScene loadScene(const std::string& path, const ViewportOverrides& overrides = {},
                      const LayerRegistry& registry = builtinLayers());

/// Line (1-based) of the value addressed by a JSON pointer in `text`, or 0 when not found.
int lineOfPointer(const std::string& text, const std::string& pointer);

}  // namespace strata

#pragma once

#include <memory>
#include <string>

#include "strata/analytics/graph.hpp"

namespace strata {

/// {"nodes": [{"id", "label"?, "x"?, "y"?, "group"?}], "edges": [{"source", "target"}]}.
/// Edge endpoints name node ids (string or number). Throws IngestError.
std::shared_ptr<GraphData> parseGraphJson(const std::string& text, const std::string& source = "<graph>");
std::shared_ptr<GraphData> loadGraphJson(const std::string& path);

}  // namespace strata

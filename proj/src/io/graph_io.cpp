#include "strata/io/graph_io.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "json_util.hpp"
#include "strata/io/csv.hpp"

namespace strata {

namespace {

using io::Json;
using io::pointerChild;

std::string idString(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    if (j.is_number()) return Json(j.get<double>()).dump();
    return {};
}

}  // namespace

std::shared_ptr<GraphData> parseGraphJson(const std::string& text, const std::string& source) {
    const Json doc = io::parseJson(text, source);
    auto fail = [&](const std::string& ptr, const std::string& msg) -> void {
        throw IngestError(source + ": " + ptr + ": " + msg);
    };
    if (!doc.is_object()) fail("/", "graph document must be an object");
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) fail("/nodes", "expected an array");
    auto g = std::make_shared<GraphData>();
    std::map<std::string, std::uint32_t> index;
    const Json& nodes = doc["nodes"];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string ptr = pointerChild("/nodes", i);
        const Json& n = nodes[i];
        if (!n.is_object() || !n.contains("id")) fail(ptr, "node needs an 'id'");
        const std::string id = idString(n["id"]);
        if (id.empty()) fail(pointerChild(ptr, "id"), "id must be a non-empty string or a number");
        if (!index.emplace(id, static_cast<std::uint32_t>(i)).second) fail(pointerChild(ptr, "id"), "duplicate id '" + id + "'");
        g->ids.push_back(id);
        g->labels.push_back(n.contains("label") && n["label"].is_string() ? n["label"].get<std::string>() : id);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const bool hasX = n.contains("x"), hasY = n.contains("y");
        if (hasX != hasY) fail(ptr, "give both 'x' and 'y' or neither");
        if (hasX && (!n["x"].is_number() || !n["y"].is_number())) fail(ptr, "'x' and 'y' must be numbers");
        g->positions.push_back(hasX ? Vec2{n["x"].get<double>(), n["y"].get<double>()} : Vec2{nan, nan});
        if (n.contains("group") && !n["group"].is_number_integer()) fail(pointerChild(ptr, "group"), "must be an integer");
        g->groups.push_back(n.contains("group") ? n["group"].get<int>() : 0);
    }
    if (doc.contains("edges")) {
        const Json& edges = doc["edges"];
        if (!edges.is_array()) fail("/edges", "expected an array");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const std::string ptr = pointerChild("/edges", i);
            const Json& e = edges[i];
            if (!e.is_object() || !e.contains("source") || !e.contains("target")) fail(ptr, "edge needs 'source' and 'target'");
            const auto s = index.find(idString(e["source"]));
            const auto t = index.find(idString(e["target"]));
            if (s == index.end()) fail(pointerChild(ptr, "source"), "unknown node '" + idString(e["source"]) + "'");
            if (t == index.end()) fail(pointerChild(ptr, "target"), "unknown node '" + idString(e["target"]) + "'");
            g->edges.emplace_back(s->second, t->second);
        }
    }
    return g;
}

std::shared_ptr<GraphData> loadGraphJson(const std::string& path) { return parseGraphJson(readTextFile(path), path); }

}  // namespace strata

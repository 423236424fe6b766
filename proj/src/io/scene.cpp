#include "strata/io/scene.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>

#include "json_util.hpp"
#include "strata/analytics/graph.hpp"
#include "strata/io/csv.hpp"
#include "strata/io/geojson_io.hpp"
#include "strata/io/graph_io.hpp"

namespace strata {

namespace {

using io::Json;
using io::pointerChild;

const std::set<std::string> kPathProps = {"atlas", "metrics", "iconAtlas", "labelAtlas", "labelMetrics"};
const std::set<std::string> kCommonProps = {"opacity", "coordinateSystem"};

/// Walks raw JSON text to find the line where the value at a pointer starts.
class PointerLocator {
public:
    PointerLocator(const std::string& text, const std::string& target) : s_(text), target_(target) {}

    int run() {
        try {
            value("");
        } catch (const std::out_of_range&) {
        }
        return found_;
    }

private:
    void ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            if (s_[i_] == '\n') ++line_;
            ++i_;
        }
    }
    char peek() {
        ws();
        if (i_ >= s_.size()) throw std::out_of_range("eof");
        return s_[i_];
    }
    std::string string() {
        std::string out;
        ++i_;
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\' && i_ + 1 < s_.size()) {
                out += s_[i_ + 1];
                i_ += 2;
                continue;
            }
            out += s_[i_++];
        }
        ++i_;
        return out;
    }
    void value(const std::string& ptr) {
        const char c = peek();
        if (ptr == target_ && found_ == 0) found_ = line_;
        if (c == '{') {
            ++i_;
            if (peek() == '}') {
                ++i_;
                return;
            }
            while (true) {
                peek();
                const std::string key = string();
                peek();
                ++i_;  // ':'
                value(pointerChild(ptr, key));
                if (peek() == ',') {
                    ++i_;
                    continue;
                }
                ++i_;  // '}'
                return;
            }
        }
        if (c == '[') {
            ++i_;
            if (peek() == ']') {
                ++i_;
                return;
            }
            for (std::size_t k = 0;; ++k) {
                value(pointerChild(ptr, k));
                if (peek() == ',') {
                    ++i_;
                    continue;
                }
                ++i_;  // ']'
                return;
            }
        }
        if (c == '"') {
            string();
            return;
        }
        while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != '}' && s_[i_] != ']' &&
               !std::isspace(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
        }
    }

    const std::string& s_;
    const std::string& target_;
    std::size_t i_ = 0;
    int line_ = 1;
    int found_ = 0;
};

class SceneReader {
public:
    SceneReader(const std::string& text, std::string baseDir, const LayerRegistry& registry, std::string source)
        : text_(text), baseDir_(std::move(baseDir)), registry_(registry), source_(std::move(source)) {}

    LoadedScene read(const ViewportOverrides& overrides) {
        Json doc;
        try {
            doc = io::parseJson(text_, source_);
        } catch (const IngestError& e) {
            throw SpecError(e.what());
        }
        if (!doc.is_object()) fail("", "scene must be a JSON object");
        allowKeys(doc, "", {"$schema", "description", "viewport", "layers", "background", "time"});
        LoadedScene out;
        if (!doc.contains("viewport")) fail("", "missing required key 'viewport'");
        out.scene.viewport = viewport(doc["viewport"], "/viewport", overrides);
        if (doc.contains("background")) out.background = color(doc["background"], "/background");
        if (doc.contains("time")) out.time = number(doc["time"], "/time");
        if (!doc.contains("layers")) fail("", "missing required key 'layers'");
        const Json& layers = doc["layers"];
        if (!layers.is_array()) fail("/layers", "expected an array");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const std::string ptr = pointerChild("/layers", i);
            LayerSpec spec = layer(layers[i], ptr, out);
            if (!ids.insert(spec.id).second) fail(pointerChild(ptr, "id"), "duplicate layer id '" + spec.id + "'");
            out.scene.layers.push_back(std::move(spec));
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& ptr, const std::string& message) const {
        const int line = lineOfPointer(text_, ptr);
        throw SpecError(source_ + ":" + std::to_string(line) + ": " + (ptr.empty() ? "/" : ptr) + ": " + message);
    }

    void allowKeys(const Json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
        for (const auto& [key, v] : obj.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
                fail(pointerChild(ptr, key), "unknown key '" + key + "'");
            }
        }
    }

    double number(const Json& j, const std::string& ptr) const {
        if (!j.is_number()) fail(ptr, "expected a number");
        return j.get<double>();
    }

    Rgba8 color(const Json& j, const std::string& ptr) const {
        if (!j.is_array() || (j.size() != 3 && j.size() != 4)) fail(ptr, "expected [r, g, b] or [r, g, b, a]");
        Rgba8 c{0, 0, 0, 255};
        for (std::size_t k = 0; k < j.size(); ++k) {
            const double v = number(j[k], pointerChild(ptr, k));
            if (v < 0 || v > 255) fail(pointerChild(ptr, k), "color channel outside 0..255");
            c[k] = static_cast<std::uint8_t>(std::lround(v));
        }
        return c;
    }

    Viewport viewport(const Json& j, const std::string& ptr, const ViewportOverrides& o) const {
        if (!j.is_object()) fail(ptr, "expected an object");
        allowKeys(j, ptr, {"longitude", "latitude", "zoom", "pitch", "bearing", "width", "height"});
        for (const char* k : {"longitude", "latitude", "zoom", "width", "height"}) {
            if (!j.contains(k)) fail(ptr, std::string("missing required key '") + k + "'");
        }
        auto integer = [&](const char* key) {
            const Json& v = j[key];
            if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 16384) {
                fail(pointerChild(ptr, key), "expected an integer in 1..16384");
            }
            return static_cast<int>(v.get<long long>());
        };
        Viewport v;
        v.center.longitude = o.longitude.value_or(number(j["longitude"], pointerChild(ptr, "longitude")));
        v.center.latitude = o.latitude.value_or(number(j["latitude"], pointerChild(ptr, "latitude")));
        v.zoom = o.zoom.value_or(number(j["zoom"], pointerChild(ptr, "zoom")));
        v.pitch = o.pitch.value_or(j.contains("pitch") ? number(j["pitch"], pointerChild(ptr, "pitch")) : 0.0);
        v.bearing = o.bearing.value_or(j.contains("bearing") ? number(j["bearing"], pointerChild(ptr, "bearing")) : 0.0);
        v.width = o.width.value_or(integer("width"));
        v.height = o.height.value_or(integer("height"));
        try {
            v.validate();
        } catch (const std::exception& e) {
            fail(ptr, e.what());
        }
        return v;
    }

    Value value(const Json& j, const std::string& ptr) const {
        if (j.is_boolean()) return j.get<bool>();
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) return j.get<std::string>();
        if (j.is_array()) {
            std::vector<double> out;
            for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], pointerChild(ptr, k)));
            return out;
        }
        fail(ptr, "expected a boolean, number, string or array of numbers");
    }

    std::string resolve(const std::string& path) const {
        const std::filesystem::path p(path);
        if (p.is_absolute() || baseDir_.empty()) return path;
        return (std::filesystem::path(baseDir_) / p).lexically_normal().string();
    }

    Accessor accessor(const Json& j, const std::string& ptr) const {
        if (j.is_string()) return Accessor::fromColumns({j.get<std::string>()});
        if (j.is_number()) return Accessor::fromConstant({j.get<double>()});
        if (j.is_array() && !j.empty()) {
            if (std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_string(); })) {
                return Accessor::fromColumns(j.get<std::vector<std::string>>());
            }
            if (std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); })) {
                return Accessor::fromConstant(j.get<std::vector<double>>());
            }
        }
        fail(ptr, "accessor must be a column name, an array of column names, a number or an array of numbers");
    }

    DataRef data(const Json& j, const std::string& ptr, Diagnostics& diag) {
        if (j.is_string()) {
            const std::string path = j.get<std::string>();
            const std::string ext = std::filesystem::path(path).extension().string();
            if (ext == ".csv") return file(path, "csv", {}, ptr, diag);
            if (ext == ".geojson") return file(path, "geojson", {}, ptr, diag);
            fail(ptr, "cannot infer the format of '" + path + "'; use {\"path\", \"format\"}");
        }
        if (!j.is_object()) fail(ptr, "data must be a path, {\"path\", \"format\"} or {\"rows\"}");
        if (j.contains("rows")) {
            allowKeys(j, ptr, {"rows"});
            return rows(j["rows"], pointerChild(ptr, "rows"));
        }
        allowKeys(j, ptr, {"path", "format", "columns"});
        if (!j.contains("path") || !j["path"].is_string()) fail(ptr, "missing string key 'path'");
        std::string format = "csv";
        if (j.contains("format")) {
            if (!j["format"].is_string()) fail(pointerChild(ptr, "format"), "expected a string");
            format = j["format"].get<std::string>();
            if (format != "csv" && format != "geojson" && format != "graph") {
                fail(pointerChild(ptr, "format"), "format must be csv, geojson or graph");
            }
        }
        std::vector<std::string> columns;
        if (j.contains("columns")) {
            const Json& c = j["columns"];
            if (!c.is_array() || !std::all_of(c.begin(), c.end(), [](const Json& e) { return e.is_string(); })) {
                fail(pointerChild(ptr, "columns"), "expected an array of column names");
            }
            if (format != "csv") fail(pointerChild(ptr, "columns"), "columns apply to csv data only");
            columns = c.get<std::vector<std::string>>();
        }
        return file(j["path"].get<std::string>(), format, columns, ptr, diag);
    }

    DataRef file(const std::string& path, const std::string& format, const std::vector<std::string>& columns,
                 const std::string& ptr, Diagnostics& diag) {
        const std::string resolved = resolve(path);
        std::string key = format + "|" + resolved;
        for (const auto& c : columns) key += "|" + c;
        if (auto it = cache_.find(key); it != cache_.end()) {
            for (const auto& [k, v] : cacheDiagnostics_[key]) diag[k] += v;
            return it->second;
        }
        if (!std::filesystem::exists(resolved)) {
            throw IngestError(source_ + ": " + ptr + ": data file not found: '" + resolved + "'");
        }
        DataRef table;
        Diagnostics local;
        if (format == "csv") table = ingestCsv(resolved, columns, &local);
        else if (format == "geojson") table = featureTable(ingestGeoJson(resolved));
        else table = graphTable(loadGraphJson(resolved));
        for (const auto& [k, v] : local) diag[k] += v;
        cacheDiagnostics_[key] = local;
        cache_[key] = table;
        return table;
    }

    DataRef rows(const Json& j, const std::string& ptr) const {
        if (!j.is_array()) fail(ptr, "expected an array of row objects");
        std::vector<std::string> names;
        std::map<std::string, bool> isString;
        for (std::size_t r = 0; r < j.size(); ++r) {
            if (!j[r].is_object()) fail(pointerChild(ptr, r), "expected a row object");
            for (const auto& [key, v] : j[r].items()) {
                if (!v.is_number() && !v.is_string()) fail(pointerChild(pointerChild(ptr, r), key), "cell must be a number or string");
                if (!isString.contains(key)) {
                    names.push_back(key);
                    isString[key] = v.is_string();
                } else if (isString[key] != v.is_string()) {
                    fail(pointerChild(pointerChild(ptr, r), key), "column '" + key + "' mixes numbers and strings");
                }
            }
        }
        auto table = makeTable(j.size());
        for (const auto& name : names) {
            if (isString[name]) {
                std::vector<std::string> col(j.size());
                for (std::size_t r = 0; r < j.size(); ++r) col[r] = j[r].value(name, std::string());
                table->addString(name, std::move(col));
            } else {
                std::vector<double> col(j.size(), 0.0);
                for (std::size_t r = 0; r < j.size(); ++r) col[r] = j[r].value(name, 0.0);
                table->addNumeric(name, std::move(col));
            }
        }
        return table;
    }

    LayerSpec layer(const Json& j, const std::string& ptr, LoadedScene& out) {
        if (!j.is_object()) fail(ptr, "expected a layer object");
        allowKeys(j, ptr, {"id", "type", "data", "accessors", "props", "updateTriggers", "visible", "pickable"});
        LayerSpec spec;
        if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
            fail(j.contains("id") ? pointerChild(ptr, "id") : ptr, "layer needs a non-empty string 'id'");
        }
        spec.id = j["id"].get<std::string>();
        if (!j.contains("type") || !j["type"].is_string()) fail(ptr, "layer needs a string 'type'");
        spec.type = j["type"].get<std::string>();
        const LayerType* type = registry_.find(spec.type);
        if (type == nullptr) fail(pointerChild(ptr, "type"), "unknown layer type '" + spec.type + "'");
        for (const char* flag : {"visible", "pickable"}) {
            if (!j.contains(flag)) continue;
            if (!j[flag].is_boolean()) fail(pointerChild(ptr, flag), "expected a boolean");
            (std::string(flag) == "visible" ? spec.visible : spec.pickable) = j[flag].get<bool>();
        }
        if (j.contains("props")) {
            const std::string pptr = pointerChild(ptr, "props");
            if (!j["props"].is_object()) fail(pptr, "expected an object");
            const auto known = type->propNames();
            for (const auto& [key, v] : j["props"].items()) {
                if (!kCommonProps.contains(key) && std::find(known.begin(), known.end(), key) == known.end()) {
                    fail(pointerChild(pptr, key), "unknown prop '" + key + "' for layer type '" + spec.type + "'");
                }
                Value val = value(v, pointerChild(pptr, key));
                if (kPathProps.contains(key) && std::holds_alternative<std::string>(val)) {
                    val = resolve(std::get<std::string>(val));
                }
                spec.props[key] = std::move(val);
            }
        }
        if (!j.contains("data")) fail(ptr, "layer needs 'data'");
        spec.data = data(j["data"], pointerChild(ptr, "data"), out.ingestDiagnostics[spec.id]);
        if (out.ingestDiagnostics[spec.id].empty()) out.ingestDiagnostics.erase(spec.id);
        const auto names = type->accessorNames(spec);
        auto checkName = [&](const std::string& key, const std::string& p, const char* what) {
            if (std::find(names.begin(), names.end(), key) == names.end()) {
                fail(p, std::string("unknown ") + what + " '" + key + "' for layer type '" + spec.type + "'");
            }
        };
        if (j.contains("accessors")) {
            const std::string aptr = pointerChild(ptr, "accessors");
            if (!j["accessors"].is_object()) fail(aptr, "expected an object");
            for (const auto& [key, v] : j["accessors"].items()) {
                checkName(key, pointerChild(aptr, key), "accessor");
                spec.accessors[key] = accessor(v, pointerChild(aptr, key));
            }
        }
        if (j.contains("updateTriggers")) {
            const std::string tptr = pointerChild(ptr, "updateTriggers");
            if (!j["updateTriggers"].is_object()) fail(tptr, "expected an object");
            for (const auto& [key, v] : j["updateTriggers"].items()) {
                checkName(key, pointerChild(tptr, key), "update trigger");
                spec.updateTriggers[key] = value(v, pointerChild(tptr, key));
            }
        }
        try {
            type->validate(spec);
        } catch (const SpecError& e) {
            fail(ptr, e.what());
        }
        return spec;
    }

    const std::string& text_;
    std::string baseDir_;
    const LayerRegistry& registry_;
    std::string source_;
    std::map<std::string, DataRef> cache_;
    std::map<std::string, Diagnostics> cacheDiagnostics_;
};

}  // namespace

int lineOfPointer(const std::string& text, const std::string& pointer) { return PointerLocator(text, pointer).run(); }

LoadedScene parseScene(const std::string& text, const std::string& baseDir, const ViewportOverrides& overrides,
                       const LayerRegistry& registry, const std::string& source) {
    return SceneReader(text, baseDir, registry, source).read(overrides);
}

LoadedScene loadScene(const std::string& path, const ViewportOverrides& overrides, const LayerRegistry& registry) {
    const std::string text = readTextFile(path);
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parseScene(text, base, overrides, registry, path);
}

}  // namespace strata

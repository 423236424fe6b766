#include "strata/io/geojson_io.hpp"

#include <cmath>

#include "json_util.hpp"
#include "strata/io/csv.hpp"

namespace strata {

namespace {

using io::Json;
using io::pointerChild;

struct GeoJsonReader {
    std::string source;

    [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
        throw IngestError(source + ": " + (pointer.empty() ? "/" : pointer) + ": " + message);
    }

    LngLat position(const Json& j, const std::string& ptr) const {
        if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number()) {
            fail(ptr, "position must be an array of at least two numbers");
        }
        return {j[0].get<double>(), j[1].get<double>()};
    }

    std::vector<LngLat> positions(const Json& j, const std::string& ptr) const {
        if (!j.is_array()) fail(ptr, "expected an array of positions");
        std::vector<LngLat> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(position(j[i], pointerChild(ptr, i)));
        return out;
    }

    std::vector<std::vector<LngLat>> rings(const Json& j, const std::string& ptr) const {
        if (!j.is_array()) fail(ptr, "expected an array of rings");
        std::vector<std::vector<LngLat>> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(positions(j[i], pointerChild(ptr, i)));
        return out;
    }

    Geometry geometry(const Json& j, const std::string& ptr) const {
        Geometry g;
        if (j.is_null()) {
            g.typeName = "null";
            return g;
        }
        if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) fail(ptr, "geometry needs a string 'type'");
        g.typeName = j["type"].get<std::string>();
        if (g.typeName == "GeometryCollection") return g;
        const std::string cptr = pointerChild(ptr, "coordinates");
        if (!j.contains("coordinates")) {
            if (g.typeName == "Point" || g.typeName == "MultiPoint" || g.typeName == "LineString" ||
                g.typeName == "MultiLineString" || g.typeName == "Polygon" || g.typeName == "MultiPolygon") {
                fail(ptr, "geometry '" + g.typeName + "' needs 'coordinates'");
            }
            return g;
        }
        const Json& c = j["coordinates"];
        if (g.typeName == "Point") {
            g.type = Geometry::Type::point;
            g.parts = {{{position(c, cptr)}}};
        } else if (g.typeName == "MultiPoint") {
            g.type = Geometry::Type::multiPoint;
            for (const auto& p : positions(c, cptr)) g.parts.push_back({{p}});
        } else if (g.typeName == "LineString") {
            g.type = Geometry::Type::lineString;
            g.parts = {{positions(c, cptr)}};
        } else if (g.typeName == "MultiLineString") {
            g.type = Geometry::Type::multiLineString;
            g.parts = {rings(c, cptr)};
        } else if (g.typeName == "Polygon") {
            g.type = Geometry::Type::polygon;
            g.parts = {rings(c, cptr)};
        } else if (g.typeName == "MultiPolygon") {
            g.type = Geometry::Type::multiPolygon;
            if (!c.is_array()) fail(cptr, "expected an array of polygons");
            for (std::size_t i = 0; i < c.size(); ++i) g.parts.push_back(rings(c[i], pointerChild(cptr, i)));
        }
        return g;
    }

    ValueMap properties(const Json& j, const std::string& ptr) const {
        ValueMap out;
        if (j.is_null()) return out;
        if (!j.is_object()) fail(ptr, "properties must be an object or null");
        for (const auto& [key, v] : j.items()) {
            if (v.is_boolean()) {
                out[key] = v.get<bool>();
            } else if (v.is_number()) {
                out[key] = v.get<double>();
            } else if (v.is_string()) {
                out[key] = v.get<std::string>();
            } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); })) {
                out[key] = v.get<std::vector<double>>();
            }
        }
        return out;
    }

    Feature feature(const Json& j, const std::string& ptr) const {
        if (!j.is_object() || j.value("type", "") != "Feature") fail(ptr, "expected a Feature object");
        if (!j.contains("geometry")) fail(ptr, "feature needs 'geometry'");
        Feature f;
        f.geometry = geometry(j["geometry"], pointerChild(ptr, "geometry"));
        if (j.contains("properties")) f.properties = properties(j["properties"], pointerChild(ptr, "properties"));
        return f;
    }
};

}  // namespace

std::shared_ptr<FeatureCollection> parseGeoJson(const std::string& text, const std::string& source) {
    const Json doc = io::parseJson(text, source);
    const GeoJsonReader reader{source};
    auto fc = std::make_shared<FeatureCollection>();
    if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) {
        reader.fail("", "GeoJSON document must be an object with a string 'type'");
    }
    const std::string type = doc["type"].get<std::string>();
    if (type == "FeatureCollection") {
        if (!doc.contains("features") || !doc["features"].is_array()) reader.fail("/features", "expected an array");
        const Json& features = doc["features"];
        for (std::size_t i = 0; i < features.size(); ++i) {
            fc->features.push_back(reader.feature(features[i], pointerChild("/features", i)));
        }
    } else if (type == "Feature") {
        fc->features.push_back(reader.feature(doc, ""));
    } else {
        Feature f;
        f.geometry = reader.geometry(doc, "");
        fc->features.push_back(std::move(f));
    }
    return fc;
}

std::shared_ptr<FeatureCollection> ingestGeoJson(const std::string& path) {
    return parseGeoJson(readTextFile(path), path);
}

}  // namespace strata

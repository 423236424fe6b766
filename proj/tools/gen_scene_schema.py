#!/usr/bin/env python3
"""Writes docs/scene_schema.json from the layer catalog printed by `strata info`."""
import json
import subprocess
import sys

cli = sys.argv[1] if len(sys.argv) > 1 else "build/tools/strata"
out = sys.argv[2] if len(sys.argv) > 2 else "docs/scene_schema.json"
catalog = json.loads(subprocess.check_output([cli, "info"]))["layerTypes"]

value = {
    "oneOf": [
        {"type": "boolean"},
        {"type": "number"},
        {"type": "string"},
        {"type": "array", "items": {"type": "number"}},
    ]
}
accessor = {
    "oneOf": [
        {"type": "string", "description": "column name"},
        {"type": "number", "description": "constant"},
        {"type": "array", "items": {"type": "string"}, "minItems": 1, "description": "column names"},
        {"type": "array", "items": {"type": "number"}, "minItems": 1, "description": "constant vector"},
    ]
}
data = {
    "oneOf": [
        {"type": "string", "pattern": "\\.(csv|geojson)$", "description": "path relative to the scene file"},
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["path"],
            "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["csv", "geojson", "graph"], "default": "csv"},
                "columns": {"type": "array", "items": {"type": "string"}, "description": "required numeric CSV columns"},
            },
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["rows"],
            "properties": {
                "rows": {
                    "type": "array",
                    "items": {"type": "object", "additionalProperties": {"type": ["number", "string"]}},
                }
            },
        },
    ]
}

per_type = []
for name, info in sorted(catalog.items()):
    props = {"type": "object", "propertyNames": {"enum": info["props"]}, "additionalProperties": {"$ref": "#/definitions/value"}}
    names = {"enum": info["accessors"]} if info["accessors"] else {"not": {}}
    per_type.append(
        {
            "if": {"properties": {"type": {"const": name}}},
            "then": {
                "properties": {
                    "props": props,
                    "accessors": {"type": "object", "propertyNames": names},
                    "updateTriggers": {"type": "object", "propertyNames": names},
                }
            },
        }
    )

schema = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "$id": "strata-scene",
    "title": "strata scene",
    "type": "object",
    "additionalProperties": False,
    "required": ["viewport", "layers"],
    "properties": {
        "$schema": {"type": "string"},
        "description": {"type": "string"},
        "background": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 255}, "minItems": 3, "maxItems": 4},
        "time": {"type": "number", "description": "seconds, drives time-varying layers"},
        "viewport": {
            "type": "object",
            "additionalProperties": False,
            "required": ["longitude", "latitude", "zoom", "width", "height"],
            "properties": {
                "longitude": {"type": "number", "minimum": -180, "maximum": 180},
                "latitude": {"type": "number", "exclusiveMinimum": -85.051129, "exclusiveMaximum": 85.051129},
                "zoom": {"type": "number", "minimum": 0},
                "pitch": {"type": "number", "minimum": 0, "maximum": 60, "default": 0},
                "bearing": {"type": "number", "minimum": 0, "exclusiveMaximum": 360, "default": 0},
                "width": {"type": "integer", "minimum": 1, "maximum": 16384},
                "height": {"type": "integer", "minimum": 1, "maximum": 16384},
            },
        },
        "layers": {"type": "array", "items": {"$ref": "#/definitions/layer"}},
    },
    "definitions": {
        "value": value,
        "accessor": accessor,
        "data": data,
        "layer": {
            "type": "object",
            "additionalProperties": False,
            "required": ["id", "type", "data"],
            "properties": {
                "id": {"type": "string", "minLength": 1},
                "type": {"enum": sorted(catalog)},
                "data": {"$ref": "#/definitions/data"},
                "accessors": {"type": "object", "additionalProperties": {"$ref": "#/definitions/accessor"}},
                "props": {"type": "object", "additionalProperties": {"$ref": "#/definitions/value"}},
                "updateTriggers": {"type": "object", "additionalProperties": {"$ref": "#/definitions/value"}},
                "visible": {"type": "boolean", "default": True},
                "pickable": {"type": "boolean", "default": False},
            },
            "allOf": per_type,
        },
    },
}

with open(out, "w") as f:
    json.dump(schema, f, indent=2)
    f.write("\n")

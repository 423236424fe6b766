#pragma once

#include <string>

#include "json.hpp"
#include "strata/errors.hpp"

namespace strata::io {

using Json = nlohmann::json;

/// Parses JSON; syntax errors become IngestError("source:line:column: message").
inline Json parseJson(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        int line = 1, column = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
        throw IngestError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
    }
}

inline std::string pointerChild(const std::string& parent, const std::string& key) {
    std::string escaped;
    for (char c : key) {
        if (c == '~') escaped += "~0";
        else if (c == '/') escaped += "~1";
        else escaped += c;
    }
    return parent + "/" + escaped;
}

inline std::string pointerChild(const std::string& parent, std::size_t index) {
    return parent + "/" + std::to_string(index);
}

}  // namespace strata::io

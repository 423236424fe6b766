#include "strata/core/value.hpp"

#include <sstream>

namespace strata {

double propNumber(const ValueMap& props, const std::string& name, double fallback) {
    auto it = props.find(name);
    if (it == props.end()) return fallback;
    if (const auto* d = std::get_if<double>(&it->second)) return *d;
    if (const auto* b = std::get_if<bool>(&it->second)) return *b ? 1.0 : 0.0;
    return fallback;
}

bool propBool(const ValueMap& props, const std::string& name, bool fallback) {
    auto it = props.find(name);
    if (it == props.end()) return fallback;
    if (const auto* b = std::get_if<bool>(&it->second)) return *b;
    if (const auto* d = std::get_if<double>(&it->second)) return *d != 0.0;
    return fallback;
}

std::string propString(const ValueMap& props, const std::string& name, const std::string& fallback) {
    auto it = props.find(name);
    if (it == props.end()) return fallback;
    if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
    return fallback;
}

std::vector<double> propVector(const ValueMap& props, const std::string& name, std::vector<double> fallback) {
    auto it = props.find(name);
    if (it == props.end()) return fallback;
    if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
    if (const auto* d = std::get_if<double>(&it->second)) return {*d};
    return fallback;
}

std::string describeValue(const Value& v) {
    std::ostringstream out;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                out << "null";
            } else if constexpr (std::is_same_v<T, bool>) {
                out << (x ? "true" : "false");
            } else if constexpr (std::is_same_v<T, double>) {
                out << x;
            } else if constexpr (std::is_same_v<T, std::string>) {
                out << '"' << x << '"';
            } else {
                out << '[';
                for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
                out << ']';
            }
        },
        v);
    return out.str();
}

}  // namespace strata

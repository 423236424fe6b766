#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace strata {

/// A shallow-comparable prop or trigger value.
using Value = std::variant<std::monostate, bool, double, std::string, std::vector<double>>;
using ValueMap = std::map<std::string, Value>;

double propNumber(const ValueMap& props, const std::string& name, double fallback);
bool propBool(const ValueMap& props, const std::string& name, bool fallback);
std::string propString(const ValueMap& props, const std::string& name, const std::string& fallback);
std::vector<double> propVector(const ValueMap& props, const std::string& name, std::vector<double> fallback);

std::string describeValue(const Value& v);

}  // namespace strata

#include "strata/core/data_table.hpp"

#include "strata/errors.hpp"

namespace strata {

void DataTable::checkLength(const std::string& name, std::size_t n) {
    if (!sized_ && numeric_.empty() && strings_.empty()) {
        rowCount_ = n;
        sized_ = true;
        return;
    }
    if (n != rowCount_) {
        throw SpecError("column '" + name + "' has " + std::to_string(n) + " rows, table has " +
                        std::to_string(rowCount_));
    }
}

void DataTable::addNumeric(const std::string& name, std::vector<double> values) {
    checkLength(name, values.size());
    strings_.erase(name);
    numeric_[name] = std::move(values);
}

void DataTable::addString(const std::string& name, std::vector<std::string> values) {
    checkLength(name, values.size());
    numeric_.erase(name);
    strings_[name] = std::move(values);
}

const std::vector<double>* DataTable::numeric(const std::string& name) const {
    auto it = numeric_.find(name);
    return it == numeric_.end() ? nullptr : &it->second;
}

std::vector<double>* DataTable::numericMutable(const std::string& name) {
    auto it = numeric_.find(name);
    return it == numeric_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* DataTable::strings(const std::string& name) const {
    auto it = strings_.find(name);
    return it == strings_.end() ? nullptr : &it->second;
}

std::vector<std::string> DataTable::columnNames() const {
    std::vector<std::string> names;
    for (const auto& [k, v] : numeric_) names.push_back(k);
    for (const auto& [k, v] : strings_) names.push_back(k);
    return names;
}

}  // namespace strata

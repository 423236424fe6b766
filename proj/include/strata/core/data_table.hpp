#pragma once

#include <any>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace strata {

/// Column-oriented table. Layers compare tables by reference identity only.
class DataTable {
public:
    explicit DataTable(std::size_t rowCount = 0) : rowCount_(rowCount) {}

    [[nodiscard]] std::size_t rowCount() const { return rowCount_; }

    /// The first column added fixes the row count of an empty table.
    void addNumeric(const std::string& name, std::vector<double> values);
    void addString(const std::string& name, std::vector<std::string> values);

    [[nodiscard]] const std::vector<double>* numeric(const std::string& name) const;
    [[nodiscard]] std::vector<double>* numericMutable(const std::string& name);
    [[nodiscard]] const std::vector<std::string>* strings(const std::string& name) const;
    [[nodiscard]] bool has(const std::string& name) const { return numeric(name) || strings(name); }
    [[nodiscard]] std::vector<std::string> columnNames() const;

    /// Non-tabular source data (GeoJSON features, graphs) for composite layers.
    std::any payload;

private:
    void checkLength(const std::string& name, std::size_t n);

    std::size_t rowCount_;
    bool sized_ = false;
    std::map<std::string, std::vector<double>> numeric_;
    std::map<std::string, std::vector<std::string>> strings_;
};

using DataRef = std::shared_ptr<DataTable>;

inline DataRef makeTable(std::size_t rows = 0) { return std::make_shared<DataTable>(rows); }

}  // namespace strata

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "strata/core/data_table.hpp"

namespace strata {

using AccessorFn = std::function<void(const DataTable& table, std::size_t row, std::span<double> out)>;

/// Per-row mapping from data to an attribute value.
/// Column and constant accessors compare by value, function accessors by identity.
struct Accessor {
    enum class Kind { none, columns, constant, function };

    Kind kind = Kind::none;
    std::vector<std::string> columns;
    std::vector<double> constant;
    std::shared_ptr<const AccessorFn> fn;

    static Accessor fromColumns(std::vector<std::string> names);
    static Accessor fromConstant(std::vector<double> values);
    static Accessor fromFunction(AccessorFn f);

    [[nodiscard]] bool defined() const { return kind != Kind::none; }

    friend bool operator==(const Accessor& a, const Accessor& b);
};

/// Resolves an accessor against one table for repeated row evaluation.
class BoundAccessor {
public:
    /// Throws SpecError when a referenced column is missing or not numeric.
    BoundAccessor(const Accessor& accessor, const DataTable& table, std::span<const double> defaults);

    /// Writes defaults.size() values; trailing components not produced by the accessor keep their default.
    void evaluate(std::size_t row, std::span<double> out) const;

private:
    const Accessor& accessor_;
    const DataTable& table_;
    std::vector<const std::vector<double>*> columns_;
    std::vector<double> defaults_;
};

}  // namespace strata

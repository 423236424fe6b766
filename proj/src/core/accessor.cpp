#include "strata/core/accessor.hpp"

#include <algorithm>

#include "strata/errors.hpp"

namespace strata {

Accessor Accessor::fromColumns(std::vector<std::string> names) {
    Accessor a;
    a.kind = Kind::columns;
    a.columns = std::move(names);
    return a;
}

Accessor Accessor::fromConstant(std::vector<double> values) {
    Accessor a;
    a.kind = Kind::constant;
    a.constant = std::move(values);
    return a;
}

Accessor Accessor::fromFunction(AccessorFn f) {
    Accessor a;
    a.kind = Kind::function;
    a.fn = std::make_shared<const AccessorFn>(std::move(f));
    return a;
}

bool operator==(const Accessor& a, const Accessor& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Accessor::Kind::none:
            return true;
        case Accessor::Kind::columns:
            return a.columns == b.columns;
        case Accessor::Kind::constant:
            return a.constant == b.constant;
        case Accessor::Kind::function:
            return a.fn == b.fn;
    }
    return false;
}

BoundAccessor::BoundAccessor(const Accessor& accessor, const DataTable& table, std::span<const double> defaults)
    : accessor_(accessor), table_(table), defaults_(defaults.begin(), defaults.end()) {
    if (accessor.kind == Accessor::Kind::none) throw SpecError("accessor is not defined");
    if (accessor.kind == Accessor::Kind::columns) {
        for (const auto& name : accessor.columns) {
            const auto* col = table.numeric(name);
            if (col == nullptr) {
                throw SpecError(table.strings(name) ? "column '" + name + "' is not numeric"
                                                    : "missing column '" + name + "'");
            }
            columns_.push_back(col);
        }
    }
}

void BoundAccessor::evaluate(std::size_t row, std::span<double> out) const {
    std::copy(defaults_.begin(), defaults_.begin() + static_cast<std::ptrdiff_t>(std::min(defaults_.size(), out.size())),
              out.begin());
    switch (accessor_.kind) {
        case Accessor::Kind::columns: {
            const std::size_t n = std::min(columns_.size(), out.size());
            for (std::size_t c = 0; c < n; ++c) out[c] = (*columns_[c])[row];
            break;
        }
        case Accessor::Kind::constant: {
            const std::size_t n = std::min(accessor_.constant.size(), out.size());
            for (std::size_t c = 0; c < n; ++c) out[c] = accessor_.constant[c];
            break;
        }
        case Accessor::Kind::function:
            (*accessor_.fn)(table_, row, out);
            break;
        case Accessor::Kind::none:
            break;
    }
}

}  // namespace strata

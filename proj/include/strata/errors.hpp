#pragma once

#include <stdexcept>
#include <string>

namespace strata {

/// Value outside a representable range (df64 split, pixel rects, encodings).
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Input outside the mathematical domain of an operation (e.g. polar latitudes).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid polygon or point-set input to a triangulator.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scene or layer description.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Data ingestion failure (CSV, GeoJSON, scene files).
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace strata

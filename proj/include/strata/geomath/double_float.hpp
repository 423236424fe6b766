#pragma once

// Double-float ("df64") arithmetic: a real number carried as the unevaluated
// sum of two non-overlapping 32-bit floats. Every operation below works on
// float values only, exactly as a shader without 64-bit support would.

#include <cmath>
#include <cstdint>

#include "strata/errors.hpp"

namespace strata {

struct DoubleFloat {
    float hi = 0.0f;
    float lo = 0.0f;

    [[nodiscard]] constexpr double value() const { return static_cast<double>(hi) + static_cast<double>(lo); }
    /// Validity flag: overflow in any operation surfaces as a non-finite component.
    [[nodiscard]] bool isFinite() const { return std::isfinite(hi) && std::isfinite(lo); }

    friend constexpr bool operator==(const DoubleFloat&, const DoubleFloat&) = default;
};

enum class ProductStrategy { fused, dekker };

#if defined(FP_FAST_FMAF)
inline constexpr ProductStrategy kDefaultProductStrategy = ProductStrategy::fused;
#else
inline constexpr ProductStrategy kDefaultProductStrategy = ProductStrategy::dekker;
#endif

namespace df_detail {

inline DoubleFloat quickTwoSum(float a, float b) {
    // requires |a| >= |b|
    const float s = a + b;
    const float e = b - (s - a);
    return {s, e};
}

inline DoubleFloat twoSum(float a, float b) {
    const float s = a + b;
    const float v = s - a;
    const float e = (a - (s - v)) + (b - v);
    return {s, e};
}

// Veltkamp split of a float into two 12-bit halves (splitter 2^12 + 1).
inline DoubleFloat veltkamp(float a) {
    constexpr float kSplitter = 4097.0f;
    const float t = kSplitter * a;
    const float hi = t - (t - a);
    return {hi, a - hi};
}

inline DoubleFloat twoProdDekker(float a, float b) {
    const float p = a * b;
    const DoubleFloat as = veltkamp(a);
    const DoubleFloat bs = veltkamp(b);
    const float err = ((as.hi * bs.hi - p) + as.hi * bs.lo + as.lo * bs.hi) + as.lo * bs.lo;
    return {p, err};
}

inline DoubleFloat twoProdFused(float a, float b) {
    const float p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace df_detail

/// Splits a 64-bit value into (round32(x), round32(x - hi)).
/// Throws RangeError unless x == 0 or 2^-60 <= |x| <= 2^60.
inline DoubleFloat splitDouble(double x) {
    if (x != 0.0) {
        const double mag = std::fabs(x);
        if (!(mag >= 0x1p-60 && mag <= 0x1p60)) {
            throw RangeError("splitDouble: magnitude outside [2^-60, 2^60]");
        }
    }
    const float hi = static_cast<float>(x);
    const float lo = static_cast<float>(x - static_cast<double>(hi));
    return {hi, lo};
}

inline DoubleFloat fromFloat(float x) { return {x, 0.0f}; }

inline float narrow(DoubleFloat a) { return a.hi + a.lo; }

inline DoubleFloat dfNegate(DoubleFloat a) { return {-a.hi, -a.lo}; }

inline DoubleFloat dfAdd(DoubleFloat a, DoubleFloat b) {
    DoubleFloat s = df_detail::twoSum(a.hi, b.hi);
    const DoubleFloat t = df_detail::twoSum(a.lo, b.lo);
    s.lo += t.hi;
    s = df_detail::quickTwoSum(s.hi, s.lo);
    s.lo += t.lo;
    return df_detail::quickTwoSum(s.hi, s.lo);
}

inline DoubleFloat dfSub(DoubleFloat a, DoubleFloat b) { return dfAdd(a, dfNegate(b)); }

inline DoubleFloat dfMul(DoubleFloat a, DoubleFloat b, ProductStrategy strategy = kDefaultProductStrategy) {
    DoubleFloat p = strategy == ProductStrategy::fused ? df_detail::twoProdFused(a.hi, b.hi)
                                                       : df_detail::twoProdDekker(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return df_detail::quickTwoSum(p.hi, p.lo);
}

/// Multiplies by a plain float (e.g. a 2^zoom scale) without widening it first.
inline DoubleFloat dfMul(DoubleFloat a, float b, ProductStrategy strategy = kDefaultProductStrategy) {
    return dfMul(a, DoubleFloat{b, 0.0f}, strategy);
}

}  // namespace strata

#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace strata {

template <typename T>
struct Vec2T {
    T x{}, y{};
    constexpr Vec2T operator+(Vec2T o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2T operator-(Vec2T o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2T operator*(T s) const { return {x * s, y * s}; }
    friend constexpr bool operator==(const Vec2T&, const Vec2T&) = default;
};

template <typename T>
struct Vec3T {
    T x{}, y{}, z{};
    constexpr Vec3T operator+(Vec3T o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3T operator-(Vec3T o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3T operator*(T s) const { return {x * s, y * s, z * s}; }
    friend constexpr bool operator==(const Vec3T&, const Vec3T&) = default;
};

template <typename T>
struct Vec4T {
    T x{}, y{}, z{}, w{};
    friend constexpr bool operator==(const Vec4T&, const Vec4T&) = default;
};

using Vec2 = Vec2T<double>;
using Vec3 = Vec3T<double>;
using Vec4 = Vec4T<double>;
using Vec2f = Vec2T<float>;
using Vec3f = Vec3T<float>;
using Vec4f = Vec4T<float>;

template <typename T>
constexpr T dot(Vec3T<T> a, Vec3T<T> b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

template <typename T>
constexpr Vec3T<T> cross(Vec3T<T> a, Vec3T<T> b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <typename T>
constexpr T cross(Vec2T<T> a, Vec2T<T> b) { return a.x * b.y - a.y * b.x; }

/// 4x4 matrix, column-major (element (row, col) at m[col * 4 + row]).
template <typename T>
struct Mat4T {
    std::array<T, 16> m{};

    static constexpr Mat4T identity() {
        Mat4T r;
        r.m[0] = r.m[5] = r.m[10] = r.m[15] = T(1);
        return r;
    }

    constexpr T& at(int row, int col) { return m[static_cast<std::size_t>(col * 4 + row)]; }
    constexpr T at(int row, int col) const { return m[static_cast<std::size_t>(col * 4 + row)]; }

    constexpr Mat4T operator*(const Mat4T& o) const {
        Mat4T r;
        for (int c = 0; c < 4; ++c) {
            for (int row = 0; row < 4; ++row) {
                T s{};
                for (int k = 0; k < 4; ++k) s += at(row, k) * o.at(k, c);
                r.at(row, c) = s;
            }
        }
        return r;
    }

    constexpr Vec4T<T> operator*(Vec4T<T> v) const {
        return {at(0, 0) * v.x + at(0, 1) * v.y + at(0, 2) * v.z + at(0, 3) * v.w,
                at(1, 0) * v.x + at(1, 1) * v.y + at(1, 2) * v.z + at(1, 3) * v.w,
                at(2, 0) * v.x + at(2, 1) * v.y + at(2, 2) * v.z + at(2, 3) * v.w,
                at(3, 0) * v.x + at(3, 1) * v.y + at(3, 2) * v.z + at(3, 3) * v.w};
    }

    template <typename U>
    constexpr Mat4T<U> cast() const {
        Mat4T<U> r;
        for (std::size_t i = 0; i < 16; ++i) r.m[i] = static_cast<U>(m[i]);
        return r;
    }

    static Mat4T translation(T x, T y, T z) {
        Mat4T r = identity();
        r.at(0, 3) = x;
        r.at(1, 3) = y;
        r.at(2, 3) = z;
        return r;
    }

    static Mat4T scaling(T x, T y, T z) {
        Mat4T r;
        r.at(0, 0) = x;
        r.at(1, 1) = y;
        r.at(2, 2) = z;
        r.at(3, 3) = T(1);
        return r;
    }

    static Mat4T rotationX(T radians) {
        Mat4T r = identity();
        const T c = std::cos(radians), s = std::sin(radians);
        r.at(1, 1) = c;
        r.at(1, 2) = -s;
        r.at(2, 1) = s;
        r.at(2, 2) = c;
        return r;
    }

    static Mat4T rotationZ(T radians) {
        Mat4T r = identity();
        const T c = std::cos(radians), s = std::sin(radians);
        r.at(0, 0) = c;
        r.at(0, 1) = -s;
        r.at(1, 0) = s;
        r.at(1, 1) = c;
        return r;
    }

    /// OpenGL-style perspective projection; clip z in [-w, w].
    static Mat4T perspective(T fovy, T aspect, T near, T far) {
        Mat4T r;
        const T f = T(1) / std::tan(fovy / T(2));
        r.at(0, 0) = f / aspect;
        r.at(1, 1) = f;
        r.at(2, 2) = (far + near) / (near - far);
        r.at(2, 3) = T(2) * far * near / (near - far);
        r.at(3, 2) = T(-1);
        return r;
    }
};

using Mat4 = Mat4T<double>;
using Mat4f = Mat4T<float>;

/// General inverse by cofactor expansion. Returns false for singular input.
bool invert(const Mat4& in, Mat4& out);

}  // namespace strata

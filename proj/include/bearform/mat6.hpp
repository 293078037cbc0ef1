#pragma once

#include <array>

#include "bearform/mat3.hpp"
#include "bearform/vec3.hpp"

namespace bearform {

// Stacked (position-part, velocity-part) vector used by the 6x6 analysis.
struct Vec6 {
    Vec3 a;
    Vec3 b;

    double operator[](int k) const {
        const Vec3& v = k < 3 ? a : b;
        const int i = k % 3;
        return i == 0 ? v.x : (i == 1 ? v.y : v.z);
    }
    Vec6 operator+(const Vec6& o) const { return {a + o.a, b + o.b}; }
    Vec6 operator-(const Vec6& o) const { return {a - o.a, b - o.b}; }
    Vec6 operator*(double s) const { return {a * s, b * s}; }
    double dot(const Vec6& o) const { return a.dot(o.a) + b.dot(o.b); }
    double norm() const;
};

struct Mat6 {
    double m[6][6] = {};

    static Mat6 from_blocks(const Mat3& tl, const Mat3& tr, const Mat3& bl, const Mat3& br);
    static Mat6 identity();

    double operator()(int r, int c) const { return m[r][c]; }
    double& operator()(int r, int c) { return m[r][c]; }

    Mat6 operator+(const Mat6& o) const;
    Mat6 operator-(const Mat6& o) const;
    Mat6 operator*(double s) const;
    Mat6 operator*(const Mat6& o) const;
    Vec6 operator*(const Vec6& v) const;
    Mat6 transpose() const;
    double asymmetry() const;
    double max_abs() const;
};

// x^T A x
double quadratic_form(const Mat6& a, const Vec6& x);

// Eigenvalues of a symmetric 6x6 matrix, ascending, by cyclic Jacobi sweeps.
// Deterministic sweep order; converges to ~1e-14 of the Frobenius norm.
std::array<double, 6> sym_eigenvalues(const Mat6& a);

} // namespace bearform

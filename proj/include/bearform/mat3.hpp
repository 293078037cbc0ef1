#pragma once

#include <array>

#include "bearform/vec3.hpp"

namespace bearform {

// Row-major 3x3 matrix. Only what the bearing algebra needs.
struct Mat3 {
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    static constexpr Mat3 zero() { return {}; }
    static constexpr Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }
    static constexpr Mat3 diagonal(double a, double b, double c) {
        Mat3 r;
        r.m[0][0] = a;
        r.m[1][1] = b;
        r.m[2][2] = c;
        return r;
    }
    // a b^T
    static constexpr Mat3 outer(const Vec3& a, const Vec3& b) {
        Mat3 r;
        r.m[0][0] = a.x * b.x; r.m[0][1] = a.x * b.y; r.m[0][2] = a.x * b.z;
        r.m[1][0] = a.y * b.x; r.m[1][1] = a.y * b.y; r.m[1][2] = a.y * b.z;
        r.m[2][0] = a.z * b.x; r.m[2][1] = a.z * b.y; r.m[2][2] = a.z * b.z;
        return r;
    }

    constexpr double operator()(int r, int c) const { return m[r][c]; }
    double& operator()(int r, int c) { return m[r][c]; }

    Mat3 operator+(const Mat3& o) const;
    Mat3 operator-(const Mat3& o) const;
    Mat3 operator*(double s) const;
    Mat3 operator*(const Mat3& o) const;
    Vec3 operator*(const Vec3& v) const;
    Mat3& operator+=(const Mat3& o);

    Mat3 transpose() const;
    double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
    double det() const;
    // max |a_ij - a_ji|
    double asymmetry() const;
    double max_abs() const;
};

Mat3 operator*(double s, const Mat3& a);

// Eigenvalues of a symmetric 3x3 matrix, ascending, by the trigonometric
// solution of the characteristic cubic. Deterministic, no iteration.
std::array<double, 3> sym_eigenvalues(const Mat3& a);

// Rotation about a unit axis by angle (Rodrigues form).
Mat3 rotation_about(const Vec3& unit_axis, double angle);

} // namespace bearform

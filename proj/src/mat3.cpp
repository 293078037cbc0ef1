#include "bearform/mat3.hpp"

#include <algorithm>
#include <cmath>

namespace bearform {

Mat3 Mat3::operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
    return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
    return r;
}

Mat3 Mat3::operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
    return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
            r.m[i][j] = s;
        }
    return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Mat3& Mat3::operator+=(const Mat3& o) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
    return *this;
}

Mat3 Mat3::transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
}

double Mat3::det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double Mat3::asymmetry() const {
    double a = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) a = std::max(a, std::abs(m[i][j] - m[j][i]));
    return a;
}

double Mat3::max_abs() const {
    double a = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a = std::max(a, std::abs(m[i][j]));
    return a;
}

Mat3 operator*(double s, const Mat3& a) { return a * s; }

std::array<double, 3> sym_eigenvalues(const Mat3& a) {
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (p1 == 0.0) {
        std::array<double, 3> d{a(0, 0), a(1, 1), a(2, 2)};
        std::sort(d.begin(), d.end());
        return d;
    }
    const double q = a.trace() / 3.0;
    const double d0 = a(0, 0) - q;
    const double d1 = a(1, 1) - q;
    const double d2 = a(2, 2) - q;
    const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b = (a - Mat3::diagonal(q, q, q)) * (1.0 / p);
    double r = b.det() / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e_hi = q + 2.0 * p * std::cos(phi);
    const double e_lo = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e_mid = 3.0 * q - e_hi - e_lo;

    // The trigonometric roots lose half the digits on clustered pairs. Take
    // the best-separated root, recover its eigenvector, and re-extract the
    // remaining pair from the orthogonal-complement 2x2 block, whose closed
    // form is cancellation-free.
    const double iso = (e_mid - e_lo >= e_hi - e_mid) ? e_lo : e_hi;
    const Mat3 shifted = a - Mat3::diagonal(iso, iso, iso);
    const Vec3 r0{shifted(0, 0), shifted(0, 1), shifted(0, 2)};
    const Vec3 r1{shifted(1, 0), shifted(1, 1), shifted(1, 2)};
    const Vec3 r2{shifted(2, 0), shifted(2, 1), shifted(2, 2)};
    Vec3 v = r0.cross(r1);
    for (const Vec3& cand : {r0.cross(r2), r1.cross(r2)})
        if (cand.norm_sq() > v.norm_sq()) v = cand;
    const double scale = 1.0 + p2;
    if (v.norm_sq() <= 1e-28 * scale * scale) return {e_lo, e_mid, e_hi};
    v = v / v.norm();

    Vec3 seed = std::abs(v.x) < 0.6 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 w1 = seed - v * v.dot(seed);
    w1 = w1 / w1.norm();
    const Vec3 w2 = v.cross(w1);

    const double iso_refined = v.dot(a * v);
    const double baa = w1.dot(a * w1);
    const double bab = w1.dot(a * w2);
    const double bbb = w2.dot(a * w2);
    const double mean = 0.5 * (baa + bbb);
    const double rad = std::sqrt(0.25 * (baa - bbb) * (baa - bbb) + bab * bab);
    std::array<double, 3> out{iso_refined, mean - rad, mean + rad};
    std::sort(out.begin(), out.end());
    return out;
}

Mat3 rotation_about(const Vec3& unit_axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Vec3& a = unit_axis;
    Mat3 k;      // skew(a)
    k(0, 1) = -a.z; k(0, 2) = a.y;
    k(1, 0) = a.z;  k(1, 2) = -a.x;
    k(2, 0) = -a.y; k(2, 1) = a.x;
    return Mat3::identity() + k * s + (k * k) * (1.0 - c);
}

} // namespace bearform

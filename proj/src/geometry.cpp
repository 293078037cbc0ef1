#include "bearform/geometry.hpp"

#include <cmath>
#include <string>

namespace bearform {

UnitVec3::UnitVec3(const Vec3& v, double tol) : v_(v) {
    const double n = v.norm();
    if (std::abs(n - 1.0) > tol)
        throw ValidationError("not a unit vector: norm = " + std::to_string(n));
}

UnitVec3 UnitVec3::normalized(const Vec3& v, double eps) {
    const double n = v.norm();
    if (!(n > eps)) throw ValidationError("cannot normalize near-zero vector");
    return UnitVec3(v / n, 1e-9);
}

Mat3 projector(const UnitVec3& y) {
    return Mat3::identity() - Mat3::outer(y.vec(), y.vec());
}

Mat3 skew(const Vec3& v) {
    Mat3 r;
    r(0, 1) = -v.z; r(0, 2) = v.y;
    r(1, 0) = v.z;  r(1, 2) = -v.x;
    r(2, 0) = -v.y; r(2, 1) = v.x;
    return r;
}

RelState relative_state(int i, int j, const Vec3& p_i, const Vec3& v_i, const Vec3& p_j,
                        const Vec3& v_j, double eps_sep, double t) {
    const Vec3 p_ij = p_j - p_i;
    const double dist = p_ij.norm();
    if (!(dist > eps_sep)) throw BearingUndefinedError(i, j, t);
    return RelState{p_ij, v_j - v_i, UnitVec3(p_ij / dist, 1e-9), dist};
}

} // namespace bearform

#pragma once

#include "bearform/errors.hpp"
#include "bearform/mat3.hpp"
#include "bearform/vec3.hpp"

namespace bearform {

// Two agents closer than this have no usable bearing.
inline constexpr double kSeparationEps = 1e-6;

// Unit-norm direction on the 2-sphere; the norm is checked at construction.
class UnitVec3 {
public:
    explicit UnitVec3(const Vec3& v, double tol = 1e-12);
    // Normalizes v; throws ValidationError when ||v|| <= eps.
    static UnitVec3 normalized(const Vec3& v, double eps = kSeparationEps);

    const Vec3& vec() const { return v_; }
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }
    UnitVec3 operator-() const { return UnitVec3(-v_, 1e-9); }

private:
    Vec3 v_;
};

// pi_y = I - y y^T, the orthogonal projector onto the plane normal to y.
Mat3 projector(const UnitVec3& y);

// skew(v) x = v cross x.
Mat3 skew(const Vec3& v);

// Relative kinematics of a sensed pair: agent i looking at agent j.
struct RelState {
    Vec3 p_ij;      // p_j - p_i, meters
    Vec3 v_ij;      // v_j - v_i, m/s
    UnitVec3 g_ij;  // bearing from i toward j
    double dist;    // ||p_ij||, meters
};

// Throws BearingUndefinedError(i, j) when the agents are within eps_sep.
RelState relative_state(int i, int j, const Vec3& p_i, const Vec3& v_i, const Vec3& p_j,
                        const Vec3& v_j, double eps_sep = kSeparationEps, double t = 0.0);

} // namespace bearform

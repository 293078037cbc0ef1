#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bearform/geometry.hpp"
#include "bearform/mat3.hpp"
#include "bearform/vec3.hpp"

namespace bearform {

// Desired kinematics of one agent at one instant.
struct DesiredSample {
    Vec3 p;  // desired position, m
    Vec3 v;  // desired velocity, m/s (exact derivative of p)
    Vec3 u;  // desired acceleration, m/s^2 (exact derivative of v)
};

// Family of per-agent desired trajectories. Implementations are immutable and
// safe to share across threads.
class DesiredTrajectory {
public:
    virtual ~DesiredTrajectory() = default;
    virtual DesiredSample at(int agent, double t) const = 0;
    virtual int agents() const = 0;
    virtual std::string kind() const = 0;
};

using TrajectoryPtr = std::shared_ptr<const DesiredTrajectory>;

// Rigid pattern spinning about a fixed axis: p_i(t) = R(t)^T p_i(0), with R(t)
// the rotation about `axis` by angle t / period_param. Velocities and
// accelerations are the analytic derivatives.
TrajectoryPtr rotating_rigid_trajectory(std::vector<Vec3> initial_positions, const UnitVec3& axis,
                                        double period_param);

// Fixed pattern: v = u = 0.
TrajectoryPtr static_trajectory(std::vector<Vec3> positions);

// Position samples on a strictly increasing grid, interpolated by a cubic
// Hermite spline (centered-difference slopes). Velocity is the spline
// derivative; acceleration its derivative. Queries outside the sampled range
// are rejected.
TrajectoryPtr sampled_trajectory(std::vector<double> times,
                                 std::vector<std::vector<Vec3>> positions_per_agent);

// Similarity transform of another family: p -> scale * R * p + offset.
TrajectoryPtr similarity_transform(TrajectoryPtr base, const Mat3& rotation, double scale,
                                   const Vec3& offset);

// Accessors used by the scenario serializer.
struct RotatingRigidParams {
    std::vector<Vec3> initial_positions;
    Vec3 axis;
    double period_param;
};
const RotatingRigidParams* rotating_rigid_params(const DesiredTrajectory& d);
const std::vector<Vec3>* static_positions(const DesiredTrajectory& d);

} // namespace bearform

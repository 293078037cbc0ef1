#include "bearform/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "bearform/errors.hpp"

namespace bearform {

namespace {

class RotatingRigid final : public DesiredTrajectory {
public:
    RotatingRigid(std::vector<Vec3> p0, const UnitVec3& axis, double period)
        : params_{std::move(p0), axis.vec(), period} {
        if (!(period > 0.0)) throw ValidationError("rotation period parameter must be positive");
    }

    DesiredSample at(int agent, double t) const override {
        const Vec3& p0 = params_.initial_positions.at(agent - 1);
        const double omega = 1.0 / params_.period_param;
        const Mat3 rt = rotation_about(params_.axis, t * omega).transpose();
        const Mat3 ax = skew(params_.axis);
        // p = R^T p0; v = -w R^T [a]x p0; u = -w^2 R^T pi_a p0
        const Vec3 p = rt * p0;
        const Vec3 v = (rt * (ax * p0)) * (-omega);
        const Mat3 pi_a = Mat3::identity() - Mat3::outer(params_.axis, params_.axis);
        const Vec3 u = (rt * (pi_a * p0)) * (-omega * omega);
        return {p, v, u};
    }
    int agents() const override { return static_cast<int>(params_.initial_positions.size()); }
    std::string kind() const override { return "rotating-rigid"; }

    const RotatingRigidParams& params() const { return params_; }

private:
    RotatingRigidParams params_;
};

class Static final : public DesiredTrajectory {
public:
    explicit Static(std::vector<Vec3> p) : p_(std::move(p)) {}
    DesiredSample at(int agent, double) const override { return {p_.at(agent - 1), {}, {}}; }
    int agents() const override { return static_cast<int>(p_.size()); }
    std::string kind() const override { return "static"; }
    const std::vector<Vec3>& positions() const { return p_; }

private:
    std::vector<Vec3> p_;
};

class Sampled final : public DesiredTrajectory {
public:
    Sampled(std::vector<double> times, std::vector<std::vector<Vec3>> pos)
        : times_(std::move(times)), pos_(std::move(pos)) {
        if (times_.size() < 4) throw ValidationError("sampled trajectory needs at least 4 samples");
        for (std::size_t k = 1; k < times_.size(); ++k)
            if (!(times_[k] > times_[k - 1]))
                throw ValidationError("sampled trajectory times must be strictly increasing");
        for (const auto& series : pos_)
            if (series.size() != times_.size())
                throw ValidationError("sampled trajectory: sample count mismatch");
        slopes_.reserve(pos_.size());
        for (const auto& series : pos_) slopes_.push_back(make_slopes(series));
    }

    DesiredSample at(int agent, double t) const override {
        const auto& p = pos_.at(agent - 1);
        const auto& m = slopes_[agent - 1];
        if (t < times_.front() - 1e-12 || t > times_.back() + 1e-12)
            throw ValidationError("sampled trajectory queried outside its time range");
        t = std::clamp(t, times_.front(), times_.back());
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
        if (k >= times_.size() - 1) k = times_.size() - 2;
        const double h = times_[k + 1] - times_[k];
        const double s = (t - times_[k]) / h;
        // cubic Hermite basis and its first two derivatives
        const double h00 = 2 * s * s * s - 3 * s * s + 1;
        const double h10 = s * s * s - 2 * s * s + s;
        const double h01 = -2 * s * s * s + 3 * s * s;
        const double h11 = s * s * s - s * s;
        const double d00 = (6 * s * s - 6 * s) / h;
        const double d10 = (3 * s * s - 4 * s + 1) / h;
        const double d01 = (-6 * s * s + 6 * s) / h;
        const double d11 = (3 * s * s - 2 * s) / h;
        const double a00 = (12 * s - 6) / (h * h);
        const double a10 = (6 * s - 4) / (h * h);
        const double a01 = (-12 * s + 6) / (h * h);
        const double a11 = (6 * s - 2) / (h * h);
        const Vec3 m0 = m[k] * h;
        const Vec3 m1 = m[k + 1] * h;
        return {p[k] * h00 + m0 * h10 + p[k + 1] * h01 + m1 * h11,
                p[k] * d00 + m0 * d10 + p[k + 1] * d01 + m1 * d11,
                p[k] * a00 + m0 * a10 + p[k + 1] * a01 + m1 * a11};
    }
    int agents() const override { return static_cast<int>(pos_.size()); }
    std::string kind() const override { return "custom-sampled"; }

private:
    std::vector<Vec3> make_slopes(const std::vector<Vec3>& p) const {
        const std::size_t n = times_.size();
        std::vector<Vec3> m(n);
        m[0] = (p[1] - p[0]) / (times_[1] - times_[0]);
        m[n - 1] = (p[n - 1] - p[n - 2]) / (times_[n - 1] - times_[n - 2]);
        for (std::size_t k = 1; k + 1 < n; ++k)
            m[k] = (p[k + 1] - p[k - 1]) / (times_[k + 1] - times_[k - 1]);
        return m;
    }

    std::vector<double> times_;
    std::vector<std::vector<Vec3>> pos_;
    std::vector<std::vector<Vec3>> slopes_;
};

class Transformed final : public DesiredTrajectory {
public:
    Transformed(TrajectoryPtr base, const Mat3& rot, double scale, const Vec3& offset)
        : base_(std::move(base)), rot_(rot), scale_(scale), offset_(offset) {
        if (!(scale_ > 0.0)) throw ValidationError("similarity scale must be positive");
    }
    DesiredSample at(int agent, double t) const override {
        const DesiredSample s = base_->at(agent, t);
        return {rot_ * s.p * scale_ + offset_, rot_ * s.v * scale_, rot_ * s.u * scale_};
    }
    int agents() const override { return base_->agents(); }
    std::string kind() const override { return "similarity(" + base_->kind() + ")"; }

private:
    TrajectoryPtr base_;
    Mat3 rot_;
    double scale_;
    Vec3 offset_;
};

} // namespace

TrajectoryPtr rotating_rigid_trajectory(std::vector<Vec3> initial_positions, const UnitVec3& axis,
                                        double period_param) {
    return std::make_shared<RotatingRigid>(std::move(initial_positions), axis, period_param);
}

TrajectoryPtr static_trajectory(std::vector<Vec3> positions) {
    return std::make_shared<Static>(std::move(positions));
}

TrajectoryPtr sampled_trajectory(std::vector<double> times,
                                 std::vector<std::vector<Vec3>> positions_per_agent) {
    return std::make_shared<Sampled>(std::move(times), std::move(positions_per_agent));
}

TrajectoryPtr similarity_transform(TrajectoryPtr base, const Mat3& rotation, double scale,
                                   const Vec3& offset) {
    return std::make_shared<Transformed>(std::move(base), rotation, scale, offset);
}

const RotatingRigidParams* rotating_rigid_params(const DesiredTrajectory& d) {
    auto* r = dynamic_cast<const RotatingRigid*>(&d);
    return r ? &r->params() : nullptr;
}

const std::vector<Vec3>* static_positions(const DesiredTrajectory& d) {
    auto* s = dynamic_cast<const Static*>(&d);
    return s ? &s->positions() : nullptr;
}

} // namespace bearform

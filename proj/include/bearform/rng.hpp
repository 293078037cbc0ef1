#pragma once

#include <cstdint>
#include <random>

#include "bearform/geometry.hpp"
#include "bearform/vec3.hpp"

namespace bearform {

// Seeded draws with platform-independent scaling (std distributions are
// implementation-defined; the raw mt19937_64 stream is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    Vec3 vec_in_cube(double half_width) {
        return {uniform(-half_width, half_width), uniform(-half_width, half_width),
                uniform(-half_width, half_width)};
    }

    Vec3 vec_in_ball(double radius) {
        for (;;) {
            Vec3 v = vec_in_cube(1.0);
            const double n2 = v.norm_sq();
            if (n2 <= 1.0 && n2 > 1e-12) return v * radius;
        }
    }

    UnitVec3 unit_vec() {
        for (;;) {
            Vec3 v = vec_in_cube(1.0);
            const double n = v.norm();
            if (n > 0.1 && n <= 1.0) return UnitVec3(v / n, 1e-9);
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace bearform

#pragma once

#include <cstddef>
#include <vector>

namespace bearform {

// Classical fixed-step 4th-order Runge-Kutta over a flat state vector.
// Scratch buffers live in the workspace so repeated stepping does not allocate.
struct Rk4Workspace {
    std::vector<double> k1, k2, k3, k4, tmp;

    void resize(std::size_t n) {
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        tmp.resize(n);
    }
};

// rhs(t, y, dydt) writes the derivative of y into dydt.
template <typename Rhs>
void rk4_step(const Rhs& rhs, double t, std::vector<double>& y, double dt, Rk4Workspace& ws) {
    const std::size_t n = y.size();
    ws.resize(n);

    rhs(t, y, ws.k1);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k1[i];
    rhs(t + 0.5 * dt, ws.tmp, ws.k2);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k2[i];
    rhs(t + 0.5 * dt, ws.tmp, ws.k3);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + dt * ws.k3[i];
    rhs(t + dt, ws.tmp, ws.k4);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += dt / 6.0 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
}

} // namespace bearform

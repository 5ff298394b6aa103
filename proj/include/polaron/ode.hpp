#pragma once

#include <cmath>
#include <vector>

#include "polaron/errors.hpp"
#include "polaron/grid.hpp"

namespace polaron::ode {

// Scratch buffers for fixed-step RK4 on a flat complex state vector.
struct Workspace {
    std::vector<cplx> k1, k2, k3, k4, tmp;
    void resize(std::size_t n) {
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        tmp.resize(n);
    }
};

// deriv(t, y, dydt) fills dydt; y is advanced in place by one step.
template <class Deriv>
void rk4_step(Deriv&& deriv, std::vector<cplx>& y, double t, double dt, Workspace& ws) {
    const std::size_t n = y.size();
    ws.resize(n);
    deriv(t, y, ws.k1);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k1[i];
    deriv(t + 0.5 * dt, ws.tmp, ws.k2);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + 0.5 * dt * ws.k2[i];
    deriv(t + 0.5 * dt, ws.tmp, ws.k3);
    for (std::size_t i = 0; i < n; ++i) ws.tmp[i] = y[i] + dt * ws.k3[i];
    deriv(t + dt, ws.tmp, ws.k4);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        y[i] += w * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
}

inline void check_finite(const std::vector<cplx>& y, const char* what) {
    for (const cplx& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NonFiniteState(std::string(what) + " produced a non-finite state");
}

}  // namespace polaron::ode

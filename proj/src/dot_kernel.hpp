#pragma once

#include <algorithm>
#include <cmath>

#include "polaron/grid.hpp"
#include "polaron/parallel.hpp"
#include "polaron/phonon_bath.hpp"

// Shared sampling of the dot polarization's phonon sideband factor. Both the
// emitter spectra and the susceptibility transforms integrate this trace, so
// the sampling rule lives in one place.

namespace polaron::detail {

inline constexpr double kTraceDt = 0.002;    // ps, resolves detunings out to ~100 meV
inline constexpr double kTraceTrim = 1e-9;   // relative floor below which the trace is cut

// Sideband part of the dot correlation, (e^{phi(tau)} - 1) e^{-gamma tau/2},
// rotated by `rot` after the optional conjugation of the phonon factor. The
// trailing dead stretch is trimmed so transforms only pay for live samples.
inline CorrelationTrace sideband_trace(const PhononBath& bath, double gamma_tot, double rot,
                                       bool conjugate_phonons) {
    CorrelationTrace g;
    g.dt = kTraceDt;
    const double t_end = std::min(bath.tau_max(), 100.0);
    const std::size_t n = static_cast<std::size_t>(t_end / kTraceDt) + 1;
    g.values.resize(n);
    par::parallel_for(n, [&](std::size_t j) {
        const double t = kTraceDt * static_cast<double>(j);
        cplx side = std::exp(bath.phi(t)) - 1.0;
        if (conjugate_phonons) side = std::conj(side);
        g.values[j] = side * std::exp(cplx{-0.5 * gamma_tot * t, -rot * t});
    });

    double peak = 0.0;
    for (const cplx& v : g.values) peak = std::max(peak, std::abs(v));
    std::size_t last = n - 1;
    while (last > 1 && std::abs(g.values[last]) <= kTraceTrim * peak) --last;
    g.values.resize(std::min(n, last + 2));
    return g;
}

}  // namespace polaron::detail

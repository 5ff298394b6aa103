#include "polaron/fourier.hpp"

#include <cmath>

#include "polaron/errors.hpp"
#include "polaron/parallel.hpp"

namespace polaron {

ComplexSpectrum half_fourier_complex(const CorrelationTrace& g, const FrequencyGrid& grid,
                                     const HalfFourierOptions& opt) {
    if (g.values.size() < 2) throw RangeError("correlation trace needs at least two samples");
    if (!(g.dt > 0.0)) throw RangeError("correlation trace time step must be positive");

    double peak = 0.0;
    for (const cplx& v : g.values) peak = std::max(peak, std::abs(v));
    if (peak > 0.0 && std::abs(g.values.back()) > opt.decay_floor * peak)
        throw NonDecayingTrace("correlation trace has not decayed by the end of the window");

    const std::size_t n = g.values.size();
    std::vector<cplx> windowed(g.values);
    if (opt.window_fraction > 0.0 && peak > 0.0) {
        const double t_end = g.dt * static_cast<double>(n - 1);
        const double t_on = t_end * (1.0 - opt.window_fraction);
        for (std::size_t j = 0; j < n; ++j) {
            const double t = g.dt * static_cast<double>(j);
            if (t > t_on && t_end > t_on) {
                const double s = std::cos(1.5707963267948966 * (t - t_on) / (t_end - t_on));
                windowed[j] *= s * s;
            }
        }
    }

    ComplexSpectrum out;
    out.grid = grid;
    out.values.assign(grid.n, cplx{0.0, 0.0});
    par::parallel_for(grid.n, [&](std::size_t i) {
        const double delta = grid[i];
        const cplx rot = std::exp(cplx{0.0, delta * g.dt});
        cplx phase{1.0, 0.0};
        cplx acc = 0.5 * windowed[0];
        for (std::size_t j = 1; j + 1 < n; ++j) {
            phase *= rot;
            acc += windowed[j] * phase;
        }
        phase *= rot;
        acc += 0.5 * windowed[n - 1] * phase;
        out.values[i] = acc * g.dt;
    });
    return out;
}

Spectrum half_fourier(const CorrelationTrace& g, const FrequencyGrid& grid,
                      const HalfFourierOptions& opt) {
    ComplexSpectrum F = half_fourier_complex(g, grid, opt);
    Spectrum out;
    out.grid = F.grid;
    out.values.resize(F.values.size());
    for (std::size_t i = 0; i < F.values.size(); ++i) out.values[i] = F.values[i].real();
    return out;
}

}  // namespace polaron

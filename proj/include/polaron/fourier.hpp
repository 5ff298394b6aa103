#pragma once

#include "polaron/grid.hpp"

namespace polaron {

struct HalfFourierOptions {
    // The trace must have decayed to below this fraction of its peak magnitude
    // by the final sample; otherwise the transform is not trustworthy.
    double decay_floor = 1e-3;
    // cos^2 taper over this trailing fraction of the trace to kill residual ringing.
    double window_fraction = 0.05;
};

// F(delta) = ∫_0^∞ g(tau) e^{+i delta tau} dtau by windowed trapezoid,
// one rotating phasor per grid point. Grid points evaluated in parallel.
ComplexSpectrum half_fourier_complex(const CorrelationTrace& g, const FrequencyGrid& grid,
                                     const HalfFourierOptions& opt = {});

// Re F(delta): the emission/absorption line shape convention used throughout.
Spectrum half_fourier(const CorrelationTrace& g, const FrequencyGrid& grid,
                      const HalfFourierOptions& opt = {});

}  // namespace polaron

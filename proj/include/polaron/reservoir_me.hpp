#pragma once

#include "polaron/grid.hpp"
#include "polaron/phonon_bath.hpp"
#include "polaron/photonic_reservoir.hpp"

namespace polaron {

// Emitter-side master equation for a two-level dot coupled to a structured
// photon reservoir. All frequencies in this header are measured from the
// phonon-shifted dot line unless an explicit placement argument says
// otherwise, so a spectrum grid value of zero is the bare line.

struct ZplRates {
    double gamma0 = 0.0;   // background radiative decay (rad/ps)
    double gamma_d = 0.0;  // pure dephasing (rad/ps)
    double pump = 0.0;     // incoherent pump (rad/ps)
};

struct SeRateResult {
    double rate = 0.0;             // reservoir decay rate, phonons dressed (rad/ps)
    double lamb_shift = 0.0;       // reservoir pull on the line (rad/ps)
    double rate_phonon_free = 0.0; // same reservoir with the phonon coupling off
    double modification = 0.0;     // rate / rate_phonon_free, 0 when the latter is 0
};

// Decay rate and Lamb shift of a dot placed at omega_x against the reservoir.
// The phonon-dressed rate folds the reservoir spectral function with the
// sideband response; the table overload lets sweeps reuse one response table
// (it must be the ExpPlus transform of the same bath).
SeRateResult se_rate(const Reservoir& r, const PhononBath& bath,
                     const KernelTransformTable& k1_table, double omega_x);
SeRateResult se_rate(const Reservoir& r, const PhononBath& bath, double omega_x);
SeRateResult se_rate(const Reservoir& r, const PhononBathParams& p, double omega_x);

// Dot polarization spectrum: Lorentzian line of width gamma0+gamma_d+pump+rate
// plus phonon sidebands, unit peak. The Lamb shift is reported by se_rate but
// only moves the line when apply_lamb_shift is set; figures leave it off.
Spectrum polarization_spectrum(const ZplRates& z, const SeRateResult& se, const PhononBath& bath,
                               const FrequencyGrid& grid, bool apply_lamb_shift = false);

// Linear absorption lineshape of the same dot; mirror image of the emission
// about the line when the shift is left off.
Spectrum absorption_spectrum(const ZplRates& z, const SeRateResult& se, const PhononBath& bath,
                             const FrequencyGrid& grid, bool apply_lamb_shift = false);

// Spectrum seen through the reservoir: polarization spectrum filtered by the
// reservoir propagator, unit peak. Reservoir frequencies here are relative to
// the dot line (a cavity 2 meV below the dot has omega_c = -2 meV).
Spectrum emission_spectrum_projected(const Reservoir& r, const ZplRates& z, const PhononBath& bath,
                                     const FrequencyGrid& grid);

}  // namespace polaron

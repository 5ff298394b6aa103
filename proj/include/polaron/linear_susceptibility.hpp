#pragma once

#include "polaron/grid.hpp"
#include "polaron/phonon_bath.hpp"
#include "polaron/photonic_reservoir.hpp"

namespace polaron {

// Semiclassical linear-response picture of the dot-cavity pair. The dot
// polarization decays as e^{-gamma_x tau/2} times the phonon phase factor;
// its one-sided transform is the susceptibility, and a rational cavity
// filter of it is the emitted spectrum. Linear response only: no pump, no
// saturation, and the phonon sidebands enter on the absorption side, which
// reverses the red/blue feeding asymmetry of the quantum treatments. That
// reversal is a feature under test, not a defect to patch.

struct SusceptibilityParams {
    double omega_x = 2187.745125114424;  // absolute dot line, rad/ps (1440 meV)
    double gamma_x = 0.0;                // total dephasing gamma0 + gamma_d, rad/ps
    LorentzianCavity cavity;             // omega_c relative to the dot line
};

// Susceptibility on the detuning grid (rotating frame, near pole only):
// i times the one-sided transform of the polarization decay, normalized so
// the tau = 0 kernel is one. Im chi is the linear absorption lineshape.
ComplexSpectrum bare_susceptibility(const FrequencyGrid& grid, const PhononBath& bath,
                                    const SusceptibilityParams& s);
ComplexSpectrum bare_susceptibility(const FrequencyGrid& grid, const PhononBathParams& p,
                                    const SusceptibilityParams& s);

// Full-axis susceptibility at absolute frequencies: both resonance poles
// kept, so chi(-omega) = conj(chi(omega)) holds exactly.
ComplexSpectrum full_susceptibility(const FrequencyGrid& absolute_grid, const PhononBath& bath,
                                    const SusceptibilityParams& s);

// Phonon self-energy implied by the rational form of chi, for inspection
// only; the spectrum path never divides by chi. Detuning grid. Note the
// model is not self-consistent: the extracted self-energy inherits the
// gamma_x put into the seed polarization.
ComplexSpectrum phonon_self_energy(const FrequencyGrid& grid, const PhononBath& bath,
                                   const SusceptibilityParams& s);

// Cavity-filtered emission lineshape of the linearly driven pair, unit peak,
// on the detuning grid.
Spectrum cavity_spectrum(const FrequencyGrid& grid, const PhononBath& bath,
                         const SusceptibilityParams& s);
Spectrum cavity_spectrum(const FrequencyGrid& grid, const PhononBathParams& p,
                         const SusceptibilityParams& s);

}  // namespace polaron

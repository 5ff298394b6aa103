#pragma once

#include <variant>

#include "polaron/grid.hpp"

namespace polaron {

// How the mode-edge damping enters the CROW dispersion. The edge poles sit at
// omega_edge + i*kappa by default; the Real variant shifts the band edges along
// the real axis instead and keeps the square-root singularity undamped.
enum class EdgeShift { Imaginary, Real };

// Single-mode Lorentzian cavity reservoir. Frequencies are offsets from the
// rotating frame shared by the caller; kappa is the FWHM of the intensity
// spectrum.
struct LorentzianCavity {
  double omega_c = 0.0;
  double kappa = 0.0;
  double g = 0.0;
};

// Coupled-resonator waveguide band between two mode edges. omega_carrier is
// the absolute lab frequency of the band center; it only enters the detector
// propagator, which carries a 1/omega^2 envelope.
struct CrowBand {
  double omega_l = 0.0;
  double omega_u = 0.0;
  double kappa_l = 0.0;
  double kappa_u = 0.0;
  double g = 0.0;
  EdgeShift edge_shift = EdgeShift::Imaginary;
  double omega_carrier = 2187.745125114424;  // 1440 meV

  // 8 meV band, 14 ueV mode-edge spectral width (pole damping = half of
  // that), g = 85 ueV, centered at `center`.
  static CrowBand paper_default(double center = 0.0);
};

struct BackgroundDecay {
  double gamma_b = 0.0;  // rad/ps

  // Homogeneous-medium rate d^2 sqrt(eps) w^3 / (6 pi hbar eps0 c^3) for a
  // dipole in Debye radiating at absolute frequency omega_abs (rad/ps) in a
  // medium of refractive index n.
  static BackgroundDecay from_dipole(double dipole_debye, double refractive_index,
                                     double omega_abs);
};

using Reservoir = std::variant<LorentzianCavity, CrowBand>;

// Reservoir spectral function J_ph(omega), in rad/ps. Cavity: Lorentzian
// normalized to integrate to g^2. CROW: inverse square-root band-edge density
// of states with the same g^2 sum rule.
double photon_spectral_function(double omega, const Reservoir& r);

// Time-domain reservoir correlation J_ph(tau) = int_0^inf J_ph(w)
// exp(i(omega_x - w) tau) dw, where omega_x is the emitter frequency on the
// same axis as the reservoir. Cavity uses the closed form; CROW integrates
// over the band plus 20 edge widths on each side.
cplx bath_correlation_fn(double tau, const Reservoir& r, double omega_x);

// Detector filter |G(r_D, r_d; omega)|^2 up to a frequency-independent
// prefactor. Cavity: (kappa/2)/((w-w_c)^2+(kappa/2)^2). CROW:
// |1/(w_abs sqrt((w - conj(wt_l))(w - wt_u)))|^2.
double propagator(double omega, const Reservoir& r);

// Phonon-free spontaneous emission rate 2*pi*J_ph(omega) of an emitter at
// omega, equal to the one-sided transform 2 Re int_0^inf J_ph(tau)
// exp(i(omega-omega_x)tau) dtau.
double spontaneous_rate(double omega, const Reservoir& r);

double purcell_factor(double omega, const Reservoir& r, const BackgroundDecay& bg);

}  // namespace polaron

#pragma once

// Internal unit system: angular frequency in rad/ps, time in ps.
// Energies cross the API boundary in meV (or ueV) and are converted here.

namespace polaron::units {

inline constexpr double hbar_meV_ps = 0.6582119569;     // meV*ps
inline constexpr double kB_meV_per_K = 0.08617333262;   // meV/K

inline constexpr double rad_per_ps(double energy_meV) {
    return energy_meV / hbar_meV_ps;
}

inline constexpr double meV(double omega_rad_ps) {
    return omega_rad_ps * hbar_meV_ps;
}

inline constexpr double rad_per_ps_from_ueV(double energy_ueV) {
    return energy_ueV * 1e-3 / hbar_meV_ps;
}

inline constexpr double ueV(double omega_rad_ps) {
    return omega_rad_ps * hbar_meV_ps * 1e3;
}

// Thermal occupation argument: hbar*omega / (kB*T) for omega in rad/ps.
inline constexpr double thermal_exponent(double omega_rad_ps, double temperature_K) {
    return hbar_meV_ps * omega_rad_ps / (kB_meV_per_K * temperature_K);
}

}  // namespace polaron::units

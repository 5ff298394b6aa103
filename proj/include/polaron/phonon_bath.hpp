#pragma once

#include <vector>

#include "polaron/grid.hpp"

namespace polaron {

// Super-ohmic deformation-potential bath, J(w) = alpha w^3 exp(-w^2 / 2 w_b^2).
struct PhononBathParams {
    double alpha_ps2 = 0.06;
    double omega_b_meV = 1.0;
    double temperature_K = 4.0;
};

enum class PhononKernel {
    ExpPlus,   // e^{+phi(tau)} - 1
    ExpMinus,  // e^{-phi(tau)} - 1
    Cosh,      // <B>^2 (cosh phi - 1)
    Sinh,      // <B>^2 sinh phi
};

// Holds the displacement correlation exponent phi(tau) on a Hermite-interpolated
// table. Finite-T traces decay exponentially on the thermal time hbar/(pi kB T);
// at T = 0 only an algebraic -alpha/tau^2 remnant survives, which the transforms
// hand to the analytic tail machinery.
class PhononBath {
  public:
    explicit PhononBath(const PhononBathParams& p, double tau_max = 100.0);

    const PhononBathParams& params() const { return p_; }
    double cutoff() const { return omega_b_; }  // rad/ps
    double temperature() const { return p_.temperature_K; }
    double tau_max() const { return tau_max_; }

    double spectral_density(double omega) const;  // 1/ps, omega in rad/ps
    double occupancy(double omega) const;         // Bose factor at the bath temperature

    cplx phi(double tau) const;
    double phi0() const { return phi0_; }
    double mean_displacement() const { return bmean_; }  // <B> = e^{-phi(0)/2}
    double polaron_shift() const { return shift_; }      // rad/ps

    cplx kernel(PhononKernel k, double tau) const;

    // ∫_0^∞ kernel(tau) e^{-i delta tau} dtau, adaptive with tail handling.
    cplx transform(PhononKernel k, double delta) const;

    // Same transform on a whole grid via one trapezoid pass per point; relative
    // accuracy ~1e-4, meant for building smooth interpolants of the transform.
    ComplexSpectrum transform_grid(PhononKernel k, const FrequencyGrid& grid) const;

  private:
    PhononBathParams p_;
    double omega_b_ = 0.0;  // cutoff in rad/ps
    double tau_max_ = 0.0;
    double dtau_ = 0.0;
    double phi0_ = 0.0;
    double bmean_ = 1.0;
    double shift_ = 0.0;
    bool cold_ = false;  // bath built from the zero-temperature closed form
    std::vector<cplx> tab_, dtab_;  // phi and dphi/dtau at the table nodes
};

// Dense lookup of transform(k, delta) on [-delta_max, delta_max] with cubic
// interpolation between nodes. Outside the window the two-term integration-by-
// parts asymptote k(0)/(i d) + k'(0)/(i d)^2 takes over, so the 1/delta tail of
// the imaginary part survives truncation.
class KernelTransformTable {
  public:
    KernelTransformTable(const PhononBath& bath, PhononKernel k, double delta_max,
                         std::size_t n = 3001);

    cplx operator()(double delta) const;
    double delta_max() const { return -d0_; }

  private:
    double d0_ = 0.0, dd_ = 0.0;
    cplx k0_{}, dk0_{};
    std::vector<cplx> val_, der_;
};

struct DiscretizedModes {
    std::vector<double> omega;   // rad/ps
    std::vector<double> lambda;  // rad/ps, lambda_q = sqrt(J(w_q) dw)
};

// Midpoint discretization of the bath on (0, omega_max] for the mode hierarchy.
DiscretizedModes discretize_modes(const PhononBath& bath, std::size_t n_modes,
                                  double omega_max);

}  // namespace polaron

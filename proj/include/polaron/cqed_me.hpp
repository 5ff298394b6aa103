#pragma once

#include <Eigen/Dense>

#include "polaron/grid.hpp"
#include "polaron/phonon_bath.hpp"
#include "polaron/photonic_reservoir.hpp"
#include "polaron/reservoir_me.hpp"

namespace polaron {

// Phonon-dressed scattering channels of a dot coupled to one cavity mode.
// rate_xc transfers the excitation from the dot into the mode (jump a+ s-),
// rate_cx runs the reverse channel (jump s+ a). The shifts renormalize the
// dot and mode lines, cross couples the two polarizations, and m1/m2 correct
// the coherent coupling. All rates in rad/ps; frequencies are measured from
// the phonon-shifted dot line, so a mode below the dot has omega_c < 0.
struct RateSet {
    double g_eff = 0.0;  // <B> g, phonon-reduced coupling
    double rabi = 0.0;   // sqrt(detuning^2 + 4 g_eff^2)
    double rate_xc = 0.0;
    double rate_cx = 0.0;
    double shift_x = 0.0;
    double shift_c = 0.0;
    cplx cross{0.0, 0.0};
    cplx m1{0.0, 0.0};
    cplx m2{0.0, 0.0};
};

// Second-order (in g) limit of the same channels, valid when the detuning
// dominates the dressed Rabi frequency.
struct WeakCouplingRates {
    double rate_xc = 0.0;
    double rate_cx = 0.0;
    double shift_x = 0.0;
    double shift_c = 0.0;
};

// Coefficients of the two coupled amplitude equations for <a> and <s->:
//   d<a>/dt  = -g_c <s-> - i(omega_c + shift_c) <a> - gamma_c/2 <a>
//   d<s->/dt = -g_x <a>  - i shift_x <s->         - gamma_x/2 <s->
struct BlochCoefficients {
    double gamma_c = 0.0;  // kappa + rate_cx
    double gamma_x = 0.0;  // gamma0 + gamma_d + pump + rate_xc
    cplx g_c{0.0, 0.0};    // i g_eff - m1 - m2
    cplx g_x{0.0, 0.0};    // i g_eff + m1 - m2
};

RateSet scattering_rates(const LorentzianCavity& cav, const PhononBath& bath);
RateSet scattering_rates(const LorentzianCavity& cav, const PhononBathParams& p);

WeakCouplingRates weak_coupling_rates(const LorentzianCavity& cav, const PhononBath& bath);
WeakCouplingRates weak_coupling_rates(const LorentzianCavity& cav, const PhononBathParams& p);

BlochCoefficients bloch_coefficients(const RateSet& r, const LorentzianCavity& cav,
                                     const ZplRates& z);

// Total dot decay estimate: weak-coupling feeding plus the Lorentzian Purcell
// term. dressed_width widens the Lorentzian by the net feeding imbalance
// instead of the bare mode width.
double gamma_tilde_P(const LorentzianCavity& cav, const PhononBath& bath,
                     bool dressed_width = false);
double gamma_tilde_P(const LorentzianCavity& cav, const PhononBathParams& p,
                     bool dressed_width = false);

// Closed-form mode-emission spectrum in the weak-excitation limit, built from
// the steady state of the four coupled second moments. Peak-normalized.
Spectrum wea_spectrum(const LorentzianCavity& cav, const PhononBath& bath, const ZplRates& z,
                      const FrequencyGrid& grid);
Spectrum wea_spectrum(const LorentzianCavity& cav, const PhononBathParams& p, const ZplRates& z,
                      const FrequencyGrid& grid);

// Markov generator of the dot + mode density matrix on the truncated space
// {dot ground/excited} x {0,1,2 photons}, basis index = dot * 3 + photons.
// The phonon channels enter through one-sided kernel transforms evaluated at
// the Bohr frequencies of the dressed Hamiltonian, so the generator is a
// constant 36 x 36 matrix acting on the column-stacked density matrix.
class Liouvillian {
  public:
    static constexpr int dim = 6;
    using Matrix = Eigen::Matrix<cplx, dim, dim>;
    using Vec = Eigen::Matrix<cplx, dim * dim, 1>;
    using Super = Eigen::Matrix<cplx, dim * dim, dim * dim>;

    Liouvillian(const LorentzianCavity& cav, const PhononBath& bath, const ZplRates& z);

    const Super& matrix() const { return gen_; }
    Matrix apply(const Matrix& rho) const;

    const LorentzianCavity& cavity() const { return cav_; }
    const PhononBath& bath() const { return bath_; }
    const ZplRates& rates() const { return z_; }

    // rk4 step sized for the fastest Bohr frequency of the truncated space.
    double time_step() const { return dt_; }

    static Matrix photon_op();    // a
    static Matrix lowering_op();  // s-
    static Matrix vacuum();       // |ground, 0><ground, 0|
    static Matrix excited();      // |excited, 0><excited, 0|

  private:
    LorentzianCavity cav_;
    PhononBath bath_;
    ZplRates z_;
    double dt_ = 0.0;
    Super gen_;
};

Liouvillian build_liouvillian(const LorentzianCavity& cav, const PhononBath& bath,
                              const ZplRates& z);

// Propagate from the vacuum until |d rho / dt| falls below residual_tol
// elementwise. Throws NoSteadyState if the cap is hit first.
Liouvillian::Matrix steady_state(const Liouvillian& gen, double residual_tol = 1e-10,
                                 double t_cap_ps = 50000.0);

// <observe(tau) seed(0)> by regression: propagate seed_op * state and trace
// with observe at every step. Stops once the trace has decayed four orders
// below its running peak; throws SlowDecay if tau_cap arrives first.
CorrelationTrace two_time_correlation(const Liouvillian& gen, const Liouvillian::Matrix& observe,
                                      const Liouvillian::Matrix& seed_op,
                                      const Liouvillian::Matrix& state, double tau_cap_ps = 20000.0);

// Emission spectrum of the mode output: transform of <a+(tau) a(0)> at the
// steady state under incoherent pumping. Peak-normalized.
Spectrum coupled_mode_spectrum(const Liouvillian& gen, const FrequencyGrid& grid);

// Dot spectrum dressed by the displacement correlation factor, then projected
// through the mode's filter function. Peak-normalized.
Spectrum green_function_spectrum(const Liouvillian& gen, const FrequencyGrid& grid);

// Time-integrated emission of one initially inverted dot with the pump off:
// seeds the regression with the time integral of a * rho(t) over the decay.
Spectrum inverted_atom_spectrum(const Liouvillian& gen, const FrequencyGrid& grid);

}  // namespace polaron

#pragma once

#include <cstddef>
#include <vector>

#include "polaron/cqed_me.hpp"
#include "polaron/grid.hpp"
#include "polaron/phonon_bath.hpp"
#include "polaron/photonic_reservoir.hpp"
#include "polaron/reservoir_me.hpp"
#include "polaron/units.hpp"

namespace polaron {

// Explicit-mode treatment of the dot-cavity-lattice problem: the phonon
// continuum is discretized into n_modes oscillators and the coupled moment
// equations are truncated at two connected phonon operators per moment.
// Everything here works in the weak-excitation regime, so the moment set is
// closed and linear.

struct HierarchyParams {
    std::size_t n_modes = 150;
    double omega_max = units::rad_per_ps(5.0);  // discretization window (rad/ps)
    double dt = 0.002;                          // RK4 step (ps)
    double tau_end = 50.0;                      // default horizon for raw traces (ps)
    double settle_cap = 5000.0;                 // one-time propagation cap (ps)
};

// Moment vector of the coherence sector: the dot and mode amplitudes, their
// one-phonon assists, and the two-phonon assists. Blocks whose two phonon
// operators play the same role (bb or b+b+) are symmetric under q<->m and
// stored as packed upper triangles; the mixed b b+ blocks are stored full.
struct HierarchyState {
    cplx s{};                 // <sigma->
    cplx a{};                 // <a>
    std::vector<cplx> sb;     // <sigma- b_q>_c
    std::vector<cplx> sbd;    // <sigma- b+_q>_c
    std::vector<cplx> ab;     // <a b_q>_c
    std::vector<cplx> abd;    // <a b+_q>_c
    std::vector<cplx> sbb;    // <sigma- b_q b_m>_c, packed symmetric
    std::vector<cplx> sbdbd;  // <sigma- b+_q b+_m>_c, packed symmetric
    std::vector<cplx> abb;    // <a b_q b_m>_c, packed symmetric
    std::vector<cplx> abdbd;  // <a b+_q b+_m>_c, packed symmetric
    std::vector<cplx> sbbd;   // <sigma- b_q b+_m>_c, full row-major
    std::vector<cplx> abbd;   // <a b_q b+_m>_c, full row-major

    void scale_add(double c, const HierarchyState& k);  // this += c*k
};

// Initial preparation for the emission-spectrum runs. InvertedAtom starts
// from the excited dot with the lattice thermal and integrates the decay;
// SteadyPump drives the populations with the incoherent pump until they
// settle. In the linear regime both give the same normalized spectra up to
// the pump broadening of the lines.
enum class HierarchyInit { InvertedAtom, SteadyPump };

struct CorrelationSpectra {
    Spectrum coupled_mode;  // transform of the mode correlation <a+(t) a(t+tau)>
    Spectrum filtered_dot;  // dot spectrum weighted by the detector filter
};

class ModeHierarchy {
  public:
    // Throws InsufficientModes below 10 modes, RangeError for a non-positive
    // step, window, or negative rates. cav.omega_c is measured from the
    // shifted dot line like everywhere else; the conversion to the frame the
    // moments evolve in happens internally.
    ModeHierarchy(const LorentzianCavity& cav, const PhononBath& bath, const ZplRates& z,
                  const HierarchyParams& p = {});

    std::size_t modes() const { return n_; }
    const HierarchyParams& params() const { return par_; }
    const LorentzianCavity& cavity() const { return cav_; }
    const ZplRates& rates() const { return z_; }

    // Lattice pull of the discretized modes on the dot line, sum of
    // lambda_q^2/omega_q. Converges to the continuum shift as the mode count
    // grows; spectra are recentered by this amount so the zero-phonon line
    // reports at zero detuning.
    double line_shift() const { return shift_; }

    HierarchyState zero_state() const;

    // dy/dt of the coherence sector. Linear in y, so regression traces of
    // two-time correlations follow the same equations as the one-time means.
    void derivative(const HierarchyState& y, HierarchyState& dy) const;

    // Fixed-step RK4 from t=0 to t_end (rounded up to whole steps).
    HierarchyState propagate(HierarchyState y, double t_end) const;

    // <sigma+(0) sigma-(tau)> for the bare excited dot, reported in the frame
    // of the shifted line. tau_end < 0 uses params().tau_end.
    CorrelationTrace polarization_decay(double tau_end = -1.0) const;

  private:
    friend struct HierarchyDriver;
    std::size_t n_ = 0;
    HierarchyParams par_;
    LorentzianCavity cav_;
    ZplRates z_;
    std::vector<double> w_, lam_, nocc_;
    double shift_ = 0.0;
    double dcx_ = 0.0;     // mode offset in the evolution frame
    double gamma1_ = 0.0;  // dot coherence decay (gamma0+gamma_d+pump)/2
};

// Emission spectra of the decaying inverted dot: the coupled-mode spectrum
// from the mode correlation, and the dot spectrum seen through the detector
// filter of the same cavity. The pump must be off for this preparation
// (RangeError otherwise). Throws NoSteadyState if the excitation has not
// drained by params().settle_cap and NonDecayingTrace if a correlation has
// not died off within the trace cap.
CorrelationSpectra hierarchy_spectra(const ModeHierarchy& h, const FrequencyGrid& grid);

// Dot polarization spectrum alone, unit peak. InvertedAtom integrates the
// decay of the excited dot; SteadyPump (requires z.pump > 0, RangeError
// otherwise) seeds the regression from the driven steady state.
Spectrum hierarchy_dot_spectrum(const ModeHierarchy& h, const FrequencyGrid& grid,
                                HierarchyInit init = HierarchyInit::InvertedAtom);

}  // namespace polaron

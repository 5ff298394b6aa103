#include "polaron/cqed_me.hpp"

#include <cmath>
#include <complex>

#include "polaron/errors.hpp"

namespace polaron {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_cavity(const LorentzianCavity& cav) {
    if (cav.g < 0.0) throw RangeError("coupling g must be nonnegative");
    if (cav.kappa < 0.0) throw RangeError("mode width kappa must be nonnegative");
}

void check_zpl(const ZplRates& z) {
    if (z.gamma0 < 0.0 || z.gamma_d < 0.0 || z.pump < 0.0)
        throw RangeError("line rates must be nonnegative");
}

// One-sided transforms of one kernel at the dressed Rabi frequency, folded
// into the three trig moments that appear in every channel:
//   mom_cos = int cos(W t) k,  mom_sin = int sin(W t) k,
//   mom_dc  = int (1 - cos(W t)) k.
struct TrigMoments {
    cplx mom_cos{};
    cplx mom_sin{};
    cplx mom_dc{};
};

TrigMoments trig_moments(const PhononBath& bath, PhononKernel k, double rabi) {
    const cplx plus = bath.transform(k, rabi);
    const cplx minus = bath.transform(k, -rabi);
    const cplx zero = bath.transform(k, 0.0);
    TrigMoments m;
    m.mom_cos = 0.5 * (plus + minus);
    m.mom_sin = (minus - plus) / (2.0 * kI);
    m.mom_dc = zero - m.mom_cos;
    return m;
}

}  // namespace

RateSet scattering_rates(const LorentzianCavity& cav, const PhononBath& bath) {
    check_cavity(cav);
    const double gp = bath.mean_displacement() * cav.g;
    const double det = cav.omega_c;
    RateSet out;
    out.g_eff = gp;
    out.rabi = std::sqrt(det * det + 4.0 * gp * gp);
    if (gp == 0.0 || bath.phi0() == 0.0) return out;

    const double rabi = out.rabi;
    const double gp2 = gp * gp;
    const double ratio = 2.0 * gp2 / (rabi * rabi);  // weight of the dressed part
    const double tilt = det / rabi;

    // grow: e^{+phi}-1 drives the channels that create excitations in the
    // dressed pair; shrink: e^{-phi}-1 drives the reverse ones.
    const TrigMoments grow = trig_moments(bath, PhononKernel::ExpPlus, rabi);
    const TrigMoments shrink = trig_moments(bath, PhononKernel::ExpMinus, rabi);

    const cplx bracket = ratio * (shrink.mom_dc + grow.mom_dc) + grow.mom_cos;
    const cplx sin_grow = tilt * grow.mom_sin;
    out.rate_xc = 2.0 * gp2 * (bracket.real() + sin_grow.imag());
    out.rate_cx = 2.0 * gp2 * (bracket.real() - sin_grow.imag());
    out.shift_x = gp2 * (bracket.imag() - sin_grow.real());
    out.shift_c = gp2 * (bracket.imag() + sin_grow.real());

    out.cross = 2.0 * gp2 * (ratio * shrink.mom_dc + shrink.mom_cos + ratio * grow.mom_dc).real()
              - 2.0 * kI * gp2 * (tilt * shrink.mom_sin).real();

    const double gp3 = gp2 * gp;
    out.m1 = gp3 * (det / (rabi * rabi)) * (grow.mom_dc + shrink.mom_dc);
    out.m2 = -kI * gp3 * (grow.mom_sin - shrink.mom_sin) / rabi;
    return out;
}

RateSet scattering_rates(const LorentzianCavity& cav, const PhononBathParams& p) {
    return scattering_rates(cav, PhononBath{p});
}

WeakCouplingRates weak_coupling_rates(const LorentzianCavity& cav, const PhononBath& bath) {
    check_cavity(cav);
    WeakCouplingRates out;
    const double gp = bath.mean_displacement() * cav.g;
    if (gp == 0.0 || bath.phi0() == 0.0) return out;
    const double gp2 = gp * gp;
    const cplx down = bath.transform(PhononKernel::ExpPlus, cav.omega_c);
    const cplx up = bath.transform(PhononKernel::ExpPlus, -cav.omega_c);
    out.rate_xc = 2.0 * gp2 * down.real();
    out.rate_cx = 2.0 * gp2 * up.real();
    out.shift_x = gp2 * down.imag();
    out.shift_c = gp2 * up.imag();
    return out;
}

WeakCouplingRates weak_coupling_rates(const LorentzianCavity& cav, const PhononBathParams& p) {
    return weak_coupling_rates(cav, PhononBath{p});
}

BlochCoefficients bloch_coefficients(const RateSet& r, const LorentzianCavity& cav,
                                     const ZplRates& z) {
    check_cavity(cav);
    check_zpl(z);
    BlochCoefficients b;
    b.gamma_c = cav.kappa + r.rate_cx;
    b.gamma_x = z.gamma0 + z.gamma_d + z.pump + r.rate_xc;
    b.g_c = kI * r.g_eff - r.m1 - r.m2;
    b.g_x = kI * r.g_eff + r.m1 - r.m2;
    return b;
}

double gamma_tilde_P(const LorentzianCavity& cav, const PhononBath& bath, bool dressed_width) {
    check_cavity(cav);
    if (cav.kappa <= 0.0) throw RangeError("feeding estimate needs a lossy mode");
    const WeakCouplingRates wk = weak_coupling_rates(cav, bath);
    const double w = dressed_width ? cav.kappa + wk.rate_cx - wk.rate_xc : cav.kappa;
    if (!(w > 0.0)) throw NumericError("feeding imbalance swallowed the mode width");
    const double gp = bath.mean_displacement() * cav.g;
    const double det = cav.omega_c;
    return wk.rate_xc + 2.0 * gp * gp * (0.5 * w) / (det * det + 0.25 * w * w);
}

double gamma_tilde_P(const LorentzianCavity& cav, const PhononBathParams& p, bool dressed_width) {
    return gamma_tilde_P(cav, PhononBath{p}, dressed_width);
}

Spectrum wea_spectrum(const LorentzianCavity& cav, const PhononBath& bath, const ZplRates& z,
                      const FrequencyGrid& grid) {
    check_cavity(cav);
    check_zpl(z);
    if (z.pump <= 0.0) throw RangeError("weak-excitation spectrum needs an incoherent pump");
    if (cav.g <= 0.0) throw RangeError("weak-excitation spectrum needs a coupled mode");

    const RateSet r = scattering_rates(cav, bath);
    const BlochCoefficients b = bloch_coefficients(r, cav, z);
    const double gp = r.g_eff;
    const double det = cav.omega_c;
    const double pump = z.pump;
    const double feed = pump + z.gamma0;

    const double width_sum = b.gamma_x + b.gamma_c;
    const double det_net = det + r.shift_c - r.shift_x;
    const cplx g1{2.0 * r.m1.real(), -(gp - 2.0 * r.m2.imag())};
    const cplx g3{2.0 * r.m2.real(), -(gp + 2.0 * r.m1.imag())};
    const cplx g4{2.0 * r.m2.real(), gp - 2.0 * r.m1.imag()};
    const cplx pole{0.5 * width_sum, det_net};
    const cplx n1 = std::conj(r.cross) * std::conj(g3) + g3 * pole;
    const cplx n2 = std::conj(r.cross) * std::conj(g4) + g4 * pole;
    const double quad = det_net * det_net - std::norm(r.cross) + 0.25 * width_sum * width_sum;

    const cplx mix = n1 * feed - cav.kappa * n2;
    const double den_lead = quad * (b.gamma_c * feed + cav.kappa * r.rate_xc);
    const double den_corr = 2.0 * (g1 * mix).real();
    const double den = den_lead - den_corr;
    const double den_scale = std::abs(den_lead) + std::abs(den_corr);
    if (std::abs(den) <= 1e-14 * den_scale || den_scale == 0.0)
        throw SingularDenominator("second-moment steady state is degenerate");

    const double photons = pump * (quad * r.rate_xc + 2.0 * (g1 * n2).real()) / den;
    if (feed * quad == 0.0)
        throw SingularDenominator("polarization steady state is degenerate");
    const cplx coherence = (mix * photons + pump * n2) / (feed * quad);

    Spectrum s{grid, std::vector<double>(grid.n, 0.0)};
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double delta = grid[i];
        const cplx dres{delta - r.shift_x, 0.5 * b.gamma_x};
        const cplx cres{delta - det - r.shift_c, 0.5 * b.gamma_c};
        const cplx num = kI * photons * dres + b.g_c * coherence;
        s.values[i] = (num / (dres * cres + b.g_c * b.g_x)).real();
    }
    s.normalize_peak();
    return s;
}

Spectrum wea_spectrum(const LorentzianCavity& cav, const PhononBathParams& p, const ZplRates& z,
                      const FrequencyGrid& grid) {
    return wea_spectrum(cav, PhononBath{p}, z, grid);
}

}  // namespace polaron

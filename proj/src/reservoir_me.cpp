#include "polaron/reservoir_me.hpp"

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "dot_kernel.hpp"
#include "polaron/errors.hpp"
#include "polaron/fourier.hpp"
#include "polaron/quadrature.hpp"
#include "polaron/units.hpp"

namespace polaron {

namespace {

void check(const ZplRates& z) {
    if (z.gamma0 < 0.0 || z.gamma_d < 0.0 || z.pump < 0.0)
        throw RangeError("dot rates must be nonnegative");
}

// Window and panel seeds for the rate integrals: reservoir support joined
// with the sideband response range around the dot placement.
struct RateWindow {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> breaks;
};

RateWindow rate_window(const Reservoir& r, double omega_x, double response_range) {
    RateWindow w;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LorentzianCavity>) {
                w.lo = m.omega_c - 300.0 * m.kappa;
                w.hi = m.omega_c + 300.0 * m.kappa;
                w.breaks = {m.omega_c - 2.0 * m.kappa, m.omega_c, m.omega_c + 2.0 * m.kappa};
            } else {
                w.lo = m.omega_l - 20.0 * m.kappa_l;
                w.hi = m.omega_u + 20.0 * m.kappa_u;
                w.breaks = {m.omega_l, m.omega_u};
            }
        },
        r);
    w.lo = std::min(w.lo, omega_x - response_range);
    w.hi = std::max(w.hi, omega_x + response_range);
    w.breaks.push_back(omega_x);
    return w;
}

Spectrum line_plus_sidebands(const ZplRates& z, const SeRateResult& se, const PhononBath& bath,
                             const FrequencyGrid& grid, bool apply_lamb_shift, bool conjugate) {
    check(z);
    const double gamma_tot = z.gamma0 + z.gamma_d + z.pump + se.rate;
    if (!(gamma_tot > 0.0)) throw ZeroLinewidth("dot line needs a positive total width");
    const double center = apply_lamb_shift ? se.lamb_shift : 0.0;

    Spectrum out;
    if (bath.phi0() != 0.0) {
        out = half_fourier(detail::sideband_trace(bath, gamma_tot, center, conjugate), grid);
    } else {
        out.grid = grid;
        out.values.assign(grid.n, 0.0);
    }
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double d = grid[i] - center;
        out.values[i] += 0.5 * gamma_tot / (d * d + 0.25 * gamma_tot * gamma_tot);
    }
    out.normalize_peak();
    return out;
}

}  // namespace

SeRateResult se_rate(const Reservoir& r, const PhononBath& bath,
                     const KernelTransformTable& k1_table, double omega_x) {
    const RateWindow w = rate_window(r, omega_x, k1_table.delta_max());
    const quad::Options opt{1e-8};

    SeRateResult out;
    out.rate_phonon_free = spontaneous_rate(omega_x, r);
    const double lamb_free = -quad::principal_value(
        [&](double omega) { return photon_spectral_function(omega, r); }, w.lo, w.hi, omega_x,
        opt, w.breaks);

    if (bath.phi0() == 0.0) {
        out.rate = out.rate_phonon_free;
        out.lamb_shift = lamb_free;
        out.modification = out.rate_phonon_free > 0.0 ? 1.0 : 0.0;
        return out;
    }

    const cplx conv = quad::integrate(
        [&](double omega) {
            return photon_spectral_function(omega, r) * k1_table(omega - omega_x);
        },
        w.lo, w.hi, opt, w.breaks);

    const double b2 = std::exp(-bath.phi0());
    out.rate = b2 * (out.rate_phonon_free + 2.0 * conv.real());
    out.lamb_shift = b2 * (lamb_free + conv.imag());

    // The dressed rate is a positive-measure overlap; anything beyond
    // quadrature noise below zero means the inputs are inconsistent.
    if (out.rate < 0.0) {
        const double scale = b2 * (out.rate_phonon_free + 2.0 * std::abs(conv));
        if (out.rate < -1e-8 * scale)
            throw NumericError("reservoir decay rate evaluated negative");
        out.rate = 0.0;
    }
    out.modification = out.rate_phonon_free > 0.0 ? out.rate / out.rate_phonon_free : 0.0;
    return out;
}

SeRateResult se_rate(const Reservoir& r, const PhononBath& bath, double omega_x) {
    // With the coupling off the table is never read; keep its build trivial.
    const std::size_t n = bath.phi0() == 0.0 ? 5 : 3001;
    const KernelTransformTable k1(bath, PhononKernel::ExpPlus, units::rad_per_ps(15.0), n);
    return se_rate(r, bath, k1, omega_x);
}

SeRateResult se_rate(const Reservoir& r, const PhononBathParams& p, double omega_x) {
    return se_rate(r, PhononBath(p), omega_x);
}

Spectrum polarization_spectrum(const ZplRates& z, const SeRateResult& se, const PhononBath& bath,
                               const FrequencyGrid& grid, bool apply_lamb_shift) {
    return line_plus_sidebands(z, se, bath, grid, apply_lamb_shift, true);
}

Spectrum absorption_spectrum(const ZplRates& z, const SeRateResult& se, const PhononBath& bath,
                             const FrequencyGrid& grid, bool apply_lamb_shift) {
    return line_plus_sidebands(z, se, bath, grid, apply_lamb_shift, false);
}

Spectrum emission_spectrum_projected(const Reservoir& r, const ZplRates& z, const PhononBath& bath,
                                     const FrequencyGrid& grid) {
    const SeRateResult se = se_rate(r, bath, 0.0);
    Spectrum s = polarization_spectrum(z, se, bath, grid);
    for (std::size_t i = 0; i < grid.n; ++i) s.values[i] *= propagator(grid[i], r);
    s.normalize_peak();
    return s;
}

}  // namespace polaron

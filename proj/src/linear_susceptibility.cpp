#include "polaron/linear_susceptibility.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dot_kernel.hpp"
#include "polaron/errors.hpp"
#include "polaron/fourier.hpp"

namespace polaron {

namespace {

// Beyond this detuning the picosecond phonon memory contributes only a
// 1/delta tail dwarfed by the resonance pole, and the sampled sideband trace
// could not resolve the oscillation anyway.
constexpr double kSidebandReach = 91.0;  // rad/ps, about 60 meV

void check(const SusceptibilityParams& s) {
    if (!(s.gamma_x > 0.0)) throw RangeError("total dephasing must be positive");
    if (!(s.omega_x > 0.0)) throw RangeError("dot line frequency must be positive");
    if (s.cavity.kappa < 0.0 || s.cavity.g < 0.0)
        throw RangeError("cavity width and coupling must be nonnegative");
}

cplx pole_tail(double delta, double gamma) { return cplx{0.0, 1.0} / cplx{delta, 0.5 * gamma}; }

// Asymptote of the transform far outside the sideband reach, where the line is
// one unresolved unit-weight pole at the sideband centroid: the ZPL keeps
// <B>^2, the remaining weight sits a polaron shift above it. Matches the exact
// transform through second order in 1/delta.
cplx far_tail(double delta, const PhononBath& bath, double gamma) {
    const double b2 = std::exp(-bath.phi0());
    return b2 * pole_tail(delta, gamma) +
           (1.0 - b2) * pole_tail(delta - bath.polaron_shift(), gamma);
}

// One-sided transform of the polarization decay on an ascending grid of
// detunings from the dot line, normalized so the tau = 0 kernel is one: ZPL
// weight <B>^2 at the pole, sidebands the rest.
std::vector<cplx> decay_transform(const FrequencyGrid& grid, const PhononBath& bath,
                                  const SusceptibilityParams& s, const CorrelationTrace* side) {
    std::vector<cplx> out(grid.n);
    const double b2 = std::exp(-bath.phi0());
    if (side == nullptr) {
        for (std::size_t i = 0; i < grid.n; ++i) out[i] = b2 * pole_tail(grid[i], s.gamma_x);
        return out;
    }

    for (std::size_t i = 0; i < grid.n; ++i) out[i] = far_tail(grid[i], bath, s.gamma_x);
    std::size_t lo = grid.n, hi = 0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        if (std::abs(grid[i]) > kSidebandReach) continue;
        lo = std::min(lo, i);
        hi = std::max(hi, i);
    }
    if (lo > hi) return out;
    const FrequencyGrid sub(grid[lo], grid[hi], hi - lo + 1);
    const ComplexSpectrum t = half_fourier_complex(*side, sub);
    for (std::size_t k = 0; k < sub.n; ++k)
        out[lo + k] = b2 * (pole_tail(sub[k], s.gamma_x) + t.values[k]);
    return out;
}

std::vector<cplx> chi_on_detuning_grid(const FrequencyGrid& grid, const PhononBath& bath,
                                       const SusceptibilityParams& s) {
    CorrelationTrace side;
    if (bath.phi0() != 0.0) side = detail::sideband_trace(bath, s.gamma_x, 0.0, false);
    const std::vector<cplx> near =
        decay_transform(grid, bath, s, bath.phi0() != 0.0 ? &side : nullptr);

    // mirror pole sits 2 omega_x below the line; only its tail reaches here
    std::vector<cplx> chi(grid.n);
    const cplx iu{0.0, 1.0};
    for (std::size_t i = 0; i < grid.n; ++i) {
        const cplx far = far_tail(-2.0 * s.omega_x - grid[i], bath, s.gamma_x);
        chi[i] = iu * near[i] - iu * std::conj(far);
    }
    return chi;
}

}  // namespace

ComplexSpectrum bare_susceptibility(const FrequencyGrid& grid, const PhononBath& bath,
                                    const SusceptibilityParams& s) {
    check(s);
    CorrelationTrace side;
    if (bath.phi0() != 0.0) side = detail::sideband_trace(bath, s.gamma_x, 0.0, false);
    const std::vector<cplx> near =
        decay_transform(grid, bath, s, bath.phi0() != 0.0 ? &side : nullptr);

    ComplexSpectrum out{grid, std::vector<cplx>(grid.n)};
    const cplx iu{0.0, 1.0};
    for (std::size_t i = 0; i < grid.n; ++i) out.values[i] = iu * near[i];
    return out;
}

ComplexSpectrum bare_susceptibility(const FrequencyGrid& grid, const PhononBathParams& p,
                                    const SusceptibilityParams& s) {
    return bare_susceptibility(grid, PhononBath(p), s);
}

ComplexSpectrum full_susceptibility(const FrequencyGrid& absolute_grid, const PhononBath& bath,
                                    const SusceptibilityParams& s) {
    check(s);
    const std::size_t n = absolute_grid.n;
    const double lo = absolute_grid.omega_min;
    const double hi = n > 1 ? absolute_grid.omega_max : absolute_grid.omega_min;

    CorrelationTrace side;
    const CorrelationTrace* sp = nullptr;
    if (bath.phi0() != 0.0) {
        side = detail::sideband_trace(bath, s.gamma_x, 0.0, false);
        sp = &side;
    }
    // the two pole branches see mirrored detuning grids; both ascending
    const FrequencyGrid near_grid(lo - s.omega_x, hi - s.omega_x, n);
    const FrequencyGrid far_grid(-hi - s.omega_x, -lo - s.omega_x, n);
    const std::vector<cplx> near = decay_transform(near_grid, bath, s, sp);
    const std::vector<cplx> far = decay_transform(far_grid, bath, s, sp);

    ComplexSpectrum out{absolute_grid, std::vector<cplx>(n)};
    const cplx iu{0.0, 1.0};
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = iu * near[i] - iu * std::conj(far[n - 1 - i]);
    return out;
}

ComplexSpectrum phonon_self_energy(const FrequencyGrid& grid, const PhononBath& bath,
                                   const SusceptibilityParams& s) {
    check(s);
    if (!(s.omega_x + grid.omega_min > 0.0))
        throw RangeError("detuning grid reaches past -omega_x");
    const std::vector<cplx> chi = chi_on_detuning_grid(grid, bath, s);

    ComplexSpectrum out{grid, std::vector<cplx>(grid.n)};
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double w = s.omega_x + grid[i];
        if (chi[i] == cplx{0.0, 0.0})
            throw SingularDenominator("susceptibility vanished; self-energy undefined there");
        const cplx bare = cplx{s.omega_x * s.omega_x - w * w, -w * s.gamma_x};
        out.values[i] = bare / w - 2.0 * s.omega_x / (w * chi[i]);
    }
    return out;
}

Spectrum cavity_spectrum(const FrequencyGrid& grid, const PhononBath& bath,
                         const SusceptibilityParams& s) {
    check(s);
    if (!(s.omega_x + grid.omega_min > 0.0))
        throw RangeError("detuning grid reaches past -omega_x");
    const std::vector<cplx> chi = chi_on_detuning_grid(grid, bath, s);
    const double wc = s.omega_x + s.cavity.omega_c;
    const double g = s.cavity.g;

    Spectrum out{grid, std::vector<double>(grid.n, 0.0)};
    bool finite = true;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double w = s.omega_x + grid[i];
        const cplx cavd{wc * wc - w * w, -w * s.cavity.kappa};
        const cplx den = cavd - 2.0 * g * g * wc * chi[i];
        if (den == cplx{0.0, 0.0})
            throw SingularDenominator("cavity filter pole on the real axis");
        const cplx amp = 2.0 * g * wc * (w + s.omega_x) * chi[i] / den;
        out.values[i] = std::norm(amp);
        finite = finite && std::isfinite(out.values[i]);
    }
    if (!finite) throw SingularDenominator("cavity filter response diverged");
    out.normalize_peak();
    return out;
}

Spectrum cavity_spectrum(const FrequencyGrid& grid, const PhononBathParams& p,
                         const SusceptibilityParams& s) {
    return cavity_spectrum(grid, PhononBath(p), s);
}

}  // namespace polaron

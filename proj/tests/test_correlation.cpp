#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "polaron/correlation_expansion.hpp"
#include "polaron/cqed_me.hpp"
#include "polaron/errors.hpp"
#include "polaron/grid.hpp"
#include "polaron/phonon_bath.hpp"
#include "polaron/reservoir_me.hpp"
#include "polaron/units.hpp"

using namespace polaron;

namespace {

LorentzianCavity lcav(double omega_c_meV, double kappa_ueV, double g_ueV = 100.0) {
    LorentzianCavity c;
    c.omega_c = units::rad_per_ps(omega_c_meV);
    c.kappa = units::rad_per_ps_from_ueV(kappa_ueV);
    c.g = units::rad_per_ps_from_ueV(g_ueV);
    return c;
}

PhononBath bath_at(double temperature_K) { return PhononBath({0.06, 1.0, temperature_K}); }

PhononBath bath_off() { return PhononBath({0.0, 1.0, 4.0}); }

ZplRates dot_rates(double gamma0_ueV, double gamma_d_ueV, double pump_ueV = 0.0) {
    return {units::rad_per_ps_from_ueV(gamma0_ueV), units::rad_per_ps_from_ueV(gamma_d_ueV),
            units::rad_per_ps_from_ueV(pump_ueV)};
}

double max_abs_diff(const Spectrum& a, const Spectrum& b) {
    REQUIRE(a.values.size() == b.values.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

double state_max(const HierarchyState& y) {
    double m = std::max(std::abs(y.s), std::abs(y.a));
    for (const auto* v : {&y.sb, &y.sbd, &y.ab, &y.abd, &y.sbb, &y.sbdbd, &y.abb, &y.abdbd,
                          &y.sbbd, &y.abbd})
        for (const cplx& x : *v) m = std::max(m, std::abs(x));
    return m;
}

double state_diff(const HierarchyState& a, HierarchyState b) {
    b.scale_add(-1.0, a);
    return state_max(b);
}

}  // namespace

TEST_CASE("silent lattice reduces the hierarchy to the one-mode closed form") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const ZplRates z = dot_rates(5.0, 55.0);
    HierarchyParams hp;
    hp.n_modes = 16;
    ModeHierarchy h(cav, bath_off(), z, hp);
    CHECK(h.line_shift() == 0.0);

    const CorrelationTrace tr = h.polarization_decay(20.0);
    const cplx m11{-0.5 * (z.gamma0 + z.gamma_d), 0.0};
    const cplx m22{-0.5 * cav.kappa, -cav.omega_c};
    const cplx gg{0.0, -cav.g};
    const cplx t2 = m11 + m22;
    const cplx sq = std::sqrt(t2 * t2 - 4.0 * (m11 * m22 - gg * gg));
    const cplx lp = 0.5 * (t2 + sq), lm = 0.5 * (t2 - sq);
    double err = 0.0;
    for (std::size_t i = 0; i < tr.values.size(); ++i) {
        const double t = tr.dt * static_cast<double>(i);
        const cplx ref =
            ((lp - m22) * std::exp(lp * t) - (lm - m22) * std::exp(lm * t)) / (lp - lm);
        err = std::max(err, std::abs(tr.values[i] - ref));
    }
    CHECK(err < 1e-12);
}

TEST_CASE("empty state stays empty and seeds superpose linearly") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    ModeHierarchy h(cav, bath_at(4.0), dot_rates(5.0, 55.0));

    HierarchyState y = h.propagate(h.zero_state(), 1.0);
    CHECK(state_max(y) == 0.0);

    // two deterministic seeds and a combination of them
    HierarchyState y1 = h.zero_state(), y2 = h.zero_state();
    y1.s = {0.3, -0.1};
    y1.sb[3] = {0.05, 0.02};
    y1.abbd[7] = {-0.01, 0.03};
    y2.a = {0.2, 0.4};
    y2.sbd[5] = {-0.03, 0.01};
    y2.sbb[11] = {0.02, -0.02};
    const double ca = 2.0, cb = -0.5;

    HierarchyState d1 = h.zero_state(), d2 = h.zero_state(), dc = h.zero_state();
    h.derivative(y1, d1);
    h.derivative(y2, d2);
    HierarchyState mix = h.zero_state();
    mix.scale_add(ca, y1);
    mix.scale_add(cb, y2);
    h.derivative(mix, dc);

    HierarchyState expect = h.zero_state();
    expect.scale_add(ca, d1);
    expect.scale_add(cb, d2);
    CHECK(state_diff(dc, expect) < 1e-12);
}

TEST_CASE("bare mode amplitude rings down at half kappa") {
    const LorentzianCavity cav = lcav(0.5, 65.0, 0.0);
    ModeHierarchy h(cav, bath_at(4.0), dot_rates(5.0, 5.0));
    HierarchyState y = h.zero_state();
    y.a = 1.0;
    y = h.propagate(std::move(y), 2.0);
    const double expect = std::exp(-0.5 * cav.kappa * 2.0);
    CHECK(std::abs(std::abs(y.a) - expect) < 1e-3 * expect);
}

TEST_CASE("first lattice derivatives carry the thermal emission and absorption weights") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const PhononBath bath = bath_at(4.0);
    HierarchyParams hp;
    hp.n_modes = 24;
    ModeHierarchy h(cav, bath, dot_rates(5.0, 55.0), hp);
    const DiscretizedModes dm = discretize_modes(bath, hp.n_modes, hp.omega_max);

    double shift = 0.0;
    for (std::size_t q = 0; q < dm.omega.size(); ++q)
        shift += dm.lambda[q] * dm.lambda[q] / dm.omega[q];
    CHECK(std::abs(h.line_shift() - shift) < 1e-12);

    HierarchyState y = h.zero_state(), dy = h.zero_state();
    y.s = 1.0;
    h.derivative(y, dy);
    const cplx i1{0.0, 1.0};
    double err = 0.0;
    for (std::size_t q = 0; q < dm.omega.size(); ++q) {
        const double nq = bath.occupancy(dm.omega[q]);
        err = std::max(err, std::abs(dy.sb[q] + i1 * dm.lambda[q] * (nq + 1.0)));
        err = std::max(err, std::abs(dy.sbd[q] + i1 * dm.lambda[q] * nq));
    }
    CHECK(err < 1e-12);
}

TEST_CASE("dephasing-only decay follows the independent-boson envelope") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 0.0);
    const PhononBath bath = bath_at(0.0);
    const ZplRates z = dot_rates(5.0, 5.0);
    HierarchyParams hp;
    hp.n_modes = 200;
    ModeHierarchy h(cav, bath, z, hp);

    // the discrete lattice pull converges to the continuum shift
    CHECK(std::abs(h.line_shift() - bath.polaron_shift()) < 1e-4 * bath.polaron_shift());

    const CorrelationTrace tr = h.polarization_decay(10.0);
    const double g1 = 0.5 * (z.gamma0 + z.gamma_d);
    double err = 0.0;
    for (std::size_t i = 0; i < tr.values.size(); ++i) {
        const double t = tr.dt * static_cast<double>(i);
        const cplx ref = std::exp(-g1 * t) * std::exp(bath.phi(t) - bath.phi0());
        err = std::max(err, std::abs(tr.values[i] - ref));
    }
    // pair truncation leaves an O(phi0^2) remnant, measured 1.7% on this setup
    CHECK(err < 0.03);
}

TEST_CASE("mode count is converged at the working resolution") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const PhononBath bath = bath_at(4.0);
    const ZplRates z = dot_rates(5.0, 55.0);
    cplx v[2];
    const std::size_t ns[2] = {200, 400};
    for (int k = 0; k < 2; ++k) {
        HierarchyParams hp;
        hp.n_modes = ns[k];
        ModeHierarchy h(cav, bath, z, hp);
        HierarchyState y = h.zero_state();
        y.s = 1.0;
        y = h.propagate(std::move(y), 5.0);
        v[k] = y.s * std::exp(cplx{0.0, -h.line_shift() * 5.0});
    }
    CHECK(std::abs(v[0] - v[1]) < 0.01 * std::abs(v[1]));
}

TEST_CASE("resonant doublet matches the dressed-rate spectrum and its own filter") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const PhononBath bath = bath_at(4.0);
    const FrequencyGrid grid(-units::rad_per_ps(0.4), units::rad_per_ps(0.4), 801);
    HierarchyParams hp;
    hp.n_modes = 72;
    hp.dt = 0.005;
    ModeHierarchy h(cav, bath, dot_rates(5.0, 55.0), hp);
    const CorrelationSpectra cs = hierarchy_spectra(h, grid);

    const Spectrum wea = wea_spectrum(cav, bath, dot_rates(5.0, 55.0, 0.1), grid);
    CHECK(max_abs_diff(cs.coupled_mode, wea) < 0.07);
    CHECK(max_abs_diff(cs.filtered_dot, cs.coupled_mode) < 0.005);
}

TEST_CASE("red-detuned broad filter reproduces the projected reservoir line") {
    const LorentzianCavity cav = lcav(-2.0, 2400.0, 100.0);
    const PhononBath bath = bath_at(4.0);
    const ZplRates z = dot_rates(10.0, 10.0);
    const FrequencyGrid grid(-units::rad_per_ps(4.5), units::rad_per_ps(1.5), 301);
    HierarchyParams hp;
    hp.n_modes = 48;
    hp.dt = 0.01;
    ModeHierarchy h(cav, bath, z, hp);
    const CorrelationSpectra cs = hierarchy_spectra(h, grid);
    const Spectrum proj = emission_spectrum_projected(Reservoir{cav}, z, bath, grid);
    CHECK(max_abs_diff(cs.coupled_mode, proj) < 0.10);
    CHECK(max_abs_diff(cs.filtered_dot, cs.coupled_mode) < 0.02);
}

TEST_CASE("weak pumping and inversion prepare the same line") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const PhononBath bath = bath_off();
    const FrequencyGrid grid(-units::rad_per_ps(0.4), units::rad_per_ps(0.4), 801);
    HierarchyParams hp;
    hp.n_modes = 10;
    hp.dt = 0.005;
    ModeHierarchy h0(cav, bath, dot_rates(200.0, 0.0), hp);
    ModeHierarchy h1(cav, bath, dot_rates(200.0, 0.0, 2.0), hp);
    const Spectrum inv = hierarchy_dot_spectrum(h0, grid, HierarchyInit::InvertedAtom);
    const Spectrum pmp = hierarchy_dot_spectrum(h1, grid, HierarchyInit::SteadyPump);
    CHECK(max_abs_diff(inv, pmp) < 0.02);
}

TEST_CASE("resonant doublet is symmetric when the lattice is silent") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const FrequencyGrid grid(-units::rad_per_ps(0.4), units::rad_per_ps(0.4), 801);
    HierarchyParams hp;
    hp.n_modes = 10;
    hp.dt = 0.005;
    ModeHierarchy h(cav, bath_off(), dot_rates(5.0, 55.0), hp);
    const CorrelationSpectra cs = hierarchy_spectra(h, grid);
    double asym = 0.0;
    const std::size_t n = cs.coupled_mode.values.size();
    for (std::size_t i = 0; i < n; ++i)
        asym = std::max(asym,
                        std::abs(cs.coupled_mode.values[i] - cs.coupled_mode.values[n - 1 - i]));
    CHECK(asym < 0.01);
}

TEST_CASE("construction rejects unusable setups") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const PhononBath bath = bath_at(4.0);
    const ZplRates z = dot_rates(5.0, 55.0);

    HierarchyParams hp;
    hp.n_modes = 5;
    CHECK_THROWS_AS(ModeHierarchy(cav, bath, z, hp), InsufficientModes);

    hp = HierarchyParams{};
    hp.dt = 0.0;
    CHECK_THROWS_AS(ModeHierarchy(cav, bath, z, hp), RangeError);

    hp = HierarchyParams{};
    hp.dt = 0.2;  // cannot resolve a 5 meV window
    CHECK_THROWS_AS(ModeHierarchy(cav, bath, z, hp), RangeError);

    hp = HierarchyParams{};
    hp.tau_end = -1.0;
    CHECK_THROWS_AS(ModeHierarchy(cav, bath, z, hp), RangeError);

    LorentzianCavity bad = cav;
    bad.kappa = -1.0;
    CHECK_THROWS_AS(ModeHierarchy(bad, bath, z, HierarchyParams{}), RangeError);
}

TEST_CASE("spectra demand the matching preparation") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const PhononBath bath = bath_off();
    const FrequencyGrid grid(-units::rad_per_ps(0.4), units::rad_per_ps(0.4), 101);
    HierarchyParams hp;
    hp.n_modes = 10;

    ModeHierarchy pumped(cav, bath, dot_rates(200.0, 0.0, 2.0), hp);
    CHECK_THROWS_AS(hierarchy_spectra(pumped, grid), RangeError);
    CHECK_THROWS_AS(hierarchy_dot_spectrum(pumped, grid, HierarchyInit::InvertedAtom),
                    RangeError);

    ModeHierarchy idle(cav, bath, dot_rates(200.0, 0.0), hp);
    CHECK_THROWS_AS(hierarchy_dot_spectrum(idle, grid, HierarchyInit::SteadyPump), RangeError);
}

TEST_CASE("silent coupling leaves no mode line to normalize") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 0.0);
    const FrequencyGrid grid(-units::rad_per_ps(0.4), units::rad_per_ps(0.4), 101);
    HierarchyParams hp;
    hp.n_modes = 10;
    ModeHierarchy h(cav, bath_off(), dot_rates(200.0, 0.0), hp);
    CHECK_THROWS_AS(hierarchy_spectra(h, grid), SingularDenominator);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "polaron/cqed_me.hpp"
#include "polaron/errors.hpp"
#include "polaron/fourier.hpp"
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

PhononBath bath_at(double temperature_K) {
    return PhononBath({0.06, 1.0, temperature_K});
}

PhononBath bath_off() { return PhononBath({0.0, 1.0, 4.0}); }

ZplRates dot_rates(double gamma0_ueV, double gamma_d_ueV, double pump_ueV = 0.0) {
    return {units::rad_per_ps_from_ueV(gamma0_ueV), units::rad_per_ps_from_ueV(gamma_d_ueV),
            units::rad_per_ps_from_ueV(pump_ueV)};
}

std::vector<std::size_t> maxima_of(const Spectrum& s, double floor_frac = 0.01) {
    std::vector<std::size_t> out;
    const double floor = floor_frac * s.max_value();
    for (std::size_t i = 1; i + 1 < s.values.size(); ++i)
        if (s.values[i] > s.values[i - 1] && s.values[i] > s.values[i + 1] &&
            s.values[i] > floor)
            out.push_back(i);
    return out;
}

// quadratic sub-grid refinement around sample i, rad/ps
double refined_peak(const Spectrum& s, std::size_t i) {
    const double y0 = s.values[i - 1], y1 = s.values[i], y2 = s.values[i + 1];
    const double curve = y0 - 2.0 * y1 + y2;
    const double shift = curve != 0.0 ? 0.5 * (y0 - y2) / curve : 0.0;
    return s.grid[i] + shift * s.grid.step();
}

double max_abs_diff(const Spectrum& a, const Spectrum& b) {
    REQUIRE(a.values.size() == b.values.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

// deterministic dense Hermitian test matrices
Liouvillian::Matrix probe_state(int seed) {
    Liouvillian::Matrix m;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const double re = ((i * 7 + j * 3 + seed) % 11) / 11.0;
            const double im = ((i - j) * (seed + 2) % 5) / 7.0;
            m(i, j) = cplx(re, im);
        }
    Liouvillian::Matrix h = 0.5 * (m + m.adjoint());
    h += 6.0 * Liouvillian::Matrix::Identity();
    h /= h.trace().real();
    return h;
}

}  // namespace

TEST_CASE("scattering channels vanish without coupling or phonons") {
    const PhononBath b = bath_at(4.0);
    RateSet r = scattering_rates(lcav(1.0, 65.0, 0.0), b);
    CHECK(r.g_eff == 0.0);
    CHECK(r.rabi == doctest::Approx(units::rad_per_ps(1.0)).epsilon(1e-12));
    CHECK(r.rate_xc == 0.0);
    CHECK(r.rate_cx == 0.0);
    CHECK(r.shift_x == 0.0);
    CHECK(r.shift_c == 0.0);
    CHECK(std::abs(r.m1) == 0.0);
    CHECK(std::abs(r.m2) == 0.0);

    r = scattering_rates(lcav(1.0, 65.0, 100.0), bath_off());
    CHECK(r.g_eff == doctest::Approx(units::rad_per_ps_from_ueV(100.0)).epsilon(1e-12));
    CHECK(r.rate_xc == 0.0);
    CHECK(r.rate_cx == 0.0);
    CHECK(std::abs(r.m2) == 0.0);

    CHECK_THROWS_AS(scattering_rates(lcav(0.0, -65.0), b), RangeError);
}

TEST_CASE("resonant channels are symmetric and the odd coupling term drops out") {
    const RateSet r = scattering_rates(lcav(0.0, 65.0, 100.0), bath_at(4.0));
    CHECK(r.m1 == cplx(0.0, 0.0));
    CHECK(r.rate_xc == r.rate_cx);
    CHECK(r.shift_x == r.shift_c);
    CHECK(r.rabi == doctest::Approx(2.0 * r.g_eff).epsilon(1e-12));
    CHECK(std::abs(r.m2) > 0.0);
}

TEST_CASE("dressed channels collapse to the second-order rates far off resonance") {
    const LorentzianCavity cav = lcav(2.0, 65.0, 100.0);
    const PhononBath b = bath_at(4.0);
    const RateSet full = scattering_rates(cav, b);
    const WeakCouplingRates wk = weak_coupling_rates(cav, b);
    CHECK(full.rate_xc == doctest::Approx(wk.rate_xc).epsilon(0.02));
    CHECK(full.rate_cx == doctest::Approx(wk.rate_cx).epsilon(0.02));
}

TEST_CASE("detuning reversal exchanges the two channels") {
    for (double t : {4.0, 20.0}) {
        const PhononBath b = bath_at(t);
        for (double det : {-2.0, -0.7, 1.3}) {
            const RateSet fwd = scattering_rates(lcav(det, 65.0, 100.0), b);
            const RateSet rev = scattering_rates(lcav(-det, 65.0, 100.0), b);
            CHECK(fwd.rate_xc == doctest::Approx(rev.rate_cx).epsilon(1e-9));
            CHECK(fwd.shift_x == doctest::Approx(rev.shift_c).epsilon(1e-9));
        }
    }
}

TEST_CASE("channel rates stay nonnegative over the operating window") {
    // At 1 K and 4 meV detuning the uphill channel weight is ~e^{-46}, far
    // below the O((g'/det)^2) cross-mixing of the dressed recast, so its sign
    // is unresolved; allow a sliver of the companion rate there.
    for (double t : {1.0, 10.0, 50.0}) {
        const PhononBath b = bath_at(t);
        for (double det : {-4.0, -2.0, -0.5, 0.0, 0.5, 2.0, 4.0}) {
            for (double g : {10.0, 150.0}) {
                const RateSet r = scattering_rates(lcav(det, 65.0, g), b);
                const double floor =
                    t > 1.0 ? 0.0 : -1e-3 * std::max({r.rate_xc, r.rate_cx, 0.0}) - 1e-11;
                CHECK(r.rate_xc >= floor);
                CHECK(r.rate_cx >= floor);
            }
        }
    }
}

TEST_CASE("second-order channel rates obey detailed balance") {
    // 1 meV red detuning: transfer into the mode emits a 1 meV phonon, the
    // reverse absorbs one, so the rate ratio is the thermal exponential.
    for (double t : {4.0, 40.0}) {
        const WeakCouplingRates wk = weak_coupling_rates(lcav(-1.0, 65.0, 100.0), bath_at(t));
        const double expected = std::exp(1.0 / (units::kB_meV_per_K * t));
        CHECK(wk.rate_xc / wk.rate_cx == doctest::Approx(expected).epsilon(1e-3));
    }
    const WeakCouplingRates cold = weak_coupling_rates(lcav(-1.0, 65.0, 100.0), bath_at(4.0));
    CHECK(cold.rate_xc / cold.rate_cx == doctest::Approx(18.19468522).epsilon(1e-3));
}

TEST_CASE("a red mode is fed much harder than a blue one at low temperature") {
    const PhononBath b = bath_at(4.0);
    const WeakCouplingRates wk = weak_coupling_rates(lcav(-2.0, 65.0, 100.0), b);
    CHECK(wk.rate_xc > wk.rate_cx);
    const RateSet full = scattering_rates(lcav(-2.0, 65.0, 100.0), b);
    CHECK(full.rate_xc > full.rate_cx);
}

TEST_CASE("mode feeding estimate: Purcell limit and reservoir consistency") {
    const LorentzianCavity res = lcav(0.0, 65.0, 100.0);
    CHECK(units::ueV(gamma_tilde_P(res, bath_off())) ==
          doctest::Approx(615.3846153846).epsilon(1e-9));
    CHECK(gamma_tilde_P(res, bath_off(), true) == gamma_tilde_P(res, bath_off(), false));

    // narrow mode: the mode and phonon responses factor, both pictures agree
    const PhononBath b = bath_at(4.0);
    for (double det : {-1.0, 1.0}) {
        const LorentzianCavity cav = lcav(det, 100.0, 100.0);
        const double est = gamma_tilde_P(cav, b);
        const double full = se_rate(Reservoir{cav}, b, 0.0).rate;
        CHECK(est == doctest::Approx(full).epsilon(0.05));
    }

    // wide mode: its width rivals the phonon sideband and the factored
    // estimate visibly misses the joint response
    const LorentzianCavity low_q = lcav(-2.0, 2400.0, 100.0);
    const double est = gamma_tilde_P(low_q, b);
    const double full = se_rate(Reservoir{low_q}, b, 0.0).rate;
    CHECK(std::abs(est - full) / full > 0.10);
}

TEST_CASE("weak-excitation doublet is symmetric without phonons") {
    // The maxima of the emission doublet sit inside the hybridized-state
    // splitting of 2g = 200 ueV: the dispersive cross term pulls each peak
    // about 5 ueV toward the center at these widths. 189.95 ueV is the value
    // of an independent evaluation of the same closed form.
    const FrequencyGrid grid(units::rad_per_ps(-0.4), units::rad_per_ps(0.4), 3201);
    const Spectrum s = wea_spectrum(lcav(0.0, 65.0, 100.0), bath_off(), dot_rates(5.0, 55.0, 0.1), grid);
    const auto peaks = maxima_of(s);
    REQUIRE(peaks.size() == 2);
    const double split = units::ueV(refined_peak(s, peaks[1]) - refined_peak(s, peaks[0]));
    CHECK(split == doctest::Approx(189.95).epsilon(0.003));
    CHECK(s.values[peaks[0]] / s.values[peaks[1]] == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("phonons shrink the doublet splitting and skew it to the red") {
    const FrequencyGrid grid(units::rad_per_ps(-0.4), units::rad_per_ps(0.4), 3201);
    const Spectrum off =
        wea_spectrum(lcav(0.0, 65.0, 100.0), bath_off(), dot_rates(5.0, 55.0, 0.1), grid);
    const Spectrum s =
        wea_spectrum(lcav(0.0, 65.0, 100.0), bath_at(4.0), dot_rates(5.0, 55.0, 0.1), grid);
    const auto ref = maxima_of(off);
    const auto peaks = maxima_of(s);
    REQUIRE(peaks.size() == 2);
    const double split = units::ueV(refined_peak(s, peaks[1]) - refined_peak(s, peaks[0]));
    const double split_off = units::ueV(refined_peak(off, ref[1]) - refined_peak(off, ref[0]));
    // coupling renormalized by the displacement average <B> = 0.912 at 4 K;
    // the peak pull does not scale exactly with it, hence the window
    CHECK(split / split_off > 0.88);
    CHECK(split / split_off < 0.93);
    CHECK(split == doctest::Approx(171.1).epsilon(0.012));
    CHECK(s.values[peaks[0]] > 1.05 * s.values[peaks[1]]);
}

TEST_CASE("closed-form and propagated mode spectra agree at resonance") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const ZplRates z = dot_rates(5.0, 55.0, 0.1);
    const FrequencyGrid grid(units::rad_per_ps(-0.4), units::rad_per_ps(0.4), 801);

    const PhononBath off = bath_off();
    Spectrum closed = wea_spectrum(cav, off, z, grid);
    Spectrum full = coupled_mode_spectrum(Liouvillian{cav, off, z}, grid);
    CHECK(max_abs_diff(closed, full) < 0.02);

    const PhononBath on = bath_at(4.0);
    closed = wea_spectrum(cav, on, z, grid);
    full = coupled_mode_spectrum(Liouvillian{cav, on, z}, grid);
    CHECK(max_abs_diff(closed, full) < 0.02);
}

TEST_CASE("generator without phonons reduces to the bare mode-dot generator") {
    const LorentzianCavity cav = lcav(-1.0, 65.0, 100.0);
    const ZplRates z = dot_rates(5.0, 55.0, 2.0);
    const Liouvillian gen{cav, bath_off(), z};

    using M = Liouvillian::Matrix;
    const M a = Liouvillian::photon_op();
    const M s = Liouvillian::lowering_op();
    const M sp = s.adjoint();
    const M h = cav.omega_c * (a.adjoint() * a).eval() + cav.g * (sp * a + a.adjoint() * s).eval();
    const auto lindblad = [](const M& c, const M& rho) -> M {
        return c * rho * c.adjoint() - 0.5 * (c.adjoint() * c * rho + rho * c.adjoint() * c);
    };
    for (int seed : {1, 2, 3}) {
        const M rho = probe_state(seed);
        const M expect = cplx(0.0, -1.0) * (h * rho - rho * h) + cav.kappa * lindblad(a, rho) +
                         z.gamma0 * lindblad(s, rho) + z.gamma_d * lindblad(sp * s, rho) +
                         z.pump * lindblad(sp, rho);
        const M got = gen.apply(rho);
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("generator conserves trace with the phonon channels on") {
    const Liouvillian gen{lcav(-1.0, 65.0, 100.0), bath_at(4.0), dot_rates(5.0, 55.0, 2.0)};
    for (int seed : {1, 2, 3}) {
        const cplx drift = gen.apply(probe_state(seed)).trace();
        CHECK(std::abs(drift) < 1e-12);
    }
}

TEST_CASE("steady state is a physical density matrix") {
    const Liouvillian gen{lcav(0.0, 65.0, 100.0), bath_at(4.0), dot_rates(5.0, 55.0, 0.1)};
    const Liouvillian::Matrix rho = steady_state(gen);
    CHECK(std::abs(rho.trace() - cplx(1.0, 0.0)) < 1e-9);
    CHECK(gen.apply(rho).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Liouvillian::Matrix> es(0.5 * (rho + rho.adjoint()));
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("decoupled dot line has the bare width") {
    const ZplRates z = dot_rates(2.0, 6.0, 2.0);
    const Liouvillian gen{lcav(0.0, 65.0, 0.0), bath_off(), z};
    const Liouvillian::Matrix rho = steady_state(gen);
    const Liouvillian::Matrix s = Liouvillian::lowering_op();
    // dot population of the pumped two-level system
    CHECK((s.adjoint() * s * rho).trace().real() ==
          doctest::Approx(z.pump / (z.pump + z.gamma0)).epsilon(1e-6));

    const CorrelationTrace g = two_time_correlation(gen, s.adjoint(), s, rho);
    const FrequencyGrid grid(units::rad_per_ps(-0.05), units::rad_per_ps(0.05), 2001);
    Spectrum spec = half_fourier(g.conjugated(), grid);
    spec.normalize_peak();

    // full width at half maximum by linear interpolation of the crossings
    const auto cross = [&](std::size_t from, int dir) {
        std::size_t i = from;
        while (spec.values[i] > 0.5) i += dir;
        const double y1 = spec.values[i - dir], y2 = spec.values[i];
        const double x1 = spec.grid[i - dir], x2 = spec.grid[i];
        return x1 + (0.5 - y1) * (x2 - x1) / (y2 - y1);
    };
    std::size_t top = 0;
    for (std::size_t i = 0; i < spec.values.size(); ++i)
        if (spec.values[i] > spec.values[top]) top = i;
    const double fwhm = cross(top, +1) - cross(top, -1);
    CHECK(units::ueV(fwhm) == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("two-time correlation starts at the steady expectation") {
    const Liouvillian gen{lcav(0.0, 65.0, 100.0), bath_at(4.0), dot_rates(5.0, 55.0, 0.1)};
    const Liouvillian::Matrix rho = steady_state(gen);
    const Liouvillian::Matrix a = Liouvillian::photon_op();
    const CorrelationTrace g = two_time_correlation(gen, a.adjoint(), a, rho);
    const cplx direct = (a.adjoint() * a * rho).trace();
    CHECK(std::abs(g.values[0] - direct) < 1e-10);
    CHECK(std::abs(g.values[0].imag()) < 1e-12);
    CHECK(g.values[0].real() > 0.0);
}

TEST_CASE("polariton lines sit at the dressed-mode frequencies") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const ZplRates z = dot_rates(5.0, 0.0, 0.1);
    const FrequencyGrid grid(units::rad_per_ps(-0.3), units::rad_per_ps(0.3), 2401);
    const Spectrum s = coupled_mode_spectrum(Liouvillian{cav, bath_off(), z}, grid);
    const auto peaks = maxima_of(s);
    REQUIRE(peaks.size() == 2);
    const double gx = z.gamma0 + z.gamma_d + z.pump;
    const double expected = std::sqrt(cav.g * cav.g - std::pow((cav.kappa - gx) / 4.0, 2));
    CHECK(refined_peak(s, peaks[1]) == doctest::Approx(expected).epsilon(0.005));
    CHECK(refined_peak(s, peaks[0]) == doctest::Approx(-expected).epsilon(0.005));
}

TEST_CASE("far-detuned mode spectrum shows the dot line and the mode line") {
    // phonon-free blue mode first: pins the sign convention of the transform
    const FrequencyGrid blue_grid(units::rad_per_ps(-0.5), units::rad_per_ps(1.5), 1601);
    const Spectrum blue = coupled_mode_spectrum(
        Liouvillian{lcav(1.0, 180.0, 100.0), bath_off(), dot_rates(5.0, 55.0, 0.1)}, blue_grid);
    auto peaks = maxima_of(blue, 0.001);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(units::meV(refined_peak(blue, peaks[0]))) < 0.05);
    CHECK(units::meV(refined_peak(blue, peaks[1])) == doctest::Approx(1.0).epsilon(0.05));

    // phonon-assisted feeding of a red mode two linewidths away
    const FrequencyGrid grid(units::rad_per_ps(-3.0), units::rad_per_ps(1.0), 1601);
    const Spectrum s = coupled_mode_spectrum(
        Liouvillian{lcav(-2.0, 180.0, 100.0), bath_at(4.0), dot_rates(5.0, 55.0, 0.1)}, grid);
    peaks = maxima_of(s, 0.001);
    REQUIRE(peaks.size() == 2);
    CHECK(units::meV(refined_peak(s, peaks[0])) == doctest::Approx(-2.0).epsilon(0.05));
    CHECK(std::abs(units::meV(refined_peak(s, peaks[1]))) < 0.05);
}

TEST_CASE("projected dot picture tracks the mode picture at moderate coupling") {
    const ZplRates z = dot_rates(5.0, 55.0, 0.1);
    const PhononBath b = bath_at(4.0);

    // phonon-free check first: the two pictures differ only by the filter
    const FrequencyGrid jc_grid(units::rad_per_ps(-0.25), units::rad_per_ps(0.25), 1001);
    const Liouvillian bare{lcav(0.0, 65.0, 50.0), bath_off(), z};
    CHECK(max_abs_diff(green_function_spectrum(bare, jc_grid),
                       coupled_mode_spectrum(bare, jc_grid)) < 0.01);

    const FrequencyGrid grid(units::rad_per_ps(-0.25), units::rad_per_ps(0.25), 1001);
    const Liouvillian gen{lcav(0.0, 65.0, 50.0), b, z};
    CHECK(max_abs_diff(green_function_spectrum(gen, grid), coupled_mode_spectrum(gen, grid)) <
          0.05);
}

TEST_CASE("projected dot picture grows a spurious center peak at strong coupling") {
    const ZplRates z = dot_rates(5.0, 55.0, 0.1);
    const FrequencyGrid grid(units::rad_per_ps(-0.35), units::rad_per_ps(0.35), 1401);
    const Liouvillian gen{lcav(0.0, 65.0, 100.0), bath_at(4.0), z};
    const Spectrum projected = green_function_spectrum(gen, grid);
    const Spectrum direct = coupled_mode_spectrum(gen, grid);
    CHECK(maxima_of(projected).size() == 3);
    CHECK(maxima_of(direct).size() == 2);
}

TEST_CASE("inverted-dot emission matches the two-mode amplitude model") {
    const LorentzianCavity cav = lcav(0.0, 65.0, 100.0);
    const ZplRates z = dot_rates(5.0, 0.0, 0.0);
    const FrequencyGrid grid(units::rad_per_ps(-0.4), units::rad_per_ps(0.4), 1601);
    const Spectrum s = inverted_atom_spectrum(Liouvillian{cav, bath_off(), z}, grid);

    // amplitude poles of the coupled dot-mode pair
    const cplx half_sum = 0.5 * cplx(0.5 * (z.gamma0 + cav.kappa), cav.omega_c);
    const cplx half_diff = 0.5 * cplx(0.5 * (cav.kappa - z.gamma0), cav.omega_c);
    const cplx root = std::sqrt(half_diff * half_diff - cplx(cav.g * cav.g, 0.0));
    const cplx lp = -half_sum + root, lm = -half_sum - root;
    Spectrum oracle{grid, std::vector<double>(grid.n, 0.0)};
    for (std::size_t i = 0; i < grid.n; ++i) {
        const cplx d{0.0, grid[i]};
        oracle.values[i] = std::norm(1.0 / (lp + d) - 1.0 / (lm + d));
    }
    oracle.normalize_peak();
    CHECK(max_abs_diff(s, oracle) < 0.01);

    const Liouvillian pumped{cav, bath_off(), dot_rates(5.0, 0.0, 0.1)};
    CHECK_THROWS_AS(inverted_atom_spectrum(pumped, grid), RangeError);
}

TEST_CASE("inverted dot reproduces weak pumping and departs from hard pumping") {
    const LorentzianCavity cav = lcav(1.0, 65.0, 100.0);
    const PhononBath b = bath_at(4.0);
    const FrequencyGrid grid(units::rad_per_ps(-0.5), units::rad_per_ps(1.5), 1201);
    const Liouvillian free_decay{cav, b, dot_rates(5.0, 55.0, 0.0)};
    const Spectrum inverted = inverted_atom_spectrum(free_decay, grid);

    const Liouvillian::Matrix s_op = Liouvillian::lowering_op();
    const Liouvillian weak{cav, b, dot_rates(5.0, 55.0, 0.07)};
    const double n_weak = (s_op.adjoint() * s_op * steady_state(weak)).trace().real();
    CHECK(n_weak > 0.005);
    CHECK(n_weak < 0.02);
    CHECK(max_abs_diff(coupled_mode_spectrum(weak, grid), inverted) < 0.02);

    const Liouvillian hard{cav, b, dot_rates(5.0, 55.0, 1.5)};
    const double n_hard = (s_op.adjoint() * s_op * steady_state(hard)).trace().real();
    CHECK(n_hard > 0.1);
    CHECK(max_abs_diff(coupled_mode_spectrum(hard, grid), inverted) > 0.02);
}

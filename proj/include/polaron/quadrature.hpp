#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "polaron/grid.hpp"

namespace polaron::quad {

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    std::size_t max_intervals = 40000;
};

// Globally adaptive Gauss-Kronrod 7/15 on [a,b]. `breaks` seeds panel edges
// (band edges, oscillation anchors); values outside (a,b) are ignored.
cplx integrate(const std::function<cplx(double)>& f, double a, double b,
               const Options& opt = {}, const std::vector<double>& breaks = {});

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const Options& opt = {}, const std::vector<double>& breaks = {});

// ∫_T^∞ e^{-i delta tau} / tau^2 dtau, T > 0. Closed form via sine/cosine integrals.
cplx algebraic_tail_transform(double delta, double T);

// Cauchy principal value ∫_a^b f(w)/(w-x) dw with a < x < b, via the
// subtracted-singularity form plus the exact log term for the constant part.
double principal_value(const std::function<double(double)>& f, double a, double b, double x,
                       const Options& opt = {}, std::vector<double> breaks = {});

// Sine and cosine integrals Si(x), Ci(x) for x > 0 (series + asymptotic).
double sine_integral(double x);
double cosine_integral(double x);

struct HalfLineResult {
    cplx value;
    double cutoff = 0.0;      // ps actually integrated
    bool tail_added = false;  // algebraic c/tau^2 correction applied
};

// ∫_0^∞ k(tau) e^{-i delta tau} dtau for kernels that decay on the phonon
// correlation scale apart from an algebraic ~1/tau^2 remnant. The cutoff is
// the first tau where |k| < 1e-10 of its peak; if that never happens inside
// `hard_cap`, integration stops there and the fitted algebraic tail is added.
// Throws SlowDecay when the kernel at the cap is too large for the tail model.
HalfLineResult half_line_kernel(const std::function<cplx(double)>& kernel, double delta,
                                double rel_tol = 1e-8, double hard_cap = 100.0);

}  // namespace polaron::quad

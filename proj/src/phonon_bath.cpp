#include "polaron/phonon_bath.hpp"

#include <cmath>

#include "polaron/errors.hpp"
#include "polaron/parallel.hpp"
#include "polaron/quadrature.hpp"
#include "polaron/units.hpp"

namespace polaron {
namespace {

constexpr double pi = 3.14159265358979323846;

// D(x) = e^{-x^2} ∫_0^x e^{t^2} dt via the sine representation for moderate x
// and the asymptotic series beyond; both branches good to ~1e-13.
double dawson(double x) {
    if (x < 0.0) return -dawson(-x);
    if (x == 0.0) return 0.0;
    if (x < 8.0) {
        quad::Options opt;
        opt.rel_tol = 1e-13;
        opt.abs_tol = 1e-16;
        std::vector<double> breaks;
        const double step = pi / std::max(1.0, x);
        for (double t = step; t < 14.0; t += step) breaks.push_back(t);
        return 0.5 * quad::integrate_real(
                         [x](double t) { return std::exp(-0.25 * t * t) * std::sin(x * t); }, 0.0,
                         14.0, opt, breaks);
    }
    const double inv2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 40; ++k) {
        sum += term;
        const double next = term * (2.0 * k + 1.0) * inv2;
        if (next < 1e-17) break;
        term = next;
    }
    return sum / (2.0 * x);
}

}  // namespace

PhononBath::PhononBath(const PhononBathParams& p, double tau_max) : p_(p) {
    if (p.alpha_ps2 < 0.0) throw RangeError("phonon coupling must be non-negative");
    if (!(p.omega_b_meV > 0.0)) throw RangeError("phonon cutoff must be positive");
    if (p.temperature_K < 0.0) throw RangeError("temperature must be non-negative");
    if (!(tau_max > 1.0)) throw RangeError("phonon table must cover at least 1 ps");
    omega_b_ = units::rad_per_ps(p.omega_b_meV);
    tau_max_ = tau_max;

    const double a = omega_b_;
    const double alpha = p.alpha_ps2;
    phi0_ = alpha * a * a;  // zero-T value; thermal part added below
    shift_ = alpha * a * a * a * std::sqrt(pi / 2.0);

    dtau_ = 0.01;
    const std::size_t n = static_cast<std::size_t>(std::ceil(tau_max_ / dtau_)) + 1;
    tab_.assign(n, cplx{0.0, 0.0});
    dtab_.assign(n, cplx{0.0, 0.0});

    // Im phi is temperature independent and closed form:
    //   Im phi = -alpha a^3 sqrt(pi/2) tau e^{-a^2 tau^2 / 2}
    const double im_c = -alpha * a * a * a * std::sqrt(pi / 2.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = dtau_ * static_cast<double>(j);
        const double e = std::exp(-0.5 * a * a * t * t);
        tab_[j].imag(im_c * t * e);
        dtab_[j].imag(im_c * (1.0 - a * a * t * t) * e);
    }

    cold_ = (p.temperature_K == 0.0);
    if (!cold_) {
        // Thermal weight adds ~ alpha pi^2 / (6 c^2) to phi0. Once that is below
        // double noise the quadrature below would only burn memory resolving a
        // dead pole strip, so sub-microkelvin baths take the closed cold form.
        const double cc = units::hbar_meV_ps / (2.0 * units::kB_meV_per_K * p.temperature_K);
        cold_ = alpha * pi * pi / (6.0 * cc * cc) < 1e-12;
    }
    if (cold_) {
        // Re phi = alpha [a^2 - sqrt(2) a^3 tau D(a tau / sqrt 2)]
        par::parallel_for(n, [&](std::size_t j) {
            const double t = dtau_ * static_cast<double>(j);
            const double x = a * t / std::sqrt(2.0);
            const double D = dawson(x);
            tab_[j].real(alpha * (a * a - std::sqrt(2.0) * a * a * a * t * D));
            // dD/dx = 1 - 2xD
            const double dD = 1.0 - 2.0 * x * D;
            dtab_[j].real(-alpha * std::sqrt(2.0) * a * a * a * (D + x * dD));
        });
    } else {
        // Re phi(tau) = ∫_0^∞ alpha w coth(c w) e^{-w^2/2a^2} cos(w tau) dw with
        // c = hbar/(2 kB T). The integrand extends to an even analytic function,
        // so a plain half-line trapezoid converges super-algebraically once the
        // step resolves both the Gaussian and the pole strip width pi/c.
        const double c = units::hbar_meV_ps / (2.0 * units::kB_meV_per_K * p.temperature_K);
        const double h =
            std::min({0.05, c / 3.0, 2.0 * pi / (tau_max_ + 33.0 * c / pi + 10.0)});
        const double w_hi = 8.0 * a;
        const std::size_t K = static_cast<std::size_t>(std::ceil(w_hi / h));
        std::vector<double> node_w(K + 1), node_f(K + 1);
        for (std::size_t k = 0; k <= K; ++k) {
            const double w = h * static_cast<double>(k);
            node_w[k] = w;
            const double cw = c * w;
            const double wcoth = (cw < 1e-6) ? (1.0 / c + c * w * w / 3.0) : w / std::tanh(cw);
            node_f[k] = alpha * wcoth * std::exp(-0.5 * w * w / (a * a)) * h;
        }
        node_f[0] *= 0.5;
        node_f[K] *= 0.5;
        phi0_ = 0.0;
        for (std::size_t k = 0; k <= K; ++k) phi0_ += node_f[k];

        par::parallel_for(n, [&](std::size_t j) {
            const double t = dtau_ * static_cast<double>(j);
            double re = 0.0, dre = 0.0;
            for (std::size_t k = 0; k <= K; ++k) {
                re += node_f[k] * std::cos(node_w[k] * t);
                dre -= node_f[k] * node_w[k] * std::sin(node_w[k] * t);
            }
            tab_[j].real(re);
            dtab_[j].real(dre);
        });
    }
    bmean_ = std::exp(-0.5 * phi0_);
}

double PhononBath::spectral_density(double omega) const {
    if (omega < 0.0) throw NegativeFrequency("spectral density evaluated at negative frequency");
    return p_.alpha_ps2 * omega * omega * omega *
           std::exp(-0.5 * omega * omega / (omega_b_ * omega_b_));
}

double PhononBath::occupancy(double omega) const {
    if (omega <= 0.0) throw NegativeFrequency("occupancy needs a positive mode frequency");
    if (p_.temperature_K == 0.0) return 0.0;
    const double x = units::thermal_exponent(omega, p_.temperature_K);
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

cplx PhononBath::phi(double tau) const {
    if (tau < 0.0) return std::conj(phi(-tau));
    if (tau >= tau_max_) {
        // Finite T: exponentially dead by here. Cold: algebraic remnant.
        if (!cold_) return {0.0, 0.0};
        return {-p_.alpha_ps2 / (tau * tau), 0.0};
    }
    const double s = tau / dtau_;
    std::size_t j = static_cast<std::size_t>(s);
    if (j + 1 >= tab_.size()) j = tab_.size() - 2;
    const double u = s - static_cast<double>(j);
    // cubic Hermite on [j, j+1]
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    return h00 * tab_[j] + h01 * tab_[j + 1] + dtau_ * (h10 * dtab_[j] + h11 * dtab_[j + 1]);
}

cplx PhononBath::kernel(PhononKernel k, double tau) const {
    const cplx f = phi(tau);
    const double b2 = bmean_ * bmean_;
    switch (k) {
        case PhononKernel::ExpPlus:
            return std::exp(f) - 1.0;
        case PhononKernel::ExpMinus:
            return std::exp(-f) - 1.0;
        case PhononKernel::Cosh:
            return b2 * (0.5 * (std::exp(f) + std::exp(-f)) - 1.0);
        case PhononKernel::Sinh:
            return b2 * 0.5 * (std::exp(f) - std::exp(-f));
    }
    throw InputError("unknown phonon kernel");
}

cplx PhononBath::transform(PhononKernel k, double delta) const {
    const auto r = quad::half_line_kernel([this, k](double t) { return kernel(k, t); }, delta,
                                          1e-9, tau_max_);
    return r.value;
}

ComplexSpectrum PhononBath::transform_grid(PhononKernel k, const FrequencyGrid& grid) const {
    // Trapezoid over the table range plus the fitted algebraic tail. The
    // half-Fourier window is not used here: the tail handoff needs the raw
    // kernel value at the cutoff.
    const double dt = dtau_;
    const std::size_t n = tab_.size();
    std::vector<cplx> kv(n);
    for (std::size_t j = 0; j < n; ++j) kv[j] = kernel(k, dt * static_cast<double>(j));
    const cplx c_tail = kv[n - 1] * tau_max_ * tau_max_;

    ComplexSpectrum out;
    out.grid = grid;
    out.values.assign(grid.n, cplx{0.0, 0.0});
    par::parallel_for(grid.n, [&](std::size_t i) {
        const double delta = grid[i];
        const cplx rot = std::exp(cplx{0.0, -delta * dt});
        cplx phase{1.0, 0.0};
        cplx acc = 0.5 * kv[0];
        for (std::size_t j = 1; j + 1 < n; ++j) {
            phase *= rot;
            acc += kv[j] * phase;
        }
        phase *= rot;
        acc += 0.5 * kv[n - 1] * phase;
        out.values[i] = acc * dt + c_tail * quad::algebraic_tail_transform(delta, tau_max_);
    });
    return out;
}

KernelTransformTable::KernelTransformTable(const PhononBath& bath, PhononKernel k,
                                           double delta_max, std::size_t n) {
    if (!(delta_max > 0.0)) throw RangeError("kernel table needs a positive frequency range");
    if (n < 5) throw RangeError("kernel table needs at least five nodes");
    const FrequencyGrid grid{-delta_max, delta_max, n};
    val_ = bath.transform_grid(k, grid).values;
    d0_ = -delta_max;
    dd_ = grid.step();

    // Node derivatives for the Hermite segments, fourth order in the interior.
    der_.assign(n, cplx{0.0, 0.0});
    const double h = dd_;
    der_[0] = (val_[1] - val_[0]) / h;
    der_[1] = (val_[2] - val_[0]) / (2.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
        der_[i] = (8.0 * (val_[i + 1] - val_[i - 1]) - (val_[i + 2] - val_[i - 2])) / (12.0 * h);
    der_[n - 2] = (val_[n - 1] - val_[n - 3]) / (2.0 * h);
    der_[n - 1] = (val_[n - 1] - val_[n - 2]) / h;

    // Large-|delta| continuation from integrating by parts twice:
    // K(delta) -> -i k(0)/delta - k'(0)/delta^2. Both seed values have
    // closed forms through phi(0) and phi'(0) = -i * polaron_shift.
    const double f0 = bath.phi0();
    const double shift = bath.polaron_shift();
    const double b2 = std::exp(-f0);  // <B>^2
    switch (k) {
        case PhononKernel::ExpPlus:
            k0_ = cplx{std::exp(f0) - 1.0, 0.0};
            dk0_ = cplx{0.0, -shift * std::exp(f0)};
            break;
        case PhononKernel::ExpMinus:
            k0_ = cplx{std::exp(-f0) - 1.0, 0.0};
            dk0_ = cplx{0.0, shift * std::exp(-f0)};
            break;
        case PhononKernel::Cosh:
            k0_ = cplx{b2 * (std::cosh(f0) - 1.0), 0.0};
            dk0_ = cplx{0.0, -shift * b2 * std::sinh(f0)};
            break;
        case PhononKernel::Sinh:
            k0_ = cplx{b2 * std::sinh(f0), 0.0};
            dk0_ = cplx{0.0, -shift * b2 * std::cosh(f0)};
            break;
    }
}

cplx KernelTransformTable::operator()(double delta) const {
    const double hi = -d0_;
    if (delta < d0_ || delta > hi) {
        const cplx i{0.0, 1.0};
        return -i * k0_ / delta - dk0_ / (delta * delta);
    }
    const double s = (delta - d0_) / dd_;
    std::size_t j = static_cast<std::size_t>(s);
    if (j + 1 >= val_.size()) j = val_.size() - 2;
    const double t = s - static_cast<double>(j);
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * val_[j] + h10 * dd_ * der_[j] + h01 * val_[j + 1] + h11 * dd_ * der_[j + 1];
}

DiscretizedModes discretize_modes(const PhononBath& bath, std::size_t n_modes,
                                  double omega_max) {
    if (n_modes == 0) throw InsufficientModes("mode discretization needs at least one mode");
    if (!(omega_max > 0.0)) throw RangeError("mode discretization needs a positive band");
    DiscretizedModes m;
    m.omega.resize(n_modes);
    m.lambda.resize(n_modes);
    const double dw = omega_max / static_cast<double>(n_modes);
    for (std::size_t q = 0; q < n_modes; ++q) {
        const double w = dw * (static_cast<double>(q) + 0.5);
        m.omega[q] = w;
        m.lambda[q] = std::sqrt(bath.spectral_density(w) * dw);
    }
    return m;
}

}  // namespace polaron

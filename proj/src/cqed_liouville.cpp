#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <vector>

#include "polaron/cqed_me.hpp"
#include "polaron/errors.hpp"
#include "polaron/fourier.hpp"

namespace polaron {

namespace {

using Matrix = Liouvillian::Matrix;
using Vec = Liouvillian::Vec;
using Super = Liouvillian::Super;
constexpr int kDim = Liouvillian::dim;
constexpr cplx kI{0.0, 1.0};

// vec(A rho B) = sandwich(A, B) vec(rho), column-major stacking.
Super sandwich(const Matrix& a, const Matrix& b) {
    Super out;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            out.block<kDim, kDim>(kDim * i, kDim * j) = b(j, i) * a;
    return out;
}

Super dissipator(const Matrix& c, double rate) {
    const Matrix cd = c.adjoint();
    const Matrix cdc = cd * c;
    const Matrix id = Matrix::Identity();
    return rate * (sandwich(c, cd) - 0.5 * sandwich(cdc, id) - 0.5 * sandwich(id, cdc));
}

// -([X, Y rho] + h.c.) for Hermitian X.
Super relaxation_term(const Matrix& x, const Matrix& y) {
    const Matrix id = Matrix::Identity();
    const Matrix yd = y.adjoint();
    return -(sandwich(x * y, id) - sandwich(y, x) + sandwich(id, yd * x) - sandwich(x, yd));
}

Vec to_vec(const Matrix& m) { return Eigen::Map<const Vec>(m.data()); }

Matrix to_matrix(const Vec& v) { return Eigen::Map<const Matrix>(v.data()); }

// Weights w with w . vec(rho) = Tr[A rho].
Vec trace_weights(const Matrix& a) {
    Vec w;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) w[kDim * i + j] = a(i, j);
    return w;
}

void rk4_step(const Super& gen, Vec& v, double dt) {
    const Vec k1 = gen * v;
    const Vec k2 = gen * (v + 0.5 * dt * k1).eval();
    const Vec k3 = gen * (v + 0.5 * dt * k2).eval();
    const Vec k4 = gen * (v + dt * k3).eval();
    v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Matrix Liouvillian::photon_op() {
    Matrix a = Matrix::Zero();
    const double r2 = std::sqrt(2.0);
    a(0, 1) = 1.0;
    a(1, 2) = r2;
    a(3, 4) = 1.0;
    a(4, 5) = r2;
    return a;
}

Matrix Liouvillian::lowering_op() {
    Matrix s = Matrix::Zero();
    s(0, 3) = 1.0;
    s(1, 4) = 1.0;
    s(2, 5) = 1.0;
    return s;
}

Matrix Liouvillian::vacuum() {
    Matrix rho = Matrix::Zero();
    rho(0, 0) = 1.0;
    return rho;
}

Matrix Liouvillian::excited() {
    Matrix rho = Matrix::Zero();
    rho(3, 3) = 1.0;
    return rho;
}

Liouvillian::Liouvillian(const LorentzianCavity& cav, const PhononBath& bath, const ZplRates& z)
    : cav_(cav), bath_(bath), z_(z) {
    if (cav.g < 0.0) throw RangeError("coupling g must be nonnegative");
    if (cav.kappa < 0.0) throw RangeError("mode width kappa must be nonnegative");
    if (z.gamma0 < 0.0 || z.gamma_d < 0.0 || z.pump < 0.0)
        throw RangeError("line rates must be nonnegative");

    const Matrix a = photon_op();
    const Matrix s = lowering_op();
    const Matrix ad = a.adjoint();
    const Matrix sp = s.adjoint();
    const double gp = bath.mean_displacement() * cav.g;
    const Matrix swap = sp * a + ad * s;
    const Matrix h = cav.omega_c * (ad * a) + gp * swap;

    gen_ = -kI * (sandwich(h, Matrix::Identity()) - sandwich(Matrix::Identity(), h));
    gen_ += dissipator(a, cav.kappa);
    gen_ += dissipator(s, z.gamma0);
    gen_ += dissipator(sp * s, z.gamma_d);
    gen_ += dissipator(sp, z.pump);

    double bohr_span = 0.0;
    if (bath.phi0() > 0.0 && cav.g > 0.0) {
        // Rotate into the dressed basis, weight every matrix element by the
        // one-sided kernel transform at its Bohr frequency, rotate back.
        const Eigen::Matrix<double, kDim, kDim> h_real = h.real();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, kDim, kDim>> es(h_real);
        const Matrix basis = es.eigenvectors().cast<cplx>();
        const Eigen::Matrix<double, kDim, 1> level = es.eigenvalues();
        bohr_span = level.maxCoeff() - level.minCoeff();

        const Matrix x_even = cav.g * swap;
        const Matrix x_odd = kI * cav.g * (sp * a - ad * s);
        std::map<long long, cplx> cache[2];
        const PhononKernel kinds[2] = {PhononKernel::Cosh, PhononKernel::Sinh};
        const Matrix* pairs[2] = {&x_even, &x_odd};
        for (int m = 0; m < 2; ++m) {
            const Matrix xt = basis.transpose() * (*pairs[m]) * basis;
            Matrix yt;
            for (int i = 0; i < kDim; ++i) {
                for (int j = 0; j < kDim; ++j) {
                    const double bohr = level[i] - level[j];
                    const long long key = std::llround(bohr * 1e9);
                    auto it = cache[m].find(key);
                    if (it == cache[m].end())
                        it = cache[m].emplace(key, bath.transform(kinds[m], bohr)).first;
                    yt(i, j) = xt(i, j) * it->second;
                }
            }
            const Matrix y = basis * yt * basis.transpose();
            gen_ += relaxation_term(*pairs[m], y);
        }
    } else {
        bohr_span = std::abs(cav.omega_c) * 2.0 + 4.0 * gp;
    }

    const double scale =
        bohr_span + std::abs(cav.omega_c) + cav.kappa + z.gamma0 + z.gamma_d + z.pump;
    dt_ = std::min(0.02, 0.5 / std::max(scale, 0.025));
}

Matrix Liouvillian::apply(const Matrix& rho) const { return to_matrix(gen_ * to_vec(rho)); }

Liouvillian build_liouvillian(const LorentzianCavity& cav, const PhononBath& bath,
                              const ZplRates& z) {
    return Liouvillian{cav, bath, z};
}

Matrix steady_state(const Liouvillian& gen, double residual_tol, double t_cap_ps) {
    const Super& op = gen.matrix();
    const double dt = gen.time_step();
    const auto chunk = static_cast<std::size_t>(std::ceil(10.0 / dt));
    Vec v = to_vec(Liouvillian::vacuum());
    double t = 0.0;
    while (true) {
        const double residual = (op * v).cwiseAbs().maxCoeff();
        if (residual < residual_tol) return to_matrix(v);
        if (t >= t_cap_ps)
            throw NoSteadyState("density matrix still drifting at the propagation cap");
        for (std::size_t i = 0; i < chunk; ++i) rk4_step(op, v, dt);
        t += dt * static_cast<double>(chunk);
        if (!v.allFinite()) throw NonFiniteState("density matrix diverged");
    }
}

CorrelationTrace two_time_correlation(const Liouvillian& gen, const Matrix& observe,
                                      const Matrix& seed_op, const Matrix& state,
                                      double tau_cap_ps) {
    const Super& op = gen.matrix();
    const double dt = gen.time_step();
    const Vec w = trace_weights(observe);
    Vec v = to_vec((seed_op * state).eval());

    CorrelationTrace trace{dt, {}};
    const auto chunk = static_cast<std::size_t>(std::ceil(50.0 / dt));
    trace.values.reserve(4 * chunk);
    double peak = 0.0;
    trace.values.push_back((w.transpose() * v)(0));
    while (true) {
        double chunk_peak = 0.0;
        for (std::size_t i = 0; i < chunk; ++i) {
            rk4_step(op, v, dt);
            const cplx c = (w.transpose() * v)(0);
            trace.values.push_back(c);
            chunk_peak = std::max(chunk_peak, std::abs(c));
        }
        if (!v.allFinite()) throw NonFiniteState("regression state diverged");
        peak = std::max(peak, chunk_peak);
        if (chunk_peak <= 1e-4 * peak) return trace;
        if (trace.tau_end() >= tau_cap_ps)
            throw SlowDecay("two-time correlation not decayed at the time cap");
    }
}

Spectrum coupled_mode_spectrum(const Liouvillian& gen, const FrequencyGrid& grid) {
    const Matrix rho = steady_state(gen);
    const Matrix a = Liouvillian::photon_op();
    const CorrelationTrace g = two_time_correlation(gen, a.adjoint(), a, rho);
    Spectrum s = half_fourier(g.conjugated(), grid);
    s.normalize_peak();
    return s;
}

Spectrum green_function_spectrum(const Liouvillian& gen, const FrequencyGrid& grid) {
    const Matrix rho = steady_state(gen);
    const Matrix s_op = Liouvillian::lowering_op();
    CorrelationTrace g = two_time_correlation(gen, s_op.adjoint(), s_op, rho);

    // Undo the frame displacement: the lab-frame dot correlator carries the
    // full sideband factor <B>^2 e^{phi(tau)}.
    const PhononBath& bath = gen.bath();
    const double b2 = bath.mean_displacement() * bath.mean_displacement();
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double tau = g.dt * static_cast<double>(i);
        g.values[i] *= b2 * (bath.kernel(PhononKernel::ExpPlus, tau) + 1.0);
    }

    Spectrum s = half_fourier(g.conjugated(), grid);
    const Reservoir filter{gen.cavity()};
    for (std::size_t i = 0; i < grid.n; ++i) s.values[i] *= propagator(grid[i], filter);
    s.normalize_peak();
    return s;
}

Spectrum inverted_atom_spectrum(const Liouvillian& gen, const FrequencyGrid& grid) {
    if (gen.rates().pump != 0.0)
        throw RangeError("inverted-atom decay requires the pump off");
    const Super& op = gen.matrix();
    const double dt = gen.time_step();
    const Matrix a = Liouvillian::photon_op();
    const Matrix s_op = Liouvillian::lowering_op();
    const Vec excitation =
        trace_weights((s_op.adjoint() * s_op + a.adjoint() * a).eval());

    Vec v = to_vec(Liouvillian::excited());
    Vec accum = Vec::Zero();
    const double start = (excitation.transpose() * v)(0).real();
    constexpr double cap_ps = 200000.0;
    double t = 0.0;
    while (true) {
        const Vec before = v;
        rk4_step(op, v, dt);
        accum += (0.5 * dt) * (before + v);
        t += dt;
        const double left = (excitation.transpose() * v)(0).real();
        if (left <= 1e-12 * start) break;
        if (t >= cap_ps) throw SlowDecay("inverted dot not emptied at the time cap");
        if (!v.allFinite()) throw NonFiniteState("decay trajectory diverged");
    }

    // The time-integrated emission only needs one regression pass: seed it
    // with a times the time integral of the trajectory.
    const CorrelationTrace g = two_time_correlation(gen, a.adjoint(), a, to_matrix(accum));
    Spectrum s = half_fourier(g.conjugated(), grid);
    s.normalize_peak();
    return s;
}

}  // namespace polaron

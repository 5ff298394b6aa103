#include "polaron/correlation_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

#include "polaron/errors.hpp"
#include "polaron/fourier.hpp"
#include "polaron/parallel.hpp"

namespace polaron {

namespace {

constexpr cplx kI{0.0, 1.0};

// Packed upper triangle, row-major: (q, m) with q <= m.
inline std::size_t tri(std::size_t q, std::size_t m, std::size_t n) {
    return q * n - q * (q + 1) / 2 + m;
}

inline cplx sym_at(const std::vector<cplx>& b, std::size_t q, std::size_t m, std::size_t n) {
    return q <= m ? b[tri(q, m, n)] : b[tri(m, q, n)];
}

void resize_state(HierarchyState& y, std::size_t n) {
    const std::size_t p = n * (n + 1) / 2;
    y.s = y.a = cplx{};
    y.sb.assign(n, cplx{});
    y.sbd.assign(n, cplx{});
    y.ab.assign(n, cplx{});
    y.abd.assign(n, cplx{});
    y.sbb.assign(p, cplx{});
    y.sbdbd.assign(p, cplx{});
    y.abb.assign(p, cplx{});
    y.abdbd.assign(p, cplx{});
    y.sbbd.assign(n * n, cplx{});
    y.abbd.assign(n * n, cplx{});
}

void axpy_vec(double c, const std::vector<cplx>& x, std::vector<cplx>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

}  // namespace

void HierarchyState::scale_add(double c, const HierarchyState& k) {
    s += c * k.s;
    a += c * k.a;
    axpy_vec(c, k.sb, sb);
    axpy_vec(c, k.sbd, sbd);
    axpy_vec(c, k.ab, ab);
    axpy_vec(c, k.abd, abd);
    axpy_vec(c, k.sbb, sbb);
    axpy_vec(c, k.sbdbd, sbdbd);
    axpy_vec(c, k.abb, abb);
    axpy_vec(c, k.abdbd, abdbd);
    axpy_vec(c, k.sbbd, sbbd);
    axpy_vec(c, k.abbd, abbd);
}

ModeHierarchy::ModeHierarchy(const LorentzianCavity& cav, const PhononBath& bath,
                             const ZplRates& z, const HierarchyParams& p)
    : n_(p.n_modes), par_(p), cav_(cav), z_(z) {
    if (p.n_modes < 10)
        throw InsufficientModes("mode hierarchy needs at least 10 phonon modes");
    if (!(p.dt > 0.0) || !(p.omega_max > 0.0) || !(p.tau_end > 0.0) || !(p.settle_cap > 0.0))
        throw RangeError("hierarchy step, window, horizon, and cap must be positive");
    if (cav.kappa < 0.0 || cav.g < 0.0)
        throw RangeError("mode width and coupling cannot be negative");
    if (z.gamma0 < 0.0 || z.gamma_d < 0.0 || z.pump < 0.0)
        throw RangeError("dot rates cannot be negative");

    const DiscretizedModes modes = discretize_modes(bath, n_, p.omega_max);
    w_ = modes.omega;
    lam_ = modes.lambda;
    nocc_.resize(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        nocc_[q] = bath.occupancy(w_[q]);
        shift_ += lam_[q] * lam_[q] / w_[q];
    }
    dcx_ = cav.omega_c - shift_;
    gamma1_ = 0.5 * (z.gamma0 + z.gamma_d + z.pump);

    // Fastest coherence in the set rotates at two window widths plus the mode
    // offset; past the RK4 stability edge the propagation is garbage.
    if (p.dt * (2.0 * p.omega_max + std::abs(dcx_) + cav.kappa) > 2.5)
        throw RangeError("time step too coarse for the spectral window");
}

HierarchyState ModeHierarchy::zero_state() const {
    HierarchyState y;
    resize_state(y, n_);
    return y;
}

void ModeHierarchy::derivative(const HierarchyState& y, HierarchyState& dy) const {
    const std::size_t n = n_;
    const cplx ig = kI * cav_.g;
    const double hk = 0.5 * cav_.kappa;
    const double g1 = gamma1_;

    cplx acc{};
    for (std::size_t q = 0; q < n; ++q) acc += lam_[q] * (y.sb[q] + y.sbd[q]);
    dy.s = -g1 * y.s - ig * y.a - kI * acc;
    dy.a = -(kI * dcx_ + hk) * y.a - ig * y.s;

    // One region covers both the vector rows (id < n) and the pair-block rows
    // (id >= n); both read the same input state, so they can run side by side.
    par::parallel_for(2 * n, [&](std::size_t id) {
        if (id < n) {
            const std::size_t q = id;
            cplx rs{}, rsd{};
            for (std::size_t m = 0; m < n; ++m) {
                rs += lam_[m] * (sym_at(y.sbb, q, m, n) + y.sbbd[q * n + m]);
                rsd += lam_[m] * (y.sbbd[m * n + q] + sym_at(y.sbdbd, q, m, n));
            }
            dy.sb[q] = -(kI * w_[q] + g1) * y.sb[q] - ig * y.ab[q] -
                       kI * (lam_[q] * (nocc_[q] + 1.0) * y.s + rs);
            dy.sbd[q] = (kI * w_[q] - g1) * y.sbd[q] - ig * y.abd[q] -
                        kI * (lam_[q] * nocc_[q] * y.s + rsd);
            dy.ab[q] = -(kI * (dcx_ + w_[q]) + hk) * y.ab[q] - ig * y.sb[q];
            dy.abd[q] = -(kI * (dcx_ - w_[q]) + hk) * y.abd[q] - ig * y.sbd[q];
            return;
        }
        const std::size_t q = id - n;
        for (std::size_t m = q; m < n; ++m) {
            const std::size_t k = tri(q, m, n);
            dy.sbb[k] = -(kI * (w_[q] + w_[m]) + g1) * y.sbb[k] - ig * y.abb[k] -
                        kI * (lam_[m] * (nocc_[m] + 1.0) * y.sb[q] +
                              lam_[q] * (nocc_[q] + 1.0) * y.sb[m]);
            dy.sbdbd[k] = (kI * (w_[q] + w_[m]) - g1) * y.sbdbd[k] - ig * y.abdbd[k] -
                          kI * (lam_[m] * nocc_[m] * y.sbd[q] + lam_[q] * nocc_[q] * y.sbd[m]);
            dy.abb[k] = -(kI * (dcx_ + w_[q] + w_[m]) + hk) * y.abb[k] - ig * y.sbb[k];
            dy.abdbd[k] = -(kI * (dcx_ - w_[q] - w_[m]) + hk) * y.abdbd[k] - ig * y.sbdbd[k];
        }
        for (std::size_t m = 0; m < n; ++m) {
            const std::size_t f = q * n + m;
            dy.sbbd[f] = -(kI * (w_[q] - w_[m]) + g1) * y.sbbd[f] - ig * y.abbd[f] -
                         kI * (lam_[m] * nocc_[m] * y.sb[q] +
                               lam_[q] * (nocc_[q] + 1.0) * y.sbd[m]);
            dy.abbd[f] = -(kI * (dcx_ + w_[q] - w_[m]) + hk) * y.abbd[f] - ig * y.sbbd[f];
        }
    });
}

namespace {

struct Rk4Scratch {
    HierarchyState k1, k2, k3, k4, tmp;
};

void rk4_step(const ModeHierarchy& h, HierarchyState& y, double dt, Rk4Scratch& w) {
    h.derivative(y, w.k1);
    w.tmp = y;
    w.tmp.scale_add(0.5 * dt, w.k1);
    h.derivative(w.tmp, w.k2);
    w.tmp = y;
    w.tmp.scale_add(0.5 * dt, w.k2);
    h.derivative(w.tmp, w.k3);
    w.tmp = y;
    w.tmp.scale_add(dt, w.k3);
    h.derivative(w.tmp, w.k4);
    y.scale_add(dt / 6.0, w.k1);
    y.scale_add(dt / 3.0, w.k2);
    y.scale_add(dt / 3.0, w.k3);
    y.scale_add(dt / 6.0, w.k4);
}

}  // namespace

HierarchyState ModeHierarchy::propagate(HierarchyState y, double t_end) const {
    if (!(t_end >= 0.0)) throw RangeError("propagation horizon must be non-negative");
    const double dt = par_.dt;
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    Rk4Scratch w;
    w.k1 = w.k2 = w.k3 = w.k4 = w.tmp = zero_state();
    for (std::size_t i = 0; i < steps; ++i) rk4_step(*this, y, dt, w);
    return y;
}

namespace {

// Trace of one coherence component while the seeded state rings down,
// reported in the frame of the shifted line. Samples every `stride` steps;
// extends in chunks until the component has fallen four orders below its
// running peak (after min_horizon) or the cap trips.
enum class Component { Dot, Mode };

CorrelationTrace ring_down(const ModeHierarchy& h, HierarchyState y, Component c,
                           double min_horizon, double cap) {
    const double dt = h.params().dt;
    const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(0.01 / dt)));
    const double dt_store = dt * static_cast<double>(stride);
    const double shift = h.line_shift();

    CorrelationTrace trace;
    trace.dt = dt_store;
    Rk4Scratch w;
    w.k1 = w.k2 = w.k3 = w.k4 = w.tmp = h.zero_state();

    auto pick = [&](const HierarchyState& st) { return c == Component::Dot ? st.s : st.a; };
    trace.values.push_back(pick(y));
    double peak = std::abs(trace.values[0]);

    const auto chunk = static_cast<std::size_t>(std::ceil(25.0 / dt_store));
    std::size_t step = 0;
    for (;;) {
        for (std::size_t j = 0; j < chunk; ++j) {
            for (std::size_t k = 0; k < stride; ++k) rk4_step(h, y, dt, w);
            step += stride;
            const double t = dt * static_cast<double>(step);
            const cplx v = pick(y) * std::exp(cplx{0.0, -shift * t});
            trace.values.push_back(v);
            peak = std::max(peak, std::abs(v));
        }
        const double t = dt * static_cast<double>(step);
        if (!std::isfinite(peak) || !std::isfinite(std::abs(y.s)) ||
            !std::isfinite(std::abs(y.a)))
            throw NonFiniteState("mode hierarchy trace left the finite range");
        if (t >= min_horizon && std::abs(trace.values.back()) <= 1e-4 * peak) break;
        if (t >= cap)
            throw NonDecayingTrace("hierarchy correlation has not rung down within the cap");
    }
    return trace;
}

// Population sector driving the emission seeds: dot and mode occupations, the
// dot-mode cross moment, and their one- and two-phonon assists. Same
// truncation and packing rules as the coherence sector.
struct WState {
    cplx px{}, pc{}, qc{};                 // <s+s->, <a+a>, <s+a>
    std::vector<cplx> xb, cb, qb, qbd;     // one-phonon assists
    std::vector<cplx> xbb, cbb, qbb, qbdbd;  // packed symmetric pairs
    std::vector<cplx> xbbd, cbbd, qbbd;      // full pairs

    void resize(std::size_t n) {
        const std::size_t p = n * (n + 1) / 2;
        px = pc = qc = cplx{};
        xb.assign(n, cplx{});
        cb.assign(n, cplx{});
        qb.assign(n, cplx{});
        qbd.assign(n, cplx{});
        xbb.assign(p, cplx{});
        cbb.assign(p, cplx{});
        qbb.assign(p, cplx{});
        qbdbd.assign(p, cplx{});
        xbbd.assign(n * n, cplx{});
        cbbd.assign(n * n, cplx{});
        qbbd.assign(n * n, cplx{});
    }
    void scale_add(double c, const WState& k) {
        px += c * k.px;
        pc += c * k.pc;
        qc += c * k.qc;
        axpy_vec(c, k.xb, xb);
        axpy_vec(c, k.cb, cb);
        axpy_vec(c, k.qb, qb);
        axpy_vec(c, k.qbd, qbd);
        axpy_vec(c, k.xbb, xbb);
        axpy_vec(c, k.cbb, cbb);
        axpy_vec(c, k.qbb, qbb);
        axpy_vec(c, k.qbdbd, qbdbd);
        axpy_vec(c, k.xbbd, xbbd);
        axpy_vec(c, k.cbbd, cbbd);
        axpy_vec(c, k.qbbd, qbbd);
    }
};

struct WContext {
    const ModeHierarchy* h;
    std::size_t n;
    const std::vector<double>*w, *lam, *nocc;
    double dcx, g, kappa, gx, gq, pump;
    bool pumped;
};

WContext make_wctx(const ModeHierarchy& h, bool pumped) {
    WContext c{};
    c.h = &h;
    c.n = h.modes();
    c.dcx = h.cavity().omega_c - h.line_shift();
    c.g = h.cavity().g;
    c.kappa = h.cavity().kappa;
    const ZplRates& z = h.rates();
    c.gx = z.gamma0 + z.pump;                                // population decay of the dot
    c.gq = 0.5 * (z.pump + z.gamma0 + z.gamma_d + c.kappa);  // cross-moment decay
    c.pump = z.pump;
    c.pumped = pumped;
    return c;
}

}  // namespace

struct HierarchyDriver {
    static const std::vector<double>& w(const ModeHierarchy& h) { return h.w_; }
    static const std::vector<double>& lam(const ModeHierarchy& h) { return h.lam_; }
    static const std::vector<double>& nocc(const ModeHierarchy& h) { return h.nocc_; }
};

namespace {

void w_derivative(const WContext& c, const WState& y, WState& dy) {
    const std::size_t n = c.n;
    const std::vector<double>& w = HierarchyDriver::w(*c.h);
    const std::vector<double>& lam = HierarchyDriver::lam(*c.h);
    const std::vector<double>& nocc = HierarchyDriver::nocc(*c.h);
    const cplx ig = kI * c.g;

    dy.px = -c.gx * y.px + ig * (std::conj(y.qc) - y.qc) + (c.pumped ? c.pump : 0.0);
    dy.pc = -c.kappa * y.pc + ig * (y.qc - std::conj(y.qc));
    cplx acc{};
    for (std::size_t q = 0; q < n; ++q) acc += lam[q] * (y.qb[q] + y.qbd[q]);
    dy.qc = -(kI * c.dcx + c.gq) * y.qc + ig * (y.pc - y.px) + kI * acc;

    par::parallel_for(2 * n, [&](std::size_t id) {
        if (id < n) {
            const std::size_t q = id;
            cplx rb{}, rbd{};
            for (std::size_t m = 0; m < n; ++m) {
                rb += lam[m] * (sym_at(y.qbb, q, m, n) + y.qbbd[q * n + m]);
                rbd += lam[m] * (y.qbbd[m * n + q] + sym_at(y.qbdbd, q, m, n));
            }
            dy.xb[q] = -(kI * w[q] + c.gx) * y.xb[q] + ig * (std::conj(y.qbd[q]) - y.qb[q]) -
                       kI * lam[q] * y.px;
            dy.cb[q] = -(kI * w[q] + c.kappa) * y.cb[q] + ig * (y.qb[q] - std::conj(y.qbd[q]));
            dy.qb[q] = -(kI * (c.dcx + w[q]) + c.gq) * y.qb[q] + ig * (y.cb[q] - y.xb[q]) +
                       kI * (lam[q] * nocc[q] * y.qc + rb);
            dy.qbd[q] = -(kI * (c.dcx - w[q]) + c.gq) * y.qbd[q] +
                        ig * (std::conj(y.cb[q]) - std::conj(y.xb[q])) +
                        kI * (lam[q] * (nocc[q] + 1.0) * y.qc + rbd);
            return;
        }
        const std::size_t q = id - n;
        for (std::size_t m = q; m < n; ++m) {
            const std::size_t k = tri(q, m, n);
            dy.xbb[k] = -(kI * (w[q] + w[m]) + c.gx) * y.xbb[k] +
                        ig * (std::conj(y.qbdbd[k]) - y.qbb[k]) -
                        kI * (lam[q] * y.xb[m] + lam[m] * y.xb[q]);
            dy.cbb[k] = -(kI * (w[q] + w[m]) + c.kappa) * y.cbb[k] +
                        ig * (y.qbb[k] - std::conj(y.qbdbd[k]));
            dy.qbb[k] = -(kI * (c.dcx + w[q] + w[m]) + c.gq) * y.qbb[k] +
                        ig * (y.cbb[k] - y.xbb[k]) +
                        kI * (lam[m] * nocc[m] * y.qb[q] + lam[q] * nocc[q] * y.qb[m]);
            dy.qbdbd[k] = -(kI * (c.dcx - w[q] - w[m]) + c.gq) * y.qbdbd[k] +
                          ig * (std::conj(y.cbb[k]) - std::conj(y.xbb[k])) +
                          kI * (lam[q] * (nocc[q] + 1.0) * y.qbd[m] +
                                lam[m] * (nocc[m] + 1.0) * y.qbd[q]);
        }
        for (std::size_t m = 0; m < n; ++m) {
            const std::size_t f = q * n + m;
            dy.xbbd[f] = -(kI * (w[q] - w[m]) + c.gx) * y.xbbd[f] +
                         ig * (std::conj(y.qbbd[m * n + q]) - y.qbbd[f]) -
                         kI * lam[q] * std::conj(y.xb[m]) + kI * lam[m] * y.xb[q];
            dy.cbbd[f] = -(kI * (w[q] - w[m]) + c.kappa) * y.cbbd[f] +
                         ig * (y.qbbd[f] - std::conj(y.qbbd[m * n + q]));
            dy.qbbd[f] = -(kI * (c.dcx + w[q] - w[m]) + c.gq) * y.qbbd[f] +
                         ig * (y.cbbd[f] - y.xbbd[f]) +
                         kI * (lam[m] * (nocc[m] + 1.0) * y.qb[q] + lam[q] * nocc[q] * y.qbd[m]);
        }
    });
}

void w_rk4_step(const WContext& c, WState& y, double dt, WState& k1, WState& k2, WState& k3,
                WState& k4, WState& tmp) {
    w_derivative(c, y, k1);
    tmp = y;
    tmp.scale_add(0.5 * dt, k1);
    w_derivative(c, tmp, k2);
    tmp = y;
    tmp.scale_add(0.5 * dt, k2);
    w_derivative(c, tmp, k3);
    tmp = y;
    tmp.scale_add(dt, k3);
    w_derivative(c, tmp, k4);
    y.scale_add(dt / 6.0, k1);
    y.scale_add(dt / 3.0, k2);
    y.scale_add(dt / 3.0, k3);
    y.scale_add(dt / 6.0, k4);
}

// Populations are real and the mixed pair blocks are Hermitian across q<->m;
// both hold analytically, so a drift flags a defect, not physics.
void w_sanity(const WState& y, std::size_t n) {
    double scale = std::abs(y.px) + std::abs(y.pc) + std::abs(y.qc);
    for (std::size_t q = 0; q < n; q += std::max<std::size_t>(1, n / 4))
        scale = std::max(scale, std::abs(y.xb[q]));
    if (!std::isfinite(scale)) throw NonFiniteState("population sector left the finite range");
    const double tol = 1e-8 * std::max(1.0, scale);
    if (std::abs(y.px.imag()) > tol || std::abs(y.pc.imag()) > tol)
        throw NumericError("population sector lost realness");
    const std::size_t probes[2][2] = {{0, n / 2}, {n / 3, 2 * n / 3}};
    for (const auto& pr : probes) {
        const std::size_t q = pr[0], m = pr[1];
        if (std::abs(std::conj(y.xbbd[q * n + m]) - y.xbbd[m * n + q]) > tol ||
            std::abs(std::conj(y.cbbd[q * n + m]) - y.cbbd[m * n + q]) > tol)
            throw NumericError("population sector lost its conjugate pairing");
    }
}

// Decay integral of the population sector from the excited dot. The time
// integral of a homogeneous linear decay equals the steady state of the same
// system driven at unit rate, which is what the emission seeds need.
WState settle_integral(const ModeHierarchy& h) {
    const WContext c = make_wctx(h, false);
    const double dt = h.params().dt;
    WState y, acc, k1, k2, k3, k4, tmp;
    y.resize(c.n);
    acc.resize(c.n);
    k1.resize(c.n);
    k2.resize(c.n);
    k3.resize(c.n);
    k4.resize(c.n);
    tmp.resize(c.n);
    y.px = 1.0;

    std::size_t step = 0;
    for (;;) {
        acc.scale_add(0.5 * dt, y);
        w_rk4_step(c, y, dt, k1, k2, k3, k4, tmp);
        acc.scale_add(0.5 * dt, y);
        ++step;
        if (step % 100 == 0) w_sanity(y, c.n);
        const double left = std::abs(y.px) + std::abs(y.pc) + std::abs(y.qc);
        if (left < 1e-8) break;
        if (dt * static_cast<double>(step) > h.params().settle_cap)
            throw NoSteadyState("excitation has not drained within the settle cap");
    }
    return acc;
}

// Driven steady state of the population sector under the incoherent pump.
WState settle_pumped(const ModeHierarchy& h) {
    const WContext c = make_wctx(h, true);
    const double dt = h.params().dt;
    WState y, k1, k2, k3, k4, tmp;
    y.resize(c.n);
    k1.resize(c.n);
    k2.resize(c.n);
    k3.resize(c.n);
    k4.resize(c.n);
    tmp.resize(c.n);

    const auto per_ps = static_cast<std::size_t>(std::ceil(1.0 / dt));
    double prev = 0.0;
    std::size_t step = 0;
    for (;;) {
        w_rk4_step(c, y, dt, k1, k2, k3, k4, tmp);
        ++step;
        if (step % 100 == 0) w_sanity(y, c.n);
        if (step % per_ps == 0) {
            const double now = std::abs(y.px) + std::abs(y.pc) + std::abs(y.qc);
            if (now > 0.0 && std::abs(now - prev) < 1e-8 * now) break;
            prev = now;
        }
        if (dt * static_cast<double>(step) > h.params().settle_cap)
            throw NoSteadyState("pumped populations have not settled within the cap");
    }
    return y;
}

// Regression seeds: a two-time correlation <B(t) O(t+tau)> follows the same
// coherence equations in tau, started from the one-time moments <B O>(t).
// Rows below read those moments out of the population sector, using the
// conjugate pairing for the partners that are not stored.
HierarchyState seed_dot_row(const ModeHierarchy& h, const WState& v) {
    HierarchyState y = h.zero_state();
    const std::size_t n = h.modes();
    y.s = v.px;
    y.a = v.qc;
    for (std::size_t q = 0; q < n; ++q) {
        y.sb[q] = v.xb[q];
        y.sbd[q] = std::conj(v.xb[q]);
        y.ab[q] = v.qb[q];
        y.abd[q] = v.qbd[q];
    }
    y.sbb = v.xbb;
    y.abb = v.qbb;
    y.abdbd = v.qbdbd;
    y.sbbd = v.xbbd;
    y.abbd = v.qbbd;
    for (std::size_t k = 0; k < y.sbdbd.size(); ++k) y.sbdbd[k] = std::conj(v.xbb[k]);
    return y;
}

HierarchyState seed_mode_row(const ModeHierarchy& h, const WState& v) {
    HierarchyState y = h.zero_state();
    const std::size_t n = h.modes();
    y.s = std::conj(v.qc);
    y.a = v.pc;
    for (std::size_t q = 0; q < n; ++q) {
        y.sb[q] = std::conj(v.qbd[q]);
        y.sbd[q] = std::conj(v.qb[q]);
        y.ab[q] = v.cb[q];
        y.abd[q] = std::conj(v.cb[q]);
    }
    for (std::size_t k = 0; k < y.sbb.size(); ++k) {
        y.sbb[k] = std::conj(v.qbdbd[k]);
        y.sbdbd[k] = std::conj(v.qbb[k]);
        y.abb[k] = v.cbb[k];
        y.abdbd[k] = std::conj(v.cbb[k]);
    }
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t m = 0; m < n; ++m) {
            y.sbbd[q * n + m] = std::conj(v.qbbd[m * n + q]);
            y.abbd[q * n + m] = v.cbbd[q * n + m];
        }
    return y;
}

constexpr double kTraceCap = 20000.0;  // ps

}  // namespace

CorrelationTrace ModeHierarchy::polarization_decay(double tau_end) const {
    const double horizon = tau_end < 0.0 ? par_.tau_end : tau_end;
    if (!(horizon > 0.0)) throw RangeError("trace horizon must be positive");
    HierarchyState y = zero_state();
    y.s = 1.0;
    const double dt = par_.dt;
    const auto stride = static_cast<std::size_t>(std::max(1.0, std::round(0.01 / dt)));
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / (dt * stride) - 1e-9));
    Rk4Scratch w;
    w.k1 = w.k2 = w.k3 = w.k4 = w.tmp = zero_state();
    CorrelationTrace trace;
    trace.dt = dt * static_cast<double>(stride);
    trace.values.reserve(steps + 1);
    trace.values.push_back(y.s);
    for (std::size_t i = 1; i <= steps; ++i) {
        for (std::size_t k = 0; k < stride; ++k) rk4_step(*this, y, dt, w);
        const double t = trace.dt * static_cast<double>(i);
        trace.values.push_back(y.s * std::exp(cplx{0.0, -shift_ * t}));
    }
    return trace;
}

CorrelationSpectra hierarchy_spectra(const ModeHierarchy& h, const FrequencyGrid& grid) {
    if (h.rates().pump != 0.0)
        throw RangeError("inverted-atom preparation needs the pump off");
    const WState v = settle_integral(h);

    CorrelationSpectra out;
    const CorrelationTrace mode_trace =
        ring_down(h, seed_mode_row(h, v), Component::Mode, h.params().tau_end, kTraceCap);
    out.coupled_mode = half_fourier(mode_trace, grid);
    out.coupled_mode.normalize_peak();

    const CorrelationTrace dot_trace =
        ring_down(h, seed_dot_row(h, v), Component::Dot, h.params().tau_end, kTraceCap);
    Spectrum dot = half_fourier(dot_trace, grid);
    const Reservoir filter = h.cavity();
    out.filtered_dot.grid = grid;
    out.filtered_dot.values.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i)
        out.filtered_dot.values[i] = propagator(grid[i], filter) * dot.values[i];
    out.filtered_dot.normalize_peak();
    return out;
}

Spectrum hierarchy_dot_spectrum(const ModeHierarchy& h, const FrequencyGrid& grid,
                                HierarchyInit init) {
    WState v;
    if (init == HierarchyInit::InvertedAtom) {
        if (h.rates().pump != 0.0)
            throw RangeError("inverted-atom preparation needs the pump off");
        v = settle_integral(h);
    } else {
        if (!(h.rates().pump > 0.0))
            throw RangeError("pumped preparation needs a positive pump");
        v = settle_pumped(h);
    }
    const CorrelationTrace trace =
        ring_down(h, seed_dot_row(h, v), Component::Dot, h.params().tau_end, kTraceCap);
    Spectrum s = half_fourier(trace, grid);
    s.normalize_peak();
    return s;
}

}  // namespace polaron

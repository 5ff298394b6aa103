#include "polaron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "polaron/errors.hpp"

namespace polaron::quad {
namespace {

// Kronrod 15 abscissae on [0,1]; Gauss-7 points sit at the odd indices.
constexpr double xgk[15] = {
    0.0042723144395936940576, 0.0254460438286207568659, 0.0675677883201154516613,
    0.1292344072003027699580, 0.2069563822661544261194, 0.2970774243113014079221,
    0.3961075224960507457084, 0.5000000000000000000000, 0.6038924775039492542916,
    0.7029225756886985365668, 0.7930436177338455738806, 0.8707655927996972300420,
    0.9324322116798845483387, 0.9745539561713791876230, 0.9957276855604062504312};

constexpr double wgk[15] = {
    0.0229353220105292249637, 0.0630920926299785532907, 0.1047900103222501838399,
    0.1406532597155259187452, 0.1690047266392679028266, 0.1903505780647854099133,
    0.2044329400752988924142, 0.2094821410847278280130, 0.2044329400752988924142,
    0.1903505780647854099133, 0.1690047266392679028266, 0.1406532597155259187452,
    0.1047900103222501838399, 0.0630920926299785532907, 0.0229353220105292249637};

constexpr double wg[7] = {
    0.1294849661688696932706, 0.2797053914892766679015, 0.3818300505051189449504,
    0.4179591836734693877551, 0.3818300505051189449504, 0.2797053914892766679015,
    0.1294849661688696932706};

struct Panel {
    double a, b;
    cplx value;
    double err;
};

struct PanelWorse {
    bool operator()(const Panel& p, const Panel& q) const { return p.err < q.err; }
};

Panel gk15(const std::function<cplx(double)>& f, double a, double b) {
    // Nodes live on [0,1] but the weights carry the [-1,1] normalization (sum 2),
    // hence the half-width factor.
    const double h = 0.5 * (b - a);
    const double w = b - a;
    cplx k{0.0, 0.0}, g{0.0, 0.0};
    for (int i = 0; i < 15; ++i) {
        const cplx fx = f(a + w * xgk[i]);
        k += wgk[i] * fx;
        if (i % 2 == 1) g += wg[i / 2] * fx;
    }
    k *= h;
    g *= h;
    // Standard rescaled error heuristic: sharper than |k-g| once the panel converges.
    const double diff = std::abs(k - g);
    const double scale = std::abs(k) + 1e-300;
    double err = diff;
    const double r = diff / scale;
    if (r > 0.0 && r < 1.0) err = scale * std::pow(200.0 * r, 1.5);
    if (err > diff) err = diff;
    return {a, b, k, err};
}

}  // namespace

cplx integrate(const std::function<cplx(double)>& f, double a, double b,
               const Options& opt, const std::vector<double>& breaks) {
    if (!(b > a)) {
        if (b == a) return {0.0, 0.0};
        throw RangeError("integration interval is reversed");
    }
    std::vector<double> edges{a, b};
    for (double x : breaks)
        if (x > a && x < b) edges.push_back(x);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
    cplx total{0.0, 0.0};
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p = gk15(f, edges[i], edges[i + 1]);
        total += p.value;
        err_total += p.err;
        heap.push(p);
    }

    std::size_t n = heap.size();
    while (true) {
        const double goal = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (err_total <= goal || err_total <= 1e-300) break;
        if (n >= opt.max_intervals)
            throw ConvergenceError("adaptive quadrature exceeded the interval budget");
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;  // panel at machine resolution
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err_total += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++n;
    }
    return total;
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const Options& opt, const std::vector<double>& breaks) {
    return integrate([&f](double x) { return cplx{f(x), 0.0}; }, a, b, opt, breaks).real();
}

double principal_value(const std::function<double(double)>& f, double a, double b, double x,
                       const Options& opt, std::vector<double> breaks) {
    if (!(a < x && x < b)) throw RangeError("principal value pole must lie inside (a,b)");
    const double fx = f(x);
    breaks.push_back(x);
    const double reg = integrate_real(
        [&](double w) {
            const double d = w - x;
            return (f(w) - fx) / d;
        },
        a, b, opt, breaks);
    return reg + fx * std::log((b - x) / (x - a));
}

namespace {

// Auxiliary functions with Si(x) = pi/2 - f cos x - g sin x, Ci = f sin x - g cos x.
// Mid-range x needs the exact Laplace representations: the asymptotic series
// bottoms out near 1e-9 at x ~ 20, which is not enough for the tail transforms.
void aux_fg(double x, double& f, double& g) {
    if (x < 50.0) {
        quad::Options opt;
        opt.rel_tol = 1e-13;
        const double upper = 60.0 / x;
        f = integrate_real([x](double t) { return std::exp(-x * t) / (1.0 + t * t); }, 0.0, upper,
                           opt);
        g = integrate_real([x](double t) { return t * std::exp(-x * t) / (1.0 + t * t); }, 0.0,
                           upper, opt);
        return;
    }
    const double inv2 = 1.0 / (x * x);
    f = 0.0;
    g = 0.0;
    double term = 1.0 / x;
    double prev = std::abs(term);
    for (int k = 0; k < 30; ++k) {
        f += term;
        term *= -(2.0 * k + 1.0) * (2.0 * k + 2.0) * inv2;
        if (std::abs(term) >= prev) break;
        prev = std::abs(term);
    }
    term = inv2;
    prev = std::abs(term);
    for (int k = 0; k < 30; ++k) {
        g += term;
        term *= -(2.0 * k + 2.0) * (2.0 * k + 3.0) * inv2;
        if (std::abs(term) >= prev) break;
        prev = std::abs(term);
    }
}

}  // namespace

double sine_integral(double x) {
    if (x < 0.0) return -sine_integral(-x);
    if (x == 0.0) return 0.0;
    if (x <= 12.0) {
        // Si(x) = sum (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
        double term = x, sum = x;
        const double x2 = x * x;
        for (int k = 1; k < 60; ++k) {
            term *= -x2 / (2.0 * k * (2.0 * k + 1.0));
            sum += term / (2.0 * k + 1.0);
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    double f, g;
    aux_fg(x, f, g);
    return 1.5707963267948966 - f * std::cos(x) - g * std::sin(x);
}

double cosine_integral(double x) {
    if (x <= 0.0) throw RangeError("cosine integral needs a positive argument");
    if (x <= 12.0) {
        // Ci(x) = gamma + ln x + sum (-1)^k x^{2k} / ((2k)(2k)!)
        constexpr double egamma = 0.5772156649015329;
        double sum = 0.0, term = 1.0;
        const double x2 = x * x;
        for (int k = 1; k < 60; ++k) {
            term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
            sum += term / (2.0 * k);
            if (std::abs(term) < 1e-18) break;
        }
        return egamma + std::log(x) + sum;
    }
    double f, g;
    aux_fg(x, f, g);
    return f * std::sin(x) - g * std::cos(x);
}

cplx algebraic_tail_transform(double delta, double T) {
    if (!(T > 0.0)) throw RangeError("tail transform needs a positive cutoff");
    if (delta == 0.0) return {1.0 / T, 0.0};
    if (delta < 0.0) return std::conj(algebraic_tail_transform(-delta, T));
    // Integration by parts: e^{-i d T}/T - i d E1(i d T),
    // E1(ix) = -Ci(x) - i(pi/2 - Si(x)) for x > 0.
    const double x = delta * T;
    const cplx e1{-cosine_integral(x), -(1.5707963267948966 - sine_integral(x))};
    return std::exp(cplx{0.0, -x}) / T - cplx{0.0, delta} * e1;
}

HalfLineResult half_line_kernel(const std::function<cplx(double)>& kernel, double delta,
                                double rel_tol, double hard_cap) {
    if (!(hard_cap > 0.0)) throw RangeError("half-line cutoff cap must be positive");

    // Locate the decay point: densely over the first picosecond, then doubling.
    double peak = 0.0;
    for (int i = 0; i <= 100; ++i) peak = std::max(peak, std::abs(kernel(0.01 * i)));
    if (peak <= 0.0) return {cplx{0.0, 0.0}, hard_cap, false};

    double cutoff = hard_cap;
    bool decayed = false;
    for (double t = 1.0; t <= hard_cap; t *= 2.0) {
        const double mag = std::abs(kernel(t));
        peak = std::max(peak, mag);
        if (mag < 1e-10 * peak) {
            cutoff = t;
            decayed = true;
            break;
        }
    }
    if (cutoff > hard_cap) cutoff = hard_cap;

    Options opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-14 * peak;
    // Seed panels against the e^{-i delta tau} oscillation.
    std::vector<double> breaks;
    const double period = (std::abs(delta) > 1e-12) ? 6.283185307179586 / std::abs(delta) : cutoff;
    const double width = std::min(std::max(cutoff / 16.0, 1e-3), period / 3.0);
    for (double t = width; t < cutoff; t += width) breaks.push_back(t);

    const cplx phase = cplx{0.0, -delta};
    auto f = [&](double t) { return kernel(t) * std::exp(phase * t); };
    HalfLineResult out;
    out.value = integrate(f, 0.0, cutoff, opt, breaks);
    out.cutoff = cutoff;
    if (decayed) return out;

    // Algebraic remnant: fit k ~ c / tau^2 at the cap and transform it exactly.
    const cplx k_end = kernel(cutoff);
    if (std::abs(k_end) > 1e-4 * peak)
        throw SlowDecay("correlation kernel has not decayed by the integration cap");
    const cplx c = k_end * cutoff * cutoff;
    const cplx c_half = kernel(0.5 * cutoff) * 0.25 * cutoff * cutoff;
    const double tail_scale = std::abs(c) / cutoff;
    if (tail_scale < std::max(1e-14 * peak, rel_tol * std::abs(out.value))) return out;
    if (std::abs(c - c_half) < 0.5 * std::abs(c)) {
        out.value += c * algebraic_tail_transform(delta, cutoff);
        out.tail_added = true;
        return out;
    }
    // Tail is not algebraic yet still non-negligible: extend in doubling windows.
    double lo = cutoff;
    for (int i = 0; i < 6; ++i) {
        const double hi = 2.0 * lo;
        std::vector<double> b2;
        const double w2 = std::min(std::max((hi - lo) / 16.0, 1e-3), period / 3.0);
        for (double t = lo + w2; t < hi; t += w2) b2.push_back(t);
        const cplx chunk = integrate(f, lo, hi, opt, b2);
        out.value += chunk;
        out.cutoff = hi;
        lo = hi;
        if (std::abs(chunk) < std::max(1e-13 * peak, 0.25 * rel_tol * std::abs(out.value))) {
            const cplx ce = kernel(hi) * hi * hi;
            out.value += ce * algebraic_tail_transform(delta, hi);
            out.tail_added = true;
            return out;
        }
    }
    throw SlowDecay("correlation kernel tail kept contributing past the extension budget");
}

}  // namespace polaron::quad

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "polaron/errors.hpp"

namespace polaron {

using cplx = std::complex<double>;

// Uniform detuning grid, rad/ps, measured from the rotating-frame origin.
struct FrequencyGrid {
    double omega_min = 0.0;
    double omega_max = 0.0;
    std::size_t n = 0;

    FrequencyGrid() = default;
    FrequencyGrid(double lo, double hi, std::size_t n_points)
        : omega_min(lo), omega_max(hi), n(n_points) {
        if (n == 0) throw EmptyGrid{};
        if (n > 1 && !(omega_max > omega_min))
            throw RangeError("frequency grid requires omega_max > omega_min");
    }

    double operator[](std::size_t i) const {
        if (n == 1) return omega_min;
        return omega_min + (omega_max - omega_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    double step() const {
        return n > 1 ? (omega_max - omega_min) / static_cast<double>(n - 1) : 0.0;
    }
};

struct Spectrum {
    FrequencyGrid grid;
    std::vector<double> values;  // same length as grid.n

    double max_value() const {
        double m = values.empty() ? 0.0 : values[0];
        for (double v : values) m = v > m ? v : m;
        return m;
    }

    // Scale so the global maximum is one. Negative undershoot is preserved.
    void normalize_peak() {
        const double m = max_value();
        if (m <= 0.0) throw SingularDenominator("spectrum has no positive peak to normalize by");
        for (double& v : values) v /= m;
    }
};

struct ComplexSpectrum {
    FrequencyGrid grid;
    std::vector<cplx> values;
};

// Two-time correlation g(tau) on a uniform tau grid starting at zero.
struct CorrelationTrace {
    double dt = 0.0;  // ps
    std::vector<cplx> values;

    double tau_end() const {
        return values.empty() ? 0.0 : dt * static_cast<double>(values.size() - 1);
    }
    CorrelationTrace conjugated() const {
        CorrelationTrace out{dt, values};
        for (auto& v : out.values) v = std::conj(v);
        return out;
    }
};

}  // namespace polaron

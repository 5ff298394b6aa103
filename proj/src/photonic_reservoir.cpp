#include "polaron/photonic_reservoir.hpp"

#include <cmath>
#include <complex>

#include "polaron/errors.hpp"
#include "polaron/quadrature.hpp"
#include "polaron/units.hpp"

namespace polaron {

namespace {

void check(const LorentzianCavity& c) {
  if (c.kappa <= 0.0) throw ZeroLinewidth("cavity.kappa must be positive");
  if (c.g < 0.0) throw RangeError("cavity.g must be nonnegative");
}

void check(const CrowBand& b) {
  if (b.omega_l >= b.omega_u) throw RangeError("crow band needs omega_l < omega_u");
  if (b.kappa_l <= 0.0 || b.kappa_u <= 0.0)
    throw ZeroLinewidth("crow edge damping must be positive");
  if (b.g < 0.0) throw RangeError("crow.g must be nonnegative");
}

// (omega - wt_l*)(wt_u - omega) with the chosen edge regularization. For the
// imaginary shift both factors have arguments in [0, pi), their product stays
// inside the principal branch and Re sqrt >= 0 follows for any point on the
// real axis.
cplx edge_product(const CrowBand& b, double omega) {
  if (b.edge_shift == EdgeShift::Imaginary) {
    const cplx lo(omega - b.omega_l, b.kappa_l);
    const cplx hi(b.omega_u - omega, b.kappa_u);
    return lo * hi;
  }
  return cplx((omega - b.omega_l - b.kappa_l) * (b.omega_u + b.kappa_u - omega), 0.0);
}

double crow_spectral(const CrowBand& b, double omega) {
  const cplx z = edge_product(b, omega);
  return b.g * b.g / M_PI * std::real(1.0 / std::sqrt(z));
}

}  // namespace

CrowBand CrowBand::paper_default(double center) {
  CrowBand b;
  const double half_band = units::rad_per_ps(4.0);
  const double kappa = units::rad_per_ps_from_ueV(7.0);
  b.omega_l = center - half_band;
  b.omega_u = center + half_band;
  b.kappa_l = kappa;
  b.kappa_u = kappa;
  b.g = units::rad_per_ps_from_ueV(85.0);
  return b;
}

BackgroundDecay BackgroundDecay::from_dipole(double dipole_debye, double refractive_index,
                                             double omega_abs) {
  if (dipole_debye <= 0.0 || refractive_index <= 0.0 || omega_abs <= 0.0)
    throw RangeError("background decay needs positive dipole, index, frequency");
  constexpr double debye = 3.33564e-30;       // C m
  constexpr double eps0 = 8.8541878128e-12;   // F/m
  constexpr double c_light = 2.99792458e8;    // m/s
  constexpr double hbar_si = 1.054571817e-34; // J s
  const double d = dipole_debye * debye;
  const double w_si = omega_abs * 1e12;
  const double rate_si = d * d * refractive_index * w_si * w_si * w_si /
                         (6.0 * M_PI * hbar_si * eps0 * c_light * c_light * c_light);
  return BackgroundDecay{rate_si * 1e-12};
}

double photon_spectral_function(double omega, const Reservoir& r) {
  return std::visit(
      [omega](const auto& m) -> double {
        check(m);
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LorentzianCavity>) {
          const double hw = 0.5 * m.kappa;
          const double d = omega - m.omega_c;
          return m.g * m.g / M_PI * hw / (d * d + hw * hw);
        } else {
          return crow_spectral(m, omega);
        }
      },
      r);
}

cplx bath_correlation_fn(double tau, const Reservoir& r, double omega_x) {
  return std::visit(
      [tau, omega_x](const auto& m) -> cplx {
        check(m);
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LorentzianCavity>) {
          // Exact transform of the full-line Lorentzian; the part of the
          // spectral weight below omega = 0 is negligible for any optical
          // carrier and dropping it keeps tau = 0 exact at g^2.
          const cplx phase(-0.5 * m.kappa * std::abs(tau), (omega_x - m.omega_c) * tau);
          return m.g * m.g * std::exp(phase);
        } else {
          const double lo = m.omega_l - 20.0 * m.kappa_l;
          const double hi = m.omega_u + 20.0 * m.kappa_u;
          quad::Options opt;
          opt.rel_tol = 1e-9;
          return quad::integrate(
              [&](double w) {
                const cplx phase(0.0, (omega_x - w) * tau);
                return crow_spectral(m, w) * std::exp(phase);
              },
              lo, hi, opt, {m.omega_l, m.omega_u});
        }
      },
      r);
}

double propagator(double omega, const Reservoir& r) {
  return std::visit(
      [omega](const auto& m) -> double {
        check(m);
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LorentzianCavity>) {
          const double hw = 0.5 * m.kappa;
          const double d = omega - m.omega_c;
          return hw / (d * d + hw * hw);
        } else {
          const cplx z = edge_product(m, omega);
          // |sqrt(z)| is branch independent, so the propagator needs no
          // branch bookkeeping, unlike the spectral function.
          const double wabs = m.omega_carrier + omega - 0.5 * (m.omega_l + m.omega_u);
          const double denom = wabs * wabs * std::abs(z);
          if (denom <= 0.0) throw SingularDenominator("crow propagator at zero frequency");
          return 1.0 / denom;
        }
      },
      r);
}

double spontaneous_rate(double omega, const Reservoir& r) {
  return 2.0 * M_PI * photon_spectral_function(omega, r);
}

double purcell_factor(double omega, const Reservoir& r, const BackgroundDecay& bg) {
  if (bg.gamma_b <= 0.0) throw RangeError("background decay must be positive");
  return spontaneous_rate(omega, r) / bg.gamma_b;
}

}  // namespace polaron

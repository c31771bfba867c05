// params.hpp — model constants and the quasiperiodic pumping signal.
//
// Everything downstream (full dynamics, reduction, averaging, harmonic
// states) reads its coefficients from here. All types are immutable value
// types after construction and safe to share across threads.

#pragma once

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "mblab/errors.hpp"

namespace mblab {

using Complex = std::complex<double>;

// Constants of the damped driven two-level model and the derived
// coefficients used by the reduced / averaged representations:
//
//   omega  = omega2 - omega1        level splitting
//   kappa  = p * omega              current coupling
//   b      = kappa / (c * hbar)     Bloch-coordinate drive coefficient
//   r      = p / gamma              the fixed coupling/dissipation quotient
//   gamma1 = 1 / r                  = gamma / p
//   kappa1 = 2 * c * omega / Omega  Maxwell envelope coupling (per unit p)
//   b1     = omega / (c * hbar)     = b / p
struct PhysicalParams {
    double Omega;   // resonator frequency, > 0
    double omega1;  // lower level frequency
    double omega2;  // upper level frequency, omega2 > omega1
    double gamma;   // dissipation, >= 0 (harmonic-state theory needs > 0)
    double p;       // dipole coupling, >= 0 (theory needs > 0)
    double c;       // light-speed constant, > 0
    double hbar;    // action constant, > 0

    // derived, computed once
    double omega;
    double kappa;
    double b;
    double r;       // p / gamma, +inf when gamma = 0
    double gamma1;  // gamma / p, +inf when p = 0
    double kappa1;
    double b1;

    PhysicalParams(double Omega_, double omega1_, double omega2_,
                   double gamma_, double p_, double c_ = 1.0, double hbar_ = 1.0)
        : Omega(Omega_), omega1(omega1_), omega2(omega2_),
          gamma(gamma_), p(p_), c(c_), hbar(hbar_),
          omega(omega2_ - omega1_),
          kappa(p_ * omega),
          b(kappa / (c_ * hbar_)),
          r(gamma_ > 0.0 ? p_ / gamma_ : std::numeric_limits<double>::infinity()),
          gamma1(p_ > 0.0 ? gamma_ / p_ : std::numeric_limits<double>::infinity()),
          kappa1(2.0 * c_ * omega / Omega_),
          b1(omega / (c_ * hbar_)) {
        if (!(Omega > 0.0)) throw InvalidParams("PhysicalParams: Omega must be > 0");
        if (!(omega > 0.0)) throw InvalidParams("PhysicalParams: omega2 - omega1 must be > 0");
        if (!(gamma >= 0.0)) throw InvalidParams("PhysicalParams: gamma must be >= 0");
        if (!(p >= 0.0)) throw InvalidParams("PhysicalParams: p must be >= 0");
        if (!(c > 0.0)) throw InvalidParams("PhysicalParams: c must be > 0");
        if (!(hbar > 0.0)) throw InvalidParams("PhysicalParams: hbar must be > 0");
    }

    // Same parameter set with the coupling p replaced and gamma = p/r kept at
    // the fixed quotient r. Sweeps over p use this.
    PhysicalParams with_coupling(double p_new) const {
        require_coupled("with_coupling");
        return PhysicalParams(Omega, omega1, omega2, p_new / r, p_new, c, hbar);
    }

    // The averaged/harmonic theory works with the fixed quotient r = p/gamma
    // and requires both strictly positive.
    void require_coupled(const char* who) const {
        if (!(p > 0.0 && gamma > 0.0))
            throw InvalidParams(std::string(who) + ": requires p > 0 and gamma > 0");
    }

    bool resonant(double rel_tol = 1e-12) const {
        return std::abs(Omega - omega) <= rel_tol * std::max(std::abs(Omega), std::abs(omega));
    }
};

// One off-carrier harmonic of the pumping signal.
struct PumpHarmonic {
    Complex coeff;
    double freq;
};

// Quasiperiodic pumping A^e(t) = Re[ carrier e^{-i Omega t}
//                                    + sum_k coeff_k e^{-i freq_k t} ].
// The coefficient at the carrier frequency is stored separately so that
// reading it back is exact rather than estimated from a time average.
struct Pumping {
    Complex carrier{0.0, 0.0};
    std::vector<PumpHarmonic> harmonics;

    Pumping() = default;
    explicit Pumping(Complex carrier_, std::vector<PumpHarmonic> harmonics_ = {})
        : carrier(carrier_), harmonics(std::move(harmonics_)) {}

    // Largest angular frequency present (carrier included); the integrators
    // cap their step at a fraction of the fastest period.
    double max_frequency(double Omega) const {
        double m = std::abs(Omega);
        for (const auto& h : harmonics) m = std::max(m, std::abs(h.freq));
        return m;
    }
};

// Every off-carrier frequency must keep a relative gap to the carrier,
// otherwise the carrier coefficient stops being well defined.
void check_pumping(const Pumping& pump, double Omega, double rel_gap = 1e-9);

// A^e(t), always real-valued.
double pumping_eval(const Pumping& pump, const PhysicalParams& params, double t);

// The coefficient attached to e^{-i Omega t}; equals 2 <A^e(t) e^{i Omega t}>
// for the represented signal.
inline Complex carrier_coefficient(const Pumping& pump) { return pump.carrier; }

} // namespace mblab

// harmonic.hpp — stationary states of the averaged resonance dynamics and
// their linear-stability spectra, in closed form with a numeric eigensolver
// fallback for the trivial state.

#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "mblab/averaging.hpp"
#include "mblab/params.hpp"
#include "mblab/state.hpp"

namespace mblab {

enum class Branch {
    Trivial,          // Ae = 0: the only state is (0, 0)
    ZeroInvPlus,      // |Q| = 1, phase arg(Ae) + theta
    ZeroInvMinus,     // |Q| = 1, phase arg(Ae) - theta
    Degenerate,       // cr = |Ae|: the two zero-inversion states coincide
    NonZeroInvPlus,   // |Q| < 1 (negative inversion, linearly stable)
    NonZeroInvMinus,  // |Q| > 1 (positive inversion, unstable)
};

const char* branch_name(Branch b);

struct HarmonicState {
    Complex Mr;
    Complex Qr;
    Branch branch;
    double inversion;  // I(Qr)
    double alpha;      // Mr = alpha Qr on the NonZeroInv branches, else 0
    // defining data, kept for the spectra
    double r;
    double c;
    Complex Ae;
};

// All stationary states of the averaged resonance system for quotient r,
// carrier coefficient Ae and light-speed constant c:
//   Ae = 0        -> the trivial state (0, 0)
//   cr < |Ae|     -> two zero-inversion states  Q = e^{i(phi +- theta)},
//                    M = cr Q, theta = arccos(-cr/|Ae|), phi = arg Ae
//   cr = |Ae|     -> one degenerate state Q = -Ae/|Ae|, M = -Ae
//   cr > |Ae|     -> two states Q_+- = [-cr +- sqrt(c^2 r^2 - |Ae|^2)] Ae/|Ae|^2,
//                    M = alpha Q with alpha = 2cr/(|Q|^2+1); |Q_+||Q_-| = 1
std::vector<HarmonicState> harmonic_states(double r, Complex Ae, double c);

// Regime-aware wrapper: off resonance the averaged system has no stationary
// state with nonzero Maxwell field, so the list is empty.
std::vector<HarmonicState> harmonic_states_for(const PhysicalParams& params,
                                               const Pumping& pump);

enum class JacobianForm {
    Raw,             // exact derivative of (fbar, gbar) at any point
    AtHarmonicState, // with M = alpha Q substituted (valid at stationary states)
};

// 4x4 Jacobian of the unscaled averaged field (fbar, gbar) with respect to
// (M1, M2, Q1, Q2). Resonance only.
Eigen::Matrix4d jacobian_averaged(const EnvelopeState& e, const PhysicalParams& params,
                                  Complex Ae, JacobianForm form = JacobianForm::Raw);

// Eigenvalues of a 4x4 real matrix via a long-double Schur pass, sorted by
// (Re, Im). Double eigenvalues of the harmonic-state Jacobians come out well
// below 1e-9 of their exact values.
std::array<Complex, 4> jacobian_eigenvalues(const Eigen::Matrix4d& J);

enum class Stability { LinearlyStable, Unstable, NotLinearlyStable };

const char* stability_name(Stability s);

struct StabilityReport {
    std::array<Complex, 4> eigenvalues; // of the unscaled linearization, sorted
    Stability classification;
    double nu; // |max Re| when linearly stable, 0 otherwise
};

// Closed-form spectrum of the linearization at a harmonic state (physical
// rates are p times these):
//   zero inversion:    { -gamma1/2 (double), +- i b1 w },  w = Ae ^ Qr
//   nonzero inversion: (1/4) [ -gamma1 +- sqrt(gamma1^2 + 4 b1 kappa1 I(Qr)) ],
//                      each double
// Throws BranchMismatch for the trivial branch (no closed form).
std::array<Complex, 4> eigenvalues_closed_form(const HarmonicState& h,
                                               const PhysicalParams& params);

// Spectrum plus classification; the trivial branch falls back to the numeric
// eigensolver. LinearlyStable iff all real parts are < 0; a vanishing real
// part with none positive reports NotLinearlyStable.
StabilityReport eigenvalues_harmonic(const HarmonicState& h, const PhysicalParams& params);

// || (fbar, gbar)(h) || — the averaged field at the state divided by p; at
// most ~1e-14 for every branch produced by harmonic_states.
double verify_stationary(const HarmonicState& h, const PhysicalParams& params);

} // namespace mblab

// state.hpp — phase-space points: full states on R^2 x S^3, Bloch-sphere
// points, reduced (chart) states and interaction-picture envelopes.

#pragma once

#include <cmath>
#include <complex>

#include "mblab/errors.hpp"
#include "mblab/params.hpp"

namespace mblab {

// Charge tolerance separating rounding noise (renormalized) from user error
// (rejected).
inline constexpr double kChargeRepairTol = 1e-6;
// Tolerance the monitors use when checking charge along trajectories.
inline constexpr double kChargeMonitorTol = 1e-9;
// Bloch points satisfy |Z| = 1/2 to this tolerance.
inline constexpr double kBlochTol = 1e-12;

// Maxwell pair (A, B) plus normalized level amplitudes (C1, C2).
struct PureState {
    double A{0.0};
    double B{0.0};
    Complex C1{1.0, 0.0};
    Complex C2{0.0, 0.0};

    PureState() = default;

    // Renormalizes charge deviations below kChargeRepairTol, rejects larger
    // ones.
    PureState(double A_, double B_, Complex C1_, Complex C2_) : A(A_), B(B_) {
        const double q = std::norm(C1_) + std::norm(C2_);
        if (std::abs(q - 1.0) > kChargeRepairTol)
            throw NotNormalized("PureState: |C1|^2 + |C2|^2 deviates from 1 beyond 1e-6");
        const double s = 1.0 / std::sqrt(q);
        C1 = C1_ * s;
        C2 = C2_ * s;
    }

    // Integrator-internal: keeps whatever charge the raw values carry so
    // drift stays observable.
    static PureState raw(double A_, double B_, Complex C1_, Complex C2_) {
        PureState x;
        x.A = A_;
        x.B = B_;
        x.C1 = C1_;
        x.C2 = C2_;
        return x;
    }

    double charge() const { return std::norm(C1) + std::norm(C2); }
};

// U(1) gauge action: rotates both level amplitudes, leaves the Maxwell pair
// untouched.
inline PureState gauge_action(double theta, const PureState& x) {
    const Complex ph = std::polar(1.0, theta);
    return PureState::raw(x.A, x.B, ph * x.C1, ph * x.C2);
}

// Complex Maxwell amplitude M = A + iB/Omega.
inline Complex maxwell_amplitude(double A, double B, double Omega) {
    if (!(Omega > 0.0)) throw InvalidParams("maxwell_amplitude: Omega must be > 0");
    return Complex(A, B / Omega);
}

// Point of the model sphere S^2 = { |Z| = 1/2 } in R^3.
struct BlochPoint {
    double Z1{0.0};
    double Z2{0.0};
    double Z3{-0.5};

    BlochPoint() = default;
    BlochPoint(double Z1_, double Z2_, double Z3_) : Z1(Z1_), Z2(Z2_), Z3(Z3_) {
        const double n2 = Z1 * Z1 + Z2 * Z2 + Z3 * Z3;
        if (std::abs(n2 - 0.25) > kBlochTol)
            throw InvalidParams("BlochPoint: |Z|^2 deviates from 1/4 beyond 1e-12");
    }

    static BlochPoint raw(double Z1_, double Z2_, double Z3_) {
        BlochPoint z;
        z.Z1 = Z1_;
        z.Z2 = Z2_;
        z.Z3 = Z3_;
        return z;
    }

    Complex equatorial() const { return Complex(Z1, Z2); }
    double inversion() const { return 2.0 * Z3; }
};

// Active stereographic chart of the Bloch sphere. North carries the
// projection Q from the North Pole, South the projection Sigma from the
// South Pole; on the overlap Q = 1 / conj(Sigma).
enum class Chart { North, South };

inline const char* chart_name(Chart c) { return c == Chart::North ? "north" : "south"; }

// Maxwell amplitude plus a Bloch point carried in an active chart.
struct ReducedState {
    Complex M{0.0, 0.0};
    Chart chart{Chart::North};
    Complex coord{0.0, 0.0};

    ReducedState() = default;
    ReducedState(Complex M_, Chart chart_, Complex coord_) : M(M_), chart(chart_), coord(coord_) {}
};

// Interaction-picture envelopes of (M, Q).
struct EnvelopeState {
    Complex Mm{0.0, 0.0};
    Complex Qq{0.0, 0.0};

    EnvelopeState() = default;
    EnvelopeState(Complex Mm_, Complex Qq_) : Mm(Mm_), Qq(Qq_) {}
};

// Energy of the coupled system in the dipole approximation:
//   H = (B^2 + Omega^2 A^2) / (2 c^2) + hbar omega1 |C1|^2 + hbar omega2 |C2|^2
//       - (2 kappa / c) [A + A^e(t)] Im[conj(C1) C2].
// Conserved when gamma = 0 and the pumping vanishes.
double hamiltonian(const PureState& x, double t, const PhysicalParams& params,
                   const Pumping& pump);

} // namespace mblab

// full_dynamics.hpp — the damped driven two-level system on R^2 x S^3:
// right-hand side, time integration with conservation monitors, Lyapunov
// function and the a priori bound check.

#pragma once

#include <string>
#include <vector>

#include "mblab/ode.hpp"
#include "mblab/params.hpp"
#include "mblab/state.hpp"

namespace mblab {

// Tangent vector at a PureState.
struct PureTangent {
    double dA;
    double dB;
    Complex dC1;
    Complex dC2;
};

//   dA = B
//   dB = -Omega^2 A - gamma B + c j,        j = 2 kappa Im[conj(C1) C2]
//   dC1 = -i omega1 C1 + (a/hbar) C2,       a = (kappa/c) [A + A^e(t)]
//   dC2 = -i omega2 C2 - (a/hbar) C1
// a(t) is real, so the charge |C1|^2 + |C2|^2 is conserved exactly.
PureTangent mbe_rhs(const PureState& x, double t, const PhysicalParams& params,
                    const Pumping& pump);

// Sampled solution with per-sample conservation monitors.
struct FullTrajectory {
    std::vector<double> times;
    std::vector<PureState> states;
    std::vector<double> charge;    // |C1|^2 + |C2|^2, unrepaired
    std::vector<double> energy;    // hamiltonian()
    std::vector<double> lyapunov;  // V(A, B) at the default epsilon

    double max_charge_drift() const;
    // CSV columns: t,A,B,ReC1,ImC1,ReC2,ImC2,charge,energy,lyapunov
    void write_csv(const std::string& path) const;
};

FullTrajectory integrate_full(const PureState& x0, const SolverConfig& cfg,
                              const PhysicalParams& params, const Pumping& pump);

// V(A, B) = (Omega^2 A^2 + B^2)/2 + eps A B, positive definite for
// 0 < eps < Omega.
double lyapunov_value(double A, double B, const PhysicalParams& params, double eps);

inline double lyapunov_default_eps(const PhysicalParams& params) {
    return std::min(params.gamma / 4.0, params.Omega / 2.0);
}

// Dissipation bound diagnostics for one trajectory: V stays below
// V(0) + const * r^2, and sup_t (A^2 + B^2) <= D (A^2(0) + B^2(0) + r^2)
// with the reported ratio D.
struct AprioriReport {
    double sup_V;
    double V0;
    double sup_amp2;   // sup_t (A^2 + B^2)
    double amp2_0;     // A^2(0) + B^2(0)
    double ratio;      // sup_amp2 / (amp2_0 + r^2)
    bool bounded;      // all samples finite
};

AprioriReport apriori_bound_check(const FullTrajectory& traj, const PhysicalParams& params);

} // namespace mblab

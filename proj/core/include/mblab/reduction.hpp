// reduction.hpp — Hopf projection S^3 -> S^2, the two stereographic charts,
// the reduced dynamics on R^2 x S^2 with chart-switching integration, and
// the canonical lift back to R^2 x S^3.

#pragma once

#include <string>
#include <vector>

#include "mblab/full_dynamics.hpp"
#include "mblab/ode.hpp"
#include "mblab/params.hpp"
#include "mblab/state.hpp"

namespace mblab {

// Z1 + iZ2 = conj(C1) C2, Z3 = (|C2|^2 - |C1|^2)/2. Ground state (1,0) maps
// to the South Pole (0,0,-1/2), excited state (0,1) to the North Pole.
// Charge deviations up to 1e-9 are tolerated and scaled out.
BlochPoint hopf_project(Complex C1, Complex C2);

// Stereographic projection from the North Pole: Q = (Z1+iZ2)/(1/2 - Z3).
Complex north_coord(const BlochPoint& z);

// Stereographic projection from the South Pole: Sigma = (Z1+iZ2)/(1/2 + Z3).
Complex south_coord(const BlochPoint& z);

BlochPoint bloch_from_north(Complex Q);
BlochPoint bloch_from_south(Complex Sigma);

inline BlochPoint bloch_from_chart(Chart chart, Complex coord) {
    return chart == Chart::North ? bloch_from_north(coord) : bloch_from_south(coord);
}

// On the overlap the two projections satisfy Q * conj(Sigma) = 1.
inline Complex other_chart_coord(Complex coord) { return 1.0 / std::conj(coord); }

// Population inversion I = (|Q|^2 - 1)/(|Q|^2 + 1) in (-1, 1);
// I >< 0 iff |Q| >< 1.
double inversion_of(Complex Q);

inline double inversion_in_chart(Chart chart, Complex coord) {
    const double n = std::norm(coord);
    return chart == Chart::North ? (n - 1.0) / (n + 1.0) : (1.0 - n) / (1.0 + n);
}

// Reduction map: M = A + iB/Omega plus the Bloch point in the chart whose
// coordinate has modulus <= 1 (ties go North).
ReducedState project_state(const PureState& x, const PhysicalParams& params);

// Canonical section of the fibration: C1 real >= 0; on the fiber C1 = 0 the
// phase of C2 is fixed to 0. project_state(lift_state(Y)) == Y.
PureState lift_state(const ReducedState& y, const PhysicalParams& params);

struct ReducedTangent {
    Complex dM;
    Complex dcoord;
};

// Reduced dynamics in the active chart. With kt = 2 c kappa / Omega:
//   dM = -i [ Omega M + gamma Im(M) - kt coord2/(|coord|^2+1) ]
//   North: dQ     = -i omega Q     - b [A + A^e(t)] (Q^2 + 1)
//   South: dSigma = -i omega Sigma + b [A + A^e(t)] (Sigma^2 + 1)
// where A = Re M and coord2 = Im coord. Both charts carry the same current
// j = 2 kappa coord2/(|coord|^2+1).
ReducedTangent reduced_rhs(const ReducedState& y, double t, const PhysicalParams& params,
                           const Pumping& pump);

struct ReducedTrajectory {
    std::vector<double> times;
    std::vector<Complex> M;
    std::vector<Chart> chart;
    std::vector<Complex> coord;
    std::vector<BlochPoint> bloch;
    std::vector<double> inversion;
    std::size_t chart_switches{0};

    // CSV columns: t,ReM,ImM,chart,ReCoord,ImCoord,Z1,Z2,Z3,inversion
    void write_csv(const std::string& path) const;
};

// Integrates in the active chart, switching to the other one whenever the
// coordinate modulus exceeds 2 (the new coordinate then has modulus 1/2, so
// there is no chattering).
ReducedTrajectory integrate_reduced(const ReducedState& y0, const SolverConfig& cfg,
                                    const PhysicalParams& params, const Pumping& pump);

inline constexpr double kChartSwitchRadius = 2.0;

} // namespace mblab

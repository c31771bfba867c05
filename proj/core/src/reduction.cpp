#include "mblab/reduction.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace mblab {

BlochPoint hopf_project(Complex C1, Complex C2) {
    const double q = std::norm(C1) + std::norm(C2);
    if (std::abs(q - 1.0) > kChargeMonitorTol)
        throw NotNormalized("hopf_project: charge deviates from 1 beyond 1e-9");
    const Complex Z = std::conj(C1) * C2 / q;
    const double Z3 = 0.5 * (std::norm(C2) - std::norm(C1)) / q;
    return BlochPoint(Z.real(), Z.imag(), Z3);
}

Complex north_coord(const BlochPoint& z) {
    const double den = 0.5 - z.Z3;
    if (den < 1e-12) throw AtNorthPole("north_coord: point at the North Pole");
    return z.equatorial() / den;
}

Complex south_coord(const BlochPoint& z) {
    const double den = 0.5 + z.Z3;
    if (den < 1e-12) throw AtSouthPole("south_coord: point at the South Pole");
    return z.equatorial() / den;
}

BlochPoint bloch_from_north(Complex Q) {
    const double w = 1.0 / (std::norm(Q) + 1.0);
    const Complex Z = Q * w;
    return BlochPoint::raw(Z.real(), Z.imag(), 0.5 - w);
}

BlochPoint bloch_from_south(Complex Sigma) {
    const double w = 1.0 / (std::norm(Sigma) + 1.0);
    const Complex Z = Sigma * w;
    return BlochPoint::raw(Z.real(), Z.imag(), w - 0.5);
}

double inversion_of(Complex Q) {
    const double n = std::norm(Q);
    return (n - 1.0) / (n + 1.0);
}

ReducedState project_state(const PureState& x, const PhysicalParams& params) {
    const BlochPoint z = hopf_project(x.C1, x.C2);
    const Complex M = maxwell_amplitude(x.A, x.B, params.Omega);
    if (z.Z3 <= 0.0) return ReducedState(M, Chart::North, north_coord(z));
    return ReducedState(M, Chart::South, south_coord(z));
}

PureState lift_state(const ReducedState& y, const PhysicalParams& params) {
    const BlochPoint z = bloch_from_chart(y.chart, y.coord);
    const double c1 = std::sqrt(std::max(0.5 - z.Z3, 0.0));
    Complex C1(c1, 0.0), C2;
    if (c1 > 0.0) {
        C2 = z.equatorial() / c1;
    } else {
        C2 = Complex(1.0, 0.0); // degenerate fiber: fix arg C2 = 0
    }
    return PureState(y.M.real(), params.Omega * y.M.imag(), C1, C2);
}

ReducedTangent reduced_rhs(const ReducedState& y, double t, const PhysicalParams& params,
                           const Pumping& pump) {
    const Complex i(0.0, 1.0);
    const double A = y.M.real();
    const double M2 = y.M.imag();
    const double coord2 = y.coord.imag();
    const double den = std::norm(y.coord) + 1.0;
    const double kt = 2.0 * params.c * params.kappa / params.Omega;
    const double drive = params.b * (A + pumping_eval(pump, params, t));

    ReducedTangent d;
    d.dM = -i * (params.Omega * y.M + Complex(params.gamma * M2 - kt * coord2 / den, 0.0));
    const Complex sq = y.coord * y.coord + 1.0;
    d.dcoord = (y.chart == Chart::North)
                   ? -i * params.omega * y.coord - drive * sq
                   : -i * params.omega * y.coord + drive * sq;
    return d;
}

void ReducedTrajectory::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("ReducedTrajectory: cannot open " + path);
    std::fprintf(f, "t,ReM,ImM,chart,ReCoord,ImCoord,Z1,Z2,Z3,inversion\n");
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                     times[k], M[k].real(), M[k].imag(), chart_name(chart[k]),
                     coord[k].real(), coord[k].imag(), bloch[k].Z1, bloch[k].Z2,
                     bloch[k].Z3, inversion[k]);
    }
    std::fclose(f);
}

ReducedTrajectory integrate_reduced(const ReducedState& y0, const SolverConfig& cfg,
                                    const PhysicalParams& params, const Pumping& pump) {
    cfg.validate();
    const double fast = std::max(params.omega, pump.max_frequency(params.Omega));
    const double max_step = 2.0 * std::numbers::pi / (50.0 * fast);

    ReducedTrajectory traj;
    Chart chart = y0.chart;

    auto rhs = [&](double t, const StateVec<4>& v, StateVec<4>& dv) {
        const ReducedState y(Complex(v[0], v[1]), chart, Complex(v[2], v[3]));
        const ReducedTangent d = reduced_rhs(y, t, params, pump);
        dv = {d.dM.real(), d.dM.imag(), d.dcoord.real(), d.dcoord.imag()};
    };
    auto post_step = [&](double, StateVec<4>& v) {
        const Complex coord(v[2], v[3]);
        if (std::abs(coord) > kChartSwitchRadius) {
            const Complex flipped = other_chart_coord(coord);
            v[2] = flipped.real();
            v[3] = flipped.imag();
            chart = (chart == Chart::North) ? Chart::South : Chart::North;
            ++traj.chart_switches;
            return true;
        }
        return false;
    };
    auto observe = [&](double t, const StateVec<4>& v) {
        const Complex coord(v[2], v[3]);
        traj.times.push_back(t);
        traj.M.emplace_back(v[0], v[1]);
        traj.chart.push_back(chart);
        traj.coord.push_back(coord);
        traj.bloch.push_back(bloch_from_chart(chart, coord));
        traj.inversion.push_back(inversion_in_chart(chart, coord));
    };

    integrate_ode<4>(rhs, {y0.M.real(), y0.M.imag(), y0.coord.real(), y0.coord.imag()},
                     cfg, max_step, observe, post_step);
    return traj;
}

} // namespace mblab

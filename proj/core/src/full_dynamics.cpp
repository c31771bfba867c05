#include "mblab/full_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace mblab {

PureTangent mbe_rhs(const PureState& x, double t, const PhysicalParams& params,
                    const Pumping& pump) {
    const Complex i(0.0, 1.0);
    const double j = 2.0 * params.kappa * std::imag(std::conj(x.C1) * x.C2);
    const double a = (params.kappa / params.c) * (x.A + pumping_eval(pump, params, t));
    PureTangent d;
    d.dA = x.B;
    d.dB = -params.Omega * params.Omega * x.A - params.gamma * x.B + params.c * j;
    d.dC1 = -i * params.omega1 * x.C1 + (a / params.hbar) * x.C2;
    d.dC2 = -i * params.omega2 * x.C2 - (a / params.hbar) * x.C1;
    return d;
}

namespace {

inline StateVec<6> pack(const PureState& x) {
    return {x.A, x.B, x.C1.real(), x.C1.imag(), x.C2.real(), x.C2.imag()};
}

inline PureState unpack(const StateVec<6>& y) {
    return PureState::raw(y[0], y[1], Complex(y[2], y[3]), Complex(y[4], y[5]));
}

} // namespace

double FullTrajectory::max_charge_drift() const {
    double m = 0.0;
    for (double q : charge) m = std::max(m, std::abs(q - 1.0));
    return m;
}

void FullTrajectory::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("FullTrajectory: cannot open " + path);
    std::fprintf(f, "t,A,B,ReC1,ImC1,ReC2,ImC2,charge,energy,lyapunov\n");
    for (std::size_t k = 0; k < times.size(); ++k) {
        const PureState& x = states[k];
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                     times[k], x.A, x.B, x.C1.real(), x.C1.imag(), x.C2.real(),
                     x.C2.imag(), charge[k], energy[k], lyapunov[k]);
    }
    std::fclose(f);
}

FullTrajectory integrate_full(const PureState& x0, const SolverConfig& cfg,
                              const PhysicalParams& params, const Pumping& pump) {
    cfg.validate();
    const double fast = std::max(params.omega, pump.max_frequency(params.Omega));
    const double max_step = 2.0 * std::numbers::pi / (50.0 * fast);
    // eps = 0 (pure Maxwell energy) when gamma = 0; the strict Lyapunov
    // monitor only makes sense for the damped system
    const double eps = lyapunov_default_eps(params);

    FullTrajectory traj;
    const std::size_t n_samples =
        static_cast<std::size_t>(cfg.t_end / cfg.sample_dt) + 2;
    traj.times.reserve(n_samples);
    traj.states.reserve(n_samples);
    traj.charge.reserve(n_samples);
    traj.energy.reserve(n_samples);
    traj.lyapunov.reserve(n_samples);

    auto rhs = [&](double t, const StateVec<6>& y, StateVec<6>& dy) {
        const PureTangent d = mbe_rhs(unpack(y), t, params, pump);
        dy = {d.dA, d.dB, d.dC1.real(), d.dC1.imag(), d.dC2.real(), d.dC2.imag()};
    };
    auto observe = [&](double t, const StateVec<6>& y) {
        const PureState x = unpack(y);
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.charge.push_back(x.charge());
        traj.energy.push_back(hamiltonian(x, t, params, pump));
        traj.lyapunov.push_back(
            eps > 0.0 ? lyapunov_value(x.A, x.B, params, eps)
                      : 0.5 * (params.Omega * params.Omega * x.A * x.A + x.B * x.B));
    };

    integrate_ode<6>(rhs, pack(x0), cfg, max_step, observe);
    return traj;
}

double lyapunov_value(double A, double B, const PhysicalParams& params, double eps) {
    if (!(eps > 0.0) || eps >= params.Omega)
        throw EpsOutOfRange("lyapunov_value: need 0 < eps < Omega");
    return 0.5 * (params.Omega * params.Omega * A * A + B * B) + eps * A * B;
}

AprioriReport apriori_bound_check(const FullTrajectory& traj, const PhysicalParams& params) {
    if (traj.times.empty()) throw InvalidParams("apriori_bound_check: empty trajectory");
    AprioriReport rep{};
    rep.V0 = traj.lyapunov.front();
    rep.sup_V = 0.0;
    rep.sup_amp2 = 0.0;
    rep.bounded = true;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const PureState& x = traj.states[k];
        const double amp2 = x.A * x.A + x.B * x.B;
        rep.sup_V = std::max(rep.sup_V, traj.lyapunov[k]);
        rep.sup_amp2 = std::max(rep.sup_amp2, amp2);
        if (!std::isfinite(amp2) || !std::isfinite(traj.lyapunov[k])) rep.bounded = false;
    }
    const PureState& s0 = traj.states.front();
    rep.amp2_0 = s0.A * s0.A + s0.B * s0.B;
    rep.ratio = rep.sup_amp2 / (rep.amp2_0 + params.r * params.r);
    return rep;
}

} // namespace mblab

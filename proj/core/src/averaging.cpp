#include "mblab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace mblab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// quadrature horizon (in periods 2 pi / omega) for the non-resonant gbar
constexpr double kNonResAvgPeriods = 1500.0;

// f and g with explicit coefficients: (gamma, kt, b) gives the p-scaled
// field, (gamma1, kappa1, b1) the unscaled one. sign = -1 in the North
// chart, +1 in the South chart.
EnvelopeTangent field_impl(const EnvelopeState& e, double t, const PhysicalParams& params,
                           const Pumping& pump, double g, double k, double b, double sign) {
    const Complex i(0.0, 1.0);
    const Complex rotO = std::exp(i * params.Omega * t);
    const Complex rotw = std::exp(i * params.omega * t);
    const double den = std::norm(e.Qq) + 1.0;
    const double Ae = pumping_eval(pump, params, t);

    EnvelopeTangent d;
    d.dM = -i * rotO *
           (g * std::imag(e.Mm / rotO) - k * std::imag(e.Qq / rotw) / den);
    d.dQ = sign * b * rotw * (std::real(e.Mm / rotO) + Ae) *
           (e.Qq * e.Qq / (rotw * rotw) + 1.0);
    return d;
}

EnvelopeTangent resonance_average(const EnvelopeState& e, Complex Ae, double g1, double k1,
                                  double b1) {
    const double den = std::norm(e.Qq) + 1.0;
    const Complex W = e.Mm + Ae;
    EnvelopeTangent d;
    d.dM = -0.5 * g1 * e.Mm + 0.5 * k1 * e.Qq / den;
    d.dQ = 0.5 * b1 *
           (W * (std::norm(e.Qq) - 1.0) -
            2.0 * e.Qq * std::real(std::conj(W) * e.Qq));
    return d;
}

// Composite Simpson average of the field over [0, T]; step resolves the
// fastest pump/carrier period with 200 points.
EnvelopeTangent simpson_average(const EnvelopeState& e, const PhysicalParams& params,
                                const Pumping& pump, double T, double g, double k, double b,
                                double sign) {
    if (!(T > 0.0)) throw InvalidParams("numeric_average: T_avg must be > 0");
    const double fmax = std::max(params.omega, pump.max_frequency(params.Omega));
    const double step = kTwoPi / (200.0 * fmax);
    std::size_t n = static_cast<std::size_t>(std::ceil(T / step));
    n += n % 2;
    n = std::max<std::size_t>(n, 2);
    const double h = T / static_cast<double>(n);

    Complex accM(0.0, 0.0), accQ(0.0, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        const EnvelopeTangent d =
            field_impl(e, h * static_cast<double>(j), params, pump, g, k, b, sign);
        accM += w * d.dM;
        accQ += w * d.dQ;
    }
    const double scale = h / (3.0 * T);
    return {accM * scale, accQ * scale};
}

} // namespace

EnvelopeTangent envelope_rhs(const EnvelopeState& e, double t, const PhysicalParams& params,
                             const Pumping& pump) {
    const double kt = 2.0 * params.c * params.kappa / params.Omega;
    return field_impl(e, t, params, pump, params.gamma, kt, params.b, -1.0);
}

EnvelopeTangent envelope_rhs_south(const EnvelopeState& e, double t,
                                   const PhysicalParams& params, const Pumping& pump) {
    const double kt = 2.0 * params.c * params.kappa / params.Omega;
    return field_impl(e, t, params, pump, params.gamma, kt, params.b, +1.0);
}

EnvelopeTangent envelope_field(const EnvelopeState& e, double t, const PhysicalParams& params,
                               const Pumping& pump) {
    params.require_coupled("envelope_field");
    return field_impl(e, t, params, pump, params.gamma1, params.kappa1, params.b1, -1.0);
}

EnvelopeTangent envelope_field_south(const EnvelopeState& e, double t,
                                     const PhysicalParams& params, const Pumping& pump) {
    params.require_coupled("envelope_field_south");
    return field_impl(e, t, params, pump, params.gamma1, params.kappa1, params.b1, +1.0);
}

EnvelopeTangent averaged_field(const EnvelopeState& e, const PhysicalParams& params,
                               const Pumping& pump) {
    params.require_coupled("averaged_field");
    if (params.resonant())
        return resonance_average(e, carrier_coefficient(pump), params.gamma1, params.kappa1,
                                 params.b1);
    // fbar keeps its closed form off resonance; gbar goes through quadrature
    const double T = kNonResAvgPeriods * kTwoPi / params.omega;
    EnvelopeTangent d = simpson_average(e, params, pump, T, params.gamma1, params.kappa1,
                                        params.b1, -1.0);
    d.dM = -0.5 * params.gamma1 * e.Mm;
    return d;
}

EnvelopeTangent averaged_rhs(const EnvelopeState& e, const PhysicalParams& params,
                             const Pumping& pump) {
    EnvelopeTangent d = averaged_field(e, params, pump);
    return {params.p * d.dM, params.p * d.dQ};
}

EnvelopeTangent averaged_rhs(const EnvelopeState& e, const PhysicalParams& params, Complex Ae) {
    return averaged_rhs(e, params, Pumping(Ae));
}

EnvelopeTangent numeric_average(const EnvelopeState& e, const PhysicalParams& params,
                                const Pumping& pump, double T_avg) {
    const double kt = 2.0 * params.c * params.kappa / params.Omega;
    return simpson_average(e, params, pump, T_avg, params.gamma, kt, params.b, -1.0);
}

EnvelopeTangent numeric_average_south(const EnvelopeState& e, const PhysicalParams& params,
                                      const Pumping& pump, double T_avg) {
    const double kt = 2.0 * params.c * params.kappa / params.Omega;
    return simpson_average(e, params, pump, T_avg, params.gamma, kt, params.b, +1.0);
}

double kbm_order(const PhysicalParams& params, const Pumping& pump, double p,
                 std::span<const EnvelopeState> domain) {
    if (!(p > 0.0)) throw InvalidParams("kbm_order: p must be > 0");
    if (domain.empty()) throw InvalidParams("kbm_order: empty domain");
    const PhysicalParams pp = params.with_coupling(p);

    const double fmax = std::max(pp.omega, pump.max_frequency(pp.Omega));
    const double h = kTwoPi / (200.0 * fmax);
    const double T_max = 1.0 / p;
    const double T_min = std::min(kTwoPi / fmax, T_max);

    // 32-point log-spaced grid over (0, 1/p], snapped to even Simpson nodes
    constexpr int kGrid = 32;
    std::vector<std::size_t> targets;
    targets.reserve(kGrid);
    for (int j = 0; j < kGrid; ++j) {
        const double T =
            T_max * std::pow(T_min / T_max, static_cast<double>(kGrid - 1 - j) / (kGrid - 1));
        std::size_t idx = 2 * static_cast<std::size_t>(std::llround(T / (2.0 * h)));
        targets.push_back(std::max<std::size_t>(idx, 2));
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    const std::size_t n_nodes = targets.back();

    double worst = 0.0;
    for (const EnvelopeState& e : domain) {
        const EnvelopeTangent vbar = averaged_field(e, pp, pump);
        Complex cumM(0.0, 0.0), cumQ(0.0, 0.0);
        std::size_t next = 0;
        EnvelopeTangent prev2 = envelope_field(e, 0.0, pp, pump);
        prev2.dM -= vbar.dM;
        prev2.dQ -= vbar.dQ;
        for (std::size_t m = 0; 2 * m < n_nodes; ++m) {
            EnvelopeTangent mid =
                envelope_field(e, h * static_cast<double>(2 * m + 1), pp, pump);
            EnvelopeTangent end =
                envelope_field(e, h * static_cast<double>(2 * m + 2), pp, pump);
            mid.dM -= vbar.dM;
            mid.dQ -= vbar.dQ;
            end.dM -= vbar.dM;
            end.dQ -= vbar.dQ;
            cumM += h / 3.0 * (prev2.dM + 4.0 * mid.dM + end.dM);
            cumQ += h / 3.0 * (prev2.dQ + 4.0 * mid.dQ + end.dQ);
            prev2 = end;
            const std::size_t node = 2 * (m + 1);
            while (next < targets.size() && targets[next] == node) {
                worst = std::max(worst,
                                 std::sqrt(std::norm(cumM) + std::norm(cumQ)));
                ++next;
            }
        }
    }
    return p * worst;
}

void EnvelopeTrajectory::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("EnvelopeTrajectory: cannot open " + path);
    std::fprintf(f, "t,ReM,ImM,ReQ,ImQ,inversion\n");
    for (std::size_t k = 0; k < times.size(); ++k)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", times[k], M[k].real(),
                     M[k].imag(), Q[k].real(), Q[k].imag(), inversion[k]);
    std::fclose(f);
}

EnvelopeTrajectory integrate_envelope(const EnvelopeState& e0, const SolverConfig& cfg,
                                      const PhysicalParams& params, const Pumping& pump) {
    cfg.validate();
    const double fast = std::max(params.omega, pump.max_frequency(params.Omega));
    const double max_step = kTwoPi / (50.0 * fast);

    EnvelopeTrajectory traj;
    auto rhs = [&](double t, const StateVec<4>& v, StateVec<4>& dv) {
        const EnvelopeTangent d =
            envelope_rhs(EnvelopeState(Complex(v[0], v[1]), Complex(v[2], v[3])), t, params,
                         pump);
        dv = {d.dM.real(), d.dM.imag(), d.dQ.real(), d.dQ.imag()};
    };
    auto observe = [&](double t, const StateVec<4>& v) {
        traj.times.push_back(t);
        traj.M.emplace_back(v[0], v[1]);
        traj.Q.emplace_back(v[2], v[3]);
        const double n = std::norm(Complex(v[2], v[3]));
        traj.inversion.push_back((n - 1.0) / (n + 1.0));
    };
    integrate_ode<4>(rhs, {e0.Mm.real(), e0.Mm.imag(), e0.Qq.real(), e0.Qq.imag()}, cfg,
                     max_step, observe);
    return traj;
}

void AveragedTrajectory::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("AveragedTrajectory: cannot open " + path);
    std::fprintf(f, "tau,t,ReM,ImM,ReQ,ImQ,inversion\n");
    for (std::size_t k = 0; k < tau.size(); ++k)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", tau[k], times[k],
                     M[k].real(), M[k].imag(), Q[k].real(), Q[k].imag(), inversion[k]);
    std::fclose(f);
}

AveragedTrajectory integrate_averaged(const EnvelopeState& e0, const SolverConfig& cfg,
                                      const PhysicalParams& params, Complex Ae) {
    cfg.validate();
    params.require_coupled("integrate_averaged");
    if (!params.resonant())
        throw InvalidParams("integrate_averaged: closed-form path requires Omega = omega");

    // rescale to tau = p t
    SolverConfig cfg_tau = cfg;
    cfg_tau.t_end = params.p * cfg.t_end;
    cfg_tau.sample_dt = params.p * cfg.sample_dt;
    cfg_tau.dt = params.p * cfg.dt;

    AveragedTrajectory traj;
    auto rhs = [&](double, const StateVec<4>& v, StateVec<4>& dv) {
        const EnvelopeTangent d =
            resonance_average(EnvelopeState(Complex(v[0], v[1]), Complex(v[2], v[3])), Ae,
                              params.gamma1, params.kappa1, params.b1);
        dv = {d.dM.real(), d.dM.imag(), d.dQ.real(), d.dQ.imag()};
    };
    auto observe = [&](double t, const StateVec<4>& v) {
        traj.tau.push_back(t);
        traj.times.push_back(t / params.p);
        traj.M.emplace_back(v[0], v[1]);
        traj.Q.emplace_back(v[2], v[3]);
        const double n = std::norm(Complex(v[2], v[3]));
        traj.inversion.push_back((n - 1.0) / (n + 1.0));
    };
    integrate_ode<4>(rhs, {e0.Mm.real(), e0.Mm.imag(), e0.Qq.real(), e0.Qq.imag()}, cfg_tau,
                     std::numeric_limits<double>::infinity(), observe);
    return traj;
}

} // namespace mblab

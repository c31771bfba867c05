#include "mblab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

namespace mblab {

namespace {

ReducedState reduced_from_envelope_point(Complex M, Complex Q) {
    if (std::abs(Q) <= 1.0) return ReducedState(M, Chart::North, Q);
    return ReducedState(M, Chart::South, other_chart_coord(Q));
}

HarmonicState pick_branch(const PhysicalParams& base, Complex Ae, Branch branch) {
    const auto states = harmonic_states(base.r, Ae, base.c);
    for (const auto& h : states)
        if (h.branch == branch) return h;
    throw BranchUnavailable(std::string("branch ") + branch_name(branch) +
                            " does not exist for these (r, Ae)");
}

void require_resonance(const PhysicalParams& base, const char* who) {
    base.require_coupled(who);
    if (!base.resonant())
        throw InvalidParams(std::string(who) + ": resonance (Omega = omega) required");
}

std::vector<double> sort_desc(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

// per-p sweeps run concurrently; aggregation is index-ordered
template <class Fn>
std::vector<double> map_sweep(const std::vector<double>& p_list, Fn&& fn) {
    std::vector<std::future<double>> futs;
    futs.reserve(p_list.size());
    for (double p : p_list)
        futs.push_back(std::async(std::launch::async, fn, p));
    std::vector<double> out;
    out.reserve(p_list.size());
    for (auto& f : futs) out.push_back(f.get());
    return out;
}

SweepResult finish_sweep(std::vector<double> p_list, std::vector<double> errors,
                         HorizonRule rule) {
    SweepResult res;
    res.p_values = std::move(p_list);
    res.errors = std::move(errors);
    res.horizon_rule = rule;
    fit_loglog(res.p_values, res.errors, res.slope, res.slope_ci);
    return res;
}

} // namespace

const char* horizon_rule_name(HorizonRule h) {
    switch (h) {
        case HorizonRule::InvSqrtP: return "1/sqrt(p)";
        case HorizonRule::InvP: return "1/p";
        case HorizonRule::MultipleInvP: return "multiple/p";
    }
    return "?";
}

void fit_loglog(const std::vector<double>& p_values, const std::vector<double>& errors,
                double& slope, double& resid) {
    if (p_values.size() != errors.size() || p_values.size() < 3)
        throw InvalidParams("fit_loglog: need at least 3 matching (p, error) pairs");
    const std::size_t n = p_values.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = std::log(p_values[k]);
        const double y = std::log(errors[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ss = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = std::log(errors[k]) - (intercept + slope * std::log(p_values[k]));
        ss += r * r;
    }
    resid = std::sqrt(ss / n);
}

double error_metric(const ReducedTrajectory& traj, Complex Mr, Complex Qr, double Omega) {
    const Complex i(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        Complex Q = traj.coord[k];
        if (traj.chart[k] == Chart::South) {
            if (std::abs(Q) == 0.0)
                throw ChartConversionFailure("error_metric: sample at the North Pole");
            Q = other_chart_coord(Q);
        }
        const Complex rot = std::exp(-i * Omega * traj.times[k]);
        const double e = std::abs(traj.M[k] - rot * Mr) + std::abs(Q - rot * Qr);
        worst = std::max(worst, e);
    }
    return worst;
}

SweepResult run_adiabatic(const PhysicalParams& base, const Pumping& pump, Branch branch,
                          std::vector<double> p_list, const SolverConfig& cfg) {
    require_resonance(base, "run_adiabatic");
    const HarmonicState h = pick_branch(base, carrier_coefficient(pump), branch);
    auto ps = sort_desc(std::move(p_list));
    auto errors = map_sweep(ps, [&](double p) {
        const PhysicalParams params = base.with_coupling(p);
        SolverConfig c = cfg;
        c.t_end = 1.0 / p;
        const ReducedState y0 = reduced_from_envelope_point(h.Mr, h.Qr);
        const ReducedTrajectory traj = integrate_reduced(y0, c, params, pump);
        return error_metric(traj, h.Mr, h.Qr, params.Omega);
    });
    return finish_sweep(std::move(ps), std::move(errors), HorizonRule::InvP);
}

SweepResult run_baseline(const PhysicalParams& base, const Pumping& pump, const PureState& x0,
                         std::vector<double> p_list, const SolverConfig& cfg) {
    base.require_coupled("run_baseline");
    auto ps = sort_desc(std::move(p_list));
    const Complex i(0.0, 1.0);
    auto errors = map_sweep(ps, [&](double p) {
        const PhysicalParams params = base.with_coupling(p);
        SolverConfig c = cfg;
        c.t_end = 1.0 / std::sqrt(p);
        const FullTrajectory traj = integrate_full(x0, c, params, pump);
        const Complex M0 = maxwell_amplitude(x0.A, x0.B, params.Omega);
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const PureState& x = traj.states[k];
            const Complex M = maxwell_amplitude(x.A, x.B, params.Omega);
            worst = std::max(worst,
                             std::abs(M - std::exp(-i * params.Omega * traj.times[k]) * M0));
        }
        return worst;
    });
    return finish_sweep(std::move(ps), std::move(errors), HorizonRule::InvSqrtP);
}

SweepResult run_uniform(const PhysicalParams& base, const Pumping& pump,
                        std::vector<double> p_list, const SolverConfig& cfg,
                        double horizon_multiple) {
    require_resonance(base, "run_uniform");
    const Complex Ae = carrier_coefficient(pump);
    if (!(base.c * base.r > std::abs(Ae)))
        throw BranchUnavailable("run_uniform: needs cr > |Ae| (linearly stable branch)");
    const HarmonicState h = pick_branch(base, Ae, Branch::NonZeroInvPlus);
    auto ps = sort_desc(std::move(p_list));
    auto errors = map_sweep(ps, [&](double p) {
        const PhysicalParams params = base.with_coupling(p);
        SolverConfig c = cfg;
        c.t_end = horizon_multiple / p;
        const ReducedState y0 = reduced_from_envelope_point(h.Mr, h.Qr);
        const ReducedTrajectory traj = integrate_reduced(y0, c, params, pump);
        return error_metric(traj, h.Mr, h.Qr, params.Omega);
    });
    return finish_sweep(std::move(ps), std::move(errors), HorizonRule::MultipleInvP);
}

AttractionReport run_attraction(const PhysicalParams& base, const Pumping& pump, double p,
                                std::vector<double> d0_list, const SolverConfig& cfg) {
    require_resonance(base, "run_attraction");
    const Complex Ae = carrier_coefficient(pump);
    if (!(base.c * base.r > std::abs(Ae)))
        throw BranchUnavailable("run_attraction: needs cr > |Ae|");
    const HarmonicState h = pick_branch(base, Ae, Branch::NonZeroInvPlus);
    const PhysicalParams params = base.with_coupling(p);
    const StabilityReport stab = eigenvalues_harmonic(h, params);

    AttractionReport rep;
    rep.p = p;
    rep.nu = stab.nu;
    rep.rate_ref = p * stab.nu;

    for (double d0 : d0_list) {
        SolverConfig c = cfg;
        c.t_end = 40.0 / p;
        c.sample_dt = c.t_end / 4000.0;
        const ReducedState y0 = reduced_from_envelope_point(h.Mr, h.Qr + d0);
        const ReducedTrajectory traj = integrate_reduced(y0, c, params, pump);

        // e(t) against the rotating harmonic orbit
        const Complex i(0.0, 1.0);
        const std::size_t n = traj.times.size();
        std::vector<double> e(n);
        for (std::size_t k = 0; k < n; ++k) {
            Complex Q = traj.coord[k];
            if (traj.chart[k] == Chart::South) Q = other_chart_coord(Q);
            const Complex rot = std::exp(-i * params.Omega * traj.times[k]);
            e[k] = std::abs(traj.M[k] - rot * h.Mr) + std::abs(Q - rot * h.Qr);
        }

        // asymptotic floor from the tail, then a log-linear fit of the
        // decaying phase
        const std::size_t tail = n - n / 5;
        double e_inf = 0.0;
        for (std::size_t k = tail; k < n; ++k) e_inf += e[k];
        e_inf /= static_cast<double>(n - tail);

        const double y0_level = std::max(e.front() - e_inf, 0.0);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t m = 0;
        for (std::size_t k = 0; k < tail; ++k) {
            const double y = e[k] - e_inf;
            if (y < 0.02 * y0_level || y <= 0.0) continue;
            const double x = traj.times[k];
            const double ly = std::log(y);
            sx += x;
            sy += ly;
            sxx += x * x;
            sxy += x * ly;
            ++m;
        }
        AttractionFit fit{d0, 0.0, 0.0};
        if (m >= 8) {
            const double denom = m * sxx - sx * sx;
            fit.mu_hat = -(m * sxy - sx * sy) / denom;
            fit.ratio = fit.mu_hat / rep.rate_ref;
        }
        rep.fits.push_back(fit);
    }
    return rep;
}

SweepResult run_averaging_error(const PhysicalParams& base, Complex Ae, EnvelopeState y0,
                                std::vector<double> p_list, const SolverConfig& cfg) {
    require_resonance(base, "run_averaging_error");
    const Pumping pump(Ae);
    auto ps = sort_desc(std::move(p_list));
    auto errors = map_sweep(ps, [&](double p) {
        const PhysicalParams params = base.with_coupling(p);
        SolverConfig c = cfg;
        c.t_end = 1.0 / p;
        const EnvelopeTrajectory env = integrate_envelope(y0, c, params, pump);
        const AveragedTrajectory avg = integrate_averaged(y0, c, params, Ae);
        const std::size_t n = std::min(env.times.size(), avg.times.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(env.M[k] - avg.M[k]) +
                                        std::abs(env.Q[k] - avg.Q[k]));
        return worst;
    });
    return finish_sweep(std::move(ps), std::move(errors), HorizonRule::InvP);
}

BasinReport probe_basin(const PhysicalParams& base, Complex Ae) {
    require_resonance(base, "probe_basin");
    const HarmonicState h = pick_branch(base, Ae, Branch::NonZeroInvPlus);

    const Complex offsets[9] = {{0.0, 0.0},    {0.35, 0.0},   {-0.35, 0.0},
                                {0.0, 0.35},   {0.0, -0.35},  {0.25, 0.25},
                                {0.25, -0.25}, {-0.25, 0.25}, {-0.25, -0.25}};
    BasinReport rep;
    rep.n_converged = 0;
    SolverConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-12;
    cfg.t_end = 400.0 / base.p;      // tau horizon 400
    cfg.sample_dt = cfg.t_end / 64.0;
    for (const Complex& off : offsets) {
        const Complex q = h.Qr + off;
        rep.q_points.push_back(q);
        const AveragedTrajectory traj =
            integrate_averaged(EnvelopeState(h.Mr, q), cfg, base, Ae);
        const double dist =
            std::abs(traj.M.back() - h.Mr) + std::abs(traj.Q.back() - h.Qr);
        const bool ok = dist < 1e-5;
        rep.converged.push_back(ok);
        if (ok) ++rep.n_converged;
    }
    return rep;
}

NonResReport run_nonresonance(const PhysicalParams& base, const Pumping& pump,
                              const SolverConfig& cfg) {
    if (base.resonant())
        throw InvalidParams("run_nonresonance: requires Omega != omega");
    NonResReport rep{};
    rep.gamma = base.gamma;
    rep.expected_rate = base.gamma / 2.0;

    const PureState x0(1.0, 0.0, Complex(1.0, 0.0), Complex(0.0, 0.0));
    SolverConfig c = cfg;
    c.t_end = 2.0 / base.gamma;
    const FullTrajectory traj = integrate_full(x0, c, base, pump);

    rep.m0 = std::abs(maxwell_amplitude(x0.A, x0.B, base.Omega));
    const PureState& xe = traj.states.back();
    rep.m_end = std::abs(maxwell_amplitude(xe.A, xe.B, base.Omega));
    rep.expected_end = rep.m0 * std::exp(-1.0);
    rep.misfit = std::abs(rep.m_end - rep.expected_end) / rep.expected_end;

    // regression of log |M| over [0.5, 2]/gamma
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        if (t < 0.5 / base.gamma) continue;
        const PureState& x = traj.states[k];
        const double mod = std::abs(maxwell_amplitude(x.A, x.B, base.Omega));
        if (mod <= 0.0) continue;
        const double ly = std::log(mod);
        sx += t;
        sy += ly;
        sxx += t * t;
        sxy += t * ly;
        ++m;
    }
    rep.fitted_rate = (m >= 3) ? -(m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    return rep;
}

std::vector<KbmPoint> run_kbm_order(const PhysicalParams& base, const Pumping& pump,
                                    std::vector<double> p_list) {
    base.require_coupled("run_kbm_order");
    static const EnvelopeState domain[5] = {
        {Complex(0.3, 0.1), Complex(0.5, 0.0)},
        {Complex(-0.5, 0.0), Complex(0.0, 0.8)},
        {Complex(1.0, 0.0), Complex(-0.3, 0.4)},
        {Complex(0.2, -0.2), Complex(-0.6, -0.5)},
        {Complex(0.0, 0.0), Complex(1.2, 0.0)},
    };
    auto ps = sort_desc(std::move(p_list));
    std::vector<KbmPoint> out;
    out.reserve(ps.size());
    for (double p : ps)
        out.push_back({p, kbm_order(base, pump, p, std::span<const EnvelopeState>(domain))});
    return out;
}

PureState random_pure_state(std::uint64_t seed, double amp) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amp, amp);
    std::normal_distribution<double> g(0.0, 1.0);
    const double A = u(rng), B = u(rng);
    Complex C1(g(rng), g(rng)), C2(g(rng), g(rng));
    const double norm = std::sqrt(std::norm(C1) + std::norm(C2));
    return PureState(A, B, C1 / norm, C2 / norm);
}

} // namespace mblab

// experiments.hpp — sweep experiments that realize the single-frequency
// asymptotics numerically: adiabatic O(sqrt(p)) tracking on [0, 1/p], the
// O(p) uniform-in-time bound, attraction rates against the closed-form
// spectrum, averaging error against the averaged flow, the non-resonance
// Maxwell decay law, and the baseline O(sqrt(p)) drift on [0, 1/sqrt(p)].

#pragma once

#include <cstdint>
#include <vector>

#include "mblab/averaging.hpp"
#include "mblab/harmonic.hpp"
#include "mblab/reduction.hpp"

namespace mblab {

enum class HorizonRule { InvSqrtP, InvP, MultipleInvP };

const char* horizon_rule_name(HorizonRule h);

struct SweepResult {
    std::vector<double> p_values; // strictly decreasing
    std::vector<double> errors;
    double slope;                 // OLS slope of log(error) against log(p)
    double slope_ci;              // rms residual of the fit
    HorizonRule horizon_rule;
};

// Ordinary least squares on (log p, log error); needs at least 3 points.
void fit_loglog(const std::vector<double>& p_values, const std::vector<double>& errors,
                double& slope, double& resid);

// max_t [ |M(t) - e^{-i Omega t} Mr| + |Q(t) - e^{-i Omega t} Qr| ] with Q
// compared in North coordinates; South samples are converted through the
// inversion and a sample at the North Pole raises ChartConversionFailure.
double error_metric(const ReducedTrajectory& traj, Complex Mr, Complex Qr, double Omega);

// Tracking sweep from a harmonic initial state on [0, 1/p]: for each p
// the dissipation is set to gamma = p / r (r, Omega, omega, c, hbar come
// from `base`), the initial state is the lift of (Mr, Qr), and the tracking
// error against the rotating harmonic orbit is recorded. cfg.t_end is
// overridden per p.
SweepResult run_adiabatic(const PhysicalParams& base, const Pumping& pump, Branch branch,
                          std::vector<double> p_list, const SolverConfig& cfg);

// Baseline drift for an arbitrary fixed initial state: full-system runs on
// [0, p^{-1/2}] measuring max_t |M(t) - e^{-i Omega t} M(0)|.
SweepResult run_baseline(const PhysicalParams& base, const Pumping& pump, const PureState& x0,
                         std::vector<double> p_list, const SolverConfig& cfg);

// Uniform-in-time sweep on the linearly stable branch with horizon
// horizon_multiple / p; requires cr > |Ae|.
SweepResult run_uniform(const PhysicalParams& base, const Pumping& pump,
                        std::vector<double> p_list, const SolverConfig& cfg,
                        double horizon_multiple = 10.0);

struct AttractionFit {
    double d0;      // perturbation size applied to Q
    double mu_hat;  // fitted decay rate of e(t) - e(inf)
    double ratio;   // mu_hat / (p nu)
};

struct AttractionReport {
    double p;
    double nu;        // closed-form spectral abscissa of the stable state
    double rate_ref;  // p * nu
    std::vector<AttractionFit> fits;
};

// Perturbs Q by d0 off the stable harmonic state, lifts, integrates the
// reduced system and fits the exponential approach to the rotating orbit.
AttractionReport run_attraction(const PhysicalParams& base, const Pumping& pump, double p,
                                std::vector<double> d0_list, const SolverConfig& cfg);

// Envelope system against the averaged flow from the same initial point on
// [0, 1/p]: records max_t |M_env - M_avg| + |Q_env - Q_avg|.
SweepResult run_averaging_error(const PhysicalParams& base, Complex Ae, EnvelopeState y0,
                                std::vector<double> p_list, const SolverConfig& cfg);

struct BasinReport {
    std::vector<Complex> q_points;  // deterministic 3x3 grid in |Q - Q+| <= 0.5
    std::vector<bool> converged;    // under the averaged flow
    int n_converged;
};

// Probes the numerically observed basin of the stable state.
BasinReport probe_basin(const PhysicalParams& base, Complex Ae);

struct NonResReport {
    double gamma;
    double m0;             // |M(0)|
    double m_end;          // |M| at t = 2/gamma
    double expected_end;   // |M(0)| e^{-1}
    double misfit;         // relative mismatch at t = 2/gamma
    double fitted_rate;    // regression of log|M| over [0.5, 2]/gamma
    double expected_rate;  // gamma / 2
};

// Full-system run off resonance: |M(t)| against the decay law
// |M(0)| e^{-gamma t / 2}.
NonResReport run_nonresonance(const PhysicalParams& base, const Pumping& pump,
                              const SolverConfig& cfg);

struct KbmPoint {
    double p;
    double delta;
};

// delta(p) over a fixed deterministic envelope-state domain.
std::vector<KbmPoint> run_kbm_order(const PhysicalParams& base, const Pumping& pump,
                                    std::vector<double> p_list);

// Deterministic initial states for randomized probes; the seed is recorded
// in experiment summaries.
PureState random_pure_state(std::uint64_t seed, double amp = 1.0);

} // namespace mblab

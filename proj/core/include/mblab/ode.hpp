// ode.hpp — explicit Runge-Kutta drivers shared by all integrations.
//
// The default is the Dormand-Prince 5(4) embedded pair with FSAL and a
// PI-like controller; classical fixed-step RK4 is kept for cross-checking.
// Steps are clamped so that sample instants are hit exactly (no dense-output
// interpolation), and the error norm is built from whole-vector 2-norms so
// that step selection is invariant under rotations of state components
// (gauge rotations of the level amplitudes in particular).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "mblab/errors.hpp"

namespace mblab {

enum class OdeMethod { RK4Fixed, RK45Adaptive };

struct SolverConfig {
    OdeMethod method{OdeMethod::RK45Adaptive};
    double dt{1e-3};          // fixed step (RK4Fixed)
    double rel_tol{1e-10};    // RK45Adaptive
    double abs_tol{1e-12};    // RK45Adaptive
    double sample_dt{0.25};   // output sampling interval
    double t_end{100.0};      // horizon

    void validate() const {
        if (method == OdeMethod::RK4Fixed && !(dt > 0.0))
            throw InvalidParams("SolverConfig: dt must be > 0");
        if (!(rel_tol > 0.0 && rel_tol < 1.0))
            throw InvalidParams("SolverConfig: rel_tol must lie in (0,1)");
        if (!(abs_tol >= 0.0)) throw InvalidParams("SolverConfig: abs_tol must be >= 0");
        if (!(sample_dt > 0.0)) throw InvalidParams("SolverConfig: sample_dt must be > 0");
        if (!(t_end > 0.0)) throw InvalidParams("SolverConfig: t_end must be > 0");
    }
};

template <std::size_t N>
using StateVec = std::array<double, N>;

namespace detail {

template <std::size_t N>
double norm2(const StateVec<N>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

template <std::size_t N>
bool finite(const StateVec<N>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Dormand-Prince 5(4) tableau.
struct DP5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - bhat (5th-order weights minus the embedded 4th-order ones)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

} // namespace detail

// One DP5 step from (t, y) with stride h. k1 must hold f(t, y) on entry;
// on exit k1 holds f(t+h, y_out) (FSAL). Returns the scaled error estimate
// err/(abs_tol + rel_tol*max(|y|,|y_out|)); non-finite stages yield +inf.
template <std::size_t N, class RHS>
double dp5_step(RHS&& rhs, double t, const StateVec<N>& y, double h,
                StateVec<N>& k1, StateVec<N>& y_out, double rel_tol, double abs_tol) {
    using T = detail::DP5;
    StateVec<N> k2, k3, k4, k5, k6, k7, tmp;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * T::a21 * k1[i];
    rhs(t + T::c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (T::a31 * k1[i] + T::a32 * k2[i]);
    rhs(t + T::c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
    rhs(t + T::c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] +
                             T::a54 * k4[i]);
    rhs(t + T::c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] +
                             T::a64 * k4[i] + T::a65 * k5[i]);
    rhs(t + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
        y_out[i] = y[i] + h * (T::b1 * k1[i] + T::b3 * k3[i] + T::b4 * k4[i] +
                               T::b5 * k5[i] + T::b6 * k6[i]);
    rhs(t + h, y_out, k7);

    if (!detail::finite(y_out) || !detail::finite(k7))
        return std::numeric_limits<double>::infinity();

    StateVec<N> err;
    for (std::size_t i = 0; i < N; ++i)
        err[i] = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] +
                      T::e5 * k5[i] + T::e6 * k6[i] + T::e7 * k7[i]);

    const double scale =
        abs_tol + rel_tol * std::max(detail::norm2(y), detail::norm2(y_out));
    const double e = detail::norm2(err) / (scale * std::sqrt(static_cast<double>(N)));
    k1 = k7;
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

// Classical RK4 step.
template <std::size_t N, class RHS>
void rk4_step(RHS&& rhs, double t, const StateVec<N>& y, double h, StateVec<N>& y_out) {
    StateVec<N> k1, k2, k3, k4, tmp;
    rhs(t, y, k1);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
        y_out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Drives y from t = 0 to cfg.t_end. observe(t, y) fires at t = 0, at every
// multiple of cfg.sample_dt and at t_end; post_step(t, y) fires after every
// accepted step and may mutate y (chart switches), returning true when it
// did. max_step caps the stride (pass +inf when no fast scale needs
// resolving). Throws StepSizeUnderflow when the accepted step falls below
// 1e-14 * t_end.
template <std::size_t N, class RHS, class Observer, class PostStep>
void integrate_ode(RHS&& rhs, StateVec<N> y, const SolverConfig& cfg, double max_step,
                   Observer&& observe, PostStep&& post_step) {
    cfg.validate();
    const double t_end = cfg.t_end;
    const double h_min = 1e-14 * t_end;

    double t = 0.0;
    observe(t, y);
    long sample_idx = 1;
    double t_sample = std::min(cfg.sample_dt, t_end);

    if (cfg.method == OdeMethod::RK4Fixed) {
        StateVec<N> y_next;
        while (t < t_end) {
            const double target = std::min(t_sample, t_end);
            double h = std::min(cfg.dt, target - t);
            rk4_step(rhs, t, y, h, y_next);
            y = y_next;
            t = (target - t <= cfg.dt) ? target : t + h;
            post_step(t, y);
            if (t >= target - 1e-15 * t_end) {
                t = target;
                observe(t, y);
                ++sample_idx;
                t_sample = std::min(sample_idx * cfg.sample_dt, t_end);
                if (target >= t_end) break;
            }
        }
        return;
    }

    // Adaptive DP5. The controller targets error-per-unit-step, which keeps
    // the accumulated drift of conserved quantities near rel_tol * t_end.
    StateVec<N> k1, y_next;
    rhs(t, y, k1);

    const double d0 = detail::norm2(y) + cfg.abs_tol;
    const double d1 = detail::norm2(k1) + cfg.abs_tol;
    double h_ctrl = std::min({0.01 * d0 / d1, max_step, t_end});
    if (!std::isfinite(h_ctrl) || h_ctrl <= 0.0) h_ctrl = std::min(1e-4 * t_end, max_step);

    // the per-unit-step error estimate scales like h^4
    const double order_exp = 1.0 / 4.0;
    const double safety = 0.9;
    double err_prev = 1.0;

    while (t < t_end) {
        const double target = std::min(t_sample, t_end);
        bool clamped = false;
        double h = h_ctrl;
        if (t + h >= target) {
            h = target - t;
            clamped = true;
        }

        StateVec<N> k1_try = k1;
        // raw error estimate, scaled per unit step against rel_tol
        const double err_raw =
            dp5_step(rhs, t, y, h, k1_try, y_next, cfg.rel_tol, cfg.abs_tol);
        const double err = err_raw / std::max(h, h_min);

        if (err <= 1.0) {
            t = clamped ? target : t + h;
            y = y_next;
            k1 = k1_try;
            if (post_step(t, y)) rhs(t, y, k1); // state mutated: refresh FSAL
            // PI-flavoured growth, frozen while the step is boundary-clamped
            const double grow =
                safety * std::pow(err + 1e-30, -0.7 * order_exp) *
                std::pow(err_prev + 1e-30, 0.4 * order_exp);
            if (!clamped) {
                h_ctrl = h * std::clamp(grow, 0.2, 5.0);
            } else if (grow > 1.0) {
                h_ctrl = std::max(h_ctrl, h * std::min(grow, 5.0));
            }
            h_ctrl = std::min(h_ctrl, max_step);
            err_prev = err;
            if (clamped) {
                observe(t, y);
                ++sample_idx;
                t_sample = std::min(sample_idx * cfg.sample_dt, t_end);
                if (target >= t_end) break;
            }
        } else {
            const double shrink = std::isfinite(err)
                                      ? std::max(safety * std::pow(err, -order_exp), 0.1)
                                      : 0.1;
            h_ctrl = h * shrink;
            if (h_ctrl < h_min)
                throw StepSizeUnderflow("integrate_ode: step size fell below 1e-14 * t_end");
        }
    }
}

template <std::size_t N, class RHS, class Observer>
void integrate_ode(RHS&& rhs, StateVec<N> y, const SolverConfig& cfg, double max_step,
                   Observer&& observe) {
    integrate_ode<N>(static_cast<RHS&&>(rhs), y, cfg, max_step,
                     static_cast<Observer&&>(observe),
                     [](double, StateVec<N>&) { return false; });
}

} // namespace mblab

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mblab/ode.hpp"

using namespace mblab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// harmonic oscillator y'' = -w^2 y as a 2-system, exact solution known
struct Oscillator {
    double w;
    void operator()(double, const StateVec<2>& y, StateVec<2>& dy) const {
        dy[0] = y[1];
        dy[1] = -w * w * y[0];
    }
};

double run_oscillator(OdeMethod method, double tol, double dt, double t_end, double w,
                      std::vector<double>* times = nullptr) {
    SolverConfig cfg;
    cfg.method = method;
    cfg.dt = dt;
    cfg.rel_tol = tol;
    cfg.abs_tol = 1e-14;
    cfg.sample_dt = 0.5;
    cfg.t_end = t_end;
    double worst = 0.0;
    integrate_ode<2>(Oscillator{w}, StateVec<2>{1.0, 0.0}, cfg, kInf,
                     [&](double t, const StateVec<2>& y) {
                         const double err = std::hypot(y[0] - std::cos(w * t),
                                                       y[1] + w * std::sin(w * t));
                         worst = std::max(worst, err);
                         if (times) times->push_back(t);
                     });
    return worst;
}

} // namespace

TEST_SUITE_BEGIN("ode");

TEST_CASE("adaptive DP5 tracks the oscillator within tolerance * horizon") {
    const double err = run_oscillator(OdeMethod::RK45Adaptive, 1e-10, 0.0, 100.0, 1.0);
    CHECK(err < 1e-10 * 100.0 * 5.0);
    CHECK(err > 0.0);
}

TEST_CASE("global error scales with the tolerance") {
    const double e1 = run_oscillator(OdeMethod::RK45Adaptive, 1e-8, 0.0, 50.0, 1.3);
    const double e2 = run_oscillator(OdeMethod::RK45Adaptive, 1e-11, 0.0, 50.0, 1.3);
    CHECK(e2 < e1 * 1e-1);
}

TEST_CASE("samples land exactly on the grid") {
    std::vector<double> times;
    run_oscillator(OdeMethod::RK45Adaptive, 1e-9, 0.0, 10.25, 1.0, &times);
    REQUIRE(times.size() == 22); // 0, 0.5, ..., 10.0, then 10.25
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        CHECK(times[k] == 0.5 * static_cast<double>(k));
    CHECK(times.back() == 10.25);
}

TEST_CASE("fixed-step RK4 converges at fourth order") {
    const double e1 = run_oscillator(OdeMethod::RK4Fixed, 1e-3, 0.02, 20.0, 1.0);
    const double e2 = run_oscillator(OdeMethod::RK4Fixed, 1e-3, 0.01, 20.0, 1.0);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.5);
    CHECK(order < 4.5);
}

TEST_CASE("RK4 and DP5 agree on a smooth problem") {
    SolverConfig a;
    a.method = OdeMethod::RK45Adaptive;
    a.rel_tol = 1e-12;
    a.sample_dt = 1.0;
    a.t_end = 10.0;
    SolverConfig b = a;
    b.method = OdeMethod::RK4Fixed;
    b.dt = 1e-3;
    StateVec<2> last_a{}, last_b{};
    integrate_ode<2>(Oscillator{0.9}, StateVec<2>{0.3, -0.2}, a, kInf,
                     [&](double, const StateVec<2>& y) { last_a = y; });
    integrate_ode<2>(Oscillator{0.9}, StateVec<2>{0.3, -0.2}, b, kInf,
                     [&](double, const StateVec<2>& y) { last_b = y; });
    CHECK(std::abs(last_a[0] - last_b[0]) < 1e-10);
    CHECK(std::abs(last_a[1] - last_b[1]) < 1e-10);
}

TEST_CASE("finite-time blow-up raises StepSizeUnderflow") {
    SolverConfig cfg;
    cfg.rel_tol = 1e-8;
    cfg.sample_dt = 0.1;
    cfg.t_end = 3.0;
    auto rhs = [](double, const StateVec<1>& y, StateVec<1>& dy) {
        dy[0] = y[0] * y[0]; // y(t) = 1/(1-t), blows up at t = 1 < t_end
    };
    CHECK_THROWS_AS(integrate_ode<1>(rhs, StateVec<1>{1.0}, cfg, kInf,
                                     [](double, const StateVec<1>&) {}),
                    StepSizeUnderflow);
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidParams);
    cfg.rel_tol = 1e-8;
    cfg.sample_dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidParams);
    cfg.sample_dt = 0.1;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidParams);
}

TEST_SUITE_END();

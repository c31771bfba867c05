#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mblab/experiments.hpp"
#include "mblab/full_dynamics.hpp"

using namespace mblab;

namespace {

constexpr double kPi = std::numbers::pi;

PureState random_state(std::mt19937_64& rng, double amp = 1.0) {
    std::uniform_real_distribution<double> u(-amp, amp);
    std::normal_distribution<double> g(0.0, 1.0);
    Complex C1(g(rng), g(rng)), C2(g(rng), g(rng));
    const double n = std::sqrt(std::norm(C1) + std::norm(C2));
    return PureState(u(rng), u(rng), C1 / n, C2 / n);
}

} // namespace

TEST_SUITE_BEGIN("full_dynamics");

TEST_CASE("mbe_rhs at the ground state with zero field is a pure phase rotation") {
    const PhysicalParams P(1.0, -0.5, 0.5, 1e-3, 2e-3);
    const PureState x(0.0, 0.0, Complex(1.0, 0.0), Complex(0.0, 0.0));
    const PureTangent d = mbe_rhs(x, 0.0, P, Pumping());
    CHECK(d.dA == 0.0);
    CHECK(d.dB == 0.0);
    CHECK(d.dC1 == Complex(0.0, -P.omega1));
    CHECK(std::abs(d.dC2) == 0.0);
}

TEST_CASE("mbe_rhs with unit Maxwell field drives the levels") {
    // Omega = omega = 1, kappa = p, c = 1: a = p (A + A^e) = p
    const double p = 0.37;
    const PhysicalParams P(1.0, -0.5, 0.5, p, p); // gamma = p as well
    const PureState x(1.0, 0.0, Complex(1.0, 0.0), Complex(0.0, 0.0));
    const PureTangent d = mbe_rhs(x, 0.0, P, Pumping());
    CHECK(d.dA == 0.0);
    CHECK(d.dB == doctest::Approx(-1.0).epsilon(1e-15)); // -Omega^2 A, j = 0
    CHECK(d.dC1 == Complex(0.0, -P.omega1));
    CHECK(d.dC2.real() == doctest::Approx(-p).epsilon(1e-15));
    CHECK(d.dC2.imag() == 0.0);
}

TEST_CASE("charge derivative vanishes identically") {
    const PhysicalParams P(1.3, -0.4, 0.7, 0.01, 0.02);
    const Pumping pump(Complex(0.8, 0.1), {{Complex(0.2, 0.0), 2.9}});
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ut(0.0, 50.0);
    for (int k = 0; k < 10000; ++k) {
        const PureState x = random_state(rng);
        const PureTangent d = mbe_rhs(x, ut(rng), P, pump);
        const double dq = 2.0 * std::real(std::conj(x.C1) * d.dC1 + std::conj(x.C2) * d.dC2);
        CHECK(std::abs(dq) < 1e-15);
    }
}

TEST_CASE("free Maxwell field is single-frequency") {
    const PhysicalParams P(1.0, -0.5, 0.5, 0.0, 0.0);
    const PureState x0(0.7, -0.3, Complex(1.0, 0.0), Complex(0.0, 0.0));
    SolverConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.t_end = 100.0;
    cfg.sample_dt = 0.25;
    const FullTrajectory traj = integrate_full(x0, cfg, P, Pumping());
    const Complex M0 = maxwell_amplitude(x0.A, x0.B, P.Omega);
    const Complex i(0.0, 1.0);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const PureState& x = traj.states[k];
        const Complex M = maxwell_amplitude(x.A, x.B, P.Omega);
        CHECK(std::abs(M - std::exp(-i * P.Omega * traj.times[k]) * M0) < 1e-8);
    }
}

TEST_CASE("decoupled damped oscillator decays") {
    const PhysicalParams P(1.0, -0.5, 0.5, 0.05, 0.0);
    const PureState x0(1.0, 0.0, Complex(1.0, 0.0), Complex(0.0, 0.0));
    SolverConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.t_end = 200.0;
    cfg.sample_dt = 0.5;
    const FullTrajectory traj = integrate_full(x0, cfg, P, Pumping());
    const PureState& xe = traj.states.back();
    CHECK(std::abs(maxwell_amplitude(xe.A, xe.B, P.Omega)) <
          std::exp(-P.gamma * 200.0 / 2.0) * 1.1);
}

TEST_CASE("charge drift stays below 1e-9 at rel_tol 1e-10") {
    const PhysicalParams P(1.0, -0.5, 0.5, 1e-3, 2e-3);
    const Pumping pump(Complex(1.0, 0.0));
    std::mt19937_64 rng(5);
    const PureState x0 = random_state(rng);
    SolverConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.t_end = 100.0;
    cfg.sample_dt = 0.25;
    const FullTrajectory traj = integrate_full(x0, cfg, P, pump);
    CHECK(traj.max_charge_drift() < 1e-9);
}

TEST_CASE("gauge equivariance of the full flow") {
    const PhysicalParams P(1.0, -0.5, 0.5, 2e-3, 4e-3);
    const Pumping pump(Complex(0.9, -0.3));
    SolverConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.t_end = 50.0;
    cfg.sample_dt = 0.5;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uth(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 3; ++trial) {
        const PureState x0 = random_state(rng);
        const double theta = uth(rng);
        const FullTrajectory a = integrate_full(x0, cfg, P, pump);
        const FullTrajectory b = integrate_full(gauge_action(theta, x0), cfg, P, pump);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.times.size(); ++k) {
            const PureState ga = gauge_action(theta, a.states[k]);
            worst = std::max(worst, std::abs(ga.A - b.states[k].A) +
                                        std::abs(ga.B - b.states[k].B) +
                                        std::abs(ga.C1 - b.states[k].C1) +
                                        std::abs(ga.C2 - b.states[k].C2));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("lyapunov_value") {
    const PhysicalParams P(1.0, -0.5, 0.5, 0.5, 0.5);
    CHECK(lyapunov_value(0.0, 0.0, P, 0.1) == 0.0);
    CHECK(lyapunov_value(1.0, 0.0, P, 0.1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lyapunov_value(1.0, 1.0, P, 0.1) == doctest::Approx(1.1).epsilon(1e-15));
    CHECK_THROWS_AS(lyapunov_value(1.0, 1.0, P, 1.0), EpsOutOfRange);
    CHECK_THROWS_AS(lyapunov_value(1.0, 1.0, P, 0.0), EpsOutOfRange);
    CHECK(lyapunov_default_eps(P) == doctest::Approx(0.125));
}

TEST_CASE("a priori bound diagnostics") {
    SolverConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.sample_dt = 0.5;

    SUBCASE("zero Maxwell data with p = 0 stays at zero") {
        const PhysicalParams P(1.0, -0.5, 0.5, 0.1, 0.0);
        cfg.t_end = 100.0;
        const PureState x0(0.0, 0.0, Complex(1.0, 0.0), Complex(0.0, 0.0));
        const FullTrajectory traj = integrate_full(x0, cfg, P, Pumping());
        const AprioriReport rep = apriori_bound_check(traj, P);
        CHECK(rep.sup_V == 0.0);
        CHECK(rep.bounded);
    }

    SUBCASE("sup V scales at most like r^2 (plus margin) when r doubles") {
        // V(0) = 0; the pumped current forces V up to a level ~ r^2
        const double gamma = 0.1;
        const double s = 1.0 / std::sqrt(2.0);
        const PureState x0(0.0, 0.0, Complex(s, 0.0), Complex(s, 0.0));
        const Pumping pump(Complex(1.0, 0.0));
        double sup[2];
        int idx = 0;
        for (double r : {1.0, 2.0}) {
            const PhysicalParams P(1.0, -0.5, 0.5, gamma, r * gamma);
            cfg.t_end = 10.0 / gamma;
            const FullTrajectory traj = integrate_full(x0, cfg, P, pump);
            sup[idx++] = apriori_bound_check(traj, P).sup_V;
        }
        CHECK(sup[1] <= 4.0 * sup[0] * 1.1);
        CHECK(sup[1] > 0.0);
    }
}

TEST_CASE("baseline drift scales like sqrt(p) or better") {
    const PhysicalParams base(1.0, -0.5, 0.5, 1e-2, 1e-2); // r = 1
    const Pumping pump(Complex(1.0, 0.0), {{Complex(0.5, 0.0), 3.0}});
    const PureState x0(0.5, 0.2, Complex(0.8, 0.0), Complex(0.0, 0.6));
    SolverConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.sample_dt = 0.25;
    const SweepResult r = run_baseline(base, pump, x0, {1e-2, 1e-3, 1e-4}, cfg);
    CHECK(r.errors[0] > r.errors[1]);
    CHECK(r.errors[1] > r.errors[2]);
    CHECK(r.slope >= 0.4);
    CHECK(r.horizon_rule == HorizonRule::InvSqrtP);
}

TEST_CASE("fixed-step RK4 cross-checks the adaptive integrator") {
    const PhysicalParams P(1.0, -0.5, 0.5, 2e-3, 4e-3);
    const Pumping pump(Complex(1.0, 0.0), {{Complex(0.3, 0.0), 2.6}});
    const PureState x0(0.4, -0.2, Complex(0.8, 0.0), Complex(0.0, 0.6));
    SolverConfig a;
    a.rel_tol = 1e-12;
    a.abs_tol = 1e-14;
    a.t_end = 50.0;
    a.sample_dt = 1.0;
    SolverConfig b = a;
    b.method = OdeMethod::RK4Fixed;
    b.dt = 2e-3;
    const FullTrajectory ta = integrate_full(x0, a, P, pump);
    const FullTrajectory tb = integrate_full(x0, b, P, pump);
    double worst = 0.0;
    for (std::size_t k = 0; k < ta.times.size(); ++k)
        worst = std::max(worst, std::abs(ta.states[k].A - tb.states[k].A) +
                                    std::abs(ta.states[k].C1 - tb.states[k].C1) +
                                    std::abs(ta.states[k].C2 - tb.states[k].C2));
    CHECK(worst < 1e-9);
}

TEST_CASE("trajectory CSV header") {
    const PhysicalParams P(1.0, -0.5, 0.5, 1e-3, 1e-3);
    SolverConfig cfg;
    cfg.t_end = 1.0;
    cfg.sample_dt = 0.5;
    const FullTrajectory traj =
        integrate_full(PureState(0, 0, Complex(1, 0), Complex(0, 0)), cfg, P, Pumping());
    const std::string path = "/tmp/mblab_test_full.csv";
    traj.write_csv(path);
    std::FILE* f = std::fopen(path.c_str(), "r");
    REQUIRE(f);
    char line[256];
    REQUIRE(std::fgets(line, sizeof line, f));
    CHECK(std::string(line) == "t,A,B,ReC1,ImC1,ReC2,ImC2,charge,energy,lyapunov\n");
    std::fclose(f);
}

TEST_SUITE_END();

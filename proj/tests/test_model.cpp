#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mblab/full_dynamics.hpp"
#include "mblab/params.hpp"
#include "mblab/state.hpp"

using namespace mblab;

namespace {

constexpr double kPi = std::numbers::pi;

PhysicalParams resonant_params(double gamma = 1e-3, double p = 2e-3) {
    return PhysicalParams(1.0, -0.5, 0.5, gamma, p);
}

// test-local Simpson quadrature, independent of the library's averaging code
template <class F>
Complex simpson(F&& f, double T, std::size_t n) {
    n += n % 2;
    const double h = T / static_cast<double>(n);
    Complex acc(0, 0);
    for (std::size_t j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        acc += w * f(h * static_cast<double>(j));
    }
    return acc * (h / 3.0);
}

} // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("derived parameters satisfy the defining identities") {
    const PhysicalParams P(2.5, 0.3, 1.7, 0.25, 0.5, 3.0, 2.0);
    CHECK(P.omega == doctest::Approx(1.4).epsilon(1e-15));
    CHECK(P.kappa == P.p * P.omega);
    CHECK(P.b == P.kappa / (P.c * P.hbar));
    CHECK(P.gamma1 * P.r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(P.b1 * P.p == doctest::Approx(P.b).epsilon(1e-15));
    CHECK(P.kappa1 * P.p == doctest::Approx(2.0 * P.c * P.kappa / P.Omega).epsilon(1e-15));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PhysicalParams(0.0, -0.5, 0.5, 1e-3, 1e-3), InvalidParams);
    CHECK_THROWS_AS(PhysicalParams(1.0, 0.5, 0.5, 1e-3, 1e-3), InvalidParams);  // omega = 0
    CHECK_THROWS_AS(PhysicalParams(1.0, 0.5, -0.5, 1e-3, 1e-3), InvalidParams); // omega < 0
    CHECK_THROWS_AS(PhysicalParams(1.0, -0.5, 0.5, -1.0, 1e-3), InvalidParams);
    CHECK_THROWS_AS(PhysicalParams(1.0, -0.5, 0.5, 1e-3, -1.0), InvalidParams);
    CHECK_NOTHROW(PhysicalParams(1.0, -0.5, 0.5, 0.0, 0.0)); // free system is simulable
    CHECK_THROWS_AS(PhysicalParams(1.0, -0.5, 0.5, 0.0, 0.0).require_coupled("x"),
                    InvalidParams);
}

TEST_CASE("pumping_eval basics") {
    const PhysicalParams P = resonant_params();
    SUBCASE("zero field") {
        const Pumping pump;
        CHECK(pumping_eval(pump, P, 0.0) == 0.0);
        CHECK(pumping_eval(pump, P, 17.3) == 0.0);
    }
    SUBCASE("unit carrier at t = 0") {
        const Pumping pump(Complex(1.0, 0.0));
        CHECK(pumping_eval(pump, P, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("single off-carrier harmonic") {
        // Re[2 e^{-i 3 t}] at t = pi/3 is Re[2 e^{-i pi}] = -2
        const Pumping pump(Complex(0.0, 0.0), {{Complex(2.0, 0.0), 3.0}});
        CHECK(pumping_eval(pump, P, kPi / 3.0) == doctest::Approx(-2.0).epsilon(1e-14));
    }
}

TEST_CASE("pumping time average tends to zero") {
    const PhysicalParams P = resonant_params();
    const Pumping pump(Complex(0.7, -0.4), {{Complex(0.3, 0.2), 2.6}});
    const double T = 1e4;
    const Complex avg = simpson([&](double t) { return Complex(pumping_eval(pump, P, t), 0.0); },
                                T, 200000) / T;
    // bounded antiderivative: |mean| <= 2 (|carrier|/Omega + |coeff_k|/Omega_k) / T
    const double bound = 2.0 * (std::abs(pump.carrier) / P.Omega + 0.3 / 2.6) / T * 1e1;
    CHECK(std::abs(avg.real()) < std::max(bound, 1e-3));
}

TEST_CASE("carrier_coefficient is an exact field read") {
    CHECK(carrier_coefficient(Pumping(Complex(1.0, 2.0))) == Complex(1.0, 2.0));
    const Pumping off(Complex(0.0, 0.0), {{Complex(5.0, 0.0), 2.0}});
    CHECK(carrier_coefficient(off) == Complex(0.0, 0.0));
}

TEST_CASE("carrier coefficient agrees with the quadrature definition") {
    const PhysicalParams P = resonant_params();
    const Pumping pump(Complex(0.8, -0.6), {{Complex(0.5, 0.1), 3.0}});
    const double T = 1e4 * 2.0 * kPi / P.Omega;
    const Complex i(0.0, 1.0);
    const Complex est = 2.0 / T *
                        simpson(
                            [&](double t) {
                                return pumping_eval(pump, P, t) * std::exp(i * P.Omega * t);
                            },
                            T, 400000);
    CHECK(std::abs(est - pump.carrier) < 1e-3);
}

TEST_CASE("pumping frequency gap validation") {
    CHECK_THROWS_AS(check_pumping(Pumping(Complex(1, 0), {{Complex(1, 0), 1.0}}), 1.0),
                    InvalidParams);
    CHECK_NOTHROW(check_pumping(Pumping(Complex(1, 0), {{Complex(1, 0), 1.1}}), 1.0));
}

TEST_CASE("gauge action") {
    const PureState x(0.4, -0.7, Complex(0.6, 0.0), Complex(0.0, 0.8));
    SUBCASE("identity") {
        const PureState y = gauge_action(0.0, x);
        CHECK(y.A == x.A);
        CHECK(y.C1 == x.C1);
        CHECK(y.C2 == x.C2);
    }
    SUBCASE("half turn flips signs") {
        const PureState g = PureState(1.0, 2.0, Complex(1.0, 0.0), Complex(0.0, 0.0));
        const PureState y = gauge_action(kPi, g);
        CHECK(y.C1.real() == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(std::abs(y.C2) == doctest::Approx(0.0));
    }
    SUBCASE("quarter turn multiplies by i") {
        const double s = 1.0 / std::sqrt(2.0);
        const PureState e(0.0, 0.0, Complex(s, 0.0), Complex(s, 0.0));
        const PureState y = gauge_action(kPi / 2.0, e);
        CHECK(y.C1.imag() == doctest::Approx(s).epsilon(1e-15));
        CHECK(y.C2.imag() == doctest::Approx(s).epsilon(1e-15));
        CHECK(std::abs(y.C1.real()) < 1e-16);
    }
    SUBCASE("charge and Maxwell pair preserved for random angles") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
        for (int k = 0; k < 200; ++k) {
            const PureState y = gauge_action(u(rng), x);
            CHECK(y.A == x.A);
            CHECK(y.B == x.B);
            CHECK(y.charge() == doctest::Approx(x.charge()).epsilon(1e-15));
        }
    }
}

TEST_CASE("maxwell_amplitude") {
    CHECK(maxwell_amplitude(0.0, 0.0, 1.0) == Complex(0.0, 0.0));
    CHECK(maxwell_amplitude(1.0, 0.0, 2.0) == Complex(1.0, 0.0));
    CHECK(maxwell_amplitude(3.0, 4.0, 2.0) == Complex(3.0, 2.0));
    CHECK_THROWS_AS(maxwell_amplitude(1.0, 1.0, 0.0), InvalidParams);
}

TEST_CASE("hamiltonian level values") {
    const PhysicalParams P = resonant_params();
    const Pumping none;
    const PureState ground(0.0, 0.0, Complex(1.0, 0.0), Complex(0.0, 0.0));
    const PureState excited(0.0, 0.0, Complex(0.0, 0.0), Complex(1.0, 0.0));
    CHECK(hamiltonian(ground, 0.0, P, none) ==
          doctest::Approx(P.hbar * P.omega1).epsilon(1e-15));
    CHECK(hamiltonian(excited, 0.0, P, none) ==
          doctest::Approx(P.hbar * P.omega2).epsilon(1e-15));
}

TEST_CASE("hamiltonian is gauge invariant") {
    const PhysicalParams P = resonant_params();
    const Pumping pump(Complex(0.9, 0.2));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        Complex C1(u(rng), u(rng)), C2(u(rng), u(rng));
        const double n = std::sqrt(std::norm(C1) + std::norm(C2));
        const PureState x(u(rng), u(rng), C1 / n, C2 / n);
        const double H = hamiltonian(x, 0.3, P, pump);
        const double Hg = hamiltonian(gauge_action(2.0 * kPi * u(rng), x), 0.3, P, pump);
        CHECK(Hg == doctest::Approx(H).epsilon(1e-12));
    }
}

TEST_CASE("PureState charge policy") {
    // rounding-level deviation is repaired
    const double s = (1.0 + 2e-7) / std::sqrt(2.0);
    const PureState x(0.0, 0.0, Complex(s, 0.0), Complex(0.0, s));
    CHECK(x.charge() == doctest::Approx(1.0).epsilon(1e-14));
    // gross deviation is user error
    CHECK_THROWS_AS(PureState(0.0, 0.0, Complex(1.0, 0.0), Complex(0.1, 0.0)), NotNormalized);
}

TEST_CASE("BlochPoint sphere invariant") {
    CHECK_NOTHROW(BlochPoint(0.0, 0.0, 0.5));
    CHECK_NOTHROW(BlochPoint(0.3, 0.4, 0.0));
    CHECK_THROWS_AS(BlochPoint(0.3, 0.4, 0.1), InvalidParams);
}

TEST_SUITE_END();

#include <doctest.h>

#include <cstdio>
#include <string>

#include "mblab/averaging.hpp"
#include "mblab/config.hpp"
#include "mblab/reduction.hpp"

using namespace mblab;

TEST_SUITE_BEGIN("config_io");

TEST_CASE("minimal configuration with defaults") {
    const ModelConfig mc = parse_config(
        "Omega = 1.0\n"
        "omega1 = -0.5\n"
        "omega2 = 0.5\n"
        "gamma = 1e-3\n"
        "p = 2e-3\n");
    CHECK(mc.params.Omega == 1.0);
    CHECK(mc.params.c == 1.0);
    CHECK(mc.params.hbar == 1.0);
    CHECK(mc.params.r == doctest::Approx(2.0));
    CHECK(mc.pump.carrier == Complex(0.0, 0.0));
    CHECK(mc.pump.harmonics.empty());
}

TEST_CASE("full configuration with comments and harmonics") {
    const ModelConfig mc = parse_config(
        "# resonant run\n"
        "Omega = 1.0   # carrier\n"
        "omega1 = -0.5\n"
        "omega2 = 0.5\n"
        "gamma = 5e-4\n"
        "p = 1e-3\n"
        "c = 2.0\n"
        "hbar = 0.5\n"
        "pump.carrier.re = 1.5\n"
        "pump.carrier.im = -0.25\n"
        "pump.harmonic = [0.5, 0.0, 3.0]\n"
        "pump.harmonic = [0.1, 0.2, 4.5]\n");
    CHECK(mc.params.c == 2.0);
    CHECK(mc.params.hbar == 0.5);
    CHECK(mc.pump.carrier == Complex(1.5, -0.25));
    REQUIRE(mc.pump.harmonics.size() == 2);
    CHECK(mc.pump.harmonics[0].coeff == Complex(0.5, 0.0));
    CHECK(mc.pump.harmonics[1].freq == 4.5);
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(parse_config("Omega = 1\n"), InvalidParams); // missing keys
    CHECK_THROWS_AS(parse_config("Omega = 1\nomega1 = -0.5\nomega2 = 0.5\n"
                                 "gamma = 1e-3\np = 1e-3\nbogus = 1\n"),
                    InvalidParams);
    CHECK_THROWS_AS(parse_config("Omega = abc\nomega1 = -0.5\nomega2 = 0.5\n"
                                 "gamma = 1e-3\np = 1e-3\n"),
                    InvalidParams);
    CHECK_THROWS_AS(parse_config("Omega = 1\nomega1 = -0.5\nomega2 = 0.5\n"
                                 "gamma = 1e-3\np = 1e-3\npump.harmonic = [1, 0]\n"),
                    InvalidParams);
    // off-carrier tone colliding with the carrier
    CHECK_THROWS_AS(parse_config("Omega = 1\nomega1 = -0.5\nomega2 = 0.5\n"
                                 "gamma = 1e-3\np = 1e-3\npump.harmonic = [1, 0, 1.0]\n"),
                    InvalidParams);
}

TEST_CASE("trajectory CSV columns carry 17 significant digits") {
    ReducedTrajectory traj;
    traj.times.push_back(1.0 / 3.0);
    traj.M.push_back(Complex(0.1234567890123456789, -2.0 / 3.0));
    traj.chart.push_back(Chart::South);
    traj.coord.push_back(Complex(0.5, 0.25));
    traj.bloch.push_back(bloch_from_south(Complex(0.5, 0.25)));
    traj.inversion.push_back(inversion_in_chart(Chart::South, Complex(0.5, 0.25)));
    const std::string path = "/tmp/mblab_test_reduced.csv";
    traj.write_csv(path);

    std::FILE* f = std::fopen(path.c_str(), "r");
    REQUIRE(f);
    char header[256], row[512];
    REQUIRE(std::fgets(header, sizeof header, f));
    REQUIRE(std::fgets(row, sizeof row, f));
    std::fclose(f);
    CHECK(std::string(header) == "t,ReM,ImM,chart,ReCoord,ImCoord,Z1,Z2,Z3,inversion\n");

    double t, re, im;
    char chart[16];
    REQUIRE(std::sscanf(row, "%lf,%lf,%lf,%15[^,]", &t, &re, &im, chart) == 4);
    CHECK(t == 1.0 / 3.0); // round-trips exactly at 17 digits
    CHECK(im == -2.0 / 3.0);
    CHECK(std::string(chart) == "south");
}

TEST_CASE("averaged trajectory CSV header") {
    AveragedTrajectory traj;
    traj.tau.push_back(0.0);
    traj.times.push_back(0.0);
    traj.M.push_back(Complex(0, 0));
    traj.Q.push_back(Complex(0, 0));
    traj.inversion.push_back(-1.0);
    const std::string path = "/tmp/mblab_test_avg.csv";
    traj.write_csv(path);
    std::FILE* f = std::fopen(path.c_str(), "r");
    REQUIRE(f);
    char header[256];
    REQUIRE(std::fgets(header, sizeof header, f));
    std::fclose(f);
    CHECK(std::string(header) == "tau,t,ReM,ImM,ReQ,ImQ,inversion\n");
}

TEST_SUITE_END();

// mblab — command line laboratory for the damped driven Maxwell-Bloch
// system: direct simulation (full / reduced / envelope / averaged), harmonic
// states with spectra, and the scaling-law verification sweeps.

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mblab/config.hpp"
#include "mblab/experiments.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mblab;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    bool csv = false;
    bool want_json = true;
    std::string p_list = "3e-3,1e-3,3e-4";
    double horizon_multiple = 10.0;
    std::uint64_t seed = 12345;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_config = true) {
    auto* c = cmd->add_option("--config", o.config_path, "model configuration file");
    if (needs_config) c->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_flag("--csv", o.csv, "also write per-run trajectory CSV");
    cmd->add_flag("--json,!--no-json", o.want_json, "write the summary JSON");
    cmd->add_option("--p-list", o.p_list, "comma-separated coupling sweep values");
    cmd->add_option("--horizon-multiple", o.horizon_multiple, "horizon multiple of 1/p");
    cmd->add_option("--seed", o.seed, "seed for randomized probes");
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(std::stod(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (out.empty()) throw CLI::ValidationError("empty numeric list");
    return out;
}

Complex parse_complex(const std::string& s) {
    const auto v = parse_list(s);
    if (v.size() != 2) throw CLI::ValidationError("expected re,im");
    return Complex(v[0], v[1]);
}

fs::path ensure_out(const CommonOpts& o) {
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    return dir;
}

json params_json(const ModelConfig& mc) {
    json j;
    j["Omega"] = mc.params.Omega;
    j["omega1"] = mc.params.omega1;
    j["omega2"] = mc.params.omega2;
    j["gamma"] = mc.params.gamma;
    j["p"] = mc.params.p;
    j["c"] = mc.params.c;
    j["hbar"] = mc.params.hbar;
    j["r"] = mc.params.r;
    j["pump.carrier"] = {mc.pump.carrier.real(), mc.pump.carrier.imag()};
    json harm = json::array();
    for (const auto& h : mc.pump.harmonics)
        harm.push_back({h.coeff.real(), h.coeff.imag(), h.freq});
    j["pump.harmonics"] = harm;
    return j;
}

void write_summary(const fs::path& dir, const std::string& name, json j,
                   bool to_file = true) {
    if (to_file) {
        std::ofstream f(dir / (name + ".json"));
        f << j.dump(2) << "\n";
    }
    std::printf("%s: %s\n", name.c_str(), j["pass"].is_null()
                                              ? "done"
                                              : (j["pass"].get<bool>() ? "PASS" : "FAIL"));
}

json sweep_json(const char* experiment, const ModelConfig& mc, const SweepResult& r,
                bool pass, std::uint64_t seed) {
    json j;
    j["experiment"] = experiment;
    j["params"] = params_json(mc);
    j["p_values"] = r.p_values;
    j["errors"] = r.errors;
    j["slope"] = r.slope;
    j["slope_ci"] = r.slope_ci;
    j["horizon_rule"] = horizon_rule_name(r.horizon_rule);
    j["seed"] = seed;
    j["pass"] = pass;
    return j;
}

Branch parse_branch(const std::string& s) {
    if (s == "zi+") return Branch::ZeroInvPlus;
    if (s == "zi-") return Branch::ZeroInvMinus;
    if (s == "nzi+") return Branch::NonZeroInvPlus;
    if (s == "nzi-") return Branch::NonZeroInvMinus;
    if (s == "degenerate") return Branch::Degenerate;
    if (s == "trivial") return Branch::Trivial;
    throw CLI::ValidationError("unknown branch '" + s + "' (zi+ zi- nzi+ nzi- degenerate trivial)");
}

// power-of-two FFT (decimation in time); used for the optional spectrum dump
void fft_inplace(std::vector<Complex>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void write_spectrum(const FullTrajectory& traj, double Omega, const fs::path& path) {
    std::size_t n = 1;
    while (2 * n <= traj.times.size()) n <<= 1;
    const double dt = traj.times[1] - traj.times[0];
    std::vector<Complex> c1(n), c2(n), m(n);
    for (std::size_t k = 0; k < n; ++k) {
        c1[k] = traj.states[k].C1;
        c2[k] = traj.states[k].C2;
        m[k] = maxwell_amplitude(traj.states[k].A, traj.states[k].B, Omega);
    }
    fft_inplace(c1);
    fft_inplace(c2);
    fft_inplace(m);
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    std::fprintf(f, "freq,absC1,absC2,absM\n");
    for (std::size_t k = 0; k < n; ++k) {
        // order output as signed frequencies (angular), -pi/dt .. pi/dt
        const std::size_t idx = (k + n / 2) % n;
        const double fr = 2.0 * M_PI *
                          (static_cast<double>(k) - static_cast<double>(n) / 2.0) /
                          (static_cast<double>(n) * dt);
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", fr, std::abs(c1[idx]) / n,
                     std::abs(c2[idx]) / n, std::abs(m[idx]) / n);
    }
    std::fclose(f);
}

json stability_json(const HarmonicState& h, const PhysicalParams& params) {
    const StabilityReport rep = eigenvalues_harmonic(h, params);
    json e = json::array();
    for (const Complex& l : rep.eigenvalues) e.push_back({l.real(), l.imag()});
    json j;
    j["branch"] = branch_name(h.branch);
    j["Mr"] = {h.Mr.real(), h.Mr.imag()};
    j["Qr"] = {h.Qr.real(), h.Qr.imag()};
    j["inversion"] = h.inversion;
    j["alpha"] = h.alpha;
    j["eigenvalues"] = e;
    j["classification"] = stability_name(rep.classification);
    j["nu"] = rep.nu;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mblab — Maxwell-Bloch single-frequency asymptotics laboratory"};
    app.require_subcommand(1);

    CommonOpts o;
    SolverConfig solver;
    double t_end = 100.0, sample_dt = 0.25, rel_tol = 1e-10;
    std::string m0 = "0,0", q0 = "0,0", c1 = "1,0", c2 = "0,0";
    double a0 = 0.0, b0 = 0.0;
    bool spectrum = false, use_rk4 = false;
    double dt_fixed = 1e-3;
    std::string branch_s = "nzi+";
    std::string d0_list_s = "1e-2,5e-3";
    double p_single = 1e-3;

    auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("--t-end", t_end, "integration horizon");
        cmd->add_option("--sample-dt", sample_dt, "output sampling interval");
        cmd->add_option("--rel-tol", rel_tol, "adaptive relative tolerance");
        cmd->add_flag("--rk4", use_rk4, "use fixed-step RK4 instead of RK45");
        cmd->add_option("--dt", dt_fixed, "fixed step for --rk4");
    };
    auto make_solver = [&]() {
        SolverConfig c;
        c.method = use_rk4 ? OdeMethod::RK4Fixed : OdeMethod::RK45Adaptive;
        c.dt = dt_fixed;
        c.rel_tol = rel_tol;
        c.abs_tol = 1e-12;
        c.sample_dt = sample_dt;
        c.t_end = t_end;
        return c;
    };

    auto* sim_full = app.add_subcommand("simulate-full", "integrate the full system");
    add_common(sim_full, o);
    add_solver(sim_full);
    sim_full->add_option("--A0", a0, "initial A");
    sim_full->add_option("--B0", b0, "initial B");
    sim_full->add_option("--C1", c1, "initial C1 as re,im");
    sim_full->add_option("--C2", c2, "initial C2 as re,im");
    sim_full->add_flag("--spectrum", spectrum, "emit amplitude spectra of C1, C2, M");

    auto* sim_red = app.add_subcommand("simulate-reduced", "integrate the reduced system");
    add_common(sim_red, o);
    add_solver(sim_red);
    sim_red->add_option("--M0", m0, "initial Maxwell amplitude re,im");
    sim_red->add_option("--Q0", q0, "initial North-chart coordinate re,im");

    auto* sim_env = app.add_subcommand("simulate-envelope", "integrate the envelope system");
    add_common(sim_env, o);
    add_solver(sim_env);
    sim_env->add_option("--M0", m0, "initial envelope M re,im");
    sim_env->add_option("--Q0", q0, "initial envelope Q re,im");

    auto* sim_avg = app.add_subcommand("simulate-averaged", "integrate the averaged system");
    add_common(sim_avg, o);
    add_solver(sim_avg);
    sim_avg->add_option("--M0", m0, "initial averaged M re,im");
    sim_avg->add_option("--Q0", q0, "initial averaged Q re,im");

    auto* hstates = app.add_subcommand("harmonic-states", "stationary states of the averaged system");
    add_common(hstates, o);

    auto* stab = app.add_subcommand("stability", "spectra and Jacobian checks per branch");
    add_common(stab, o);

    auto* v_adia = app.add_subcommand("verify-adiabatic", "O(sqrt p) tracking on [0, 1/p]");
    add_common(v_adia, o);
    add_solver(v_adia);
    v_adia->add_option("--branch", branch_s, "zi+ zi- nzi+ nzi-");
    bool with_baseline = false;
    v_adia->add_flag("--baseline", with_baseline, "also run the fixed-state baseline sweep");

    auto* v_unif = app.add_subcommand("verify-uniform", "O(p) bound with horizon multiple/p");
    add_common(v_unif, o);
    add_solver(v_unif);

    auto* v_attr = app.add_subcommand("verify-attraction", "decay rate against the spectrum");
    add_common(v_attr, o);
    add_solver(v_attr);
    v_attr->add_option("--p", p_single, "coupling value");
    v_attr->add_option("--d0-list", d0_list_s, "perturbation sizes");

    auto* v_avg = app.add_subcommand("verify-averaging", "envelope vs averaged flow on [0, 1/p]");
    add_common(v_avg, o);
    add_solver(v_avg);
    v_avg->add_option("--M0", m0, "initial envelope M re,im");
    std::string q0_avg = "0.5,0";
    v_avg->add_option("--Q0", q0_avg, "initial envelope Q re,im");

    auto* v_nonres = app.add_subcommand("verify-nonresonance", "Maxwell decay law off resonance");
    add_common(v_nonres, o);
    add_solver(v_nonres);

    auto* v_kbm = app.add_subcommand("kbm-order", "order function delta(p)");
    add_common(v_kbm, o);

    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path dir = ensure_out(o);
        const ModelConfig mc = load_config(o.config_path);
        const SolverConfig cfg = make_solver();

        if (*sim_full) {
            PureState x0(a0, b0, parse_complex(c1), parse_complex(c2));
            FullTrajectory traj = integrate_full(x0, cfg, mc.params, mc.pump);
            traj.write_csv((dir / "full.csv").string());
            if (spectrum) write_spectrum(traj, mc.params.Omega, dir / "spectrum.csv");
            std::printf("simulate-full: %zu samples, charge drift %.3e\n", traj.times.size(),
                        traj.max_charge_drift());
        } else if (*sim_red) {
            const ReducedState y0(parse_complex(m0), Chart::North, parse_complex(q0));
            ReducedTrajectory traj = integrate_reduced(y0, cfg, mc.params, mc.pump);
            traj.write_csv((dir / "reduced.csv").string());
            std::printf("simulate-reduced: %zu samples, %zu chart switches\n",
                        traj.times.size(), traj.chart_switches);
        } else if (*sim_env) {
            const EnvelopeState e0(parse_complex(m0), parse_complex(q0));
            EnvelopeTrajectory traj = integrate_envelope(e0, cfg, mc.params, mc.pump);
            traj.write_csv((dir / "envelope.csv").string());
            std::printf("simulate-envelope: %zu samples\n", traj.times.size());
        } else if (*sim_avg) {
            const EnvelopeState e0(parse_complex(m0), parse_complex(q0));
            AveragedTrajectory traj =
                integrate_averaged(e0, cfg, mc.params, carrier_coefficient(mc.pump));
            traj.write_csv((dir / "averaged.csv").string());
            std::printf("simulate-averaged: %zu samples\n", traj.times.size());
        } else if (*hstates || *stab) {
            json out = json::array();
            for (const HarmonicState& h : harmonic_states_for(mc.params, mc.pump)) {
                json j = stability_json(h, mc.params);
                if (*stab) {
                    const Eigen::Matrix4d J = jacobian_averaged(
                        EnvelopeState(h.Mr, h.Qr), mc.params, h.Ae, JacobianForm::Raw);
                    json jm = json::array(), ne = json::array();
                    for (int r = 0; r < 4; ++r)
                        jm.push_back({J(r, 0), J(r, 1), J(r, 2), J(r, 3)});
                    for (const Complex& l : jacobian_eigenvalues(J))
                        ne.push_back({l.real(), l.imag()});
                    j["jacobian"] = jm;
                    j["numeric_eigenvalues"] = ne;
                    j["stationary_residual"] = verify_stationary(h, mc.params);
                }
                out.push_back(j);
            }
            json top;
            top["experiment"] = *stab ? "stability" : "harmonic-states";
            top["params"] = params_json(mc);
            top["regime"] = mc.params.resonant() ? "resonance" : "non-resonance";
            top["states"] = out;
            std::ofstream f(dir / (*stab ? "stability.json" : "harmonic_states.json"));
            f << top.dump(2) << "\n";
            std::printf("%s: %zu states (%s)\n", *stab ? "stability" : "harmonic-states",
                        out.size(), top["regime"].get<std::string>().c_str());
        } else if (*v_adia) {
            const auto ps = parse_list(o.p_list);
            const Branch branch = parse_branch(branch_s);
            SweepResult r = run_adiabatic(mc.params, mc.pump, branch, ps, cfg);
            bool decreasing = true;
            for (std::size_t k = 1; k < r.errors.size(); ++k)
                decreasing = decreasing && r.errors[k] < r.errors[k - 1];
            json j = sweep_json("verify-adiabatic", mc, r, decreasing && r.slope >= 0.4, o.seed);
            j["branch"] = branch_name(branch);
            if (with_baseline) {
                const PureState x0 = random_pure_state(o.seed);
                SweepResult rb = run_baseline(mc.params, mc.pump, x0, ps, cfg);
                j["baseline_errors"] = rb.errors;
                j["baseline_slope"] = rb.slope;
            }
            if (o.csv) {
                for (double p : r.p_values) {
                    const PhysicalParams pp = mc.params.with_coupling(p);
                    const HarmonicState h = [&] {
                        for (const auto& s : harmonic_states_for(pp, mc.pump))
                            if (s.branch == branch) return s;
                        throw BranchUnavailable("branch missing");
                    }();
                    SolverConfig c = cfg;
                    c.t_end = 1.0 / p;
                    ReducedTrajectory traj = integrate_reduced(
                        ReducedState(h.Mr, Chart::North, h.Qr), c, pp, mc.pump);
                    char name[64];
                    std::snprintf(name, sizeof name, "adiabatic_p%.3e.csv", p);
                    traj.write_csv((dir / name).string());
                }
            }
            write_summary(dir, "verify_adiabatic", j, o.want_json);
        } else if (*v_unif) {
            SweepResult r =
                run_uniform(mc.params, mc.pump, parse_list(o.p_list), cfg, o.horizon_multiple);
            const bool pass = r.slope >= 0.8 && r.slope <= 1.2;
            json j = sweep_json("verify-uniform", mc, r, pass, o.seed);
            j["horizon_multiple"] = o.horizon_multiple;
            if (o.csv) {
                for (double p : r.p_values) {
                    const PhysicalParams pp = mc.params.with_coupling(p);
                    const HarmonicState h = [&] {
                        for (const auto& s : harmonic_states_for(pp, mc.pump))
                            if (s.branch == Branch::NonZeroInvPlus) return s;
                        throw BranchUnavailable("branch missing");
                    }();
                    SolverConfig c = cfg;
                    c.t_end = o.horizon_multiple / p;
                    ReducedTrajectory traj = integrate_reduced(
                        ReducedState(h.Mr, Chart::North, h.Qr), c, pp, mc.pump);
                    char name[64];
                    std::snprintf(name, sizeof name, "uniform_p%.3e.csv", p);
                    traj.write_csv((dir / name).string());
                }
            }
            write_summary(dir, "verify_uniform", j, o.want_json);
        } else if (*v_attr) {
            AttractionReport rep =
                run_attraction(mc.params, mc.pump, p_single, parse_list(d0_list_s), cfg);
            bool pass = !rep.fits.empty();
            json fits = json::array();
            for (const auto& f : rep.fits) {
                fits.push_back({{"d0", f.d0}, {"mu_hat", f.mu_hat}, {"ratio", f.ratio}});
                pass = pass && f.ratio >= 0.7 && f.ratio <= 1.3;
            }
            json j;
            j["experiment"] = "verify-attraction";
            j["params"] = params_json(mc);
            j["p_values"] = {rep.p};
            j["errors"] = json::array();
            for (const auto& f : rep.fits) j["errors"].push_back(f.mu_hat);
            j["slope"] = nullptr;
            j["nu"] = rep.nu;
            j["rate_ref"] = rep.rate_ref;
            j["fits"] = fits;
            j["seed"] = o.seed;
            j["pass"] = pass;
            if (o.csv) {
                const PhysicalParams pp = mc.params.with_coupling(p_single);
                const HarmonicState h = [&] {
                    for (const auto& s : harmonic_states_for(pp, mc.pump))
                        if (s.branch == Branch::NonZeroInvPlus) return s;
                    throw BranchUnavailable("branch missing");
                }();
                for (const auto& f : rep.fits) {
                    SolverConfig c = cfg;
                    c.t_end = 40.0 / p_single;
                    c.sample_dt = c.t_end / 4000.0;
                    ReducedTrajectory traj = integrate_reduced(
                        ReducedState(h.Mr, Chart::North, h.Qr + f.d0), c, pp, mc.pump);
                    char name[64];
                    std::snprintf(name, sizeof name, "attraction_d%.3e.csv", f.d0);
                    traj.write_csv((dir / name).string());
                }
            }
            write_summary(dir, "verify_attraction", j, o.want_json);
        } else if (*v_avg) {
            const EnvelopeState y0(parse_complex(m0), parse_complex(q0_avg));
            SweepResult r = run_averaging_error(mc.params, carrier_coefficient(mc.pump), y0,
                                                parse_list(o.p_list), cfg);
            BasinReport basin = probe_basin(mc.params, carrier_coefficient(mc.pump));
            const bool pass = r.slope >= 0.4 && basin.n_converged >= 7;
            json j = sweep_json("verify-averaging", mc, r, pass, o.seed);
            j["basin_converged"] = basin.n_converged;
            json pts = json::array();
            for (std::size_t k = 0; k < basin.q_points.size(); ++k)
                pts.push_back({{"Q", {basin.q_points[k].real(), basin.q_points[k].imag()}},
                               {"converged", static_cast<bool>(basin.converged[k])}});
            j["basin_points"] = pts;
            if (o.csv) {
                for (double p : r.p_values) {
                    const PhysicalParams pp = mc.params.with_coupling(p);
                    SolverConfig c = cfg;
                    c.t_end = 1.0 / p;
                    char name[64];
                    std::snprintf(name, sizeof name, "envelope_p%.3e.csv", p);
                    integrate_envelope(y0, c, pp, Pumping(carrier_coefficient(mc.pump)))
                        .write_csv((dir / name).string());
                    std::snprintf(name, sizeof name, "averaged_p%.3e.csv", p);
                    integrate_averaged(y0, c, pp, carrier_coefficient(mc.pump))
                        .write_csv((dir / name).string());
                }
            }
            write_summary(dir, "verify_averaging", j, o.want_json);
        } else if (*v_nonres) {
            NonResReport rep = run_nonresonance(mc.params, mc.pump, cfg);
            json j;
            j["experiment"] = "verify-nonresonance";
            j["params"] = params_json(mc);
            j["p_values"] = {mc.params.p};
            j["errors"] = {rep.misfit};
            j["slope"] = nullptr;
            j["m0"] = rep.m0;
            j["m_end"] = rep.m_end;
            j["expected_end"] = rep.expected_end;
            j["fitted_rate"] = rep.fitted_rate;
            j["expected_rate"] = rep.expected_rate;
            j["seed"] = o.seed;
            j["pass"] = rep.misfit <= 0.2;
            if (o.csv) {
                SolverConfig c = cfg;
                c.t_end = 2.0 / mc.params.gamma;
                integrate_full(PureState(1.0, 0.0, Complex(1, 0), Complex(0, 0)), c,
                               mc.params, mc.pump)
                    .write_csv((dir / "nonresonance.csv").string());
            }
            write_summary(dir, "verify_nonresonance", j, o.want_json);
        } else if (*v_kbm) {
            const auto pts = run_kbm_order(mc.params, mc.pump, parse_list(o.p_list));
            std::vector<double> ps, ds;
            for (const auto& kp : pts) {
                ps.push_back(kp.p);
                ds.push_back(kp.delta);
            }
            bool pass = true;
            for (std::size_t k = 1; k < pts.size(); ++k) {
                // consecutive decade ratios must scale like p
                const double ratio = pts[k].delta / pts[k - 1].delta;
                const double pratio = pts[k].p / pts[k - 1].p;
                pass = pass && ratio >= 0.5 * pratio && ratio <= 2.0 * pratio;
            }
            double slope = 0.0, resid = 0.0;
            if (ps.size() >= 3) fit_loglog(ps, ds, slope, resid);
            json j;
            j["experiment"] = "kbm-order";
            j["params"] = params_json(mc);
            j["p_values"] = ps;
            j["errors"] = ds;
            j["slope"] = ps.size() >= 3 ? json(slope) : json(nullptr);
            j["seed"] = o.seed;
            j["pass"] = pass;
            write_summary(dir, "kbm_order", j, o.want_json);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

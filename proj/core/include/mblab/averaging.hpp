// averaging.hpp — interaction picture of the reduced dynamics and its time
// averages: envelope fields in both charts, closed-form resonance averages,
// a Simpson-quadrature averaging oracle, the KBM order function, and
// integration of the averaged flow in rescaled time tau = p t.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "mblab/ode.hpp"
#include "mblab/params.hpp"
#include "mblab/state.hpp"

namespace mblab {

enum class Regime { Resonance, NonResonance };

inline Regime regime_of(const PhysicalParams& params) {
    return params.resonant() ? Regime::Resonance : Regime::NonResonance;
}

struct EnvelopeTangent {
    Complex dM;
    Complex dQ;
};

// Envelope dynamics d/dt (M, Q)_env = p (f_r, g_r):
//   p f_r = -i e^{i Omega t} [ gamma Im(e^{-i Omega t} M)
//                              - kt Im(e^{-i omega t} Q)/(|Q|^2+1) ]
//   p g_r = -b e^{i omega t} [ Re(e^{-i Omega t} M) + A^e(t) ]
//           (Q^2 e^{-2 i omega t} + 1)
// with kt = 2 c kappa / Omega. Substituting M(t) = e^{-i Omega t} M_env,
// Q(t) = e^{-i omega t} Q_env turns these into the reduced dynamics.
EnvelopeTangent envelope_rhs(const EnvelopeState& e, double t, const PhysicalParams& params,
                             const Pumping& pump);

// South-chart analog for envelopes of (M, Sigma): the drive term enters with
// the opposite sign. Used by the fully-inverted-state checks.
EnvelopeTangent envelope_rhs_south(const EnvelopeState& e, double t,
                                   const PhysicalParams& params, const Pumping& pump);

// Unscaled fields (f_r, g_r) built from gamma1, kappa1, b1; they depend on
// (Omega, omega, r) but not on p. Require p > 0 and gamma > 0.
EnvelopeTangent envelope_field(const EnvelopeState& e, double t, const PhysicalParams& params,
                               const Pumping& pump);
EnvelopeTangent envelope_field_south(const EnvelopeState& e, double t,
                                     const PhysicalParams& params, const Pumping& pump);

// Time average of the unscaled envelope field. In resonance (Omega = omega):
//   fbar = -(gamma1/2) M + (kappa1/2) Q/(|Q|^2+1)
//   gbar = (b1/2) [ (M + Ae)(|Q|^2-1) - 2 Q ((M + Ae) . Q) ],  x.y = Re[conj(x) y]
// Off resonance fbar = -(gamma1/2) M, and gbar is evaluated by quadrature
// (no closed form is implemented away from resonance).
EnvelopeTangent averaged_field(const EnvelopeState& e, const PhysicalParams& params,
                               const Pumping& pump);

// p-scaled averaged right-hand side, d/dt (M, Q) = p (fbar, gbar).
EnvelopeTangent averaged_rhs(const EnvelopeState& e, const PhysicalParams& params,
                             const Pumping& pump);

// Convenience overload for a carrier-only pump.
EnvelopeTangent averaged_rhs(const EnvelopeState& e, const PhysicalParams& params, Complex Ae);

// (1/T) Int_0^T p (f_r, g_r) dt by composite Simpson with step
// 2 pi / (200 max frequency). Converges to averaged_rhs as T grows.
EnvelopeTangent numeric_average(const EnvelopeState& e, const PhysicalParams& params,
                                const Pumping& pump, double T_avg);

// Same quadrature for the South-chart envelope field.
EnvelopeTangent numeric_average_south(const EnvelopeState& e, const PhysicalParams& params,
                                      const Pumping& pump, double T_avg);

// Order function of the averaging error,
//   delta(p) = p max_{E in domain} max_{T in grid} | Int_0^T (v - vbar) dt |,
// with a 32-point log-spaced T grid over (0, 1/p]. O(p) for quasiperiodic
// pumping.
double kbm_order(const PhysicalParams& params, const Pumping& pump, double p,
                 std::span<const EnvelopeState> domain);

struct EnvelopeTrajectory {
    std::vector<double> times;
    std::vector<Complex> M;
    std::vector<Complex> Q;
    std::vector<double> inversion;

    // CSV columns: t,ReM,ImM,ReQ,ImQ,inversion
    void write_csv(const std::string& path) const;
};

// Integrates the (fast, oscillatory) envelope system over physical time.
EnvelopeTrajectory integrate_envelope(const EnvelopeState& e0, const SolverConfig& cfg,
                                      const PhysicalParams& params, const Pumping& pump);

struct AveragedTrajectory {
    std::vector<double> tau;   // rescaled time tau = p t
    std::vector<double> times; // physical time
    std::vector<Complex> M;
    std::vector<Complex> Q;
    std::vector<double> inversion;

    // CSV columns: tau,t,ReM,ImM,ReQ,ImQ,inversion
    void write_csv(const std::string& path) const;
};

// Integrates dY/dtau = (fbar, gbar) with tau = p t internally, so horizons
// of order 1/p cost O(1) steps. cfg times are physical. Resonance only.
AveragedTrajectory integrate_averaged(const EnvelopeState& e0, const SolverConfig& cfg,
                                      const PhysicalParams& params, Complex Ae);

} // namespace mblab

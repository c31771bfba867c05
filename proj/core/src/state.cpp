#include "mblab/state.hpp"

namespace mblab {

double hamiltonian(const PureState& x, double t, const PhysicalParams& params,
                   const Pumping& pump) {
    const double Ae = pumping_eval(pump, params, t);
    const double field = (x.B * x.B + params.Omega * params.Omega * x.A * x.A) /
                         (2.0 * params.c * params.c);
    const double levels = params.hbar * (params.omega1 * std::norm(x.C1) +
                                         params.omega2 * std::norm(x.C2));
    const double coupling = -(2.0 * params.kappa / params.c) * (x.A + Ae) *
                            std::imag(std::conj(x.C1) * x.C2);
    return field + levels + coupling;
}

} // namespace mblab

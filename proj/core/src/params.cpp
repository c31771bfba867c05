#include "mblab/params.hpp"

#include <cmath>

namespace mblab {

void check_pumping(const Pumping& pump, double Omega, double rel_gap) {
    const double scale = std::max(std::abs(Omega), 1.0);
    for (const auto& h : pump.harmonics) {
        if (std::abs(h.freq - Omega) < rel_gap * scale)
            throw InvalidParams("Pumping: off-carrier frequency collides with the carrier");
    }
}

double pumping_eval(const Pumping& pump, const PhysicalParams& params, double t) {
    const Complex i(0.0, 1.0);
    Complex s = pump.carrier * std::exp(-i * params.Omega * t);
    for (const auto& h : pump.harmonics) s += h.coeff * std::exp(-i * h.freq * t);
    return s.real();
}

} // namespace mblab

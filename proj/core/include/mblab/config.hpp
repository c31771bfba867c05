// config.hpp — flat key-value experiment configuration.
//
// Schema:
//   Omega = 1.0
//   omega1 = -0.5
//   omega2 = 0.5
//   gamma = 1e-3
//   p = 2e-3
//   c = 1.0           (optional, default 1)
//   hbar = 1.0        (optional, default 1)
//   pump.carrier.re = 1.0
//   pump.carrier.im = 0.0
//   pump.harmonic = [re, im, freq]   (repeatable)
// '#' starts a comment.

#pragma once

#include <string>

#include "mblab/params.hpp"

namespace mblab {

struct ModelConfig {
    PhysicalParams params;
    Pumping pump;
};

ModelConfig load_config(const std::string& path);
ModelConfig parse_config(const std::string& text);

} // namespace mblab

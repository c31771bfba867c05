#include "mblab/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace mblab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || trim(std::string(end)).size() != 0)
        throw InvalidParams("config: bad numeric value for '" + key + "': " + value);
    return x;
}

PumpHarmonic parse_harmonic(const std::string& value) {
    std::string v = trim(value);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw InvalidParams("config: pump.harmonic expects [re, im, freq], got: " + value);
    v = v.substr(1, v.size() - 2);
    std::istringstream ss(v);
    std::string item;
    double parts[3];
    for (int k = 0; k < 3; ++k) {
        if (!std::getline(ss, item, ','))
            throw InvalidParams("config: pump.harmonic expects three entries: " + value);
        parts[k] = parse_double("pump.harmonic", trim(item));
    }
    if (std::getline(ss, item, ','))
        throw InvalidParams("config: pump.harmonic expects exactly three entries: " + value);
    return PumpHarmonic{Complex(parts[0], parts[1]), parts[2]};
}

} // namespace

ModelConfig parse_config(const std::string& text) {
    std::map<std::string, double> scalars;
    double carrier_re = 0.0, carrier_im = 0.0;
    std::vector<PumpHarmonic> harmonics;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParams("config: line " + std::to_string(lineno) + " has no '='");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "pump.harmonic") {
            harmonics.push_back(parse_harmonic(value));
        } else if (key == "pump.carrier.re") {
            carrier_re = parse_double(key, value);
        } else if (key == "pump.carrier.im") {
            carrier_im = parse_double(key, value);
        } else if (key == "Omega" || key == "omega1" || key == "omega2" || key == "gamma" ||
                   key == "p" || key == "c" || key == "hbar") {
            scalars[key] = parse_double(key, value);
        } else {
            throw InvalidParams("config: unknown key '" + key + "'");
        }
    }

    for (const char* req : {"Omega", "omega1", "omega2", "gamma", "p"})
        if (!scalars.count(req))
            throw InvalidParams(std::string("config: missing required key '") + req + "'");

    const double c = scalars.count("c") ? scalars["c"] : 1.0;
    const double hbar = scalars.count("hbar") ? scalars["hbar"] : 1.0;
    ModelConfig cfg{PhysicalParams(scalars["Omega"], scalars["omega1"], scalars["omega2"],
                                   scalars["gamma"], scalars["p"], c, hbar),
                    Pumping(Complex(carrier_re, carrier_im), std::move(harmonics))};
    check_pumping(cfg.pump, cfg.params.Omega);
    return cfg;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidParams("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace mblab

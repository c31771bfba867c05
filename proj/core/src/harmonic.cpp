#include "mblab/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace mblab {

namespace {

constexpr double kDegenerateTol = 1e-12;

double inv_of(Complex Q) {
    const double n = std::norm(Q);
    return (n - 1.0) / (n + 1.0);
}

HarmonicState make_state(Complex Mr, Complex Qr, Branch branch, double alpha, double r,
                         double c, Complex Ae) {
    return HarmonicState{Mr, Qr, branch, inv_of(Qr), alpha, r, c, Ae};
}

void sort_eigs(std::array<Complex, 4>& v) {
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

} // namespace

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::Trivial: return "trivial";
        case Branch::ZeroInvPlus: return "zero-inversion+";
        case Branch::ZeroInvMinus: return "zero-inversion-";
        case Branch::Degenerate: return "degenerate";
        case Branch::NonZeroInvPlus: return "nonzero-inversion+";
        case Branch::NonZeroInvMinus: return "nonzero-inversion-";
    }
    return "?";
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::LinearlyStable: return "linearly-stable";
        case Stability::Unstable: return "unstable";
        case Stability::NotLinearlyStable: return "not-linearly-stable";
    }
    return "?";
}

std::vector<HarmonicState> harmonic_states(double r, Complex Ae, double c) {
    if (!(r > 0.0)) throw InvalidParams("harmonic_states: r must be > 0");
    if (!(c > 0.0)) throw InvalidParams("harmonic_states: c must be > 0");

    const double cr = c * r;
    const double ae = std::abs(Ae);
    std::vector<HarmonicState> out;

    if (ae == 0.0) {
        out.push_back(make_state(Complex(0, 0), Complex(0, 0), Branch::Trivial, 0.0, r, c, Ae));
        return out;
    }

    if (std::abs(cr - ae) <= kDegenerateTol * std::max(cr, ae)) {
        const Complex Q = -Ae / ae;
        out.push_back(make_state(-Ae, Q, Branch::Degenerate, 0.0, r, c, Ae));
        return out;
    }

    if (cr < ae) {
        const double phi = std::arg(Ae);
        const double theta = std::acos(-cr / ae); // in [0, pi]
        const Complex Qp = std::polar(1.0, phi + theta);
        const Complex Qm = std::polar(1.0, phi - theta);
        out.push_back(make_state(cr * Qp, Qp, Branch::ZeroInvPlus, 0.0, r, c, Ae));
        out.push_back(make_state(cr * Qm, Qm, Branch::ZeroInvMinus, 0.0, r, c, Ae));
        return out;
    }

    // cr > |Ae|: roots of |Ae|^2 mu^2 + 2 cr mu + 1 = 0, written so that the
    // small root avoids cancellation
    const double s = std::sqrt(cr * cr - ae * ae);
    const double mu_plus = -1.0 / (cr + s);
    const double mu_minus = -(cr + s) / (ae * ae);
    for (auto [mu, branch] : {std::pair{mu_plus, Branch::NonZeroInvPlus},
                              std::pair{mu_minus, Branch::NonZeroInvMinus}}) {
        const Complex Q = mu * Ae;
        const double alpha = 2.0 * cr / (std::norm(Q) + 1.0);
        out.push_back(make_state(alpha * Q, Q, branch, alpha, r, c, Ae));
    }
    return out;
}

std::vector<HarmonicState> harmonic_states_for(const PhysicalParams& params,
                                               const Pumping& pump) {
    if (!params.resonant()) return {};
    params.require_coupled("harmonic_states_for");
    return harmonic_states(params.r, carrier_coefficient(pump), params.c);
}

Eigen::Matrix4d jacobian_averaged(const EnvelopeState& e, const PhysicalParams& params,
                                  Complex Ae, JacobianForm form) {
    params.require_coupled("jacobian_averaged");
    if (!params.resonant())
        throw InvalidParams("jacobian_averaged: resonance regime required");

    const double g1 = params.gamma1, k1 = params.kappa1, b1 = params.b1;
    const double Q[2] = {e.Qq.real(), e.Qq.imag()};
    const Complex W = e.Mm + Ae;
    const double Wv[2] = {W.real(), W.imag()};
    const double A[2] = {Ae.real(), Ae.imag()};
    const double D = std::norm(e.Qq) + 1.0;
    const double WdotQ = std::real(std::conj(W) * e.Qq);
    const double MdotQ = std::real(std::conj(e.Mm) * e.Qq);
    const double AdotQ = std::real(std::conj(Ae) * e.Qq);

    Eigen::Matrix4d J;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double dij = (i == j) ? 1.0 : 0.0;
            J(i, j) = -0.5 * g1 * dij;
            J(i, 2 + j) = 0.5 * k1 * (dij / D - 2.0 * Q[i] * Q[j] / (D * D));
            J(2 + i, j) = 0.5 * b1 * dij * (std::norm(e.Qq) - 1.0) - b1 * Q[i] * Q[j];
            if (form == JacobianForm::Raw) {
                J(2 + i, 2 + j) = b1 * (Wv[i] * Q[j] - dij * WdotQ - Q[i] * Wv[j]);
            } else {
                // M = alpha Q makes the M x Q antisymmetric part vanish
                J(2 + i, 2 + j) =
                    b1 * (A[i] * Q[j] - Q[i] * A[j] - dij * (MdotQ + AdotQ));
            }
        }
    }
    return J;
}

std::array<Complex, 4> jacobian_eigenvalues(const Eigen::Matrix4d& J) {
    using LMat = Eigen::Matrix<long double, 4, 4>;
    const LMat JL = J.cast<long double>();
    Eigen::EigenSolver<LMat> solver(JL, /*computeEigenvectors=*/false);
    std::array<Complex, 4> out;
    for (int i = 0; i < 4; ++i)
        out[i] = Complex(static_cast<double>(solver.eigenvalues()[i].real()),
                         static_cast<double>(solver.eigenvalues()[i].imag()));
    sort_eigs(out);
    return out;
}

std::array<Complex, 4> eigenvalues_closed_form(const HarmonicState& h,
                                               const PhysicalParams& params) {
    params.require_coupled("eigenvalues_closed_form");
    const double g1 = params.gamma1, k1 = params.kappa1, b1 = params.b1;
    std::array<Complex, 4> eig;

    switch (h.branch) {
        case Branch::ZeroInvPlus:
        case Branch::ZeroInvMinus:
        case Branch::Degenerate: {
            const double w = std::imag(std::conj(h.Ae) * h.Qr); // Ae ^ Qr
            eig = {Complex(-0.5 * g1, 0.0), Complex(-0.5 * g1, 0.0),
                   Complex(0.0, b1 * w), Complex(0.0, -b1 * w)};
            break;
        }
        case Branch::NonZeroInvPlus:
        case Branch::NonZeroInvMinus: {
            const double disc = g1 * g1 + 4.0 * b1 * k1 * h.inversion;
            Complex root = disc >= 0.0 ? Complex(std::sqrt(disc), 0.0)
                                       : Complex(0.0, std::sqrt(-disc));
            const Complex lp = 0.25 * (Complex(-g1, 0.0) + root);
            const Complex lm = 0.25 * (Complex(-g1, 0.0) - root);
            eig = {lp, lp, lm, lm};
            break;
        }
        case Branch::Trivial:
            throw BranchMismatch("eigenvalues_closed_form: no closed form for the trivial state");
    }
    sort_eigs(eig);
    return eig;
}

namespace {

StabilityReport classify(std::array<Complex, 4> eig) {
    double max_re = eig[0].real();
    for (const Complex& l : eig) max_re = std::max(max_re, l.real());
    StabilityReport rep;
    rep.eigenvalues = eig;
    if (max_re < 0.0) {
        rep.classification = Stability::LinearlyStable;
        rep.nu = -max_re;
    } else if (max_re > 0.0) {
        rep.classification = Stability::Unstable;
        rep.nu = 0.0;
    } else {
        rep.classification = Stability::NotLinearlyStable;
        rep.nu = 0.0;
    }
    return rep;
}

} // namespace

StabilityReport eigenvalues_harmonic(const HarmonicState& h, const PhysicalParams& params) {
    if (h.branch == Branch::Trivial) {
        const Eigen::Matrix4d J = jacobian_averaged(EnvelopeState(h.Mr, h.Qr), params, h.Ae,
                                                    JacobianForm::Raw);
        return classify(jacobian_eigenvalues(J));
    }
    return classify(eigenvalues_closed_form(h, params));
}

double verify_stationary(const HarmonicState& h, const PhysicalParams& params) {
    params.require_coupled("verify_stationary");
    if (!params.resonant())
        throw InvalidParams("verify_stationary: resonance regime required");
    const EnvelopeTangent d =
        averaged_field(EnvelopeState(h.Mr, h.Qr), params, Pumping(h.Ae));
    return std::sqrt(std::norm(d.dM) + std::norm(d.dQ));
}

} // namespace mblab

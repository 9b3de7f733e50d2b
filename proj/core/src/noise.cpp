#include "mqrep/noise.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mqrep {

namespace {
constexpr double kNudge = 1e-9;

void require_positive(double v, const char* what) {
    if (!(v > 0.0))
        throw std::invalid_argument(std::string(what) + " must be positive");
}
}  // namespace

AgeRounding parse_rounding(const std::string& tag) {
    if (tag == "ceil") return AgeRounding::Ceil;
    if (tag == "floor") return AgeRounding::Floor;
    throw std::invalid_argument("rounding must be ceil or floor, got '" + tag + "'");
}

std::string to_string(AgeRounding r) { return r == AgeRounding::Ceil ? "ceil" : "floor"; }

bool BellDiagonalState::valid(double tol) const {
    for (double x : w)
        if (x < -tol) return false;
    return std::abs(total() - 1.0) <= tol;
}

BellDiagonalState BellDiagonalState::isotropic(double f) {
    const double q = (1.0 - f) / 3.0;
    return BellDiagonalState{{f, q, q, q}};
}

double fidelity_of_age(double m, double m_star) {
    require_positive(m_star, "m_star");
    return (1.0 + 3.0 * std::exp(-m / m_star)) / 4.0;
}

double fidelity_of_age(Age m, Age m_star) {
    if (m_star < 1) throw std::invalid_argument("m_star must be >= 1");
    return fidelity_of_age(static_cast<double>(m), static_cast<double>(m_star));
}

double continuous_age_of_fidelity(double f, double m_star) {
    require_positive(m_star, "m_star");
    if (!(f > 0.25) || f > 1.0 + 1e-12)
        throw std::domain_error("fidelity outside (0.25, 1]: " + std::to_string(f));
    if (f >= 1.0) return 0.0;
    return -m_star * std::log((4.0 * f - 1.0) / 3.0);
}

Age age_of_fidelity(double f, Age m_star, AgeRounding rounding) {
    if (m_star < 1) throw std::invalid_argument("m_star must be >= 1");
    const double x = continuous_age_of_fidelity(f, static_cast<double>(m_star));
    double r = rounding == AgeRounding::Ceil ? std::ceil(x - kNudge) : std::floor(x + kNudge);
    if (r < 0.0) r = 0.0;
    return static_cast<Age>(r);
}

PauliChannelParams pauli_channel_probs(double m1_star, double m2_star) {
    require_positive(m1_star, "m1_star");
    require_positive(m2_star, "m2_star");
    const double d1 = -std::expm1(-1.0 / m1_star);  // 1 - e^{-1/m1*}
    const double d2 = -std::expm1(-1.0 / m2_star);
    PauliChannelParams p;
    p.m1_star = m1_star;
    p.m2_star = m2_star;
    p.p_x = d1 / 4.0;
    p.p_y = d1 / 4.0;
    p.p_z = d2 / 2.0 - d1 / 4.0;
    p.p_i = 1.0 - d2 / 2.0 - d1 / 4.0;
    if (p.p_z < -1e-15)
        throw std::invalid_argument("m2_star too large relative to m1_star: negative p_z");
    if (p.p_z < 0.0) p.p_z = 0.0;
    return p;
}

BellDiagonalState decohere_bell_state(Age m, const PauliChannelParams& params) {
    if (m < 0) throw std::invalid_argument("age must be non-negative");
    const double md = static_cast<double>(m);
    const double e1 = std::exp(-2.0 * md / params.m1_star);
    const double e2 = std::exp(-2.0 * md / params.m2_star);
    return BellDiagonalState{{0.25 * (1.0 + e1 + 2.0 * e2), 0.25 * (1.0 + e1 - 2.0 * e2),
                              0.25 * (1.0 - e1), 0.25 * (1.0 - e1)}};
}

BellDiagonalState twirl_isotropic(const BellDiagonalState& s) {
    return BellDiagonalState::isotropic(s.fidelity());
}

Age entanglement_loss_age(Age m_star) {
    if (m_star < 1) throw std::invalid_argument("m_star must be >= 1");
    return static_cast<Age>(std::ceil(static_cast<double>(m_star) * std::log(3.0) - kNudge));
}

}  // namespace mqrep

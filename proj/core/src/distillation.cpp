#include "mqrep/distillation.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mqrep {

namespace {
void check_fidelity(double f) {
    if (!(f >= 0.25 - 1e-15 && f <= 1.0 + 1e-15))
        throw std::domain_error("fidelity outside [0.25, 1]: " + std::to_string(f));
}
}  // namespace

double distill_success_prob(double f1, double f2) {
    check_fidelity(f1);
    check_fidelity(f2);
    return (8.0 / 9.0) * f1 * f2 - (2.0 / 9.0) * (f1 + f2) + 5.0 / 9.0;
}

double distill_fidelity(double f1, double f2) {
    check_fidelity(f1);
    check_fidelity(f2);
    const double s = f1 + f2;
    const double p = f1 * f2;
    return (1.0 - s + 10.0 * p) / (5.0 - 2.0 * s + 8.0 * p);
}

Age distill_age(Age m1, Age m2, Age m_star, AgeRounding rounding) {
    if (m1 < 0 || m2 < 0) throw std::invalid_argument("ages must be non-negative");
    const double f = distill_fidelity(fidelity_of_age(m1, m_star), fidelity_of_age(m2, m_star));
    return age_of_fidelity(f, m_star, rounding);
}

Age distill_age_direct(Age m1, Age m2, Age m_star) {
    const double f1 = fidelity_of_age(m1, m_star);
    const double f2 = fidelity_of_age(m2, m_star);
    const double s = f1 + f2;
    const double p = f1 * f2;
    const double num = 15.0 - 6.0 * s + 24.0 * p;
    const double den = 32.0 * p - 2.0 * s - 1.0;
    if (!(den > 0.0)) throw std::domain_error("distilled fidelity not above 1/4");
    const double x = static_cast<double>(m_star) * std::log(num / den);
    return std::max<Age>(0, static_cast<Age>(std::ceil(x - 1e-9)));
}

bool is_distill_useful(double f1, double f2) {
    const double f = distill_fidelity(f1, f2);
    return f > f1 && f > f2;
}

DistillOutcome distill_outcome(Age m1, Age m2, Age m_star, AgeRounding rounding) {
    const double f1 = fidelity_of_age(m1, m_star);
    const double f2 = fidelity_of_age(m2, m_star);
    DistillOutcome o;
    o.success_prob = distill_success_prob(f1, f2);
    o.output_fidelity = distill_fidelity(f1, f2);
    o.output_age = age_of_fidelity(o.output_fidelity, m_star, rounding);
    o.useful = o.output_fidelity > std::max(f1, f2);
    return o;
}

std::vector<BandedRound> banded_schedule(double f0, int n_ch) {
    check_fidelity(f0);
    if (n_ch < 1 || (n_ch & (n_ch - 1)) != 0)
        throw std::invalid_argument("banded schedule needs a power-of-two channel count");
    std::vector<BandedRound> out;
    double f = f0;
    double cum = 1.0;
    int links = n_ch;
    for (int r = 1; links > 1; ++r) {
        const double p = distill_success_prob(f, f);
        cum *= std::pow(p, links / 2);
        f = distill_fidelity(f, f);
        links /= 2;
        out.push_back({r, f, cum});
    }
    return out;
}

double pumping_recurrence(double f0, int r) {
    check_fidelity(f0);
    if (r < 0) throw std::invalid_argument("round count must be non-negative");
    double f = f0;
    for (int i = 0; i < r; ++i) f = distill_fidelity(f, f0);
    return f;
}

double pumping_closed_form(double f0, int r) {
    check_fidelity(f0);
    if (r < 0) throw std::invalid_argument("round count must be non-negative");
    const double s = std::sqrt(7.0 - 26.0 * f0 + 28.0 * f0 * f0);
    const double lp = 2.0 + 4.0 * f0 + s;
    const double lm = 2.0 + 4.0 * f0 - s;
    // alpha and beta both divided by lp^r so large r does not overflow
    const double t = std::pow(lm / lp, r);
    const double alpha = -(1.0 - 4.0 * f0 + 6.0 * f0 * f0) * (t - 1.0) + f0 * s * (t + 1.0);
    const double beta = -(3.0 - 8.0 * f0 + 8.0 * f0 * f0) * (t - 1.0) + s * (t + 1.0);
    return alpha / beta;
}

double pumping_limit(double f0) {
    check_fidelity(f0);
    const double den = -2.0 + 8.0 * f0;
    if (std::abs(den) < 1e-15) throw std::domain_error("pumping limit undefined at f0 = 1/4");
    return (-3.0 + 6.0 * f0 + std::sqrt(7.0 - 26.0 * f0 + 28.0 * f0 * f0)) / den;
}

PumpingSolution pumping_solution(double f0, int rounds) {
    check_fidelity(f0);
    PumpingSolution p;
    p.f0 = f0;
    p.a1 = 10.0 * f0 - 1.0;
    p.a2 = 1.0 - f0;
    p.a3 = 8.0 * f0 - 2.0;
    p.a4 = 5.0 - 2.0 * f0;
    p.sqrt_disc = std::sqrt(7.0 - 26.0 * f0 + 28.0 * f0 * f0);
    p.lambda_plus = 2.0 + 4.0 * f0 + p.sqrt_disc;
    p.lambda_minus = 2.0 + 4.0 * f0 - p.sqrt_disc;
    if (std::abs(p.a3) > 1e-15) {
        p.omega_plus = (-3.0 + 6.0 * f0 + p.sqrt_disc) / p.a3;
        p.omega_minus = (-3.0 + 6.0 * f0 - p.sqrt_disc) / p.a3;
        p.c1 = (f0 - p.omega_minus) / (p.omega_plus - p.omega_minus);
        p.c2 = 1.0 - p.c1;
    }
    p.fidelities.reserve(static_cast<size_t>(rounds) + 1);
    for (int r = 0; r <= rounds; ++r) p.fidelities.push_back(pumping_closed_form(f0, r));
    return p;
}

}  // namespace mqrep

#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace mqrep {

// Ages are integer time steps. Kept signed so that subtraction in
// comparisons does not wrap.
using Age = std::int64_t;

// Fixed Bell basis order used everywhere: Phi+, Phi-, Psi+, Psi-.
enum BellIndex : int { kPhiPlus = 0, kPhiMinus = 1, kPsiPlus = 2, kPsiMinus = 3 };

struct BellDiagonalState {
    std::array<double, 4> w{1.0, 0.0, 0.0, 0.0};

    double fidelity() const { return w[kPhiPlus]; }
    double total() const { return w[0] + w[1] + w[2] + w[3]; }
    // weights non-negative and summing to one within tol
    bool valid(double tol = 1e-12) const;

    static BellDiagonalState isotropic(double f);
};

struct PauliChannelParams {
    double m1_star = 1.0;   // depolarising-type time constant
    double m2_star = 1.0;   // dephasing-type time constant
    double p_i = 1.0;
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;
};

enum class AgeRounding { Ceil, Floor };

AgeRounding parse_rounding(const std::string& tag);  // "ceil" or "floor"
std::string to_string(AgeRounding r);

// f(m) = (1 + 3 exp(-m/m*)) / 4
double fidelity_of_age(Age m, Age m_star);
double fidelity_of_age(double m, double m_star);

// Inverse of fidelity_of_age. F == 1 gives 0; F <= 1/4 is a domain error.
Age age_of_fidelity(double f, Age m_star, AgeRounding rounding = AgeRounding::Ceil);

// Unrounded inverse, -m* ln((4F-1)/3).
double continuous_age_of_fidelity(double f, double m_star);

inline Age swap_age(Age m1, Age m2) { return m1 + m2; }

PauliChannelParams pauli_channel_probs(double m1_star, double m2_star);

// State of a Phi+ pair after m steps of the channel on both qubits.
BellDiagonalState decohere_bell_state(Age m, const PauliChannelParams& params);

BellDiagonalState twirl_isotropic(const BellDiagonalState& s);

// First age at which the fidelity is no longer above 1/2.
Age entanglement_loss_age(Age m_star);

}  // namespace mqrep

#pragma once

#include <vector>

#include "mqrep/noise.h"

namespace mqrep {

struct DistillOutcome {
    double success_prob = 0.0;
    double output_fidelity = 0.0;
    Age output_age = 0;
    bool useful = false;
};

// BBPSSW on two isotropic pairs (inputs are twirled first).
double distill_success_prob(double f1, double f2);
double distill_fidelity(double f1, double f2);

// Age of the output link, going through the fidelity of the output.
Age distill_age(Age m1, Age m2, Age m_star, AgeRounding rounding = AgeRounding::Ceil);

// The same quantity written directly in terms of ages (no intermediate
// fidelity). Kept as a cross-check of distill_age.
Age distill_age_direct(Age m1, Age m2, Age m_star);

bool is_distill_useful(double f1, double f2);

DistillOutcome distill_outcome(Age m1, Age m2, Age m_star,
                               AgeRounding rounding = AgeRounding::Ceil);

struct BandedRound {
    int round = 0;
    double fidelity = 0.0;
    double cumulative_prob = 1.0;  // all distillations up to this round succeed
};

// Rounds r = 1..log2(n_ch) of pairwise distillation of equal-fidelity links.
std::vector<BandedRound> banded_schedule(double f0, int n_ch);

struct PumpingSolution {
    double f0 = 0.0;
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    double sqrt_disc = 0.0;
    double lambda_plus = 0.0, lambda_minus = 0.0;
    double omega_plus = 0.0, omega_minus = 0.0;
    double c1 = 0.0, c2 = 0.0;
    std::vector<double> fidelities;  // f_0 .. f_r
};

double pumping_recurrence(double f0, int r);
double pumping_closed_form(double f0, int r);
double pumping_limit(double f0);
PumpingSolution pumping_solution(double f0, int rounds);

}  // namespace mqrep

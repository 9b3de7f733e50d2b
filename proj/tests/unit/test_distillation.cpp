#include <gtest/gtest.h>

#include <cmath>

#include "mqrep/distillation.h"
#include "reference.h"

using namespace mqrep;

TEST(Distill, TableMatchesFormulasOnGrid) {
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) {
            const double f1 = 0.25 + 0.75 * i / 49.0;
            const double f2 = 0.25 + 0.75 * j / 49.0;
            const ref::Distilled d = ref::bbpssw(f1, f2);
            EXPECT_NEAR(distill_success_prob(f1, f2), d.prob, 1e-12);
            EXPECT_NEAR(distill_fidelity(f1, f2), d.fid, 1e-12);
        }
}

TEST(Distill, DensityMatrixAgreesWithTable) {
    for (double f1 : {0.5, 0.73, 0.95})
        for (double f2 : {0.3, 0.8, 1.0}) {
            const ref::Distilled full = ref::bbpssw_density(ref::isotropic_density(f1), ref::isotropic_density(f2));
            const ref::Distilled tab = ref::bbpssw(f1, f2);
            EXPECT_NEAR(full.prob, tab.prob, 1e-12);
            EXPECT_NEAR(full.fid, tab.fid, 1e-12);
        }
}

TEST(Distill, PerfectInputs) {
    EXPECT_DOUBLE_EQ(distill_success_prob(1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(distill_fidelity(1.0, 1.0), 1.0);
}

TEST(Distill, DomainChecked) {
    EXPECT_THROW(distill_fidelity(1.2, 0.9), std::domain_error);
    EXPECT_THROW(distill_success_prob(0.9, -0.1), std::domain_error);
}

TEST(Distill, AgeViaFidelityMatchesDirectForm) {
    for (Age ms : {Age{8}, Age{12}, Age{24}})
        for (Age a = 0; a <= ms; ++a)
            for (Age b = 0; b <= ms; ++b) EXPECT_EQ(distill_age(a, b, ms), distill_age_direct(a, b, ms)) << a << "," << b;
}

TEST(Distill, AgesAtCutoff24) {
    // hand evaluation of ceil / floor of the continuous output age
    const Age want_ceil[] = {0, 1, 2, 3, 3, 4, 5, 6, 7};
    const Age want_floor[] = {0, 0, 1, 2, 2, 3, 4, 5, 6};
    for (Age m = 0; m <= 8; ++m) {
        EXPECT_EQ(distill_age(m, m, 24, AgeRounding::Ceil), want_ceil[m]) << m;
        EXPECT_EQ(distill_age(m, m, 24, AgeRounding::Floor), want_floor[m]) << m;
    }
}

TEST(Distill, UsefulRegion) {
    EXPECT_TRUE(is_distill_useful(0.8, 0.8));
    EXPECT_FALSE(is_distill_useful(0.99, 0.6));
    EXPECT_FALSE(is_distill_useful(0.5, 0.5));
    const DistillOutcome o = distill_outcome(6, 6, 24, AgeRounding::Ceil);
    EXPECT_TRUE(o.useful);
    EXPECT_EQ(o.output_age, 5);
    EXPECT_NEAR(o.success_prob, distill_success_prob(fidelity_of_age(Age{6}, Age{24}), fidelity_of_age(Age{6}, Age{24})), 1e-15);
}

TEST(Pumping, ClosedFormMatchesRecurrence) {
    for (int k = 55; k <= 99; ++k) {
        const double f0 = k / 100.0;
        double f = f0;
        for (int r = 0; r <= 50; ++r) {
            EXPECT_NEAR(pumping_closed_form(f0, r), f, 1e-10) << f0 << " r=" << r;
            EXPECT_NEAR(pumping_recurrence(f0, r), f, 1e-13);
            f = ref::pump_step(f, f0);
        }
    }
}

TEST(Pumping, Limits) {
    EXPECT_EQ(pumping_limit(0.5), 0.5);
    EXPECT_EQ(pumping_limit(1.0), 1.0);
    EXPECT_NEAR(pumping_limit(0.8), 0.870404162049646339, 1e-14);
    EXPECT_THROW(pumping_limit(0.25), std::domain_error);
}

TEST(Pumping, Solution) {
    const PumpingSolution s = pumping_solution(0.8, 5);
    EXPECT_NEAR(s.a1, 7.0, 1e-15);
    EXPECT_NEAR(s.a2, 0.2, 1e-15);
    EXPECT_NEAR(s.a3, 4.4, 1e-15);
    EXPECT_NEAR(s.a4, 3.4, 1e-15);
    ASSERT_EQ(s.fidelities.size(), 6u);
    const double want[] = {0.8, 0.838150289017341040, 0.855977817648018268, 0.864022250242394723,
                           0.867594814102302359, 0.869170167178032564};
    for (int r = 0; r <= 5; ++r) EXPECT_NEAR(s.fidelities[static_cast<size_t>(r)], want[r], 1e-14);
    EXPECT_NEAR(s.omega_plus, pumping_limit(0.8), 1e-15);
    EXPECT_NEAR(s.c1 + s.c2, 1.0, 1e-12);
}

// the numerator / denominator exactly as written in the theorem
TEST(Pumping, TypesetAlphaBeta) {
    for (double f0 : {0.55, 0.7, 0.8, 0.93}) {
        const double s = std::sqrt(7.0 - 26.0 * f0 + 28.0 * f0 * f0);
        for (int r = 1; r <= 20; ++r) {
            const double lm = std::pow(2.0 + 4.0 * f0 - s, r), lp = std::pow(2.0 + 4.0 * f0 + s, r);
            const double alpha = -(1.0 - 4.0 * f0 + 6.0 * f0 * f0) * (lm - lp) + f0 * s * (lm + lp);
            const double beta = -(3.0 - 8.0 * f0 + 8.0 * f0 * f0) * (lm - lp) + s * (lm + lp);
            EXPECT_NEAR(pumping_closed_form(f0, r), alpha / beta, 1e-12) << f0 << " " << r;
        }
    }
}

TEST(Pumping, EigenDecomposition) {
    const PumpingSolution s = pumping_solution(0.7, 0);
    // v0 = c1 x+ + c2 x-, so the first component fixes c1 with the difference of the omegas
    EXPECT_NEAR(s.c1 * s.omega_plus + s.c2 * s.omega_minus, 0.7, 1e-14);
    EXPECT_NEAR(s.c1, (0.7 - s.omega_minus) / (s.omega_plus - s.omega_minus), 1e-15);
    EXPECT_NEAR(s.lambda_plus * s.lambda_minus, s.a1 * s.a4 - s.a2 * s.a3, 1e-12);
    EXPECT_NEAR(s.lambda_plus + s.lambda_minus, s.a1 + s.a4, 1e-12);
}

TEST(Banded, FourChannels) {
    const auto rounds = banded_schedule(0.8, 4);
    ASSERT_EQ(rounds.size(), 2u);
    EXPECT_NEAR(rounds[0].fidelity, 0.838150289017341040, 1e-14);
    EXPECT_NEAR(rounds[0].cumulative_prob, 0.591190123456790123, 1e-14);  // two attempts
    EXPECT_NEAR(rounds[1].fidelity, 0.873584515298498885, 1e-14);
    EXPECT_NEAR(rounds[1].cumulative_prob, 0.477377229080932785, 1e-14);
}

TEST(Banded, BeatsPumpingForSameLinkBudget) {
    // 2^k links: banded uses them pairwise, pumping feeds them one at a time
    for (double f0 : {0.6, 0.7, 0.8, 0.9}) {
        const auto b = banded_schedule(f0, 8);
        EXPECT_GT(b.back().fidelity, pumping_closed_form(f0, 7));
    }
}

TEST(Banded, RequiresPowerOfTwo) {
    EXPECT_THROW(banded_schedule(0.8, 6), std::invalid_argument);
    EXPECT_TRUE(banded_schedule(0.8, 1).empty());
}

#include <gtest/gtest.h>

#include <cmath>

#include "mqrep/noise.h"
#include "reference.h"

using namespace mqrep;

TEST(Noise, FidelityEndpoints) {
    EXPECT_DOUBLE_EQ(fidelity_of_age(Age{0}, Age{24}), 1.0);
    // f(m*) = (1 + 3/e) / 4
    EXPECT_NEAR(fidelity_of_age(Age{24}, Age{24}), 0.525909580878581741, 1e-15);
    EXPECT_NEAR(fidelity_of_age(Age{8}, Age{24}), 0.787398482930341938, 1e-15);
}

TEST(Noise, FidelityDecreasesWithAge) {
    for (Age m = 0; m < 100; ++m) EXPECT_GT(fidelity_of_age(m, Age{10}), fidelity_of_age(m + 1, Age{10}));
}

TEST(Noise, RejectsBadCutoff) {
    EXPECT_THROW(fidelity_of_age(Age{1}, Age{0}), std::invalid_argument);
    EXPECT_THROW(age_of_fidelity(0.9, Age{0}), std::invalid_argument);
}

TEST(Noise, InverseOutsideDomain) {
    EXPECT_THROW(age_of_fidelity(0.25, Age{10}), std::domain_error);
    EXPECT_THROW(age_of_fidelity(0.1, Age{10}), std::domain_error);
    EXPECT_EQ(age_of_fidelity(1.0, Age{10}), 0);
}

// channel iteration on density matrices against the closed form
TEST(Noise, ChannelIterationMatchesClosedForm) {
    for (double ms : {1.0, 5.0, 24.0}) {
        const auto p = ref::pauli_probs_closed(2.0 * ms, 2.0 * ms);
        ref::Mat4 rho = ref::bell_projector(0, 0);
        for (int m = 0; m <= 50; ++m) {
            EXPECT_NEAR(ref::phi_plus_weight(rho), fidelity_of_age(static_cast<double>(m), ms), 1e-10)
                << "m*=" << ms << " m=" << m;
            rho = ref::pauli_step(rho, p);
        }
    }
}

TEST(Noise, PauliProbsMatchClosedForm) {
    for (double m1 : {2.0, 10.0, 48.0})
        for (double m2 : {2.0, 7.0, 48.0}) {
            const auto want = ref::pauli_probs_closed(m1, m2);
            if (want[3] < 0.0) {
                EXPECT_THROW(pauli_channel_probs(m1, m2), std::invalid_argument);
                continue;
            }
            const auto got = pauli_channel_probs(m1, m2);
            EXPECT_NEAR(got.p_i, want[0], 1e-15);
            EXPECT_NEAR(got.p_x, want[1], 1e-15);
            EXPECT_NEAR(got.p_y, want[2], 1e-15);
            EXPECT_NEAR(got.p_z, want[3], 1e-15);
            EXPECT_NEAR(got.p_i + got.p_x + got.p_y + got.p_z, 1.0, 1e-15);
        }
}

// Bell-diagonal weights for unequal m1*, m2* against the density matrices
TEST(Noise, DecoheredWeightsMatchIteration) {
    const double m1 = 10.0, m2 = 6.0;
    const auto p = ref::pauli_probs_closed(m1, m2);
    const auto params = pauli_channel_probs(m1, m2);
    ref::Mat4 rho = ref::bell_projector(0, 0);
    for (Age m = 0; m <= 30; ++m) {
        const BellDiagonalState s = decohere_bell_state(m, params);
        EXPECT_TRUE(s.valid(1e-12));
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                const double w = (ref::bell_vector(x, z).adjoint() * rho * ref::bell_vector(x, z))(0).real();
                EXPECT_NEAR(s.w[static_cast<size_t>(ref::bell_index(x, z))], w, 1e-12) << m;
            }
        rho = ref::pauli_step(rho, p);
    }
}

TEST(Noise, EqualCutoffsGiveIsotropicState) {
    const auto params = pauli_channel_probs(16.0, 16.0);
    const BellDiagonalState s = decohere_bell_state(5, params);
    EXPECT_NEAR(s.w[1], s.w[2], 1e-15);
    EXPECT_NEAR(s.w[2], s.w[3], 1e-15);
    EXPECT_NEAR(s.fidelity(), fidelity_of_age(Age{5}, Age{8}), 1e-15);
}

TEST(Noise, RoundTrip) {
    for (Age ms : {Age{1}, Age{5}, Age{8}, Age{24}})
        for (Age m = 0; m <= 3 * ms; ++m) {
            EXPECT_EQ(age_of_fidelity(fidelity_of_age(m, ms), ms, AgeRounding::Ceil), m);
            EXPECT_EQ(age_of_fidelity(fidelity_of_age(m, ms), ms, AgeRounding::Floor), m);
        }
}

TEST(Noise, RoundingBetweenGridPoints) {
    const double f = fidelity_of_age(2.4, 10.0);
    EXPECT_EQ(age_of_fidelity(f, 10, AgeRounding::Ceil), 3);
    EXPECT_EQ(age_of_fidelity(f, 10, AgeRounding::Floor), 2);
    EXPECT_NEAR(continuous_age_of_fidelity(f, 10.0), 2.4, 1e-12);
}

TEST(Noise, EntanglementLoss) {
    // ceil(m* ln 3)
    EXPECT_EQ(entanglement_loss_age(24), 27);
    EXPECT_EQ(entanglement_loss_age(8), 9);
    EXPECT_EQ(entanglement_loss_age(1), 2);
    for (Age ms : {Age{3}, Age{8}, Age{24}}) {
        EXPECT_LE(fidelity_of_age(entanglement_loss_age(ms), ms), 0.5);
        EXPECT_GT(fidelity_of_age(entanglement_loss_age(ms) - 1, ms), 0.5);
    }
}

TEST(Noise, Twirl) {
    const BellDiagonalState s{{0.7, 0.2, 0.06, 0.04}};
    const BellDiagonalState t = twirl_isotropic(s);
    EXPECT_DOUBLE_EQ(t.w[0], 0.7);
    EXPECT_NEAR(t.w[1], 0.1, 1e-15);
    EXPECT_NEAR(t.total(), 1.0, 1e-15);
}

TEST(Noise, RoundingNames) {
    EXPECT_EQ(parse_rounding("ceil"), AgeRounding::Ceil);
    EXPECT_EQ(to_string(AgeRounding::Floor), "floor");
    EXPECT_THROW(parse_rounding("nearest"), std::invalid_argument);
}

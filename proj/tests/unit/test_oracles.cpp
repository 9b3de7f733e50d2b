#include <gtest/gtest.h>

#include <cmath>

#include "mqrep/oracles.h"
#include "reference.h"

using namespace mqrep;

namespace {

OracleResult closed(int n_ch, DistillOrdering ord, Age m0, Age ms, double p_sw, OracleConvention conv) {
    if (ord == DistillOrdering::DistillSwap)
        return n_ch == 2 ? three_node_two_channel_distill_swap(m0, ms, p_sw, conv)
                         : three_node_four_channel_distill_swap(m0, ms, p_sw, conv);
    return n_ch == 2 ? three_node_two_channel_swap_distill(m0, ms, p_sw, conv)
                     : three_node_four_channel_swap_distill(m0, ms, p_sw, conv);
}

}  // namespace

// closed forms against brute-force enumeration of every branch
TEST(Oracles, ClosedFormsMatchEnumeration) {
    for (bool floor_r : {false, true})
        for (int nch : {2, 4})
            for (auto ord : {DistillOrdering::DistillSwap, DistillOrdering::SwapDistill})
                for (Age m0 : {Age{0}, Age{1}, Age{2}, Age{3}, Age{7}})
                    for (double psw : {0.3, 0.5, 1.0}) {
                        const ref::RefConfig rc{nch,
                                                ord == DistillOrdering::DistillSwap ? ref::Order::DistillSwap
                                                                                    : ref::Order::SwapDistill,
                                                m0, 24, psw, floor_r};
                        const ref::Summary want = ref::summarize(ref::enumerate_three_node(rc));
                        const OracleConvention conv{true, floor_r ? AgeRounding::Floor : AgeRounding::Ceil};
                        const OracleResult got = closed(nch, ord, m0, 24, psw, conv);
                        EXPECT_NEAR(want.total_prob, 1.0, 1e-12);
                        EXPECT_NEAR(got.success_prob, want.success_prob, 1e-12)
                            << nch << " " << to_string(ord) << " m0=" << m0 << " psw=" << psw;
                        EXPECT_NEAR(got.expected_fidelity, want.expected_fidelity, 1e-12)
                            << nch << " " << to_string(ord) << " m0=" << m0 << " psw=" << psw;
                    }
}

TEST(Oracles, TwoChannelDistillSwapLiteral) {
    // p_sw p_d^2 with p_d = (8f^2 - 4f + 5) / 9, f_ds from the ceiling age of f_d
    for (Age m0 : {Age{0}, Age{2}, Age{3}, Age{6}}) {
        const double f0 = ref::fidelity(static_cast<double>(m0), 24.0);
        const double pd = (8.0 * f0 * f0 - 4.0 * f0 + 5.0) / 9.0;
        const double fd = (1.0 - 2.0 * f0 + 10.0 * f0 * f0) / (5.0 - 4.0 * f0 + 8.0 * f0 * f0);
        const double md = std::ceil(-24.0 * std::log((4.0 * fd - 1.0) / 3.0) - 1e-9);
        const OracleResult r = three_node_two_channel_distill_swap(m0, 24, 0.5);
        EXPECT_NEAR(r.success_prob, 0.5 * pd * pd, 1e-14);
        EXPECT_NEAR(r.expected_fidelity, ref::fidelity(2.0 * md, 24.0), 1e-14);
    }
}

TEST(Oracles, TwoChannelSwapDistillLiteral) {
    for (Age m0 : {Age{0}, Age{2}, Age{3}})
        for (double psw : {0.5, 1.0}) {
            const double fs = ref::fidelity(2.0 * static_cast<double>(m0), 24.0);
            const double p2 = psw * psw * (8.0 * fs * fs - 4.0 * fs + 5.0) / 9.0;
            const double p1 = 2.0 * psw * (1.0 - psw);
            const double f2 = (1.0 - 2.0 * fs + 10.0 * fs * fs) / (5.0 - 4.0 * fs + 8.0 * fs * fs);
            const OracleResult r = three_node_two_channel_swap_distill(m0, 24, psw);
            EXPECT_NEAR(r.success_prob, p1 + p2, 1e-14);
            EXPECT_NEAR(r.expected_fidelity, (p1 * fs + p2 * f2) / (p1 + p2), 1e-14);
        }
}

TEST(Oracles, FourChannelTrajectoriesSumToTotal) {
    for (auto ord : {DistillOrdering::DistillSwap, DistillOrdering::SwapDistill}) {
        const OracleResult r = closed(4, ord, 2, 24, 0.5, {});
        double p = 0.0;
        for (const auto& t : r.trajectories) {
            EXPECT_GE(t.probability, 0.0);
            EXPECT_GT(t.fidelity, 0.25);
            p += t.probability;
        }
        EXPECT_NEAR(p, r.success_prob, 1e-15);
        EXPECT_LE(r.success_prob, 1.0);
    }
}

TEST(Oracles, TypesetFourChannelSwapDistillDiffers) {
    // the typeset total double counts the three-swap branch; it must not agree
    const OracleResult r = three_node_four_channel_swap_distill(2, 24, 0.5);
    ASSERT_TRUE(r.has_printed);
    EXPECT_GT(std::abs(r.printed_success_prob - r.success_prob), 1e-3);
    EXPECT_TRUE(std::isfinite(r.printed_expected_fidelity));
}

TEST(Oracles, PerfectSwapsPerfectLinks) {
    // m0 = 0: distillation of perfect pairs always succeeds
    const OracleResult a = three_node_four_channel_distill_swap(0, 24, 1.0);
    EXPECT_NEAR(a.success_prob, 1.0, 1e-15);
    EXPECT_NEAR(a.expected_fidelity, 1.0, 1e-15);
    const OracleResult b = three_node_four_channel_swap_distill(0, 24, 1.0);
    EXPECT_NEAR(b.success_prob, 1.0, 1e-15);
}

TEST(Oracles, Validation) {
    EXPECT_THROW(three_node_two_channel_distill_swap(-1, 24, 0.5), std::invalid_argument);
    EXPECT_THROW(three_node_two_channel_swap_distill(1, 24, 1.5), std::invalid_argument);
    OracleRunConfig c;
    c.n_ch = 3;
    EXPECT_THROW(oracle_closed_form(c), std::invalid_argument);
    c.n_ch = 2;
    c.ordering = DistillOrdering::None;
    EXPECT_THROW(oracle_closed_form(c), std::invalid_argument);
}

class OracleEmpirical : public ::testing::TestWithParam<std::tuple<int, DistillOrdering, AgeRounding>> {};

TEST_P(OracleEmpirical, FrequenciesWithinFourSigma) {
    const auto [nch, ord, rounding] = GetParam();
    OracleRunConfig c;
    c.n_ch = nch;
    c.ordering = ord;
    c.m0 = 3;
    c.p_sw = 0.5;
    c.rounding = rounding;
    c.trials = 20000;
    c.seed = 11;
    const OracleResult want = oracle_closed_form(c);
    const EmpiricalOracle got = oracle_mode_run(c);
    const double se = std::sqrt(want.success_prob * (1.0 - want.success_prob) / static_cast<double>(c.trials));
    EXPECT_NEAR(got.success_prob, want.success_prob, 4.0 * se);
    EXPECT_NEAR(got.mean_fidelity, want.expected_fidelity, 4.0 * got.fidelity_std_err + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Cases, OracleEmpirical,
                         ::testing::Combine(::testing::Values(2, 4),
                                            ::testing::Values(DistillOrdering::DistillSwap,
                                                              DistillOrdering::SwapDistill),
                                            ::testing::Values(AgeRounding::Ceil, AgeRounding::Floor)));

TEST(Oracles, EmpiricalDeterministic) {
    OracleRunConfig c;
    c.trials = 3000;
    const EmpiricalOracle a = oracle_mode_run(c);
    const EmpiricalOracle b = oracle_mode_run(c);
    EXPECT_EQ(a.successes, b.successes);
    EXPECT_EQ(a.mean_fidelity, b.mean_fidelity);
}

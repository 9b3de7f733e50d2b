#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mqrep/noise.h"
#include "mqrep/policies.h"

namespace mqrep {

// How fidelities are carried through a distillation.
//  Printed:   continuous output fidelity, ages by the ceiling inverse
//             (the convention of the three-node formulas as usually written).
//  Quantized: the output link is re-expressed as an integer age with the
//             given rounding and its fidelity is f(age); this is what the
//             simulator does.
struct OracleConvention {
    bool quantized = false;
    AgeRounding rounding = AgeRounding::Ceil;
};

struct Trajectory {
    std::string label;
    double probability = 0.0;
    double fidelity = 0.0;
};

struct OracleResult {
    double success_prob = 0.0;
    double expected_fidelity = 0.0;  // conditional on success; 0 when never successful
    std::vector<Trajectory> trajectories;
    // Same quantity evaluated with the formula exactly as typeset, where it
    // differs from the derivation.
    bool has_printed = false;
    double printed_success_prob = 0.0;
    double printed_expected_fidelity = 0.0;
};

OracleResult three_node_two_channel_distill_swap(Age m0, Age m_star, double p_sw,
                                                 OracleConvention conv = {});
OracleResult three_node_two_channel_swap_distill(Age m0, Age m_star, double p_sw,
                                                 OracleConvention conv = {});
OracleResult three_node_four_channel_distill_swap(Age m0, Age m_star, double p_sw,
                                                  OracleConvention conv = {});
OracleResult three_node_four_channel_swap_distill(Age m0, Age m_star, double p_sw,
                                                  OracleConvention conv = {});

struct OracleRunConfig {
    int n_ch = 2;  // 2 or 4
    DistillOrdering ordering = DistillOrdering::DistillSwap;
    Age m0 = 0;
    Age m_star = 24;
    double p_sw = 0.5;
    AgeRounding rounding = AgeRounding::Ceil;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
};

struct EmpiricalOracle {
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    double success_prob = 0.0;
    double success_std_err = 0.0;  // binomial
    double mean_fidelity = 0.0;    // over successful trials
    double fidelity_std_err = 0.0;
};

// Runs the engine in single-shot mode on a three-node chain.
EmpiricalOracle oracle_mode_run(const OracleRunConfig& cfg);

// Closed form matching cfg (quantized with cfg.rounding).
OracleResult oracle_closed_form(const OracleRunConfig& cfg);

}  // namespace mqrep

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mqrep/engine.h"
#include "mqrep/hardware.h"

namespace mqrep {

struct BatchShape {
    int batches = 5;
    int runs_per_batch = 200;

    static BatchShape desk() { return {5, 200}; }
    static BatchShape full() { return {20, 1000}; }
};

struct BatchStats {
    int num_batches = 0;
    int runs_per_batch = 0;
    std::int64_t successes = 0;
    std::int64_t censored_count = 0;
    int batches_with_estimate = 0;
    bool has_estimate = false;  // false when every run was censored
    double mean_of_means_waiting = 0.0;
    double mean_of_means_age = 0.0;
    // spread of the mean of means: std of the batch means / sqrt(batches)
    double std_of_batch_means_waiting = 0.0;
    double std_of_batch_means_age = 0.0;
    double mean_fidelity = 0.0;  // mean of f(age) over successful runs
    std::map<int, std::int64_t> swap_length_histogram;

    // batch spread within 5% of the mean, as required for reported numbers
    bool precision_ok() const;
    bool operator==(const BatchStats&) const = default;
};

// Runs batches x runs independent runs. Run r of batch b is seeded with
// derive_seed(params.seed, b, r). threads <= 0 uses the hardware count.
BatchStats run_batches(const SimParams& params, const PolicyConfig& policy, BatchShape shape,
                       int threads = 0);

struct ImprovementReport {
    std::string baseline_label;
    std::string variant_label;
    bool valid = false;
    double waiting_ratio = 0.0;  // baseline / variant; > 1 favours the variant
    double age_ratio = 0.0;
    double waiting_ratio_err = 0.0;  // first-order propagation of the batch spreads
    double age_ratio_err = 0.0;
};

ImprovementReport improvement_factor(const BatchStats& without, const BatchStats& with,
                                     std::string baseline_label = "without",
                                     std::string variant_label = "with");

struct SweepAxis {
    std::string name;  // n, n_ch, p_l, p_sw, m_star, m0, policy, ordering, distill_rounding, cc_mode
    std::vector<std::string> values;
};

struct SweepSpec {
    SimParams base;
    PolicyConfig policy;
    std::vector<SweepAxis> axes;
    BatchShape shape;
    std::size_t budget = 10000;
    int threads = 0;
};

struct SweepRow {
    std::size_t index = 0;
    SimParams params;
    PolicyConfig policy;
    BatchStats stats;
};

std::size_t sweep_size(const SweepSpec& spec);

// Cartesian product, last axis fastest. Throws std::length_error when the
// product exceeds the budget.
std::vector<SweepRow> sweep(const SweepSpec& spec);

// Applies one axis value to a configuration; also used for config overrides.
void apply_setting(SimParams& p, PolicyConfig& pol, const std::string& name, const std::string& value);

struct DesignRow {
    int num_nodes = 0;
    DerivedParams derived;
    bool feasible = false;
    BatchStats stats;
    double rate_hz = 0.0;
    double mean_fidelity = 0.0;
};

struct DesignSpec {
    HardwareProfile profile;
    int min_nodes = 2;
    int max_nodes = 10;
    int n_ch = 5;
    double p_sw = 1.0;
    PolicyConfig policy;
    CcMode cc_mode = CcMode::QuasiLocal;
    BatchShape shape;
    std::uint64_t seed = 1;
    std::int64_t max_steps = 1'000'000;
    int threads = 0;
};

struct DesignStudy {
    std::vector<DesignRow> rows;
    std::optional<std::size_t> best;  // row with the highest rate
};

DesignStudy design_study(const DesignSpec& spec);

}  // namespace mqrep

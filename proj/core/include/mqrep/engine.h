#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mqrep/noise.h"
#include "mqrep/policies.h"
#include "mqrep/random.h"

namespace mqrep {

enum class CcMode { Local, QuasiLocal, Global };

CcMode parse_cc_mode(const std::string& tag);
std::string to_string(CcMode m);

struct SimParams {
    int n = 7;      // nodes in the chain
    int n_ch = 5;   // channels (memory pairs) per hop
    double p_l = 0.5;
    double p_sw = 0.5;
    Age m_star = 8;
    Age m0 = 0;
    CcMode cc_mode = CcMode::QuasiLocal;
    bool charge_cc = true;  // false: no classical communication time at all
    std::int64_t max_steps = 1'000'000;
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument
};

struct PolicyConfig {
    SwapPolicy swap;
    DistillOrdering ordering = DistillOrdering::None;
    // Only distill a pair if the output is younger than both inputs.
    bool skip_useless_distillation = true;
    // Rounding of the continuous output age of a distillation.
    AgeRounding distill_rounding = AgeRounding::Ceil;
    int opt_bound = kDefaultOptBound;

    void validate(const SimParams& p) const;
};

struct RunResult {
    bool success = false;
    std::int64_t waiting_time = 0;  // CC-inclusive, in heralding-time units
    Age youngest_end_age = 0;
    std::int64_t steps = 0;
    std::map<int, std::int64_t> swap_length_histogram;  // longer input span -> count
    std::int64_t swap_attempts = 0;
    std::int64_t distill_attempts = 0;
    bool opt_fell_back = false;
};

// Snapshot of a link for inspection.
struct Link {
    int left_node = 0;
    int right_node = 0;
    int left_channel = 0;
    int right_channel = 0;
    Age real_age = 0;
    Age perceived_age = 0;  // oldest of the two end memories' own clocks
    bool really_active = true;
    bool perceived_active = true;
};

// Swaps joined into one link in a single step.
struct SwapChainRecord {
    int left_end = 0;
    int right_end = 0;
    std::vector<int> swap_nodes;
};

// Classical communication time charged for one step.
int cc_cost_of_step(const std::vector<SwapChainRecord>& swaps, const std::vector<int>& distill_spans,
                    CcMode mode, int n);

class Network {
public:
    Network(const SimParams& params, const PolicyConfig& policy);

    // Reseed and empty the chain.
    void reset(std::uint64_t seed);

    // The four phases of one time step.
    void generate_elementary();
    void execute_swaps();
    void execute_distillation();
    int step_cc_cost() const;
    void age_and_discard(int cc_increment);

    // Age of the youngest end-to-end link, counting only links younger than
    // m* unless any_age is set.
    std::optional<Age> youngest_end_to_end(bool any_age = false) const;

    RunResult run();

    // Single-shot experiment: every elementary link present at `age`, one
    // swap/distill pass, no aging and no CC. The RNG stream is not reset, so
    // repeated shots are independent.
    void fill_all_elementary(Age age);
    std::optional<Age> single_shot();

    std::vector<Link> links() const;  // really active links
    int occupied_memories(int node, int side) const;  // side 0 = left, 1 = right
    const std::map<int, std::int64_t>& swap_histogram() const { return histogram_; }
    std::int64_t swap_attempts() const { return swap_attempts_; }
    std::int64_t distill_attempts() const { return distill_attempts_; }
    const std::vector<SwapChainRecord>& last_swap_chains() const { return chains_; }

private:
    struct Memory {
        bool occupied = false;
        int link = -1;   // real link held, -1 if none (or dead)
        Age clock = 0;   // age as perceived by this node
    };
    struct LinkRec {
        int left_node = 0, right_node = 0;
        int left_ch = 0, right_ch = 0;
        Age age = 0;
        bool alive = false;
        bool fresh = false;  // generated in the previous step, not yet aged
    };

    int mem_index(int node, int side, int ch) const { return (node * 2 + side) * p_.n_ch + ch; }
    Memory& mem(int node, int side, int ch) { return mem_[static_cast<size_t>(mem_index(node, side, ch))]; }
    const Memory& mem(int node, int side, int ch) const {
        return mem_[static_cast<size_t>(mem_index(node, side, ch))];
    }
    int new_link(int ln, int lch, int rn, int rch, Age age);
    void kill_link(int id, bool free_memories);
    void free_memory(Memory& m);
    void clear_state();
    bool local() const { return p_.cc_mode == CcMode::Local; }
    void distill_group(std::vector<int>& ids);

    SimParams p_;
    PolicyConfig pol_;
    Rng rng_;
    std::vector<Memory> mem_;
    std::vector<LinkRec> links_;
    std::vector<int> free_ids_;
    std::map<int, std::int64_t> histogram_;
    std::int64_t swap_attempts_ = 0;
    std::int64_t distill_attempts_ = 0;
    bool fell_back_ = false;
    bool oracle_ = false;

    // this step's records
    std::vector<SwapChainRecord> chains_;
    std::vector<int> distill_spans_;

    // scratch
    std::vector<int> uf_parent_;
    std::vector<char> uf_poison_;
};

RunResult run(const SimParams& params, const PolicyConfig& policy);

}  // namespace mqrep

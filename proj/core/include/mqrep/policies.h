#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mqrep/noise.h"
#include "mqrep/random.h"

namespace mqrep {

// What a node sees of one of its links.
struct LinkView {
    int id = 0;      // caller's handle, echoed back in plans
    int length = 1;  // node span
    Age age = 0;
    int slot = 0;    // channel / memory index on this side of the node
};

struct SwapPair {
    int left_id = 0;
    int right_id = 0;
    int length = 0;  // anticipated span of the new link
    Age age = 0;     // anticipated age of the new link
};

struct SwapPlan {
    std::vector<SwapPair> pairs;
    bool fell_back = false;  // exhaustive search skipped, heuristic used
};

enum class SwapPolicyKind {
    FN,
    SN,
    Random,
    Parallel,
    SnDoubling,
    MixedWeight,
    RandomPriority,
    FnOpt,
    SnOpt,
};

struct SwapPolicy {
    SwapPolicyKind kind = SwapPolicyKind::FN;
    double param = 0.0;  // a for MixedWeight, r for RandomPriority

    // "fn", "sn", "random", "parallel", "sn-doubling", "mixed-weight:0.4",
    // "random-priority:0.3", "fn-opt", "sn-opt"
    static SwapPolicy parse(const std::string& tag);
    std::string to_string() const;
};

enum class DistillOrdering { None, DistillSwap, SwapDistill };

DistillOrdering parse_ordering(const std::string& tag);
std::string to_string(DistillOrdering o);

// Rankings return a permutation of the input, rank 1 first.
std::vector<LinkView> rank_links_fn(std::vector<LinkView> links);
std::vector<LinkView> rank_links_sn(std::vector<LinkView> links);
std::vector<LinkView> mixed_weight_rank(std::vector<LinkView> links, double a);

inline bool swap_attempt_allowed(Age m1, Age m2, Age m_star) { return m1 + m2 < m_star; }

SwapPlan pair_by_rank(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                      Age m_star);

// Equal-length pairs only, youngest with youngest inside each length class.
// With required_length set only that class is considered.
SwapPlan pair_doubling(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                       Age m_star, std::optional<int> required_length = std::nullopt);

SwapPlan parallel_pairing(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                          Age m_star);

SwapPlan random_pairing(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                        Age m_star, Rng& rng);

constexpr int kDefaultOptBound = 6;

// Exhaustive search over matchings made of viable pairs.
// fn_opt: maximise total anticipated length.
// sn_opt: maximise pair count, then minimise total anticipated age.
// Remaining ties go to the lexicographically first matching (sides ordered
// by slot). Above `bound` links on a side the FN / SN heuristic is used.
SwapPlan fn_opt_pairing(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                        Age m_star, int bound = kDefaultOptBound);
SwapPlan sn_opt_pairing(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                        Age m_star, int bound = kDefaultOptBound);

struct PlanContext {
    Age m_star = 1;
    std::optional<int> required_length;  // doubling
    bool priority_fn = true;             // random-priority draw for this step
    int opt_bound = kDefaultOptBound;
};

SwapPlan make_swap_plan(const SwapPolicy& policy, std::vector<LinkView> left,
                        std::vector<LinkView> right, const PlanContext& ctx, Rng& rng);

struct DistillCandidate {
    int id = 0;
    Age age = 0;
};

struct DistillRound {
    std::vector<std::pair<int, int>> pairs;
    std::optional<int> carry;  // oldest link left over when the count is odd
};

// One round of distill-asap: sort by age (then id), pair neighbours.
DistillRound distill_asap_round(std::vector<DistillCandidate> links);

struct AsapRoundFidelities {
    std::vector<std::pair<double, double>> inputs;
    std::vector<double> outputs;
    std::optional<double> carry;
};

// Full distill-asap schedule assuming every attempt succeeds, on fidelities.
std::vector<AsapRoundFidelities> distill_asap_grouping(std::vector<double> fidelities);

}  // namespace mqrep

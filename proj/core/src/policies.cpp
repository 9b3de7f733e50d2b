#include "mqrep/policies.h"

#include "mqrep/distillation.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mqrep {

namespace {

double parse_param(const std::string& tag, size_t colon) {
    if (colon == std::string::npos)
        throw std::invalid_argument("policy '" + tag + "' needs a parameter, e.g. " + tag + ":0.5");
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tag.substr(colon + 1), &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad policy parameter in '" + tag + "'");
    }
    if (used != tag.size() - colon - 1 || v < 0.0 || v > 1.0)
        throw std::invalid_argument("policy parameter must be in [0,1]: '" + tag + "'");
    return v;
}

SwapPair make_pair(const LinkView& l, const LinkView& r) {
    return SwapPair{l.id, r.id, l.length + r.length, swap_age(l.age, r.age)};
}

bool by_slot(const LinkView& a, const LinkView& b) { return a.slot < b.slot; }

struct OptScore {
    long long primary = 0;    // larger is better
    long long secondary = 0;  // larger is better
};

bool better(const OptScore& a, const OptScore& b) {
    if (a.primary != b.primary) return a.primary > b.primary;
    return a.secondary > b.secondary;
}

// Depth-first over partial matchings. Left link i is either matched to an
// unused viable right link (ascending) or skipped; the first best found wins,
// which makes ties resolve lexicographically.
template <typename ScoreFn>
SwapPlan exhaustive_pairing(std::vector<LinkView> left, std::vector<LinkView> right, Age m_star,
                            ScoreFn score_of) {
    std::sort(left.begin(), left.end(), by_slot);
    std::sort(right.begin(), right.end(), by_slot);
    const size_t nl = left.size();
    const size_t nr = right.size();
    std::vector<int> cur(nl, -1), best(nl, -1);
    std::vector<char> used(nr, 0);
    OptScore best_score{-1, 0};
    bool have_best = false;

    auto eval = [&]() {
        std::vector<SwapPair> pairs;
        for (size_t i = 0; i < nl; ++i)
            if (cur[i] >= 0) pairs.push_back(make_pair(left[i], right[static_cast<size_t>(cur[i])]));
        const OptScore s = score_of(pairs);
        if (!have_best || better(s, best_score)) {
            best_score = s;
            best = cur;
            have_best = true;
        }
    };

    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == nl) {
            eval();
            return;
        }
        for (size_t j = 0; j < nr; ++j) {
            if (used[j] || !swap_attempt_allowed(left[i].age, right[j].age, m_star)) continue;
            used[j] = 1;
            cur[i] = static_cast<int>(j);
            self(self, i + 1);
            used[j] = 0;
        }
        cur[i] = -1;
        self(self, i + 1);
    };
    rec(rec, 0);

    SwapPlan plan;
    for (size_t i = 0; i < nl; ++i)
        if (best[i] >= 0) plan.pairs.push_back(make_pair(left[i], right[static_cast<size_t>(best[i])]));
    return plan;
}

}  // namespace

SwapPolicy SwapPolicy::parse(const std::string& tag) {
    const size_t colon = tag.find(':');
    const std::string head = tag.substr(0, colon);
    SwapPolicy p;
    if (head == "fn") p.kind = SwapPolicyKind::FN;
    else if (head == "sn") p.kind = SwapPolicyKind::SN;
    else if (head == "random") p.kind = SwapPolicyKind::Random;
    else if (head == "parallel") p.kind = SwapPolicyKind::Parallel;
    else if (head == "sn-doubling") p.kind = SwapPolicyKind::SnDoubling;
    else if (head == "fn-opt") p.kind = SwapPolicyKind::FnOpt;
    else if (head == "sn-opt") p.kind = SwapPolicyKind::SnOpt;
    else if (head == "mixed-weight") {
        p.kind = SwapPolicyKind::MixedWeight;
        p.param = parse_param(tag, colon);
        return p;
    } else if (head == "random-priority") {
        p.kind = SwapPolicyKind::RandomPriority;
        p.param = parse_param(tag, colon);
        return p;
    } else {
        throw std::invalid_argument("unknown swap policy '" + tag + "'");
    }
    if (colon != std::string::npos)
        throw std::invalid_argument("policy '" + head + "' takes no parameter");
    return p;
}

std::string SwapPolicy::to_string() const {
    switch (kind) {
        case SwapPolicyKind::FN: return "fn";
        case SwapPolicyKind::SN: return "sn";
        case SwapPolicyKind::Random: return "random";
        case SwapPolicyKind::Parallel: return "parallel";
        case SwapPolicyKind::SnDoubling: return "sn-doubling";
        case SwapPolicyKind::FnOpt: return "fn-opt";
        case SwapPolicyKind::SnOpt: return "sn-opt";
        case SwapPolicyKind::MixedWeight:
        case SwapPolicyKind::RandomPriority: {
            std::ostringstream os;
            os << (kind == SwapPolicyKind::MixedWeight ? "mixed-weight:" : "random-priority:")
               << param;
            return os.str();
        }
    }
    return "fn";
}

DistillOrdering parse_ordering(const std::string& tag) {
    if (tag == "none") return DistillOrdering::None;
    if (tag == "distill-swap") return DistillOrdering::DistillSwap;
    if (tag == "swap-distill") return DistillOrdering::SwapDistill;
    throw std::invalid_argument("unknown distillation ordering '" + tag + "'");
}

std::string to_string(DistillOrdering o) {
    switch (o) {
        case DistillOrdering::None: return "none";
        case DistillOrdering::DistillSwap: return "distill-swap";
        case DistillOrdering::SwapDistill: return "swap-distill";
    }
    return "none";
}

std::vector<LinkView> rank_links_fn(std::vector<LinkView> links) {
    std::sort(links.begin(), links.end(), [](const LinkView& a, const LinkView& b) {
        if (a.length != b.length) return a.length > b.length;
        if (a.age != b.age) return a.age < b.age;
        return a.slot < b.slot;
    });
    return links;
}

std::vector<LinkView> rank_links_sn(std::vector<LinkView> links) {
    std::sort(links.begin(), links.end(), [](const LinkView& a, const LinkView& b) {
        if (a.age != b.age) return a.age < b.age;
        if (a.length != b.length) return a.length > b.length;
        return a.slot < b.slot;
    });
    return links;
}

std::vector<LinkView> mixed_weight_rank(std::vector<LinkView> links, double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("mixed weight a must be in [0,1]");
    auto score = [a](const LinkView& l) {
        return a * static_cast<double>(l.length) - (1.0 - a) * static_cast<double>(l.age);
    };
    std::sort(links.begin(), links.end(), [&](const LinkView& x, const LinkView& y) {
        const double sx = score(x), sy = score(y);
        if (sx != sy) return sx > sy;
        if (x.age != y.age) return x.age < y.age;
        if (x.length != y.length) return x.length > y.length;
        return x.slot < y.slot;
    });
    return links;
}

SwapPlan pair_by_rank(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                      Age m_star) {
    SwapPlan plan;
    const size_t k = std::min(left.size(), right.size());
    for (size_t i = 0; i < k; ++i)
        if (swap_attempt_allowed(left[i].age, right[i].age, m_star))
            plan.pairs.push_back(make_pair(left[i], right[i]));
    return plan;
}

SwapPlan pair_doubling(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                       Age m_star, std::optional<int> required_length) {
    std::map<int, std::vector<LinkView>> lclass, rclass;
    for (const auto& l : left)
        if (!required_length || l.length == *required_length) lclass[l.length].push_back(l);
    for (const auto& r : right)
        if (!required_length || r.length == *required_length) rclass[r.length].push_back(r);
    SwapPlan plan;
    for (auto& [len, ls] : lclass) {
        auto it = rclass.find(len);
        if (it == rclass.end()) continue;
        SwapPlan part = pair_by_rank(rank_links_sn(ls), rank_links_sn(it->second), m_star);
        plan.pairs.insert(plan.pairs.end(), part.pairs.begin(), part.pairs.end());
    }
    return plan;
}

SwapPlan parallel_pairing(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                          Age m_star) {
    SwapPlan plan;
    std::vector<LinkView> ls = left;
    std::sort(ls.begin(), ls.end(), by_slot);
    for (const auto& l : ls)
        for (const auto& r : right)
            if (r.slot == l.slot && swap_attempt_allowed(l.age, r.age, m_star))
                plan.pairs.push_back(make_pair(l, r));
    return plan;
}

SwapPlan random_pairing(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                        Age m_star, Rng& rng) {
    std::vector<LinkView> ls = left, rs = right;
    std::sort(ls.begin(), ls.end(), by_slot);
    std::sort(rs.begin(), rs.end(), by_slot);
    auto shuffle = [&rng](std::vector<LinkView>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(uniform_index(rng, i));
            std::swap(v[i - 1], v[j]);
        }
    };
    shuffle(ls);
    shuffle(rs);
    return pair_by_rank(ls, rs, m_star);
}

SwapPlan fn_opt_pairing(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                        Age m_star, int bound) {
    if (static_cast<int>(left.size()) > bound || static_cast<int>(right.size()) > bound) {
        SwapPlan p = pair_by_rank(rank_links_fn(left), rank_links_fn(right), m_star);
        p.fell_back = true;
        return p;
    }
    return exhaustive_pairing(left, right, m_star, [](const std::vector<SwapPair>& pairs) {
        OptScore s;
        for (const auto& p : pairs) {
            s.primary += p.length;
            s.secondary -= p.age;
        }
        return s;
    });
}

SwapPlan sn_opt_pairing(const std::vector<LinkView>& left, const std::vector<LinkView>& right,
                        Age m_star, int bound) {
    if (static_cast<int>(left.size()) > bound || static_cast<int>(right.size()) > bound) {
        SwapPlan p = pair_by_rank(rank_links_sn(left), rank_links_sn(right), m_star);
        p.fell_back = true;
        return p;
    }
    return exhaustive_pairing(left, right, m_star, [](const std::vector<SwapPair>& pairs) {
        OptScore s;
        s.primary = static_cast<long long>(pairs.size());
        for (const auto& p : pairs) s.secondary -= p.age;
        return s;
    });
}

SwapPlan make_swap_plan(const SwapPolicy& policy, std::vector<LinkView> left,
                        std::vector<LinkView> right, const PlanContext& ctx, Rng& rng) {
    if (left.empty() || right.empty()) return {};
    switch (policy.kind) {
        case SwapPolicyKind::FN:
            return pair_by_rank(rank_links_fn(std::move(left)), rank_links_fn(std::move(right)),
                                ctx.m_star);
        case SwapPolicyKind::SN:
            return pair_by_rank(rank_links_sn(std::move(left)), rank_links_sn(std::move(right)),
                                ctx.m_star);
        case SwapPolicyKind::MixedWeight:
            return pair_by_rank(mixed_weight_rank(std::move(left), policy.param),
                                mixed_weight_rank(std::move(right), policy.param), ctx.m_star);
        case SwapPolicyKind::RandomPriority:
            if (ctx.priority_fn)
                return pair_by_rank(rank_links_fn(std::move(left)), rank_links_fn(std::move(right)),
                                    ctx.m_star);
            return pair_by_rank(rank_links_sn(std::move(left)), rank_links_sn(std::move(right)),
                                ctx.m_star);
        case SwapPolicyKind::Random: return random_pairing(left, right, ctx.m_star, rng);
        case SwapPolicyKind::Parallel: return parallel_pairing(left, right, ctx.m_star);
        case SwapPolicyKind::SnDoubling:
            return pair_doubling(left, right, ctx.m_star, ctx.required_length);
        case SwapPolicyKind::FnOpt: return fn_opt_pairing(left, right, ctx.m_star, ctx.opt_bound);
        case SwapPolicyKind::SnOpt: return sn_opt_pairing(left, right, ctx.m_star, ctx.opt_bound);
    }
    return {};
}

DistillRound distill_asap_round(std::vector<DistillCandidate> links) {
    std::sort(links.begin(), links.end(), [](const DistillCandidate& a, const DistillCandidate& b) {
        if (a.age != b.age) return a.age < b.age;
        return a.id < b.id;
    });
    DistillRound round;
    size_t i = 0;
    for (; i + 1 < links.size(); i += 2) round.pairs.emplace_back(links[i].id, links[i + 1].id);
    if (i < links.size()) round.carry = links[i].id;
    return round;
}

std::vector<AsapRoundFidelities> distill_asap_grouping(std::vector<double> fidelities) {
    std::vector<AsapRoundFidelities> rounds;
    while (fidelities.size() > 1) {
        std::sort(fidelities.begin(), fidelities.end(), std::greater<double>());
        AsapRoundFidelities r;
        size_t i = 0;
        for (; i + 1 < fidelities.size(); i += 2) {
            r.inputs.emplace_back(fidelities[i], fidelities[i + 1]);
            r.outputs.push_back(distill_fidelity(fidelities[i], fidelities[i + 1]));
        }
        std::vector<double> next = r.outputs;
        if (i < fidelities.size()) {
            r.carry = fidelities[i];
            next.push_back(fidelities[i]);
        }
        rounds.push_back(std::move(r));
        fidelities = std::move(next);
    }
    return rounds;
}

}  // namespace mqrep

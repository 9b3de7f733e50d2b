#include "mqrep/engine.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mqrep/distillation.h"

namespace mqrep {

CcMode parse_cc_mode(const std::string& tag) {
    if (tag == "local") return CcMode::Local;
    if (tag == "quasi-local") return CcMode::QuasiLocal;
    if (tag == "global") return CcMode::Global;
    throw std::invalid_argument("unknown cc mode '" + tag + "'");
}

std::string to_string(CcMode m) {
    switch (m) {
        case CcMode::Local: return "local";
        case CcMode::QuasiLocal: return "quasi-local";
        case CcMode::Global: return "global";
    }
    return "quasi-local";
}

void SimParams::validate() const {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (n_ch < 1) throw std::invalid_argument("n_ch must be >= 1");
    if (!(p_l >= 0.0 && p_l <= 1.0)) throw std::invalid_argument("p_l must be in [0,1]");
    if (!(p_sw >= 0.0 && p_sw <= 1.0)) throw std::invalid_argument("p_sw must be in [0,1]");
    if (m_star < 1) throw std::invalid_argument("m_star must be >= 1");
    if (m0 < 0) throw std::invalid_argument("m0 must be >= 0");
    if (m0 >= m_star) throw std::invalid_argument("m0 must be below m_star");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

void PolicyConfig::validate(const SimParams& p) const {
    if (swap.kind == SwapPolicyKind::SnDoubling) {
        const int links = p.n - 1;
        if ((links & (links - 1)) != 0)
            throw std::invalid_argument("doubling needs 2^N + 1 nodes, got n = " + std::to_string(p.n));
    }
    if ((swap.kind == SwapPolicyKind::MixedWeight || swap.kind == SwapPolicyKind::RandomPriority) &&
        !(swap.param >= 0.0 && swap.param <= 1.0))
        throw std::invalid_argument("policy parameter must be in [0,1]");
    if (opt_bound < 1) throw std::invalid_argument("opt_bound must be >= 1");
}

int cc_cost_of_step(const std::vector<SwapChainRecord>& swaps, const std::vector<int>& distill_spans,
                    CcMode mode, int n) {
    switch (mode) {
        case CcMode::Local: return 0;
        case CcMode::Global: return n - 1;
        case CcMode::QuasiLocal: break;
    }
    int cost = 0;
    // each swap node has to reach the farther end of the link it is part of
    for (const auto& c : swaps)
        for (int k : c.swap_nodes) cost = std::max({cost, k - c.left_end, c.right_end - k});
    for (int s : distill_spans) cost = std::max(cost, s);
    return cost;
}

Network::Network(const SimParams& params, const PolicyConfig& policy) : p_(params), pol_(policy) {
    p_.validate();
    pol_.validate(p_);
    reset(p_.seed);
}

void Network::reset(std::uint64_t seed) {
    rng_.seed(seed);
    clear_state();
}

void Network::clear_state() {
    mem_.assign(static_cast<size_t>(p_.n * 2 * p_.n_ch), Memory{});
    links_.clear();
    free_ids_.clear();
    histogram_.clear();
    swap_attempts_ = 0;
    distill_attempts_ = 0;
    fell_back_ = false;
    oracle_ = false;
    chains_.clear();
    distill_spans_.clear();
}

int Network::new_link(int ln, int lch, int rn, int rch, Age age) {
    int id;
    if (!free_ids_.empty()) {
        id = free_ids_.back();
        free_ids_.pop_back();
    } else {
        id = static_cast<int>(links_.size());
        links_.emplace_back();
    }
    links_[static_cast<size_t>(id)] = LinkRec{ln, rn, lch, rch, age, true, false};
    return id;
}

void Network::free_memory(Memory& m) {
    m.occupied = false;
    m.link = -1;
    m.clock = 0;
}

void Network::kill_link(int id, bool free_memories) {
    LinkRec& l = links_[static_cast<size_t>(id)];
    if (!l.alive) return;
    l.alive = false;
    for (Memory* m : {&mem(l.left_node, 1, l.left_ch), &mem(l.right_node, 0, l.right_ch)}) {
        if (m->link != id) continue;
        if (free_memories) free_memory(*m);
        else m->link = -1;
    }
    free_ids_.push_back(id);
}

void Network::generate_elementary() {
    for (int i = 0; i + 1 < p_.n; ++i) {
        for (int ch = 0; ch < p_.n_ch; ++ch) {
            Memory& a = mem(i, 1, ch);
            Memory& b = mem(i + 1, 0, ch);
            if (a.occupied || b.occupied) continue;
            if (!bernoulli(rng_, p_.p_l)) continue;
            const int id = new_link(i, ch, i + 1, ch, p_.m0);
            links_[static_cast<size_t>(id)].fresh = true;
            a = Memory{true, id, p_.m0};
            b = Memory{true, id, p_.m0};
        }
    }
}

void Network::fill_all_elementary(Age age) {
    clear_state();
    oracle_ = true;
    for (int i = 0; i + 1 < p_.n; ++i) {
        for (int ch = 0; ch < p_.n_ch; ++ch) {
            const int id = new_link(i, ch, i + 1, ch, age);
            links_[static_cast<size_t>(id)].fresh = true;
            mem(i, 1, ch) = Memory{true, id, age};
            mem(i + 1, 0, ch) = Memory{true, id, age};
        }
    }
}

void Network::execute_swaps() {
    struct Planned {
        int node, lch, rch;
        int a, b;  // real links behind the two memories, -1 if none
    };
    std::vector<Planned> planned;

    PlanContext ctx;
    ctx.m_star = p_.m_star;
    ctx.opt_bound = pol_.opt_bound;
    if (pol_.swap.kind == SwapPolicyKind::RandomPriority) ctx.priority_fn = bernoulli(rng_, pol_.swap.param);

    // plans are built from the state at phase start
    std::vector<LinkView> left, right;
    for (int k = 1; k + 1 < p_.n; ++k) {
        left.clear();
        right.clear();
        for (int side = 0; side < 2; ++side) {
            for (int ch = 0; ch < p_.n_ch; ++ch) {
                const Memory& m = mem(k, side, ch);
                if (!m.occupied) continue;
                LinkView v;
                v.id = ch;
                v.slot = ch;
                if (local() || m.link < 0) {
                    v.length = 1;
                    v.age = m.clock;
                } else {
                    const LinkRec& l = links_[static_cast<size_t>(m.link)];
                    v.length = l.right_node - l.left_node;
                    v.age = l.age;
                }
                (side == 0 ? left : right).push_back(v);
            }
        }
        if (left.empty() || right.empty()) continue;
        if (pol_.swap.kind == SwapPolicyKind::SnDoubling) ctx.required_length = k & -k;
        const SwapPlan plan = make_swap_plan(pol_.swap, left, right, ctx, rng_);
        fell_back_ = fell_back_ || plan.fell_back;
        for (const auto& pr : plan.pairs)
            planned.push_back({k, pr.left_id, pr.right_id, mem(k, 0, pr.left_id).link,
                               mem(k, 1, pr.right_id).link});
    }
    if (planned.empty()) return;

    const size_t nl = links_.size();
    uf_parent_.resize(nl);
    std::iota(uf_parent_.begin(), uf_parent_.end(), 0);
    uf_poison_.assign(nl, 0);
    auto find = [this](int x) {
        while (uf_parent_[static_cast<size_t>(x)] != x) {
            uf_parent_[static_cast<size_t>(x)] = uf_parent_[static_cast<size_t>(uf_parent_[static_cast<size_t>(x)])];
            x = uf_parent_[static_cast<size_t>(x)];
        }
        return x;
    };
    auto span = [this](int id) {
        if (id < 0) return 1;
        const LinkRec& l = links_[static_cast<size_t>(id)];
        return l.right_node - l.left_node;
    };

    std::vector<char> ok(planned.size());
    for (size_t i = 0; i < planned.size(); ++i) {
        const Planned& s = planned[i];
        ok[i] = bernoulli(rng_, p_.p_sw);
        ++swap_attempts_;
        ++histogram_[std::max(span(s.a), span(s.b))];
        if (s.a >= 0 && s.b >= 0) uf_parent_[static_cast<size_t>(find(s.a))] = find(s.b);
    }
    for (size_t i = 0; i < planned.size(); ++i) {
        const Planned& s = planned[i];
        if (ok[i] && s.a >= 0 && s.b >= 0) continue;
        if (s.a >= 0) uf_poison_[static_cast<size_t>(find(s.a))] = 1;
        if (s.b >= 0) uf_poison_[static_cast<size_t>(find(s.b))] = 1;
    }

    struct Component {
        std::vector<int> links;
        std::vector<int> nodes;
    };
    std::map<int, Component> comps;
    for (const Planned& s : planned) {
        // the swapping node releases both of its memories whatever happens
        free_memory(mem(s.node, 0, s.lch));
        free_memory(mem(s.node, 1, s.rch));
        if (s.a < 0 && s.b < 0) continue;
        Component& c = comps[find(s.a >= 0 ? s.a : s.b)];
        c.nodes.push_back(s.node);
        if (s.a >= 0) c.links.push_back(s.a);
        if (s.b >= 0) c.links.push_back(s.b);
    }

    for (auto& [root, c] : comps) {
        std::sort(c.links.begin(), c.links.end());
        c.links.erase(std::unique(c.links.begin(), c.links.end()), c.links.end());
        std::sort(c.nodes.begin(), c.nodes.end());
        const LinkRec* lm = nullptr;
        const LinkRec* rm = nullptr;
        Age total = 0;
        for (int id : c.links) {
            const LinkRec& l = links_[static_cast<size_t>(id)];
            if (!lm || l.left_node < lm->left_node) lm = &l;
            if (!rm || l.right_node > rm->right_node) rm = &l;
            total += l.age;
        }
        const int ln = lm->left_node, lch = lm->left_ch, rn = rm->right_node, rch = rm->right_ch;
        chains_.push_back({ln, rn, c.nodes});

        if (uf_poison_[static_cast<size_t>(root)]) {
            // in local mode the end nodes do not learn of the failure
            for (int id : c.links) kill_link(id, !local());
            continue;
        }
        for (int id : c.links) kill_link(id, false);
        const int id = new_link(ln, lch, rn, rch, total);
        Memory& a = mem(ln, 1, lch);
        Memory& b = mem(rn, 0, rch);
        a.link = id;
        b.link = id;
        if (!local()) {
            a.clock = total;
            b.clock = total;
        }
    }
}

void Network::distill_group(std::vector<int>& ids) {
    std::vector<int> pool = ids;
    std::vector<DistillCandidate> cand;
    std::vector<int> next;
    while (pool.size() > 1) {
        cand.clear();
        for (int id : pool) cand.push_back({id, links_[static_cast<size_t>(id)].age});
        const DistillRound round = distill_asap_round(cand);
        next.clear();
        bool attempted = false;
        for (const auto& [a, b] : round.pairs) {
            LinkRec& la = links_[static_cast<size_t>(a)];
            const LinkRec& lb = links_[static_cast<size_t>(b)];
            const Age out = distill_age(la.age, lb.age, p_.m_star, pol_.distill_rounding);
            if (pol_.skip_useless_distillation && out >= std::min(la.age, lb.age)) {
                next.push_back(a);
                next.push_back(b);
                continue;
            }
            attempted = true;
            ++distill_attempts_;
            distill_spans_.push_back(la.right_node - la.left_node);
            const double prob = distill_success_prob(fidelity_of_age(la.age, p_.m_star),
                                                     fidelity_of_age(lb.age, p_.m_star));
            const bool success = bernoulli(rng_, prob);
            kill_link(b, true);
            if (success) {
                la.age = out;
                mem(la.left_node, 1, la.left_ch).clock = out;
                mem(la.right_node, 0, la.right_ch).clock = out;
                next.push_back(a);
            } else {
                kill_link(a, true);
            }
        }
        if (round.carry) next.push_back(*round.carry);
        if (!attempted) break;
        pool.swap(next);
    }
}

void Network::execute_distillation() {
    if (pol_.ordering == DistillOrdering::None) return;
    std::map<std::pair<int, int>, std::vector<int>> groups;
    if (local()) {
        // only freshly generated elementary links, and only if they are not
        // already perfect
        if (p_.m0 == 0 && !oracle_) return;
        for (size_t id = 0; id < links_.size(); ++id) {
            const LinkRec& l = links_[id];
            if (l.alive && l.fresh && l.right_node - l.left_node == 1)
                groups[{l.left_node, l.right_node}].push_back(static_cast<int>(id));
        }
    } else {
        for (size_t id = 0; id < links_.size(); ++id) {
            const LinkRec& l = links_[id];
            if (l.alive && l.age <= p_.m_star)
                groups[{l.left_node, l.right_node}].push_back(static_cast<int>(id));
        }
    }
    for (auto& [key, ids] : groups)
        if (ids.size() > 1) distill_group(ids);
}

int Network::step_cc_cost() const {
    if (!p_.charge_cc) return 0;
    return cc_cost_of_step(chains_, distill_spans_, p_.cc_mode, p_.n);
}

void Network::age_and_discard(int cc_increment) {
    const Age inc = 1 + (local() ? 0 : cc_increment);
    for (auto& l : links_) {
        if (!l.alive) continue;
        l.age += inc;
        l.fresh = false;
    }
    for (auto& m : mem_)
        if (m.occupied) m.clock += inc;

    for (size_t id = 0; id < links_.size(); ++id)
        if (links_[id].alive && links_[id].age > p_.m_star) kill_link(static_cast<int>(id), !local());

    if (local()) {
        for (auto& m : mem_) {
            if (!m.occupied || m.clock <= p_.m_star) continue;
            if (m.link >= 0) kill_link(m.link, false);
            free_memory(m);
        }
    }
}

std::optional<Age> Network::youngest_end_to_end(bool any_age) const {
    std::optional<Age> best;
    for (const auto& l : links_) {
        if (!l.alive || l.left_node != 0 || l.right_node != p_.n - 1) continue;
        if (!any_age && l.age >= p_.m_star) continue;
        if (!best || l.age < *best) best = l.age;
    }
    return best;
}

RunResult Network::run() {
    RunResult res;
    std::int64_t elapsed = 0;
    for (std::int64_t step = 1; step <= p_.max_steps; ++step) {
        chains_.clear();
        distill_spans_.clear();
        if (pol_.ordering == DistillOrdering::DistillSwap) execute_distillation();
        execute_swaps();
        if (pol_.ordering == DistillOrdering::SwapDistill) execute_distillation();
        const int cc = step_cc_cost();
        res.steps = step;
        if (auto y = youngest_end_to_end()) {
            res.success = true;
            res.youngest_end_age = *y;
            res.waiting_time = elapsed + 1 + cc;
            if (local() && p_.charge_cc) res.waiting_time += p_.n - 1;
            break;
        }
        age_and_discard(cc);
        elapsed += 1 + cc;
        generate_elementary();
    }
    if (!res.success) res.waiting_time = elapsed;
    res.swap_length_histogram = histogram_;
    res.swap_attempts = swap_attempts_;
    res.distill_attempts = distill_attempts_;
    res.opt_fell_back = fell_back_;
    return res;
}

std::optional<Age> Network::single_shot() {
    chains_.clear();
    distill_spans_.clear();
    if (pol_.ordering == DistillOrdering::DistillSwap) execute_distillation();
    execute_swaps();
    if (pol_.ordering == DistillOrdering::SwapDistill) execute_distillation();
    return youngest_end_to_end(true);
}

std::vector<Link> Network::links() const {
    std::vector<Link> out;
    for (size_t id = 0; id < links_.size(); ++id) {
        const LinkRec& l = links_[id];
        if (!l.alive) continue;
        Link v;
        v.left_node = l.left_node;
        v.right_node = l.right_node;
        v.left_channel = l.left_ch;
        v.right_channel = l.right_ch;
        v.real_age = l.age;
        v.perceived_age = std::max(mem(l.left_node, 1, l.left_ch).clock, mem(l.right_node, 0, l.right_ch).clock);
        out.push_back(v);
    }
    return out;
}

int Network::occupied_memories(int node, int side) const {
    int c = 0;
    for (int ch = 0; ch < p_.n_ch; ++ch) c += mem(node, side, ch).occupied ? 1 : 0;
    return c;
}

RunResult run(const SimParams& params, const PolicyConfig& policy) {
    Network net(params, policy);
    return net.run();
}

}  // namespace mqrep

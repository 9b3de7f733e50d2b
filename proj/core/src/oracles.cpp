#include "mqrep/oracles.h"

#include <cmath>
#include <stdexcept>

#include "mqrep/distillation.h"
#include "mqrep/engine.h"

namespace mqrep {

namespace {

struct Pair {
    Age age = 0;
    double fid = 1.0;
};

struct Algebra {
    Age m_star;
    OracleConvention conv;

    Pair fresh(Age m) const { return {m, fidelity_of_age(m, m_star)}; }

    Pair swapped(const Pair& a, const Pair& b) const {
        const Age m = swap_age(a.age, b.age);
        return {m, fidelity_of_age(m, m_star)};
    }

    double p_distill(const Pair& a, const Pair& b) const { return distill_success_prob(a.fid, b.fid); }

    Pair distilled(const Pair& a, const Pair& b) const {
        const double f = distill_fidelity(a.fid, b.fid);
        if (!conv.quantized) return {age_of_fidelity(f, m_star, AgeRounding::Ceil), f};
        const Age m = age_of_fidelity(f, m_star, conv.rounding);
        return {m, fidelity_of_age(m, m_star)};
    }
};

void check(Age m0, Age m_star, double p_sw) {
    if (m_star < 1) throw std::invalid_argument("m_star must be >= 1");
    if (m0 < 0) throw std::invalid_argument("m0 must be >= 0");
    if (!(p_sw >= 0.0 && p_sw <= 1.0)) throw std::invalid_argument("p_sw must be in [0,1]");
}

void finish(OracleResult& r) {
    double p = 0.0, pf = 0.0;
    for (const auto& t : r.trajectories) {
        p += t.probability;
        pf += t.probability * t.fidelity;
    }
    r.success_prob = p;
    r.expected_fidelity = p > 0.0 ? pf / p : 0.0;
}

}  // namespace

OracleResult three_node_two_channel_distill_swap(Age m0, Age m_star, double p_sw, OracleConvention conv) {
    check(m0, m_star, p_sw);
    const Algebra alg{m_star, conv};
    const Pair e = alg.fresh(m0);
    const double p_d = alg.p_distill(e, e);
    const Pair d = alg.distilled(e, e);
    OracleResult r;
    r.trajectories.push_back({"distill both sides, swap", p_sw * p_d * p_d, alg.swapped(d, d).fid});
    finish(r);
    return r;
}

OracleResult three_node_two_channel_swap_distill(Age m0, Age m_star, double p_sw, OracleConvention conv) {
    check(m0, m_star, p_sw);
    const Algebra alg{m_star, conv};
    const Pair e = alg.fresh(m0);
    const Pair s = alg.swapped(e, e);
    const double p_s = alg.p_distill(s, s);
    OracleResult r;
    r.trajectories.push_back({"one swap", 2.0 * p_sw * (1.0 - p_sw), s.fid});
    r.trajectories.push_back({"two swaps, distill", p_sw * p_sw * p_s, alg.distilled(s, s).fid});
    finish(r);
    return r;
}

OracleResult three_node_four_channel_distill_swap(Age m0, Age m_star, double p_sw, OracleConvention conv) {
    check(m0, m_star, p_sw);
    const Algebra alg{m_star, conv};
    const Pair e = alg.fresh(m0);
    const double p_d = alg.p_distill(e, e);
    const Pair d = alg.distilled(e, e);
    const double p_d2 = alg.p_distill(d, d);
    const Pair d2 = alg.distilled(d, d);
    const double q = 1.0 - p_d;
    OracleResult r;
    r.trajectories.push_back({"(1,1)", p_sw * 4.0 * p_d * p_d * q * q, alg.swapped(d, d).fid});
    r.trajectories.push_back({"(3,1)", p_sw * 4.0 * p_d * p_d * p_d * q * p_d2, alg.swapped(d, d2).fid});
    r.trajectories.push_back({"(3,3)", p_sw * (p_d * p_d * p_d2) * (p_d * p_d * p_d2), alg.swapped(d2, d2).fid});
    finish(r);
    return r;
}

OracleResult three_node_four_channel_swap_distill(Age m0, Age m_star, double p_sw, OracleConvention conv) {
    check(m0, m_star, p_sw);
    const Algebra alg{m_star, conv};
    const Pair e = alg.fresh(m0);
    const Pair s = alg.swapped(e, e);
    const double p_s = alg.p_distill(s, s);
    const Pair sd2 = alg.distilled(s, s);
    // three links: the distilled one is pumped with the leftover
    const double p_s2 = alg.p_distill(sd2, s);
    const Pair sd3 = alg.distilled(sd2, s);
    const double p_s3 = alg.p_distill(sd2, sd2);
    const Pair sd4 = alg.distilled(sd2, sd2);
    const double p = p_sw, q = 1.0 - p_sw;

    OracleResult r;
    r.trajectories.push_back({"1 swap", 4.0 * p * q * q * q, s.fid});
    r.trajectories.push_back({"2 swaps, distill", 6.0 * p * p * q * q * p_s, sd2.fid});
    r.trajectories.push_back({"3 swaps, first distill fails", 4.0 * p * p * p * q * (1.0 - p_s), s.fid});
    r.trajectories.push_back({"3 swaps, both distills", 4.0 * p * p * p * q * p_s * p_s2, sd3.fid});
    r.trajectories.push_back({"4 swaps, all distills", p * p * p * p * p_s * p_s * p_s3, sd4.fid});
    r.trajectories.push_back({"4 swaps, one first-round distill", 2.0 * p * p * p * p * p_s * (1.0 - p_s), sd2.fid});
    finish(r);

    // The typeset totals, kept for comparison.
    const double f_s = s.fid;
    const double f2 = sd2.fid;
    const double ps3_printed = ((8.0 * f2) * (8.0 * f2) - 4.0 * f2 + 5.0) / 9.0;
    const double tail3 = 4.0 * p * p * p * (1.0 - p * p_s * p_s2);
    const double p4a = p * p * p * p * p_s * p_s * ps3_printed;
    const double p4b = 2.0 * p * p * p * p * p_s * (1.0 - p_s);
    r.has_printed = true;
    r.printed_success_prob = 4.0 * p * q * q * q + 6.0 * p * p * q * q * p_s +
                             4.0 * p * p * p * q * (1.0 - p_s) + tail3 + p4a + p4b;
    const double num = p * q * q * q * f_s + 6.0 * p * p * q * q * p_s * f2 +
                       4.0 * p * p * p * q * (1.0 - p_s) * f_s + tail3 * distill_fidelity(f_s, f2) +
                       p4a * distill_fidelity(f2, f2) + p4b * f2;
    r.printed_expected_fidelity = r.printed_success_prob > 0.0 ? num / r.printed_success_prob : 0.0;
    return r;
}

OracleResult oracle_closed_form(const OracleRunConfig& cfg) {
    const OracleConvention conv{true, cfg.rounding};
    if (cfg.ordering == DistillOrdering::DistillSwap) {
        if (cfg.n_ch == 2) return three_node_two_channel_distill_swap(cfg.m0, cfg.m_star, cfg.p_sw, conv);
        if (cfg.n_ch == 4) return three_node_four_channel_distill_swap(cfg.m0, cfg.m_star, cfg.p_sw, conv);
    } else if (cfg.ordering == DistillOrdering::SwapDistill) {
        if (cfg.n_ch == 2) return three_node_two_channel_swap_distill(cfg.m0, cfg.m_star, cfg.p_sw, conv);
        if (cfg.n_ch == 4) return three_node_four_channel_swap_distill(cfg.m0, cfg.m_star, cfg.p_sw, conv);
    }
    throw std::invalid_argument("closed forms exist for 2 or 4 channels with a distillation ordering");
}

EmpiricalOracle oracle_mode_run(const OracleRunConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    SimParams p;
    p.n = 3;
    p.n_ch = cfg.n_ch;
    p.p_l = 1.0;
    p.p_sw = cfg.p_sw;
    p.m_star = cfg.m_star;
    p.m0 = 0;  // the shot sets the age itself, which may exceed the usual m0 < m* check
    p.charge_cc = false;
    p.seed = cfg.seed;
    PolicyConfig pol;
    pol.swap = SwapPolicy{SwapPolicyKind::FN, 0.0};
    pol.ordering = cfg.ordering;
    pol.skip_useless_distillation = false;
    pol.distill_rounding = cfg.rounding;

    Network net(p, pol);
    EmpiricalOracle out;
    out.trials = cfg.trials;
    double sum_f = 0.0, sum_f2 = 0.0;
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
        net.fill_all_elementary(cfg.m0);
        if (auto age = net.single_shot()) {
            const double f = fidelity_of_age(*age, cfg.m_star);
            ++out.successes;
            sum_f += f;
            sum_f2 += f * f;
        }
    }
    const double n = static_cast<double>(out.trials);
    out.success_prob = static_cast<double>(out.successes) / n;
    out.success_std_err = std::sqrt(out.success_prob * (1.0 - out.success_prob) / n);
    if (out.successes > 0) {
        const double k = static_cast<double>(out.successes);
        out.mean_fidelity = sum_f / k;
        const double var = std::max(0.0, sum_f2 / k - out.mean_fidelity * out.mean_fidelity);
        out.fidelity_std_err = std::sqrt(var / k);
    }
    return out;
}

}  // namespace mqrep

#pragma once

// Reference models used only by the tests. Nothing here calls into the
// library, so agreement with it is a real check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ref {

inline double fidelity(double m, double m_star) { return 0.25 * (1.0 + 3.0 * std::exp(-m / m_star)); }

// ---------------------------------------------------------------------------
// Bell-diagonal states as weights on (x, z) bit labels:
// Phi+ = 00, Phi- = 01, Psi+ = 10, Psi- = 11.
using Bell = std::array<double, 4>;

inline int bell_index(int x, int z) { return 2 * x + z; }

inline Bell isotropic(double f) {
    const double q = (1.0 - f) / 3.0;
    return {f, q, q, q};
}

// Bilateral CNOT on two pairs then Z measurement of the target pair.
// B(x1,z1) B(x2,z2) -> B(x1, z1^z2) B(x1^x2, z2); kept when the target
// parities agree, i.e. x1 == x2. Returns the unnormalised kept state.
inline Bell bbpssw_table(const Bell& a, const Bell& b) {
    Bell out{0, 0, 0, 0};
    for (int x1 = 0; x1 < 2; ++x1)
        for (int z1 = 0; z1 < 2; ++z1)
            for (int x2 = 0; x2 < 2; ++x2)
                for (int z2 = 0; z2 < 2; ++z2) {
                    if (x1 != x2) continue;
                    out[bell_index(x1, z1 ^ z2)] += a[bell_index(x1, z1)] * b[bell_index(x2, z2)];
                }
    return out;
}

struct Distilled {
    double prob;
    double fid;
};

inline Distilled bbpssw(double f1, double f2) {
    const Bell s = bbpssw_table(isotropic(f1), isotropic(f2));
    const double p = s[0] + s[1] + s[2] + s[3];
    return {p, s[0] / p};  // twirling keeps the Phi+ weight
}

// ---------------------------------------------------------------------------
// Density matrices.
using C = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;

inline Mat2 pauli(int k) {
    Mat2 m;
    switch (k) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, C(0, -1), C(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline Eigen::Vector4cd bell_vector(int x, int z) {
    // |B(x,z)> = (|0,x> + (-1)^z |1,1-x>) / sqrt2 in basis |q1 q2>
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    const double s = 1.0 / std::sqrt(2.0);
    v(0 * 2 + x) += s;
    v(1 * 2 + (1 - x)) += (z ? -s : s);
    return v;
}

inline Mat4 bell_projector(int x, int z) {
    const Eigen::Vector4cd v = bell_vector(x, z);
    return v * v.adjoint();
}

inline Mat4 kron2(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

// One time step of the single-qubit Pauli channel on both qubits.
inline Mat4 pauli_step(const Mat4& rho, const std::array<double, 4>& p) {
    Mat4 out = Mat4::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const Mat4 k = kron2(pauli(a), pauli(b));
            out += p[a] * p[b] * (k * rho * k.adjoint());
        }
    return out;
}

inline std::array<double, 4> pauli_probs_closed(double m1s, double m2s) {
    const double e1 = std::exp(-1.0 / m1s), e2 = std::exp(-1.0 / m2s);
    const double px = (1.0 - e1) / 4.0;
    return {(1.0 + e2) / 2.0 - px, px, px, (1.0 - e2) / 2.0 - px};
}

inline double phi_plus_weight(const Mat4& rho) { return (bell_vector(0, 0).adjoint() * rho * bell_vector(0, 0))(0).real(); }

// BBPSSW on the full 4-qubit density matrix. Qubit order: A1 B1 A2 B2,
// where (A1,B1) is the kept pair and (A2,B2) the target pair.
// Returns the success probability and the Phi+ fidelity of the kept pair.
inline Distilled bbpssw_density(const Mat4& rho1, const Mat4& rho2) {
    // rho1 on (A1,B1), rho2 on (A2,B2): index = a1*8 + b1*4 + a2*2 + b2
    MatX rho = MatX::Zero(16, 16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) rho(i * 4 + k, j * 4 + l) = rho1(i, j) * rho2(k, l);
    auto bit = [](int idx, int q) { return (idx >> (3 - q)) & 1; };
    // CNOT A1 -> A2 and B1 -> B2 as a permutation
    MatX u = MatX::Zero(16, 16);
    for (int s = 0; s < 16; ++s) {
        int a1 = bit(s, 0), b1 = bit(s, 1), a2 = bit(s, 2), b2 = bit(s, 3);
        a2 ^= a1;
        b2 ^= b1;
        u((a1 << 3) | (b1 << 2) | (a2 << 1) | b2, s) = 1.0;
    }
    const MatX r = u * rho * u.adjoint();
    // keep outcomes a2 == b2 and trace out the target pair
    Mat4 kept = Mat4::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int t = 0; t < 2; ++t) {
                const int tail = t * 2 + t;
                kept(i, j) += r(i * 4 + tail, j * 4 + tail);
            }
    const double p = kept.trace().real();
    return {p, phi_plus_weight(kept) / p};
}

inline Mat4 isotropic_density(double f) {
    Mat4 rho = f * bell_projector(0, 0);
    const double q = (1.0 - f) / 3.0;
    rho += q * (bell_projector(0, 1) + bell_projector(1, 0) + bell_projector(1, 1));
    return rho;
}

// ---------------------------------------------------------------------------
// Branch enumeration of one single-shot pass on a three-node chain with
// every elementary link present at age m0. Mirrors the written protocol:
// per-hop distill-asap, then FN pairing and swaps, or the reverse.

enum class Order { DistillSwap, SwapDistill };

struct RefLink {
    std::int64_t age;
    double fid;
};

struct RefConfig {
    int n_ch;
    Order order;
    std::int64_t m0;
    std::int64_t m_star;
    double p_sw;
    bool floor_rounding;
};

inline std::int64_t age_from_fid(double f, std::int64_t m_star, bool floor_rounding) {
    const double x = -static_cast<double>(m_star) * std::log((4.0 * f - 1.0) / 3.0);
    const double r = floor_rounding ? std::floor(x + 1e-9) : std::ceil(x - 1e-9);
    return std::max<std::int64_t>(0, static_cast<std::int64_t>(r));
}

struct Outcome {
    double prob;
    bool success;
    double fid;
};

using Links = std::vector<RefLink>;
using Sink = std::function<void(double, const Links&)>;

// distill-asap: sort by age, pair neighbours, odd one out carries over,
// repeat until at most one link is left. Every branch is reported to sink.
inline void distill_asap(double prob, Links links, const RefConfig& c, const Sink& sink) {
    if (links.size() <= 1) {
        sink(prob, links);
        return;
    }
    std::stable_sort(links.begin(), links.end(), [](const RefLink& a, const RefLink& b) { return a.age < b.age; });
    const std::size_t pairs = links.size() / 2;
    Links carry;
    if (links.size() % 2) carry.push_back(links.back());
    // all 2^pairs success patterns
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
        double p = prob;
        Links next;
        for (std::size_t i = 0; i < pairs; ++i) {
            const Distilled d = bbpssw(links[2 * i].fid, links[2 * i + 1].fid);
            if (mask & (1u << i)) {
                p *= d.prob;
                const std::int64_t age = age_from_fid(d.fid, c.m_star, c.floor_rounding);
                next.push_back({age, fidelity(static_cast<double>(age), static_cast<double>(c.m_star))});
            } else {
                p *= 1.0 - d.prob;
            }
        }
        for (const auto& l : carry) next.push_back(l);
        if (p == 0.0) continue;
        distill_asap(p, next, c, sink);
    }
}

// Swaps at the middle node: k = min(left, right) pairs, each an independent
// p_sw trial. Ages add.
inline void swap_all(double prob, const Links& left, const Links& right, const RefConfig& c, const Sink& sink) {
    const std::size_t k = std::min(left.size(), right.size());
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        double p = prob;
        Links out;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (1u << i)) {
                p *= c.p_sw;
                const std::int64_t age = left[i].age + right[i].age;
                out.push_back({age, fidelity(static_cast<double>(age), static_cast<double>(c.m_star))});
            } else {
                p *= 1.0 - c.p_sw;
            }
        }
        if (p == 0.0) continue;
        sink(p, out);
    }
}

inline std::vector<Outcome> enumerate_three_node(const RefConfig& c) {
    std::vector<Outcome> out;
    const RefLink e{c.m0, fidelity(static_cast<double>(c.m0), static_cast<double>(c.m_star))};
    const Links hop(static_cast<std::size_t>(c.n_ch), e);
    auto finish = [&](double p, const Links& l) {
        if (l.empty()) out.push_back({p, false, 0.0});
        else out.push_back({p, true, l.front().fid});
    };
    if (c.order == Order::DistillSwap) {
        distill_asap(1.0, hop, c, [&](double pl, const Links& left) {
            distill_asap(pl, hop, c, [&](double pr, const Links& right) { swap_all(pr, left, right, c, finish); });
        });
    } else {
        swap_all(1.0, hop, hop, c, [&](double p, const Links& e2e) { distill_asap(p, e2e, c, finish); });
    }
    return out;
}

struct Summary {
    double success_prob = 0.0;
    double expected_fidelity = 0.0;
    double total_prob = 0.0;
};

inline Summary summarize(const std::vector<Outcome>& outs) {
    Summary s;
    double pf = 0.0;
    for (const auto& o : outs) {
        s.total_prob += o.prob;
        if (!o.success) continue;
        s.success_prob += o.prob;
        pf += o.prob * o.fid;
    }
    s.expected_fidelity = s.success_prob > 0.0 ? pf / s.success_prob : 0.0;
    return s;
}

// ---------------------------------------------------------------------------
// Pumping recurrence written out directly.
inline double pump_step(double f, double f0) {
    const double num = 1.0 - (f + f0) + 10.0 * f * f0;
    const double den = 5.0 - 2.0 * (f + f0) + 8.0 * f * f0;
    return num / den;
}

}  // namespace ref

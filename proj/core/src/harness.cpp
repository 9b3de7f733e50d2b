#include "mqrep/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <type_traits>

namespace mqrep {

namespace {

struct RunSummary {
    bool success = false;
    std::int64_t waiting = 0;
    Age age = 0;
    std::map<int, std::int64_t> hist;
};

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_err(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return sd / std::sqrt(static_cast<double>(v.size()));
}

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : (hw ? hw : 1);
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::size_t i = next++; i < count && !failed; i = next++) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

template <typename T>
T parse_number(const std::string& name, const std::string& v) {
    try {
        size_t used = 0;
        T out;
        if constexpr (std::is_floating_point_v<T>) out = static_cast<T>(std::stod(v, &used));
        else out = static_cast<T>(std::stoll(v, &used));
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value '" + v + "' for " + name);
    }
}

}  // namespace

bool BatchStats::precision_ok() const {
    if (!has_estimate) return false;
    return std_of_batch_means_waiting <= 0.05 * mean_of_means_waiting &&
           std_of_batch_means_age <= 0.05 * std::max(mean_of_means_age, 1.0);
}

BatchStats run_batches(const SimParams& params, const PolicyConfig& policy, BatchShape shape, int threads) {
    params.validate();
    policy.validate(params);
    if (shape.batches < 1 || shape.runs_per_batch < 1)
        throw std::invalid_argument("batches and runs must be >= 1");
    const std::size_t total = static_cast<std::size_t>(shape.batches) * static_cast<std::size_t>(shape.runs_per_batch);
    std::vector<RunSummary> out(total);

    parallel_for(total, threads, [&](std::size_t i) {
        const auto b = static_cast<std::uint64_t>(i / static_cast<std::size_t>(shape.runs_per_batch));
        const auto r = static_cast<std::uint64_t>(i % static_cast<std::size_t>(shape.runs_per_batch));
        SimParams p = params;
        p.seed = derive_seed(params.seed, b, r);
        const RunResult res = run(p, policy);
        out[i] = RunSummary{res.success, res.waiting_time, res.youngest_end_age, res.swap_length_histogram};
    });

    BatchStats s;
    s.num_batches = shape.batches;
    s.runs_per_batch = shape.runs_per_batch;
    std::vector<double> wm, am;
    double fid_sum = 0.0;
    for (int b = 0; b < shape.batches; ++b) {
        double w = 0.0, a = 0.0;
        std::int64_t k = 0;
        for (int r = 0; r < shape.runs_per_batch; ++r) {
            const RunSummary& x = out[static_cast<std::size_t>(b) * static_cast<std::size_t>(shape.runs_per_batch) +
                                      static_cast<std::size_t>(r)];
            for (const auto& [len, c] : x.hist) s.swap_length_histogram[len] += c;
            if (!x.success) {
                ++s.censored_count;
                continue;
            }
            ++k;
            w += static_cast<double>(x.waiting);
            a += static_cast<double>(x.age);
            fid_sum += fidelity_of_age(x.age, params.m_star);
        }
        s.successes += k;
        if (k > 0) {
            wm.push_back(w / static_cast<double>(k));
            am.push_back(a / static_cast<double>(k));
        }
    }
    s.batches_with_estimate = static_cast<int>(wm.size());
    s.has_estimate = !wm.empty();
    if (s.has_estimate) {
        s.mean_of_means_waiting = mean(wm);
        s.mean_of_means_age = mean(am);
        s.std_of_batch_means_waiting = std_err(wm);
        s.std_of_batch_means_age = std_err(am);
        s.mean_fidelity = fid_sum / static_cast<double>(s.successes);
    }
    return s;
}

ImprovementReport improvement_factor(const BatchStats& without, const BatchStats& with,
                                     std::string baseline_label, std::string variant_label) {
    ImprovementReport r;
    r.baseline_label = std::move(baseline_label);
    r.variant_label = std::move(variant_label);
    if (!without.has_estimate || !with.has_estimate || with.mean_of_means_waiting <= 0.0) return r;
    r.valid = true;
    auto ratio = [](double a, double sa, double b, double sb, double& err) {
        const double q = a / b;
        const double ra = a > 0.0 ? sa / a : 0.0;
        const double rb = b > 0.0 ? sb / b : 0.0;
        err = q * std::sqrt(ra * ra + rb * rb);
        return q;
    };
    r.waiting_ratio = ratio(without.mean_of_means_waiting, without.std_of_batch_means_waiting,
                            with.mean_of_means_waiting, with.std_of_batch_means_waiting, r.waiting_ratio_err);
    if (with.mean_of_means_age > 0.0)
        r.age_ratio = ratio(without.mean_of_means_age, without.std_of_batch_means_age, with.mean_of_means_age,
                            with.std_of_batch_means_age, r.age_ratio_err);
    return r;
}

void apply_setting(SimParams& p, PolicyConfig& pol, const std::string& name, const std::string& v) {
    if (name == "n") p.n = parse_number<int>(name, v);
    else if (name == "n_ch") p.n_ch = parse_number<int>(name, v);
    else if (name == "p_l") p.p_l = parse_number<double>(name, v);
    else if (name == "p_sw") p.p_sw = parse_number<double>(name, v);
    else if (name == "m_star") p.m_star = parse_number<Age>(name, v);
    else if (name == "m0") p.m0 = parse_number<Age>(name, v);
    else if (name == "max_steps") p.max_steps = parse_number<std::int64_t>(name, v);
    else if (name == "policy") pol.swap = SwapPolicy::parse(v);
    else if (name == "ordering") pol.ordering = parse_ordering(v);
    else if (name == "distill_rounding") pol.distill_rounding = parse_rounding(v);
    else if (name == "cc_mode") p.cc_mode = parse_cc_mode(v);
    else throw std::invalid_argument("unknown sweep parameter '" + name + "'");
}

std::size_t sweep_size(const SweepSpec& spec) {
    std::size_t n = 1;
    for (const auto& a : spec.axes) {
        if (a.values.empty()) return 0;
        if (n > spec.budget) break;
        n *= a.values.size();
    }
    return n;
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
    const std::size_t size = sweep_size(spec);
    if (size > spec.budget)
        throw std::length_error("sweep has " + std::to_string(size) + " points, budget is " +
                                std::to_string(spec.budget));
    std::vector<SweepRow> rows;
    rows.reserve(size);
    std::vector<std::size_t> idx(spec.axes.size(), 0);
    for (std::size_t point = 0; point < size; ++point) {
        std::size_t rem = point;
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            idx[a] = rem % spec.axes[a].values.size();
            rem /= spec.axes[a].values.size();
        }
        SweepRow row;
        row.index = point;
        row.params = spec.base;
        row.policy = spec.policy;
        for (std::size_t a = 0; a < spec.axes.size(); ++a)
            apply_setting(row.params, row.policy, spec.axes[a].name, spec.axes[a].values[idx[a]]);
        row.stats = run_batches(row.params, row.policy, spec.shape, spec.threads);
        rows.push_back(std::move(row));
    }
    return rows;
}

DesignStudy design_study(const DesignSpec& spec) {
    if (spec.min_nodes < 2 || spec.max_nodes < spec.min_nodes)
        throw std::invalid_argument("node range must satisfy 2 <= min <= max");
    DesignStudy study;
    for (int nodes = spec.min_nodes; nodes <= spec.max_nodes; ++nodes) {
        HardwareProfile h = spec.profile;
        h.num_nodes = nodes;
        DesignRow row;
        row.num_nodes = nodes;
        row.derived = derive_params(h);
        row.feasible = row.derived.feasible;
        if (row.feasible) {
            SimParams p;
            p.n = nodes;
            p.n_ch = spec.n_ch;
            p.p_l = row.derived.p_l;
            p.p_sw = spec.p_sw;
            p.m_star = row.derived.m_star;
            p.m0 = row.derived.m0;
            p.cc_mode = spec.cc_mode;
            p.max_steps = spec.max_steps;
            p.seed = spec.seed;
            row.stats = run_batches(p, spec.policy, spec.shape, spec.threads);
            if (row.stats.has_estimate) {
                row.rate_hz = 1.0 / (row.stats.mean_of_means_waiting * row.derived.dt_s);
                row.mean_fidelity = row.stats.mean_fidelity;
                if (!study.best || row.rate_hz > study.rows[*study.best].rate_hz) study.best = study.rows.size();
            }
        }
        study.rows.push_back(std::move(row));
    }
    return study;
}

}  // namespace mqrep

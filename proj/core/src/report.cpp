#include "mqrep/report.h"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace mqrep {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string hist_text(const std::map<int, std::int64_t>& h) {
    std::string s;
    for (const auto& [len, c] : h) {
        if (!s.empty()) s += ';';
        s += std::to_string(len) + ':' + std::to_string(c);
    }
    return s;
}

const char* kStatsColumns =
    "batches,runs_per_batch,successes,censored,batches_with_estimate,has_estimate,"
    "mean_waiting,std_waiting,mean_age,std_age,mean_fidelity,precision_ok,swap_length_histogram";

std::string stats_cells(const BatchStats& s) {
    std::ostringstream os;
    os << s.num_batches << ',' << s.runs_per_batch << ',' << s.successes << ',' << s.censored_count << ','
       << s.batches_with_estimate << ',' << (s.has_estimate ? 1 : 0) << ',';
    if (s.has_estimate) {
        os << format_double(s.mean_of_means_waiting) << ',' << format_double(s.std_of_batch_means_waiting) << ','
           << format_double(s.mean_of_means_age) << ',' << format_double(s.std_of_batch_means_age) << ','
           << format_double(s.mean_fidelity);
    } else {
        os << ",,,,";
    }
    os << ',' << (s.precision_ok() ? 1 : 0) << ',' << hist_text(s.swap_length_histogram);
    return os.str();
}

const char* kParamColumns = "n,n_ch,p_l,p_sw,m_star,m0,cc_mode,charge_cc,policy,ordering,distill_rounding,max_steps,seed";

std::string param_cells(const SimParams& p, const PolicyConfig& pol) {
    std::ostringstream os;
    os << p.n << ',' << p.n_ch << ',' << format_double(p.p_l) << ',' << format_double(p.p_sw) << ',' << p.m_star
       << ',' << p.m0 << ',' << to_string(p.cc_mode) << ',' << (p.charge_cc ? 1 : 0) << ','
       << pol.swap.to_string() << ',' << to_string(pol.ordering) << ',' << to_string(pol.distill_rounding) << ',' << p.max_steps << ',' << p.seed;
    return os.str();
}

}  // namespace

json to_json(const BatchStats& s) {
    json j;
    j["num_batches"] = s.num_batches;
    j["runs_per_batch"] = s.runs_per_batch;
    j["successes"] = s.successes;
    j["censored_count"] = s.censored_count;
    j["batches_with_estimate"] = s.batches_with_estimate;
    j["has_estimate"] = s.has_estimate;
    if (s.has_estimate) {
        j["mean_of_means_waiting"] = s.mean_of_means_waiting;
        j["std_of_batch_means_waiting"] = s.std_of_batch_means_waiting;
        j["mean_of_means_age"] = s.mean_of_means_age;
        j["std_of_batch_means_age"] = s.std_of_batch_means_age;
        j["mean_fidelity"] = s.mean_fidelity;
    } else {
        j["mean_of_means_waiting"] = nullptr;
        j["std_of_batch_means_waiting"] = nullptr;
        j["mean_of_means_age"] = nullptr;
        j["std_of_batch_means_age"] = nullptr;
        j["mean_fidelity"] = nullptr;
    }
    j["precision_ok"] = s.precision_ok();
    json h = json::array();
    for (const auto& [len, c] : s.swap_length_histogram) h.push_back({len, c});
    j["swap_length_histogram"] = h;
    return j;
}

BatchStats batch_stats_from_json(const json& j) {
    BatchStats s;
    s.num_batches = j.at("num_batches").get<int>();
    s.runs_per_batch = j.at("runs_per_batch").get<int>();
    s.successes = j.at("successes").get<std::int64_t>();
    s.censored_count = j.at("censored_count").get<std::int64_t>();
    s.batches_with_estimate = j.at("batches_with_estimate").get<int>();
    s.has_estimate = j.at("has_estimate").get<bool>();
    if (s.has_estimate) {
        s.mean_of_means_waiting = j.at("mean_of_means_waiting").get<double>();
        s.std_of_batch_means_waiting = j.at("std_of_batch_means_waiting").get<double>();
        s.mean_of_means_age = j.at("mean_of_means_age").get<double>();
        s.std_of_batch_means_age = j.at("std_of_batch_means_age").get<double>();
        s.mean_fidelity = j.at("mean_fidelity").get<double>();
    }
    for (const auto& e : j.at("swap_length_histogram")) s.swap_length_histogram[e.at(0).get<int>()] = e.at(1).get<std::int64_t>();
    return s;
}

json to_json(const SimParams& p) {
    return json{{"n", p.n},           {"n_ch", p.n_ch},     {"p_l", p.p_l},
                {"p_sw", p.p_sw},     {"m_star", p.m_star}, {"m0", p.m0},
                {"cc_mode", to_string(p.cc_mode)},          {"charge_cc", p.charge_cc},
                {"max_steps", p.max_steps},                 {"seed", p.seed}};
}

json to_json(const PolicyConfig& p) {
    return json{{"swap", p.swap.to_string()},
                {"ordering", to_string(p.ordering)},
                {"skip_useless_distillation", p.skip_useless_distillation},
                {"distill_rounding", to_string(p.distill_rounding)}};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = std::string("point,") + kParamColumns + ',' + kStatsColumns + '\n';
    for (const auto& r : rows)
        out += std::to_string(r.index) + ',' + param_cells(r.params, r.policy) + ',' + stats_cells(r.stats) + '\n';
    return out;
}

json sweep_json(const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back(json{{"point", r.index}, {"params", to_json(r.params)}, {"policy", to_json(r.policy)},
                           {"stats", to_json(r.stats)}});
    return arr;
}

std::string design_csv(const DesignStudy& study) {
    std::string out =
        "num_nodes,feasible,elementary_length_km,p_l,dt_s,m_star,m0,f_e,rate_hz,mean_fidelity,best," +
        std::string(kStatsColumns) + '\n';
    for (std::size_t i = 0; i < study.rows.size(); ++i) {
        const DesignRow& r = study.rows[i];
        std::ostringstream os;
        os << r.num_nodes << ',' << (r.feasible ? 1 : 0) << ',' << format_double(r.derived.elementary_length_km)
           << ',' << format_double(r.derived.p_l) << ',' << format_double(r.derived.dt_s) << ','
           << r.derived.m_star << ',' << r.derived.m0 << ',' << format_double(r.derived.f_e) << ',';
        if (r.feasible && r.stats.has_estimate)
            os << format_double(r.rate_hz) << ',' << format_double(r.mean_fidelity);
        else
            os << ',';
        os << ',' << ((study.best && *study.best == i) ? 1 : 0) << ',' << stats_cells(r.stats) << '\n';
        out += os.str();
    }
    return out;
}

json design_json(const DesignStudy& study) {
    json rows = json::array();
    for (const auto& r : study.rows) {
        json j{{"num_nodes", r.num_nodes},
               {"feasible", r.feasible},
               {"elementary_length_km", r.derived.elementary_length_km},
               {"p_l", r.derived.p_l},
               {"dt_s", r.derived.dt_s},
               {"m_star", r.derived.m_star},
               {"m0", r.derived.m0},
               {"f_e", r.derived.f_e},
               {"stats", to_json(r.stats)}};
        if (r.feasible && r.stats.has_estimate) {
            j["rate_hz"] = r.rate_hz;
            j["mean_fidelity"] = r.mean_fidelity;
        } else {
            j["rate_hz"] = nullptr;
            j["mean_fidelity"] = nullptr;
        }
        rows.push_back(j);
    }
    json out{{"rows", rows}};
    out["best_num_nodes"] = study.best ? json(study.rows[*study.best].num_nodes) : json(nullptr);
    return out;
}

std::string oracle_csv(const std::vector<OracleComparison>& rows) {
    std::string out =
        "n_ch,ordering,m0,m_star,p_sw,rounding,trials,closed_success_prob,closed_fidelity,"
        "printed_convention_success_prob,printed_convention_fidelity,typeset_success_prob,"
        "empirical_success_prob,empirical_std_err,empirical_fidelity,z_score\n";
    for (const auto& r : rows) {
        std::ostringstream os;
        const double z = r.empirical.success_std_err > 0.0
                             ? (r.empirical.success_prob - r.closed_form.success_prob) / r.empirical.success_std_err
                             : 0.0;
        os << r.config.n_ch << ',' << to_string(r.config.ordering) << ',' << r.config.m0 << ',' << r.config.m_star
           << ',' << format_double(r.config.p_sw) << ','
           << (to_string(r.config.rounding)) << ',' << r.config.trials << ','
           << format_double(r.closed_form.success_prob) << ',' << format_double(r.closed_form.expected_fidelity)
           << ',' << format_double(r.printed_convention.success_prob) << ','
           << format_double(r.printed_convention.expected_fidelity) << ','
           << (r.printed_convention.has_printed ? format_double(r.printed_convention.printed_success_prob) : "")
           << ',' << format_double(r.empirical.success_prob) << ',' << format_double(r.empirical.success_std_err)
           << ',' << format_double(r.empirical.mean_fidelity) << ',' << format_double(z) << '\n';
        out += os.str();
    }
    return out;
}

namespace {
json oracle_result_json(const OracleResult& r) {
    json traj = json::array();
    for (const auto& t : r.trajectories)
        traj.push_back(json{{"label", t.label}, {"probability", t.probability}, {"fidelity", t.fidelity}});
    json j{{"success_prob", r.success_prob}, {"expected_fidelity", r.expected_fidelity}, {"trajectories", traj}};
    if (r.has_printed) {
        j["typeset_success_prob"] = r.printed_success_prob;
        j["typeset_expected_fidelity"] = r.printed_expected_fidelity;
    }
    return j;
}
}  // namespace

json oracle_json(const std::vector<OracleComparison>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back(json{
            {"n_ch", r.config.n_ch},
            {"ordering", to_string(r.config.ordering)},
            {"m0", r.config.m0},
            {"m_star", r.config.m_star},
            {"p_sw", r.config.p_sw},
            {"rounding", to_string(r.config.rounding)},
            {"closed_form", oracle_result_json(r.closed_form)},
            {"printed_convention", oracle_result_json(r.printed_convention)},
            {"empirical",
             {{"trials", r.empirical.trials},
              {"successes", r.empirical.successes},
              {"success_prob", r.empirical.success_prob},
              {"success_std_err", r.empirical.success_std_err},
              {"mean_fidelity", r.empirical.mean_fidelity},
              {"fidelity_std_err", r.empirical.fidelity_std_err}}}});
    }
    return arr;
}

std::string schedule_csv(const std::vector<ScheduleRow>& rows) {
    std::string out = "kind,f0,round,fidelity,cumulative_prob,limit\n";
    for (const auto& r : rows) {
        out += r.kind + ',' + format_double(r.f0) + ',' + std::to_string(r.round) + ',' + format_double(r.fidelity) +
               ',' + (r.kind == "banded" ? format_double(r.cumulative_prob) : "") + ',' +
               (r.kind == "pumping" ? format_double(r.limit) : "") + '\n';
    }
    return out;
}

json schedule_json(const std::vector<ScheduleRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j{{"kind", r.kind}, {"f0", r.f0}, {"round", r.round}, {"fidelity", r.fidelity}};
        if (r.kind == "banded") j["cumulative_prob"] = r.cumulative_prob;
        if (r.kind == "pumping") j["limit"] = r.limit;
        arr.push_back(j);
    }
    return arr;
}

json envelope(const std::string& kind, json payload) {
    return json{{"schema", kSchemaVersion}, {"kind", kind}, {"data", std::move(payload)}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
    f << content;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace mqrep

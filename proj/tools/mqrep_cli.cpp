// mqrep: command line front end for the repeater chain simulator.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mqrep/config.h"
#include "mqrep/distillation.h"
#include "mqrep/harness.h"
#include "mqrep/oracles.h"
#include "mqrep/report.h"

using namespace mqrep;

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string format = "json";
    std::string out = "-";
    int batches = 0;
    int runs = 0;
    int threads = -1;
    bool full_scale = false;
    bool print_config = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", c.sets, "override one key, e.g. --set params.p_l=0.3 (repeatable)");
    sub->add_option("--seed", c.seed, "master seed")->each([&c](const std::string&) { c.seed_given = true; });
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "output path, - for stdout");
    sub->add_option("--batches", c.batches, "number of batches");
    sub->add_option("--runs", c.runs, "runs per batch");
    sub->add_option("--threads", c.threads, "worker threads, 0 = all cores");
    sub->add_flag("--full-scale", c.full_scale, "20 batches of 1000 runs");
    sub->add_flag("--print-config", c.print_config, "print the resolved configuration and exit");
}

AppConfig resolve(const Common& c) {
    AppConfig cfg;
    if (!c.config_path.empty()) load_config_file(c.config_path, cfg);
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        const auto dot = s.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw std::invalid_argument("--set expects section.key=value, got '" + s + "'");
        apply_config_key(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
    }
    if (c.full_scale) cfg.shape = BatchShape::full();
    if (c.batches > 0) cfg.shape.batches = c.batches;
    if (c.runs > 0) cfg.shape.runs_per_batch = c.runs;
    if (c.threads >= 0) cfg.threads = c.threads;
    if (c.seed_given) cfg.params.seed = c.seed;
    return cfg;
}

bool handle_print(const Common& c, const AppConfig& cfg) {
    if (!c.print_config) return false;
    write_output(c.out, config_to_ini(cfg));
    return true;
}

std::string emit(const Common& c, const std::string& kind, const std::string& csv, nlohmann::json payload) {
    if (c.format == "csv") return csv;
    return dump_json(envelope(kind, std::move(payload)));
}

OracleResult printed_form(const OracleRunConfig& o) {
    const bool ds = o.ordering == DistillOrdering::DistillSwap;
    if (o.n_ch == 2)
        return ds ? three_node_two_channel_distill_swap(o.m0, o.m_star, o.p_sw)
                  : three_node_two_channel_swap_distill(o.m0, o.m_star, o.p_sw);
    return ds ? three_node_four_channel_distill_swap(o.m0, o.m_star, o.p_sw)
              : three_node_four_channel_swap_distill(o.m0, o.m_star, o.p_sw);
}

void error_line(const std::string& kind, const std::string& msg) {
    nlohmann::json j{{"error", kind}, {"message", msg}};
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mqrep - multiplexed quantum repeater chain simulator"};
    app.require_subcommand(1);

    Common sim_c, sweep_c, oracle_c, design_c, sched_c;

    auto* sim = app.add_subcommand("simulate", "run one configuration in batches");
    add_common(sim, sim_c);

    auto* sw = app.add_subcommand("sweep", "cartesian sweep over parameters");
    add_common(sw, sweep_c);
    std::vector<std::string> axis_args;
    sw->add_option("--axis", axis_args, "name=v1,v2,... (repeatable, same as a [sweep] key)");

    auto* orc = app.add_subcommand("oracle", "three-node closed forms against single-shot engine runs");
    add_common(orc, oracle_c);
    std::vector<long long> oracle_m0 = {0, 2, 3};
    std::vector<double> oracle_psw = {0.5, 1.0};
    std::vector<int> oracle_nch = {2, 4};
    long long oracle_mstar = 24;
    std::int64_t oracle_trials = 100000;
    std::string oracle_rounding = "ceil";
    orc->add_option("--m0", oracle_m0, "initial ages")->delimiter(',');
    orc->add_option("--p-sw", oracle_psw, "swap success probabilities")->delimiter(',');
    orc->add_option("--n-ch", oracle_nch, "channel counts (2 and/or 4)")->delimiter(',')->check(CLI::IsMember({2, 4}));
    orc->add_option("--m-star", oracle_mstar, "cutoff");
    orc->add_option("--trials", oracle_trials, "single-shot trials per case");
    orc->add_option("--rounding", oracle_rounding, "age rounding after distillation")
        ->check(CLI::IsMember({"ceil", "floor"}));

    auto* des = app.add_subcommand("design", "node-count study for a hardware profile");
    add_common(des, design_c);
    double design_psw = 1.0;
    des->add_option("--p-sw", design_psw, "swap success probability used in the study");

    auto* sch = app.add_subcommand("distill-schedule", "banded and pumping distillation curves");
    add_common(sch, sched_c);
    std::vector<double> sched_f0 = {0.6, 0.7, 0.8, 0.9};
    int sched_nch = 16;
    int sched_rounds = 20;
    std::string sched_kind = "both";
    sch->add_option("--f0", sched_f0, "initial fidelities")->delimiter(',');
    sch->add_option("--n-ch", sched_nch, "channels for the banded schedule (power of two)");
    sch->add_option("--rounds", sched_rounds, "pumping rounds");
    sch->add_option("--kind", sched_kind, "banded, pumping or both")->check(CLI::IsMember({"banded", "pumping", "both"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_line("usage", e.what());
        return 2;
    }

    try {
        if (sim->parsed()) {
            AppConfig cfg = resolve(sim_c);
            if (handle_print(sim_c, cfg)) return 0;
            SweepRow row;
            row.params = cfg.params;
            row.policy = cfg.policy;
            row.stats = run_batches(cfg.params, cfg.policy, cfg.shape, cfg.threads);
            nlohmann::json payload{{"params", to_json(row.params)}, {"policy", to_json(row.policy)},
                                   {"stats", to_json(row.stats)}};
            write_output(sim_c.out, emit(sim_c, "simulate", sweep_csv({row}), payload));
        } else if (sw->parsed()) {
            AppConfig cfg = resolve(sweep_c);
            for (const auto& a : axis_args) {
                const auto eq = a.find('=');
                if (eq == std::string::npos) throw std::invalid_argument("--axis expects name=v1,v2, got '" + a + "'");
                apply_config_key(cfg, "sweep", a.substr(0, eq), a.substr(eq + 1));
            }
            if (handle_print(sweep_c, cfg)) return 0;
            SweepSpec spec;
            spec.base = cfg.params;
            spec.policy = cfg.policy;
            spec.axes = cfg.axes;
            spec.shape = cfg.shape;
            spec.budget = cfg.budget;
            spec.threads = cfg.threads;
            const auto rows = sweep(spec);
            write_output(sweep_c.out, emit(sweep_c, "sweep", sweep_csv(rows), sweep_json(rows)));
        } else if (orc->parsed()) {
            AppConfig cfg = resolve(oracle_c);
            if (handle_print(oracle_c, cfg)) return 0;
            std::vector<OracleComparison> rows;
            std::uint64_t k = 0;
            for (int nch : oracle_nch)
                for (auto ord : {DistillOrdering::DistillSwap, DistillOrdering::SwapDistill})
                    for (long long m0 : oracle_m0)
                        for (double psw : oracle_psw) {
                            OracleRunConfig o;
                            o.n_ch = nch;
                            o.ordering = ord;
                            o.m0 = m0;
                            o.m_star = oracle_mstar;
                            o.p_sw = psw;
                            o.rounding = parse_rounding(oracle_rounding);
                            o.trials = oracle_trials;
                            o.seed = derive_seed(cfg.params.seed, k++, 0);
                            rows.push_back({o, oracle_closed_form(o), printed_form(o), oracle_mode_run(o)});
                        }
            write_output(oracle_c.out, emit(oracle_c, "oracle", oracle_csv(rows), oracle_json(rows)));
        } else if (des->parsed()) {
            AppConfig cfg = resolve(design_c);
            if (handle_print(design_c, cfg)) return 0;
            DesignSpec spec;
            spec.profile = cfg.profile;
            spec.min_nodes = cfg.min_nodes;
            spec.max_nodes = cfg.max_nodes;
            spec.n_ch = cfg.params.n_ch;
            spec.p_sw = design_psw;
            spec.policy = cfg.policy;
            spec.cc_mode = cfg.params.cc_mode;
            spec.shape = cfg.shape;
            spec.seed = cfg.params.seed;
            spec.max_steps = cfg.params.max_steps;
            spec.threads = cfg.threads;
            const DesignStudy study = design_study(spec);
            write_output(design_c.out, emit(design_c, "design", design_csv(study), design_json(study)));
        } else if (sch->parsed()) {
            AppConfig cfg = resolve(sched_c);
            if (handle_print(sched_c, cfg)) return 0;
            std::vector<ScheduleRow> rows;
            for (double f0 : sched_f0) {
                if (sched_kind != "pumping")
                    for (const auto& r : banded_schedule(f0, sched_nch))
                        rows.push_back({"banded", f0, r.round, r.fidelity, r.cumulative_prob, 0.0});
                if (sched_kind != "banded") {
                    const PumpingSolution s = pumping_solution(f0, sched_rounds);
                    for (int r = 0; r <= sched_rounds; ++r)
                        rows.push_back({"pumping", f0, r, s.fidelities[static_cast<std::size_t>(r)], 0.0, s.omega_plus});
                }
            }
            write_output(sched_c.out, emit(sched_c, "distill-schedule", schedule_csv(rows), schedule_json(rows)));
        }
    } catch (const std::invalid_argument& e) {
        error_line("invalid_argument", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        error_line("domain_error", e.what());
        return 2;
    } catch (const std::length_error& e) {
        error_line("over_budget", e.what());
        return 3;
    } catch (const std::exception& e) {
        error_line("runtime_error", e.what());
        return 1;
    }
    return 0;
}

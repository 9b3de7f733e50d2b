#include "mqrep/config.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mqrep/report.h"

namespace mqrep {

namespace pt = boost::property_tree;

namespace {

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("bad number '" + v + "' for " + key);
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const long long d = std::stoll(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("bad integer '" + v + "' for " + key);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const unsigned long long d = std::stoull(v, &used);
        if (used == v.size() && v.find('-') == std::string::npos) return d;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("bad unsigned integer '" + v + "' for " + key);
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string s = boost::algorithm::to_lower_copy(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument("bad boolean '" + v + "' for " + key);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, v, boost::is_any_of(","));
    for (auto& p : parts) boost::algorithm::trim(p);
    parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
    return parts;
}

const std::vector<std::string> kSweepable = {"n", "n_ch", "p_l", "p_sw", "m_star", "m0", "policy", "ordering", "distill_rounding", "cc_mode"};

void load_tree(const pt::ptree& tree, AppConfig& cfg) {
    // preset first so that explicit hardware keys override it wherever they appear
    if (auto hw = tree.get_child_optional("hardware"))
        if (auto preset = hw->get_optional<std::string>("preset")) apply_config_key(cfg, "hardware", "preset", *preset);
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw std::invalid_argument("key '" + section + "' outside of a section");
        for (const auto& [key, value] : body) {
            if (section == "hardware" && key == "preset") continue;
            apply_config_key(cfg, section, key, boost::algorithm::trim_copy(value.data()));
        }
    }
}

}  // namespace

void apply_config_key(AppConfig& cfg, const std::string& section, const std::string& key, const std::string& v) {
    const std::string full = section + "." + key;
    if (section == "params") {
        if (key == "batches") cfg.shape.batches = static_cast<int>(to_int(full, v));
        else if (key == "runs") cfg.shape.runs_per_batch = static_cast<int>(to_int(full, v));
        else if (key == "threads") cfg.threads = static_cast<int>(to_int(full, v));
        else if (key == "seed") cfg.params.seed = to_u64(full, v);
        else if (key == "n" || key == "n_ch" || key == "p_l" || key == "p_sw" || key == "m_star" || key == "m0" ||
                 key == "max_steps")
            apply_setting(cfg.params, cfg.policy, key, v);
        else throw std::invalid_argument("unknown key " + full);
    } else if (section == "policy") {
        if (key == "swap") cfg.policy.swap = SwapPolicy::parse(v);
        else if (key == "ordering") cfg.policy.ordering = parse_ordering(v);
        else if (key == "skip_useless_distillation") cfg.policy.skip_useless_distillation = to_bool(full, v);
        else if (key == "distill_rounding") cfg.policy.distill_rounding = parse_rounding(v);
        else if (key == "opt_bound") cfg.policy.opt_bound = static_cast<int>(to_int(full, v));
        else throw std::invalid_argument("unknown key " + full);
    } else if (section == "cc") {
        if (key == "mode") cfg.params.cc_mode = parse_cc_mode(v);
        else if (key == "charge") cfg.params.charge_cc = to_bool(full, v);
        else throw std::invalid_argument("unknown key " + full);
    } else if (section == "hardware") {
        HardwareProfile& h = cfg.profile;
        if (key == "preset") {
            cfg.preset = v;
            h = preset_info(parse_preset(v)).profile;
        } else if (key == "distance_km") h.total_distance_km = to_double(full, v);
        else if (key == "t2_s") h.t2_s = to_double(full, v);
        else if (key == "eta") h.eta = to_double(full, v);
        else if (key == "eta_r") h.eta_r = to_double(full, v);
        else if (key == "f_s") h.f_s = to_double(full, v);
        else if (key == "f_0") h.f_0 = to_double(full, v);
        else if (key == "source_rate_hz") h.source_rate_hz = to_double(full, v);
        else if (key == "refractive_index") h.refractive_index = to_double(full, v);
        else if (key == "attenuation_km") h.attenuation_km = to_double(full, v);
        else if (key == "min_nodes") cfg.min_nodes = static_cast<int>(to_int(full, v));
        else if (key == "max_nodes") cfg.max_nodes = static_cast<int>(to_int(full, v));
        else throw std::invalid_argument("unknown key " + full);
    } else if (section == "sweep") {
        if (key == "budget") {
            cfg.budget = static_cast<std::size_t>(to_int(full, v));
        } else if (std::find(kSweepable.begin(), kSweepable.end(), key) != kSweepable.end()) {
            SweepAxis axis{key, split_list(v)};
            if (axis.values.empty()) throw std::invalid_argument("empty value list for " + full);
            // check every value parses before any run starts
            for (const auto& x : axis.values) {
                SimParams p;
                PolicyConfig pol;
                apply_setting(p, pol, key, x);
            }
            auto it = std::find_if(cfg.axes.begin(), cfg.axes.end(), [&](const SweepAxis& a) { return a.name == key; });
            if (it != cfg.axes.end()) *it = axis;
            else cfg.axes.push_back(axis);
        } else {
            throw std::invalid_argument("unknown key " + full);
        }
    } else {
        throw std::invalid_argument("unknown config section [" + section + "]");
    }
}

void load_config_text(const std::string& text, AppConfig& cfg) {
    std::istringstream in(text);
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    load_tree(tree, cfg);
}

void load_config_file(const std::string& path, AppConfig& cfg) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    load_config_text(ss.str(), cfg);
}

std::string config_to_ini(const AppConfig& cfg) {
    const SimParams& p = cfg.params;
    const HardwareProfile& h = cfg.profile;
    std::ostringstream os;
    os << "[params]\n"
       << "n = " << p.n << "\nn_ch = " << p.n_ch << "\np_l = " << format_double(p.p_l)
       << "\np_sw = " << format_double(p.p_sw) << "\nm_star = " << p.m_star << "\nm0 = " << p.m0
       << "\nmax_steps = " << p.max_steps << "\nseed = " << p.seed << "\nbatches = " << cfg.shape.batches
       << "\nruns = " << cfg.shape.runs_per_batch << "\nthreads = " << cfg.threads << "\n\n";
    os << "[policy]\n"
       << "swap = " << cfg.policy.swap.to_string() << "\nordering = " << to_string(cfg.policy.ordering)
       << "\nskip_useless_distillation = " << (cfg.policy.skip_useless_distillation ? "true" : "false")
       << "\ndistill_rounding = " << to_string(cfg.policy.distill_rounding)
       << "\nopt_bound = " << cfg.policy.opt_bound << "\n\n";
    os << "[cc]\nmode = " << to_string(p.cc_mode) << "\ncharge = " << (p.charge_cc ? "true" : "false") << "\n\n";
    os << "[hardware]\npreset = " << cfg.preset << "\ndistance_km = " << format_double(h.total_distance_km)
       << "\nt2_s = " << format_double(h.t2_s) << "\neta = " << format_double(h.eta)
       << "\neta_r = " << format_double(h.eta_r) << "\nf_s = " << format_double(h.f_s)
       << "\nf_0 = " << format_double(h.f_0) << "\nsource_rate_hz = " << format_double(h.source_rate_hz)
       << "\nrefractive_index = " << format_double(h.refractive_index)
       << "\nattenuation_km = " << format_double(h.attenuation_km) << "\nmin_nodes = " << cfg.min_nodes
       << "\nmax_nodes = " << cfg.max_nodes << "\n\n";
    os << "[sweep]\nbudget = " << cfg.budget << "\n";
    for (const auto& a : cfg.axes) os << a.name << " = " << boost::algorithm::join(a.values, ",") << "\n";
    return os.str();
}

}  // namespace mqrep

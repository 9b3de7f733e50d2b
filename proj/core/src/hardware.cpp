#include "mqrep/hardware.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mqrep {

namespace {
void positive(double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}
void unit_interval(double v, const char* what) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " must be in (0,1]");
}

HardwareProfile make(double t2, double eta, double f0, int nodes) {
    HardwareProfile h;
    h.t2_s = t2;
    h.eta = eta;
    h.f_0 = f0;
    h.num_nodes = nodes;
    return h;
}
}  // namespace

void HardwareProfile::validate() const {
    positive(total_distance_km, "total_distance_km");
    if (num_nodes < 2) throw std::invalid_argument("num_nodes must be >= 2");
    positive(t2_s, "t2_s");
    unit_interval(eta, "eta");
    unit_interval(eta_r, "eta_r");
    unit_interval(f_s, "f_s");
    unit_interval(f_0, "f_0");
    positive(source_rate_hz, "source_rate_hz");
    positive(refractive_index, "refractive_index");
    positive(attenuation_km, "attenuation_km");
}

const std::vector<PresetInfo>& platform_presets() {
    static const std::vector<PresetInfo> presets = {
        {PlatformPreset::RareEarthSota, "rare-earth-sota", make(1.2e-3, 0.69, 0.98, 4),
         0.89, 0.023, 7, 1, 53.0, 0.55},
        {PlatformPreset::DiamondSota, "diamond-sota", make(13e-3, 0.5, 0.89, 3),
         0.74, 0.003, 52, 22, 10.0, 0.54},
        {PlatformPreset::RareEarthNearTerm, "rare-earth-near-term", make(1.2e-3, 0.69, 0.99, 5),
         0.91, 0.046, 7, 0, 190.0, 0.59},
        {PlatformPreset::DiamondNearTerm, "diamond-near-term", make(13e-3, 0.5, 0.99, 6),
         0.91, 0.04, 78, 9, 342.0, 0.59},
    };
    return presets;
}

const PresetInfo& preset_info(PlatformPreset p) {
    for (const auto& info : platform_presets())
        if (info.preset == p) return info;
    throw std::invalid_argument("unknown preset");
}

PlatformPreset parse_preset(const std::string& name) {
    for (const auto& info : platform_presets())
        if (info.name == name) return info.preset;
    throw std::invalid_argument("unknown hardware preset '" + name + "'");
}

double elementary_length(const HardwareProfile& h) {
    if (h.num_nodes < 2) throw std::invalid_argument("num_nodes must be >= 2");
    positive(h.total_distance_km, "total_distance_km");
    return h.total_distance_km / static_cast<double>(h.num_nodes - 1);
}

double link_success_prob(const HardwareProfile& h) {
    h.validate();
    return h.eta_r * std::exp(-elementary_length(h) / h.attenuation_km) * h.eta * h.eta;
}

double time_step(const HardwareProfile& h) {
    h.validate();
    const double travel = h.refractive_index * elementary_length(h) / kSpeedOfLightKmPerS;
    return std::max(1.0 / h.source_rate_hz, travel);
}

double elementary_fidelity(const HardwareProfile& h) { return h.f_s * h.f_0 * h.f_0; }

CutoffResult memory_cutoff(const HardwareProfile& h) {
    const double ratio = h.t2_s / time_step(h);
    CutoffResult r;
    // small tolerance so that an exact ratio like 1.0 is not pushed either way
    r.m_star = static_cast<Age>(std::floor(ratio + 0.5 + 1e-9));
    if (r.m_star < 1) {
        r.m_star = 1;
        r.clamped = true;
    }
    return r;
}

Age initial_age(const HardwareProfile& h, Age m_star) {
    const double f_e = elementary_fidelity(h);
    if (f_e >= 1.0) return 0;
    if (!(f_e > fidelity_of_age(m_star, m_star)))
        throw std::invalid_argument("elementary link fidelity " + std::to_string(f_e) +
                                    " is not above the cutoff fidelity");
    return age_of_fidelity(f_e, m_star, AgeRounding::Floor);
}

DerivedParams derive_params(const HardwareProfile& h) {
    h.validate();
    DerivedParams d;
    d.elementary_length_km = elementary_length(h);
    d.p_l = link_success_prob(h);
    d.dt_s = time_step(h);
    const CutoffResult c = memory_cutoff(h);
    d.m_star = c.m_star;
    d.clamped = c.clamped;
    d.f_e = elementary_fidelity(h);
    if (d.f_e < 1.0 && !(d.f_e > fidelity_of_age(d.m_star, d.m_star))) {
        d.feasible = false;
        d.m0 = d.m_star;
    } else {
        d.m0 = initial_age(h, d.m_star);
        // a link born at the cutoff can never be used
        d.feasible = d.m0 < d.m_star;
    }
    return d;
}

SimParams platform_params(PlatformPreset p, int num_nodes, int n_ch) {
    HardwareProfile h = preset_info(p).profile;
    if (num_nodes > 0) h.num_nodes = num_nodes;
    const DerivedParams d = derive_params(h);
    if (!d.feasible) throw std::invalid_argument("preset infeasible at this node count");
    SimParams s;
    s.n = h.num_nodes;
    s.n_ch = n_ch;
    s.p_l = d.p_l;
    s.p_sw = 1.0;
    s.m_star = d.m_star;
    s.m0 = d.m0;
    return s;
}

}  // namespace mqrep

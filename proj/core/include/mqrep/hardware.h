#pragma once

#include <string>
#include <vector>

#include "mqrep/engine.h"
#include "mqrep/noise.h"

namespace mqrep {

constexpr double kSpeedOfLightKmPerS = 299792.458;

struct HardwareProfile {
    double total_distance_km = 100.0;
    int num_nodes = 3;
    double t2_s = 1.2e-3;
    double eta = 0.69;       // Debye-Waller factor (effective value for emissive memories)
    double eta_r = 0.79;     // residual efficiency
    double f_s = 0.93;       // source state fidelity
    double f_0 = 0.98;       // memory write/read fidelity
    double source_rate_hz = 6000.0;  // ebits per second, dimmest channel
    double refractive_index = 1.5;
    double attenuation_km = 12.0;

    void validate() const;  // throws std::invalid_argument
};

enum class PlatformPreset { RareEarthSota, DiamondSota, RareEarthNearTerm, DiamondNearTerm };

struct PresetInfo {
    PlatformPreset preset;
    std::string name;  // e.g. "rare-earth-sota"
    HardwareProfile profile;  // num_nodes set to the row's node count
    // values as printed in the reference table
    double printed_f_e;
    double printed_p_l;
    Age printed_m_star;
    Age printed_m0;
    double printed_rate_hz;
    double printed_fidelity;
};

const std::vector<PresetInfo>& platform_presets();
const PresetInfo& preset_info(PlatformPreset p);
PlatformPreset parse_preset(const std::string& name);

double elementary_length(const HardwareProfile& h);
double link_success_prob(const HardwareProfile& h);
double time_step(const HardwareProfile& h);  // seconds
double elementary_fidelity(const HardwareProfile& h);  // f_s * f_0^2

struct CutoffResult {
    Age m_star = 1;
    bool clamped = false;  // T2 shorter than one step
};

// T2 / dt rounded to the nearest integer, at least 1.
CutoffResult memory_cutoff(const HardwareProfile& h);

// Age of a fresh elementary link; the continuous age is rounded down.
// Throws std::invalid_argument when the link is born at or past the cutoff.
Age initial_age(const HardwareProfile& h, Age m_star);

struct DerivedParams {
    double elementary_length_km = 0.0;
    double p_l = 0.0;
    double dt_s = 0.0;
    Age m_star = 1;
    Age m0 = 0;
    double f_e = 1.0;
    bool clamped = false;
    bool feasible = true;  // false when f_e is not above f(m*)
};

DerivedParams derive_params(const HardwareProfile& h);

// SimParams for a preset; num_nodes <= 0 keeps the preset's node count.
// Swapping is taken as deterministic.
SimParams platform_params(PlatformPreset p, int num_nodes = 0, int n_ch = 5);

}  // namespace mqrep

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mqrep/engine.h"
#include "mqrep/hardware.h"
#include "mqrep/harness.h"

namespace mqrep {

// Everything the command line tool can be configured with.
struct AppConfig {
    SimParams params;
    PolicyConfig policy;
    BatchShape shape = BatchShape::desk();
    int threads = 0;

    std::string preset = "rare-earth-sota";
    HardwareProfile profile = preset_info(PlatformPreset::RareEarthSota).profile;
    int min_nodes = 2;
    int max_nodes = 10;

    std::vector<SweepAxis> axes;
    std::size_t budget = 10000;
};

// INI-style file:
//   [params]   n, n_ch, p_l, p_sw, m_star, m0, max_steps, seed, batches, runs, threads
//   [policy]   swap, ordering, skip_useless_distillation, distill_rounding, opt_bound
//   [cc]       mode, charge
//   [hardware] preset, distance_km, t2_s, eta, eta_r, f_s, f_0, source_rate_hz,
//              refractive_index, attenuation_km, min_nodes, max_nodes
//   [sweep]    budget, and one comma-separated list per swept parameter
// Unknown sections or keys are errors.
void load_config_file(const std::string& path, AppConfig& cfg);
void load_config_text(const std::string& text, AppConfig& cfg);

// One key, as in the file. Used for command line overrides too.
void apply_config_key(AppConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value);

// Resolved configuration in the file format.
std::string config_to_ini(const AppConfig& cfg);

}  // namespace mqrep

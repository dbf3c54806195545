#pragma once

// JSON scenario configs.
//
//   {
//     "lambda_a": 1e-6, "phi": 1.5707963267948966,
//     "emitters": [{"z": 0, "gamma_wg": 1, "gamma_nw": 0.2, "dk": 0}, ...],
//     "pulse": {"width": 10, "center_dk": 0},
//     "initial_excitation": [1, 0],          // numbers or [re, im] pairs
//     "include_nw_coupling": true,
//     "retardation_mode": "markovian"         // or "full"
//   }
//
// "chain": {count, spacing_lambda, gamma_wg, gamma_nw, detuning_step, z0} may
// replace "emitters"; "spectrum": {"dk": [...], "re": [...], "im": [...]} may
// replace "pulse". Top-level "name", "description", "simulation", "grid" and
// "sweep" sections are carried for tools and ignored here.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "wgqed/model.hpp"

namespace wgqed {

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

// Canonical form: explicit emitter list, fixed key order.
std::string dump_scenario(const Scenario& scenario);

// FNV-1a of the canonical form, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace wgqed

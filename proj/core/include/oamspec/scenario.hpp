#pragma once

// Scenario documents. A scenario is a plain-text key/value file:
//
//   # comment
//   label = fig2a-l1
//   gamma1 = 1
//   p = 1
//   b0 = [1, 0]          # complex amplitudes as [re, im]
//   coupling_profile = constant   # or gaussian
//
// Recognised keys: label, gamma1, gamma2, p, delta1, delta2, o01, omega02,
// waist, winding, coupling_profile, b0, b1, b2, delta_k, half_extent,
// resolution. Missing keys keep the defaults of the underlying types.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oamspec/fieldmap.hpp"
#include "oamspec/types.hpp"

namespace oamspec {

struct Scenario {
    AtomParams atom;
    FieldConfig fields;
    InitialState init;
    double delta_k = 0.0;
    GridSpec grid;
    std::string label = "custom";

    MapInputs map_inputs() const { return {atom, fields, init, delta_k}; }

    /// Throws ValidationError if any component invariant fails.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Keys accepted by parse_scenario and apply_setting, in serialisation order.
const std::vector<std::string>& scenario_keys();

/// Parse and validate a scenario document. Amplitudes whose norm is within
/// 1e-9 of one are renormalised; anything further off is rejected.
/// Throws ParseError for malformed text, ValidationError for bad values.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

/// Inverse of parse_scenario; numbers are written in shortest round-trip form.
std::string serialize_scenario(const Scenario& scenario);

/// Set one key from its textual value (the `--set key=value` path).
/// Does not re-validate the whole scenario.
void apply_setting(Scenario& scenario, std::string_view key, std::string_view value);

/// Panels of the six figure families: fig2a-l1 ... fig6b-l4 and fig7a-i ... fig7b-iv.
const std::vector<Scenario>& builtin_scenarios();

std::optional<Scenario> find_builtin(std::string_view label);

/// Figure family ids: fig2a, fig2b, ..., fig7b.
std::vector<std::string> figure_ids();

/// All panels belonging to a figure family id, in panel order. Empty if unknown.
std::vector<Scenario> figure_panels(std::string_view figure_id);

} // namespace oamspec

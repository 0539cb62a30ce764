#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lamlab/contour.hpp"
#include "lamlab/exactz.hpp"
#include "lamlab/mc.hpp"

namespace lamlab {

using nlohmann::json;

inline constexpr const char* kConfigSchema = "lamlab/v1";

// Malformed document, with 1-based position diagnostics.
struct config_error : std::runtime_error {
    int line = 0;
    int column = 0;
    config_error(const std::string& msg, int line_, int column_);
};

// Parse with position diagnostics on failure.
json parse_config(const std::string& text);

// Reject keys outside the allowed set; context names the object in error messages.
void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context);

// SHA-256 of the canonical (key-sorted) dump; insensitive to key order and whitespace.
std::string config_digest(const json& j);

Hamiltonian hamiltonian_from_json(const json& j, const std::string& context);
json hamiltonian_to_json(const Hamiltonian& h);

HamiltonianFamily family_from_json(const json& j, const std::string& context);
json family_to_json(const HamiltonianFamily& f);

Window window_from_json(const json& j, const std::string& context);
json window_to_json(const Window& w);

// {"window": ..., "exterior_q": ..., "spins": [flat]} on top of a laminated model's ground
Configuration configuration_from_json(const json& j, const LaminatedModel& m,
                                      const std::string& context);
json configuration_to_json(const Configuration& c, int exterior_q);

json block_model_to_json(const BlockModel& m);
BlockModel block_model_from_json(const json& j);

json ground_report_to_json(const GroundReport& r);
json contour_to_json(const Contour& g);
json bound_audit_to_json(const BoundAudit& a);
json parameter_report_to_json(const ParameterReport& r);

}  // namespace lamlab

// Artifact configuration: aircraft geometry, efficiency chain, default
// simulation context and model options, stored as YAML.
#pragma once

#include <stdexcept>
#include <string>

#include "solaruav/efficiency.hpp"
#include "solaruav/geometry.hpp"
#include "solaruav/models.hpp"
#include "solaruav/sun_env.hpp"

namespace solaruav {

/// Invalid or unreadable configuration. The message names the field path and
/// the source location ("file:line:column").
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelSettings {
    MpptMode fm_mppt_mode = MpptMode::curve;
    bool eps_I_per_surface = false;
    bool compute_shading = true;
    std::string shading_plugin = "none";
    double t_const_C = 25.0;
    double t_amb_C = 20.0;
    ClimateType climate = ClimateType::midlatitude_summer;
    DeclinationModel declination = DeclinationModel::spencer;
};

struct ArtifactConfig {
    AircraftGeometry aircraft;
    EfficiencyConfig efficiency;
    SimulationContext context;
    ModelSettings models;

    /// AtlantikSolar geometry and efficiencies, 47 deg N, day 182, 500 m.
    static ArtifactConfig defaults();

    /// Throws ConfigError.
    void validate() const;
    [[nodiscard]] ModelOptions model_options() const;
};

/// Missing sections and keys keep their defaults; unknown keys are rejected.
[[nodiscard]] ArtifactConfig parse_config(const std::string& yaml_text, const std::string& source_name = "<config>");
[[nodiscard]] ArtifactConfig load_config_file(const std::string& path);
[[nodiscard]] std::string dump_config(const ArtifactConfig& config);

[[nodiscard]] std::string to_string(WingSide side);
[[nodiscard]] std::string to_string(ClimateType climate);

}  // namespace solaruav

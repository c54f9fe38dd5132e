// The four solar power models, from the conceptual design model (one flat
// horizontal surface, constant efficiencies) to the full model (every
// surface, attitude, temperature, irradiance level and MPPT curve).
//
//   CDM  single horizontal surface, eta_sm = f(T_C), constant MPPT
//   CAM  as CDM plus angle-of-incidence efficiency, direct/diffuse split
//   VM   as CAM, normal follows the central wing through the attitude
//   FM   all surfaces, eps_I, module temperature, MPPT curve, shading
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solaruav/efficiency.hpp"
#include "solaruav/geometry.hpp"
#include "solaruav/shading.hpp"
#include "solaruav/sun_env.hpp"

namespace solaruav {

enum class ModelKind { cdm, cam, vm, fm };

inline constexpr ModelKind kAllModelKinds[] = {ModelKind::cdm, ModelKind::cam, ModelKind::vm, ModelKind::fm};

[[nodiscard]] std::string_view to_string(ModelKind kind);
/// Case-insensitive; throws std::invalid_argument.
[[nodiscard]] ModelKind parse_model_kind(std::string_view text);
/// True for models that consume the aircraft attitude.
[[nodiscard]] bool requires_attitude(ModelKind kind);

struct SurfacePower {
    int surface_id = 0;
    double direct_W = 0.0;   // before MPPT
    double diffuse_W = 0.0;  // before MPPT
    double gamma_deg = 0.0;
    double eps_I = 0.0;
    double eps_T = 0.0;
    double eps_gamma = 0.0;
    double eta_sm = 0.0;  // effective module efficiency of this surface
    double shaded_area_m2 = 0.0;
    double irradiance_w_m2 = 0.0;  // direct on the surface plus diffuse
};

struct PowerBreakdown {
    ModelKind kind = ModelKind::cdm;
    double solar_time_h = 0.0;
    double total_W = 0.0;
    double pre_mppt_W = 0.0;
    double eta_mppt_used = 0.0;
    double t_sm_C = 0.0;
    /// Irradiance-weighted module efficiency, pre-MPPT power over collected
    /// irradiance; zero at night.
    double eta_sm_overall = 0.0;
    double sun_elevation_deg = 0.0;
    Irradiance irradiance;
    std::vector<SurfacePower> per_surface;
    std::optional<ShadingReport> shading;

    [[nodiscard]] bool daylight() const { return sun_elevation_deg > 0.0; }
    [[nodiscard]] double mean_gamma_deg() const;
};

struct ModelOptions {
    DeclinationModel declination = DeclinationModel::spencer;
    HottelCoefficients climate = HottelCoefficients::for_climate(ClimateType::midlatitude_summer);
    MpptMode fm_mppt_mode = MpptMode::curve;
    /// Evaluate eps_I from each surface's own irradiance instead of the
    /// shared global horizontal value.
    bool eps_I_per_surface = false;
    bool compute_shading = true;
    ShadingPlugin shading_plugin;
};

[[nodiscard]] PowerBreakdown power_cdm(const SimulationContext& ctx, double total_area_m2, const EfficiencyConfig& cfg,
                                       double t_const_C, const ModelOptions& opts = {});

[[nodiscard]] PowerBreakdown power_cam(const SimulationContext& ctx, double total_area_m2, const EfficiencyConfig& cfg,
                                       double t_const_C, const ModelOptions& opts = {});

[[nodiscard]] PowerBreakdown power_vm(const SimulationContext& ctx, const Attitude& att, double total_area_m2,
                                      const EfficiencyConfig& cfg, double t_const_C, const AircraftGeometry& geom,
                                      const ModelOptions& opts = {});

/// `p_solar_prev_W` is the previous step's output power; it drives the module
/// temperature estimate (one-step lag).
[[nodiscard]] PowerBreakdown power_fm(const SimulationContext& ctx, const Attitude& att, const AircraftGeometry& geom,
                                      const EfficiencyConfig& cfg, double t_amb_C, double p_solar_prev_W,
                                      const ModelOptions& opts = {});

using AttitudeSchedule = std::function<Attitude(double solar_time_h)>;

/// Level flight at a fixed heading.
[[nodiscard]] AttitudeSchedule level_flight(double yaw_deg);
/// Circling at a constant yaw rate with fixed roll and pitch.
[[nodiscard]] AttitudeSchedule loiter(double yaw_rate_deg_per_h, double roll_deg, double pitch_deg,
                                      double yaw0_deg = 0.0);

struct DaySimulation {
    ModelKind kind = ModelKind::cdm;
    SimulationContext context;  // solar_time_h is overwritten by the sweep
    double step_h = 0.25;
    AircraftGeometry geometry;
    EfficiencyConfig efficiency;
    double t_const_C = 25.0;
    double t_amb_C = 20.0;
    AttitudeSchedule attitude;  // defaults to level flight heading north
    ModelOptions options;
};

/// Evaluates the model over solar time [0, 24) at a fixed step. Throws
/// std::invalid_argument unless 0 < step <= 1 h.
[[nodiscard]] std::vector<PowerBreakdown> simulate_day(const DaySimulation& sim);

/// Evaluates one model at one instant; `p_prev_W` feeds the FM temperature lag.
[[nodiscard]] PowerBreakdown evaluate_model(ModelKind kind, const SimulationContext& ctx, const Attitude& att,
                                            const AircraftGeometry& geom, const EfficiencyConfig& cfg,
                                            double t_const_C, double t_amb_C, double p_prev_W,
                                            const ModelOptions& opts);

}  // namespace solaruav

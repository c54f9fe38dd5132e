#include "solaruav/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace solaruav {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::cdm:
            return "cdm";
        case ModelKind::cam:
            return "cam";
        case ModelKind::vm:
            return "vm";
        case ModelKind::fm:
            return "fm";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (ModelKind kind : kAllModelKinds) {
        if (lower == to_string(kind)) return kind;
    }
    throw std::invalid_argument("unknown model kind '" + std::string(text) + "' (expected cdm, cam, vm or fm)");
}

bool requires_attitude(ModelKind kind) { return kind == ModelKind::vm || kind == ModelKind::fm; }

double PowerBreakdown::mean_gamma_deg() const {
    if (per_surface.empty()) return 0.0;
    double acc = 0.0;
    for (const SurfacePower& s : per_surface) acc += s.gamma_deg;
    return acc / static_cast<double>(per_surface.size());
}

namespace {

struct SunAndSky {
    SunState sun;
    Irradiance irradiance;
};

SunAndSky sun_and_sky(const SimulationContext& ctx, const ModelOptions& opts) {
    ctx.validate();
    SunAndSky out;
    out.sun = sun_position(ctx, opts.declination);
    out.irradiance = clear_sky_irradiance(ctx, out.sun, opts.climate);
    return out;
}

double collected_efficiency(double pre_mppt_W, double collected_W) {
    return collected_W > 0.0 ? pre_mppt_W / collected_W : 0.0;
}

// CDM, CAM and VM share one flat surface with a constant temperature.
PowerBreakdown single_surface(ModelKind kind, const SimulationContext& ctx, const Vec3& normal, double area_m2,
                              const EfficiencyConfig& cfg, double t_const_C, const ModelOptions& opts) {
    if (!(area_m2 > 0.0)) throw std::invalid_argument("total_area_m2 must be > 0");
    const SunAndSky sky = sun_and_sky(ctx, opts);

    PowerBreakdown out;
    out.kind = kind;
    out.solar_time_h = ctx.solar_time_h;
    out.sun_elevation_deg = sky.sun.elevation_deg;
    out.irradiance = sky.irradiance;
    out.t_sm_C = t_const_C;
    out.eta_mppt_used = cfg.eta_mppt_const;

    SurfacePower surface;
    surface.surface_id = 0;
    surface.gamma_deg = incidence_angle_deg(normal, sky.sun.r_sun);
    if (!out.daylight()) {
        out.per_surface.push_back(surface);
        return out;
    }

    const double cos_gamma = std::max(0.0, normal.dot(sky.sun.r_sun));
    const double beam = sky.irradiance.direct_normal_w_m2 * cos_gamma;
    const double diffuse = sky.irradiance.diffuse_horizontal_w_m2;
    surface.irradiance_w_m2 = beam + diffuse;
    surface.eps_I = 1.0;
    surface.eps_T = eps_temperature(cfg, t_const_C);

    if (kind == ModelKind::cdm) {
        const double eta = cfg.eta_sm_stc * surface.eps_T * cfg.eps_cbr;
        surface.eps_gamma = 1.0;
        surface.direct_W = beam * area_m2 * eta;
        surface.diffuse_W = diffuse * area_m2 * eta;
    } else {
        surface.eps_gamma = eps_gamma(cfg, surface.gamma_deg);
        surface.direct_W = beam * area_m2 * eta_sm_direct(cfg, 1.0, surface.eps_T, surface.eps_gamma);
        surface.diffuse_W = diffuse * area_m2 * eta_sm_diffuse(cfg, 1.0, surface.eps_T);
    }
    surface.eta_sm = collected_efficiency(surface.direct_W + surface.diffuse_W, surface.irradiance_w_m2 * area_m2);

    out.pre_mppt_W = surface.direct_W + surface.diffuse_W;
    out.total_W = out.pre_mppt_W * out.eta_mppt_used;
    out.eta_sm_overall = surface.eta_sm;
    out.per_surface.push_back(surface);
    return out;
}

}  // namespace

PowerBreakdown power_cdm(const SimulationContext& ctx, double total_area_m2, const EfficiencyConfig& cfg,
                         double t_const_C, const ModelOptions& opts) {
    return single_surface(ModelKind::cdm, ctx, Vec3(0.0, 0.0, -1.0), total_area_m2, cfg, t_const_C, opts);
}

PowerBreakdown power_cam(const SimulationContext& ctx, double total_area_m2, const EfficiencyConfig& cfg,
                         double t_const_C, const ModelOptions& opts) {
    return single_surface(ModelKind::cam, ctx, Vec3(0.0, 0.0, -1.0), total_area_m2, cfg, t_const_C, opts);
}

PowerBreakdown power_vm(const SimulationContext& ctx, const Attitude& att, double total_area_m2,
                        const EfficiencyConfig& cfg, double t_const_C, const AircraftGeometry& geom,
                        const ModelOptions& opts) {
    att.validate();
    const Vec3 normal = body_to_inertial(att) * central_wing_normal_body(geom);
    return single_surface(ModelKind::vm, ctx, normal, total_area_m2, cfg, t_const_C, opts);
}

PowerBreakdown power_fm(const SimulationContext& ctx, const Attitude& att, const AircraftGeometry& geom,
                        const EfficiencyConfig& cfg, double t_amb_C, double p_solar_prev_W,
                        const ModelOptions& opts) {
    att.validate();
    if (p_solar_prev_W < 0.0) throw std::invalid_argument("p_solar_prev_W must be >= 0");
    const SunAndSky sky = sun_and_sky(ctx, opts);
    const Mat3 rotation = body_to_inertial(att);

    PowerBreakdown out;
    out.kind = ModelKind::fm;
    out.solar_time_h = ctx.solar_time_h;
    out.sun_elevation_deg = sky.sun.elevation_deg;
    out.irradiance = sky.irradiance;
    out.t_sm_C = module_temperature(cfg, t_amb_C, p_solar_prev_W);

    std::vector<Vec3> normals;
    normals.reserve(geom.surfaces.size());
    for (const SurfaceSpec& s : geom.surfaces) normals.push_back(rotation * surface_normal_body(geom, s));

    if (!out.daylight()) {
        for (std::size_t i = 0; i < geom.surfaces.size(); ++i) {
            SurfacePower sp;
            sp.surface_id = geom.surfaces[i].id;
            sp.gamma_deg = incidence_angle_deg(normals[i], sky.sun.r_sun);
            out.per_surface.push_back(sp);
        }
        return out;
    }

    if (opts.compute_shading) out.shading = compute_shading(geom, att, sky.sun);
    std::vector<double> multipliers;
    if (opts.shading_plugin && out.shading) {
        multipliers = opts.shading_plugin(*out.shading, geom);
        if (multipliers.size() != geom.surfaces.size()) {
            throw std::runtime_error("shading plugin returned " + std::to_string(multipliers.size()) +
                                     " multipliers for " + std::to_string(geom.surfaces.size()) + " surfaces");
        }
    }

    const double dni = sky.irradiance.direct_normal_w_m2;
    const double diffuse = sky.irradiance.diffuse_horizontal_w_m2;
    const double eps_I_shared = eps_irradiance(cfg, sky.irradiance.global_horizontal(sky.sun));
    const double eps_T = eps_temperature(cfg, out.t_sm_C);

    double collected = 0.0;
    for (std::size_t i = 0; i < geom.surfaces.size(); ++i) {
        const SurfaceSpec& s = geom.surfaces[i];
        SurfacePower sp;
        sp.surface_id = s.id;
        sp.gamma_deg = incidence_angle_deg(normals[i], sky.sun.r_sun);
        const double beam = dni * std::max(0.0, normals[i].dot(sky.sun.r_sun));
        sp.irradiance_w_m2 = beam + diffuse;
        sp.eps_I = opts.eps_I_per_surface ? eps_irradiance(cfg, sp.irradiance_w_m2) : eps_I_shared;
        sp.eps_T = eps_T;
        sp.eps_gamma = eps_gamma(cfg, sp.gamma_deg);
        const double multiplier = multipliers.empty() ? 1.0 : std::max(0.0, multipliers[i]);
        sp.direct_W = beam * s.area_m2 * eta_sm_direct(cfg, sp.eps_I, eps_T, sp.eps_gamma) * multiplier;
        sp.diffuse_W = diffuse * s.area_m2 * eta_sm_diffuse(cfg, sp.eps_I, eps_T);
        sp.direct_W = std::max(0.0, sp.direct_W);
        sp.diffuse_W = std::max(0.0, sp.diffuse_W);
        sp.eta_sm = collected_efficiency(sp.direct_W + sp.diffuse_W, sp.irradiance_w_m2 * s.area_m2);
        if (out.shading) {
            if (const SurfaceShading* sh = out.shading->find(s.id)) sp.shaded_area_m2 = sh->shaded_area_m2;
        }
        out.pre_mppt_W += sp.direct_W + sp.diffuse_W;
        collected += sp.irradiance_w_m2 * s.area_m2;
        out.per_surface.push_back(sp);
    }

    out.eta_mppt_used = eta_mppt(cfg, out.pre_mppt_W, opts.fm_mppt_mode);
    out.total_W = out.pre_mppt_W * out.eta_mppt_used;
    out.eta_sm_overall = collected_efficiency(out.pre_mppt_W, collected);
    return out;
}

AttitudeSchedule level_flight(double yaw_deg) {
    const double yaw = wrap_yaw_deg(yaw_deg);
    return [yaw](double) { return Attitude{0.0, 0.0, yaw}; };
}

AttitudeSchedule loiter(double yaw_rate_deg_per_h, double roll_deg, double pitch_deg, double yaw0_deg) {
    return [=](double t) { return Attitude{roll_deg, pitch_deg, wrap_yaw_deg(yaw0_deg + yaw_rate_deg_per_h * t)}; };
}

PowerBreakdown evaluate_model(ModelKind kind, const SimulationContext& ctx, const Attitude& att,
                              const AircraftGeometry& geom, const EfficiencyConfig& cfg, double t_const_C,
                              double t_amb_C, double p_prev_W, const ModelOptions& opts) {
    switch (kind) {
        case ModelKind::cdm:
            return power_cdm(ctx, geom.total_area_m2(), cfg, t_const_C, opts);
        case ModelKind::cam:
            return power_cam(ctx, geom.total_area_m2(), cfg, t_const_C, opts);
        case ModelKind::vm:
            return power_vm(ctx, att, geom.total_area_m2(), cfg, t_const_C, geom, opts);
        case ModelKind::fm:
            return power_fm(ctx, att, geom, cfg, t_amb_C, p_prev_W, opts);
    }
    throw std::logic_error("unhandled model kind");
}

std::vector<PowerBreakdown> simulate_day(const DaySimulation& sim) {
    if (!(sim.step_h > 0.0) || sim.step_h > 1.0) {
        throw std::invalid_argument("step_h must be within (0, 1] hours");
    }
    const AttitudeSchedule attitude = sim.attitude ? sim.attitude : level_flight(0.0);
    const auto steps = static_cast<std::size_t>(std::ceil(24.0 / sim.step_h - 1e-9));

    std::vector<PowerBreakdown> series;
    series.reserve(steps);
    double p_prev = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        SimulationContext ctx = sim.context;
        ctx.solar_time_h = static_cast<double>(k) * sim.step_h;
        if (ctx.solar_time_h >= 24.0) break;
        PowerBreakdown step = evaluate_model(sim.kind, ctx, attitude(ctx.solar_time_h), sim.geometry, sim.efficiency,
                                             sim.t_const_C, sim.t_amb_C, p_prev, sim.options);
        p_prev = step.total_W;
        series.push_back(std::move(step));
    }
    return series;
}

}  // namespace solaruav

#include "solaruav/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "solaruav/analysis.hpp"
#include "solaruav/config.hpp"
#include "solaruav/models.hpp"
#include "solaruav/shading.hpp"

namespace solaruav::cli {

namespace {

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct CommonOptions {
    std::string config_path;
    std::optional<double> lat;
    std::optional<double> alt;
    std::optional<int> day;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--config", o.config_path, "YAML config file (default: $SOLARUAV_CONFIG or built-in AtlantikSolar)");
    cmd.add_option("--lat", o.lat, "Latitude override in degrees");
    cmd.add_option("--alt", o.alt, "Altitude override in meters");
    cmd.add_option("--day", o.day, "Day-of-year override (1-366)");
}

ArtifactConfig load(const CommonOptions& o) {
    std::string path = o.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
    }
    ArtifactConfig cfg = path.empty() ? ArtifactConfig::defaults() : load_config_file(path);
    if (o.lat) cfg.context.latitude_deg = *o.lat;
    if (o.alt) cfg.context.altitude_m = *o.alt;
    if (o.day) cfg.context.day_of_year = *o.day;
    try {
        cfg.context.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

// Writes to a file, or to `fallback` for "" / "-". Throws DataError on failure.
template <typename Fn>
void write_output(const std::string& path, std::ostream& fallback, Fn&& body) {
    if (path.empty() || path == "-") {
        body(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("cannot open output file '" + path + "' for writing");
    body(file);
    file.flush();
    if (!file) throw DataError("failed writing output file '" + path + "'");
}

struct SimulateOptions {
    CommonOptions common;
    std::string model = "fm";
    double step_h = 0.25;
    double yaw_deg = 0.0;
    std::optional<double> yaw_rate;
    double roll_deg = 0.0;
    double pitch_deg = 0.0;
    std::optional<double> t_amb;
    std::optional<double> t_const;
    std::string out;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& log) {
    const ArtifactConfig cfg = load(o.common);
    DaySimulation sim;
    try {
        sim.kind = parse_model_kind(o.model);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!(o.step_h > 0.0) || o.step_h > 1.0) throw UsageError("--step-h must be within (0, 1] hours");
    sim.context = cfg.context;
    sim.step_h = o.step_h;
    sim.geometry = cfg.aircraft;
    sim.efficiency = cfg.efficiency;
    sim.t_const_C = o.t_const.value_or(cfg.models.t_const_C);
    sim.t_amb_C = o.t_amb.value_or(cfg.models.t_amb_C);
    sim.options = cfg.model_options();
    sim.attitude = o.yaw_rate ? loiter(*o.yaw_rate, o.roll_deg, o.pitch_deg, o.yaw_deg)
                              : AttitudeSchedule([att = Attitude{o.roll_deg, o.pitch_deg, wrap_yaw_deg(o.yaw_deg)}](double) {
                                    return att;
                                });
    try {
        sim.attitude(0.0).validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const std::vector<PowerBreakdown> series = simulate_day(sim);
    const std::string name(to_string(sim.kind));
    write_output(o.out, out, [&](std::ostream& s) {
        s << "t_solar_h,sun_elevation_deg,dni_w_m2,dhi_w_m2,P_solar_" << name
          << ",P_pre_mppt_W,eta_mppt,eta_sm,t_sm_C,gamma_avg_deg";
        if (sim.kind == ModelKind::fm) {
            for (const SurfaceSpec& surf : sim.geometry.surfaces) s << ",gamma_" << surf.id;
            for (const SurfaceSpec& surf : sim.geometry.surfaces) s << ",shaded_area_" << surf.id;
        }
        s << '\n';
        for (const PowerBreakdown& p : series) {
            s << fmt(p.solar_time_h) << ',' << fmt(p.sun_elevation_deg) << ',' << fmt(p.irradiance.direct_normal_w_m2)
              << ',' << fmt(p.irradiance.diffuse_horizontal_w_m2) << ',' << fmt(p.total_W) << ',' << fmt(p.pre_mppt_W)
              << ',' << fmt(p.eta_mppt_used) << ',' << fmt(p.eta_sm_overall) << ',' << fmt(p.t_sm_C) << ','
              << fmt(p.mean_gamma_deg());
            if (sim.kind == ModelKind::fm) {
                for (const SurfacePower& sp : p.per_surface) s << ',' << fmt(sp.gamma_deg);
                for (const SurfacePower& sp : p.per_surface) s << ',' << fmt(sp.shaded_area_m2);
            }
            s << '\n';
        }
    });

    double energy_Wh = 0.0;
    double peak = 0.0;
    for (const PowerBreakdown& p : series) {
        energy_Wh += p.total_W * sim.step_h;
        peak = std::max(peak, p.total_W);
    }
    if (!o.out.empty() && o.out != "-") {
        log << name << ": " << series.size() << " steps, daily energy " << fmt(energy_Wh) << " Wh, peak " << fmt(peak)
            << " W -> " << o.out << '\n';
    }
    return kExitOk;
}

struct AnalyzeOptions {
    CommonOptions common;
    std::string log_path;
    std::vector<std::string> models{"cdm", "cam", "vm", "fm"};
    std::vector<double> window;
    std::size_t prefilter = 0;
    std::optional<double> t_const;
    std::string out;
    std::string out_report;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& log_stream) {
    const ArtifactConfig cfg = load(o.common);
    ComparisonRequest request;
    request.kinds.clear();
    try {
        for (const std::string& m : o.models) request.kinds.push_back(parse_model_kind(m));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!o.window.empty()) {
        if (o.window.size() != 2 || !(o.window[1] > o.window[0])) {
            throw UsageError("--window expects START,END in solar hours with END > START");
        }
        request.window = TimeWindow{o.window[0], o.window[1]};
    }
    request.prefilter_semi_window = o.prefilter;
    request.t_const_C = o.t_const.value_or(cfg.models.t_const_C);
    request.options = cfg.model_options();

    std::ifstream in(o.log_path);
    if (!in) throw DataError("cannot open flight log '" + o.log_path + "'");
    FlightLog site;
    site.latitude_deg = cfg.context.latitude_deg;
    site.altitude_m = cfg.context.altitude_m;
    site.day_of_year = cfg.context.day_of_year;
    FlightLog flight;
    try {
        flight = read_flight_log_csv(in, site);
    } catch (const DataError& e) {
        throw DataError(o.log_path + ": " + e.what());
    }

    ComparisonResult result;
    try {
        result = run_comparison(flight, cfg.aircraft, cfg.efficiency, request);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    write_output(o.out_report, out, [&](std::ostream& s) { s << error_reports_json(result) << '\n'; });
    if (!o.out.empty()) write_output(o.out, out, [&](std::ostream& s) { write_comparison_csv(s, result); });

    int status = kExitOk;
    for (const KindResult& k : result.kinds) {
        if (!k.ok()) {
            log_stream << "error: " << k.error << '\n';
            status = kExitData;
            continue;
        }
        if (!o.out_report.empty() && o.out_report != "-") {
            const ErrorReport& r = *k.report;
            log_stream << to_string(k.kind) << ": P_model " << fmt(r.p_model_avg_W) << " W, P_exp " << fmt(r.p_exp_avg_W)
                       << " W, e_avg " << fmt(r.rel_avg * 100.0) << " %, e_rms " << fmt(r.e_rms_W) << " W\n";
        }
    }
    return status;
}

struct ShadingOptions {
    CommonOptions common;
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;
    std::optional<double> time;
    bool sweep = false;
    double sweep_step_h = 0.01;
    bool all_headings = false;
    std::string out;
};

nlohmann::ordered_json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

int cmd_shading(const ShadingOptions& o, std::ostream& out) {
    ArtifactConfig cfg = load(o.common);
    if (o.time) cfg.context.solar_time_h = *o.time;
    const Attitude att{o.roll, o.pitch, wrap_yaw_deg(o.yaw)};
    try {
        att.validate();
        cfg.context.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (o.sweep && !(o.sweep_step_h > 0.0 && o.sweep_step_h <= 1.0)) {
        throw UsageError("--sweep-step-h must be within (0, 1] hours");
    }
    const ModelOptions opts = cfg.model_options();
    const SunState sun = sun_position(cfg.context, opts.declination);
    const ShadingReport report = compute_shading(cfg.aircraft, att, sun);
    const Mat3 rotation = body_to_inertial(att);

    nlohmann::ordered_json doc;
    doc["solar_time_h"] = cfg.context.solar_time_h;
    doc["latitude_deg"] = cfg.context.latitude_deg;
    doc["day_of_year"] = cfg.context.day_of_year;
    doc["attitude_deg"] = {{"roll", att.roll_deg}, {"pitch", att.pitch_deg}, {"yaw", att.yaw_deg}};
    doc["sun_elevation_deg"] = sun.elevation_deg;
    doc["sun_azimuth_deg"] = sun.azimuth_deg;
    doc["r_sun"] = vec_json(sun.r_sun);
    doc["any_shading"] = report.any_shading;
    auto surfaces = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < cfg.aircraft.surfaces.size(); ++i) {
        const SurfaceSpec& s = cfg.aircraft.surfaces[i];
        const Vec3 n = rotation * surface_normal_body(cfg.aircraft, s);
        surfaces.push_back({{"id", s.id},
                            {"side", to_string(s.side)},
                            {"area_m2", s.area_m2},
                            {"normal_inertial", vec_json(n)},
                            {"gamma_deg", incidence_angle_deg(n, sun.r_sun)},
                            {"shaded_area_m2", report.per_surface[i].shaded_area_m2},
                            {"shaded_fraction", report.per_surface[i].shaded_fraction}});
    }
    doc["surfaces"] = std::move(surfaces);
    auto degenerate = nlohmann::ordered_json::array();
    for (const DegenerateProjection& d : report.degenerate) {
        degenerate.push_back({{"surface_id", d.surface_id}, {"occluder", d.occluder}});
    }
    doc["degenerate_projections"] = std::move(degenerate);

    if (o.sweep) {
        // Morning sweep from midnight to noon; reports the highest sun
        // elevation at which any surface is still shaded.
        auto samples = nlohmann::ordered_json::array();
        std::optional<double> last_shaded;
        const auto steps = static_cast<std::size_t>(12.0 / o.sweep_step_h);
        for (std::size_t k = 0; k <= steps; ++k) {
            SimulationContext ctx = cfg.context;
            ctx.solar_time_h = std::min(12.0, static_cast<double>(k) * o.sweep_step_h);
            const SunState s = sun_position(ctx, opts.declination);
            if (s.elevation_deg <= 0.0) continue;
            double shaded = 0.0;
            if (o.all_headings) {
                for (int yaw = 0; yaw < 360; yaw += 5) {
                    const Attitude a{att.roll_deg, att.pitch_deg, static_cast<double>(yaw)};
                    shaded = std::max(shaded, compute_shading(cfg.aircraft, a, s).total_shaded_area_m2());
                }
            } else {
                shaded = compute_shading(cfg.aircraft, att, s).total_shaded_area_m2();
            }
            if (shaded > 0.0) last_shaded = std::max(last_shaded.value_or(-90.0), s.elevation_deg);
            samples.push_back({{"solar_time_h", ctx.solar_time_h},
                               {"sun_elevation_deg", s.elevation_deg},
                               {"shaded_area_m2", shaded}});
        }
        doc["sweep"] = {{"all_headings", o.all_headings},
                        {"last_shaded_elevation_deg",
                         last_shaded ? nlohmann::ordered_json(*last_shaded) : nlohmann::ordered_json(nullptr)},
                        {"samples", std::move(samples)}};
    }

    write_output(o.out, out, [&](std::ostream& s) { s << doc.dump(2) << '\n'; });
    return kExitOk;
}

struct SynthOptions {
    CommonOptions common;
    LoiterLogSpec spec;
    std::string out;
};

int cmd_synth_log(SynthOptions o, std::ostream& out) {
    const ArtifactConfig cfg = load(o.common);
    o.spec.latitude_deg = cfg.context.latitude_deg;
    o.spec.altitude_m = cfg.context.altitude_m;
    o.spec.day_of_year = cfg.context.day_of_year;
    FlightLog log;
    try {
        log = synthesize_loiter_log(o.spec, cfg.aircraft, cfg.efficiency, cfg.model_options());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    write_output(o.out, out, [&](std::ostream& s) { write_flight_log_csv(s, log); });
    return kExitOk;
}

int cmd_config(const CommonOptions& o, const std::string& out_path, std::ostream& out) {
    const ArtifactConfig cfg = load(o);
    write_output(out_path, out, [&](std::ostream& s) { s << dump_config(cfg); });
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Solar power income models for solar-powered fixed-wing UAVs"};
    app.name("solaruav");
    app.require_subcommand(1);

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Sweep one model over a full day and write a CSV time series");
    add_common(*simulate, sim.common);
    simulate->add_option("--model", sim.model, "cdm | cam | vm | fm")->capture_default_str();
    simulate->add_option("--step-h", sim.step_h, "Time step in hours, (0, 1]")->capture_default_str();
    simulate->add_option("--yaw", sim.yaw_deg, "Heading in degrees (initial heading with --yaw-rate)");
    simulate->add_option("--yaw-rate", sim.yaw_rate, "Loiter yaw rate in deg/h (enables the yaw sweep)");
    simulate->add_option("--roll", sim.roll_deg, "Roll angle in degrees");
    simulate->add_option("--pitch", sim.pitch_deg, "Pitch angle in degrees");
    simulate->add_option("--t-amb", sim.t_amb, "Ambient temperature for the FM, degC");
    simulate->add_option("--t-const", sim.t_const, "Constant module temperature for CDM/CAM/VM, degC");
    simulate->add_option("--out", sim.out, "Output CSV (default stdout)");

    AnalyzeOptions an;
    CLI::App* analyze = app.add_subcommand("analyze", "Compare models against a flight log");
    add_common(*analyze, an.common);
    analyze->add_option("--log", an.log_path, "Flight-log CSV")->required();
    analyze->add_option("--model", an.models, "Model kinds, comma separated")->delimiter(',');
    analyze->add_option("--window", an.window, "START,END solar hours")->delimiter(',');
    analyze->add_option("--prefilter-semi-window", an.prefilter, "Moving-average semi window (samples)");
    analyze->add_option("--t-const", an.t_const, "Constant module temperature for CDM/CAM/VM, degC");
    analyze->add_option("--out", an.out, "Merged time-series CSV");
    analyze->add_option("--out-report", an.out_report, "JSON error report (default stdout)");

    ShadingOptions sh;
    CLI::App* shading = app.add_subcommand("shading", "Per-surface normals, incidence angles and tail shadows");
    add_common(*shading, sh.common);
    shading->add_option("--roll", sh.roll, "Roll angle in degrees");
    shading->add_option("--pitch", sh.pitch, "Pitch angle in degrees");
    shading->add_option("--yaw", sh.yaw, "Heading in degrees");
    shading->add_option("--time", sh.time, "Solar time in hours");
    shading->add_flag("--sweep", sh.sweep, "Also sweep the morning and report the last shaded sun elevation");
    shading->add_option("--sweep-step-h", sh.sweep_step_h, "Sweep time step in hours")->capture_default_str();
    shading->add_flag("--all-headings", sh.all_headings, "During the sweep, take the worst case over headings");
    shading->add_option("--out", sh.out, "Output JSON (default stdout)");

    SynthOptions sy;
    CLI::App* synth = app.add_subcommand("synth-log", "Generate a loiter flight log from the full model");
    add_common(*synth, sy.common);
    synth->add_option("--t-start", sy.spec.t_start_h, "Start solar time, h")->capture_default_str();
    synth->add_option("--t-end", sy.spec.t_end_h, "End solar time, h")->capture_default_str();
    synth->add_option("--hz", sy.spec.sample_hz, "Sample rate")->capture_default_str();
    synth->add_option("--yaw-period-s", sy.spec.yaw_period_s, "Seconds per full circle")->capture_default_str();
    synth->add_option("--roll", sy.spec.roll_deg, "Roll bias, deg")->capture_default_str();
    synth->add_option("--pitch", sy.spec.pitch_deg, "Pitch, deg")->capture_default_str();
    synth->add_option("--t-amb", sy.spec.t_amb_C, "Ambient temperature, degC")->capture_default_str();
    synth->add_option("--out", sy.out, "Output CSV (default stdout)");

    CommonOptions cf;
    std::string cf_out;
    CLI::App* config = app.add_subcommand("config", "Validate a config and print it in canonical form");
    add_common(*config, cf);
    config->add_option("--out", cf_out, "Output YAML (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate) return cmd_simulate(sim, out, err);
        if (*analyze) return cmd_analyze(an, out, err);
        if (*shading) return cmd_shading(sh, out);
        if (*synth) return cmd_synth_log(sy, out);
        if (*config) return cmd_config(cf, cf_out, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace solaruav::cli

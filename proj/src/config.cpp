#include "solaruav/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <yaml-cpp/yaml.h>

namespace solaruav {

namespace {

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& path, const std::string& why) const {
        std::ostringstream msg;
        msg << source_;
        const YAML::Mark mark = node.Mark();
        if (!mark.is_null()) msg << ':' << mark.line + 1 << ':' << mark.column + 1;
        msg << ": " << path << ": " << why;
        throw ConfigError(msg.str());
    }

    void expect_map(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> allowed) const {
        if (!node.IsMap()) fail(node, path, "expected a mapping");
        const std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& kv : node) {
            const std::string key = kv.first.as<std::string>();
            if (!keys.contains(key)) fail(kv.first, path.empty() ? key : path + "." + key, "unknown key");
        }
    }

    double number(const YAML::Node& node, const std::string& path) const {
        if (!node.IsScalar()) fail(node, path, "expected a number");
        try {
            return node.as<double>();
        } catch (const YAML::Exception&) {
            fail(node, path, "expected a number, got '" + node.Scalar() + "'");
        }
    }

    void read(const YAML::Node& parent, const char* key, const std::string& path, double& out) const {
        if (const YAML::Node node = parent[key]) out = number(node, join(path, key));
    }

    void read(const YAML::Node& parent, const char* key, const std::string& path, int& out) const {
        const YAML::Node node = parent[key];
        if (!node) return;
        if (!node.IsScalar()) fail(node, join(path, key), "expected an integer");
        try {
            out = node.as<int>();
        } catch (const YAML::Exception&) {
            fail(node, join(path, key), "expected an integer, got '" + node.Scalar() + "'");
        }
    }

    void read(const YAML::Node& parent, const char* key, const std::string& path, bool& out) const {
        const YAML::Node node = parent[key];
        if (!node) return;
        try {
            out = node.as<bool>();
        } catch (const YAML::Exception&) {
            fail(node, join(path, key), "expected true or false");
        }
    }

    void read(const YAML::Node& parent, const char* key, const std::string& path, std::string& out) const {
        const YAML::Node node = parent[key];
        if (!node) return;
        if (!node.IsScalar()) fail(node, join(path, key), "expected a string");
        out = node.Scalar();
    }

    template <typename Enum>
    void read_enum(const YAML::Node& parent, const char* key, const std::string& path, Enum& out,
                   std::initializer_list<std::pair<const char*, Enum>> options) const {
        const YAML::Node node = parent[key];
        if (!node) return;
        const std::string value = node.IsScalar() ? node.Scalar() : std::string();
        std::string expected;
        for (const auto& [name, v] : options) {
            if (value == name) {
                out = v;
                return;
            }
            expected += expected.empty() ? name : std::string(", ") + name;
        }
        fail(node, join(path, key), "expected one of: " + expected);
    }

    Vec3 vec3(const YAML::Node& node, const std::string& path) const {
        if (!node.IsSequence() || node.size() != 3) fail(node, path, "expected [x, y, z]");
        return {number(node[0], path + "[0]"), number(node[1], path + "[1]"), number(node[2], path + "[2]")};
    }

    Polygon3 polygon(const YAML::Node& node, const std::string& path) const {
        if (!node || !node.IsSequence()) fail(node, path, "expected a list of [x, y, z] vertices");
        Polygon3 poly;
        for (std::size_t i = 0; i < node.size(); ++i) poly.push_back(vec3(node[i], path + "[" + std::to_string(i) + "]"));
        return poly;
    }

    Curve1D curve(const YAML::Node& node, const std::string& path) const {
        if (!node.IsSequence()) fail(node, path, "expected a list of [x, y] knots");
        std::vector<Curve1D::Knot> knots;
        for (std::size_t i = 0; i < node.size(); ++i) {
            const YAML::Node k = node[i];
            const std::string kp = path + "[" + std::to_string(i) + "]";
            if (!k.IsSequence() || k.size() != 2) fail(k, kp, "expected [x, y]");
            knots.emplace_back(number(k[0], kp + "[0]"), number(k[1], kp + "[1]"));
        }
        try {
            return Curve1D(std::move(knots));
        } catch (const std::invalid_argument& e) {
            fail(node, path, e.what());
        }
    }

    [[nodiscard]] const std::string& source() const { return source_; }

    static std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

private:
    std::string source_;
};

const std::initializer_list<std::pair<const char*, WingSide>> kSides = {
    {"left", WingSide::left}, {"center-left", WingSide::center_left},
    {"center-right", WingSide::center_right}, {"right", WingSide::right}};

const std::initializer_list<std::pair<const char*, ClimateType>> kClimates = {
    {"tropical", ClimateType::tropical},
    {"midlatitude_summer", ClimateType::midlatitude_summer},
    {"subarctic_summer", ClimateType::subarctic_summer},
    {"midlatitude_winter", ClimateType::midlatitude_winter}};

void read_aircraft(const Reader& r, const YAML::Node& node, AircraftGeometry& geom) {
    const std::string path = "aircraft";
    r.expect_map(node, path, {"dihedral_deg", "wing_pitch_deg", "mounting_order", "surfaces", "occluders"});
    r.read(node, "dihedral_deg", path, geom.dihedral_deg);
    r.read(node, "wing_pitch_deg", path, geom.wing_pitch_deg);
    r.read_enum(node, "mounting_order", path, geom.mounting_order,
                {{"pitch_then_dihedral", MountingOrder::pitch_then_dihedral},
                 {"dihedral_then_pitch", MountingOrder::dihedral_then_pitch}});

    if (const YAML::Node surfaces = node["surfaces"]) {
        if (!surfaces.IsSequence()) r.fail(surfaces, "aircraft.surfaces", "expected a list");
        geom.surfaces.clear();
        for (std::size_t i = 0; i < surfaces.size(); ++i) {
            const YAML::Node s = surfaces[i];
            const std::string sp = "aircraft.surfaces[" + std::to_string(i) + "]";
            r.expect_map(s, sp, {"id", "side", "area_m2", "cell_pitch_deg", "polygon"});
            SurfaceSpec spec;
            if (!s["id"]) r.fail(s, sp + ".id", "required");
            if (!s["area_m2"]) r.fail(s, sp + ".area_m2", "required");
            if (!s["side"]) r.fail(s, sp + ".side", "required");
            r.read(s, "id", sp, spec.id);
            r.read(s, "area_m2", sp, spec.area_m2);
            r.read(s, "cell_pitch_deg", sp, spec.cell_pitch_deg);
            r.read_enum(s, "side", sp, spec.side, kSides);
            spec.polygon_body = r.polygon(s["polygon"], sp + ".polygon");
            try {
                AircraftGeometry single;
                single.surfaces.push_back(spec);
                single.validate();
            } catch (const std::invalid_argument& e) {
                r.fail(s, sp, e.what());
            }
            geom.surfaces.push_back(std::move(spec));
        }
    }
    if (const YAML::Node occluders = node["occluders"]) {
        if (!occluders.IsSequence()) r.fail(occluders, "aircraft.occluders", "expected a list");
        geom.occluders.clear();
        for (std::size_t i = 0; i < occluders.size(); ++i) {
            const YAML::Node o = occluders[i];
            const std::string op = "aircraft.occluders[" + std::to_string(i) + "]";
            r.expect_map(o, op, {"name", "polygon"});
            Occluder occ;
            r.read(o, "name", op, occ.name);
            occ.polygon_body = r.polygon(o["polygon"], op + ".polygon");
            geom.occluders.push_back(std::move(occ));
        }
    }
    try {
        geom.validate();
    } catch (const std::invalid_argument& e) {
        r.fail(node, path, e.what());
    }
}

void read_efficiency(const Reader& r, const YAML::Node& node, EfficiencyConfig& cfg) {
    const std::string path = "efficiency";
    r.expect_map(node, path,
                 {"eta_sm_stc", "eps_cbr", "c_l_per_K", "t_stc_C", "delta_t_max_K", "p_solar_max_W", "eps_gamma_diff",
                  "eta_mppt_const", "curves"});
    r.read(node, "eta_sm_stc", path, cfg.eta_sm_stc);
    r.read(node, "eps_cbr", path, cfg.eps_cbr);
    r.read(node, "c_l_per_K", path, cfg.c_l_per_K);
    r.read(node, "t_stc_C", path, cfg.t_stc_C);
    r.read(node, "delta_t_max_K", path, cfg.delta_t_max_K);
    r.read(node, "p_solar_max_W", path, cfg.p_solar_max_W);
    r.read(node, "eps_gamma_diff", path, cfg.eps_gamma_diff);
    r.read(node, "eta_mppt_const", path, cfg.eta_mppt_const);
    if (const YAML::Node curves = node["curves"]) {
        r.expect_map(curves, "efficiency.curves", {"eps_irradiance", "eps_gamma", "eta_mppt"});
        if (curves["eps_irradiance"]) cfg.curve_eps_I = r.curve(curves["eps_irradiance"], "efficiency.curves.eps_irradiance");
        if (curves["eps_gamma"]) cfg.curve_eps_gamma = r.curve(curves["eps_gamma"], "efficiency.curves.eps_gamma");
        if (curves["eta_mppt"]) cfg.curve_eta_mppt = r.curve(curves["eta_mppt"], "efficiency.curves.eta_mppt");
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        r.fail(node, path, e.what());
    }
}

void read_context(const Reader& r, const YAML::Node& node, SimulationContext& ctx) {
    const std::string path = "context";
    r.expect_map(node, path, {"latitude_deg", "altitude_m", "day_of_year", "solar_time_h"});
    r.read(node, "latitude_deg", path, ctx.latitude_deg);
    r.read(node, "altitude_m", path, ctx.altitude_m);
    r.read(node, "day_of_year", path, ctx.day_of_year);
    r.read(node, "solar_time_h", path, ctx.solar_time_h);
    try {
        ctx.validate();
    } catch (const std::invalid_argument& e) {
        r.fail(node, path, e.what());
    }
}

void read_models(const Reader& r, const YAML::Node& node, ModelSettings& m) {
    const std::string path = "models";
    r.expect_map(node, path,
                 {"mppt_mode", "eps_irradiance_per_surface", "compute_shading", "shading_plugin", "t_const_C",
                  "t_amb_C", "climate", "declination"});
    r.read_enum(node, "mppt_mode", path, m.fm_mppt_mode, {{"curve", MpptMode::curve}, {"constant", MpptMode::constant}});
    r.read(node, "eps_irradiance_per_surface", path, m.eps_I_per_surface);
    r.read(node, "compute_shading", path, m.compute_shading);
    r.read(node, "shading_plugin", path, m.shading_plugin);
    r.read(node, "t_const_C", path, m.t_const_C);
    r.read(node, "t_amb_C", path, m.t_amb_C);
    r.read_enum(node, "climate", path, m.climate, kClimates);
    r.read_enum(node, "declination", path, m.declination,
                {{"spencer", DeclinationModel::spencer}, {"cooper", DeclinationModel::cooper}});
    try {
        (void)shading_plugin_by_name(m.shading_plugin);
    } catch (const std::invalid_argument& e) {
        r.fail(node["shading_plugin"], "models.shading_plugin", e.what());
    }
}

// Shortest round-trip text, so dumped files stay readable and reload bit-exact.
std::string num(double v) {
    if (v == 0.0) v = 0.0;
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void emit_curve(YAML::Emitter& out, const Curve1D& curve) {
    out << YAML::BeginSeq;
    for (const auto& [x, y] : curve.knots()) out << YAML::Flow << YAML::BeginSeq << num(x) << num(y) << YAML::EndSeq;
    out << YAML::EndSeq;
}

void emit_polygon(YAML::Emitter& out, const Polygon3& poly) {
    out << YAML::BeginSeq;
    for (const Vec3& v : poly) out << YAML::Flow << YAML::BeginSeq << num(v.x()) << num(v.y()) << num(v.z()) << YAML::EndSeq;
    out << YAML::EndSeq;
}

}  // namespace

std::string to_string(WingSide side) {
    for (const auto& [name, v] : kSides) {
        if (v == side) return name;
    }
    return "left";
}

std::string to_string(ClimateType climate) {
    for (const auto& [name, v] : kClimates) {
        if (v == climate) return name;
    }
    return "midlatitude_summer";
}

ArtifactConfig ArtifactConfig::defaults() {
    ArtifactConfig cfg;
    cfg.aircraft = atlantik_solar_geometry();
    cfg.efficiency = EfficiencyConfig::atlantik_solar_defaults();
    cfg.context = SimulationContext{47.0, 500.0, 182, 12.0};
    return cfg;
}

void ArtifactConfig::validate() const {
    try {
        aircraft.validate();
        efficiency.validate();
        context.validate();
        (void)shading_plugin_by_name(models.shading_plugin);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ModelOptions ArtifactConfig::model_options() const {
    ModelOptions opts;
    opts.declination = models.declination;
    opts.climate = HottelCoefficients::for_climate(models.climate);
    opts.fm_mppt_mode = models.fm_mppt_mode;
    opts.eps_I_per_surface = models.eps_I_per_surface;
    opts.compute_shading = models.compute_shading;
    opts.shading_plugin = shading_plugin_by_name(models.shading_plugin);
    return opts;
}

ArtifactConfig parse_config(const std::string& yaml_text, const std::string& source_name) {
    const Reader r(source_name);
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source_name + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                          ": " + e.msg);
    }
    ArtifactConfig cfg = ArtifactConfig::defaults();
    if (root.IsNull()) return cfg;
    r.expect_map(root, "", {"aircraft", "efficiency", "context", "models"});
    if (root["aircraft"]) read_aircraft(r, root["aircraft"], cfg.aircraft);
    if (root["efficiency"]) read_efficiency(r, root["efficiency"], cfg.efficiency);
    if (root["context"]) read_context(r, root["context"], cfg.context);
    if (root["models"]) read_models(r, root["models"], cfg.models);
    return cfg;
}

ArtifactConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

std::string dump_config(const ArtifactConfig& config) {
    YAML::Emitter out;
    out << YAML::BeginMap;

    out << YAML::Key << "context" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "latitude_deg" << YAML::Value << num(config.context.latitude_deg);
    out << YAML::Key << "altitude_m" << YAML::Value << num(config.context.altitude_m);
    out << YAML::Key << "day_of_year" << YAML::Value << config.context.day_of_year;
    out << YAML::Key << "solar_time_h" << YAML::Value << num(config.context.solar_time_h);
    out << YAML::EndMap;

    const AircraftGeometry& g = config.aircraft;
    out << YAML::Key << "aircraft" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dihedral_deg" << YAML::Value << num(g.dihedral_deg);
    out << YAML::Key << "wing_pitch_deg" << YAML::Value << num(g.wing_pitch_deg);
    out << YAML::Key << "mounting_order" << YAML::Value
        << (g.mounting_order == MountingOrder::pitch_then_dihedral ? "pitch_then_dihedral" : "dihedral_then_pitch");
    out << YAML::Key << "surfaces" << YAML::Value << YAML::BeginSeq;
    for (const SurfaceSpec& s : g.surfaces) {
        out << YAML::BeginMap;
        out << YAML::Key << "id" << YAML::Value << s.id;
        out << YAML::Key << "side" << YAML::Value << to_string(s.side);
        out << YAML::Key << "area_m2" << YAML::Value << num(s.area_m2);
        out << YAML::Key << "cell_pitch_deg" << YAML::Value << num(s.cell_pitch_deg);
        out << YAML::Key << "polygon" << YAML::Value;
        emit_polygon(out, s.polygon_body);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "occluders" << YAML::Value << YAML::BeginSeq;
    for (const Occluder& o : g.occluders) {
        out << YAML::BeginMap;
        out << YAML::Key << "name" << YAML::Value << o.name;
        out << YAML::Key << "polygon" << YAML::Value;
        emit_polygon(out, o.polygon_body);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;

    const EfficiencyConfig& e = config.efficiency;
    out << YAML::Key << "efficiency" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "eta_sm_stc" << YAML::Value << num(e.eta_sm_stc);
    out << YAML::Key << "eps_cbr" << YAML::Value << num(e.eps_cbr);
    out << YAML::Key << "c_l_per_K" << YAML::Value << num(e.c_l_per_K);
    out << YAML::Key << "t_stc_C" << YAML::Value << num(e.t_stc_C);
    out << YAML::Key << "delta_t_max_K" << YAML::Value << num(e.delta_t_max_K);
    out << YAML::Key << "p_solar_max_W" << YAML::Value << num(e.p_solar_max_W);
    out << YAML::Key << "eps_gamma_diff" << YAML::Value << num(e.eps_gamma_diff);
    out << YAML::Key << "eta_mppt_const" << YAML::Value << num(e.eta_mppt_const);
    out << YAML::Key << "curves" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "eps_irradiance" << YAML::Value;
    emit_curve(out, e.curve_eps_I);
    out << YAML::Key << "eps_gamma" << YAML::Value;
    emit_curve(out, e.curve_eps_gamma);
    out << YAML::Key << "eta_mppt" << YAML::Value;
    emit_curve(out, e.curve_eta_mppt);
    out << YAML::EndMap;
    out << YAML::EndMap;

    const ModelSettings& m = config.models;
    out << YAML::Key << "models" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "mppt_mode" << YAML::Value << (m.fm_mppt_mode == MpptMode::curve ? "curve" : "constant");
    out << YAML::Key << "eps_irradiance_per_surface" << YAML::Value << m.eps_I_per_surface;
    out << YAML::Key << "compute_shading" << YAML::Value << m.compute_shading;
    out << YAML::Key << "shading_plugin" << YAML::Value << m.shading_plugin;
    out << YAML::Key << "t_const_C" << YAML::Value << num(m.t_const_C);
    out << YAML::Key << "t_amb_C" << YAML::Value << num(m.t_amb_C);
    out << YAML::Key << "climate" << YAML::Value << to_string(m.climate);
    out << YAML::Key << "declination" << YAML::Value
        << (m.declination == DeclinationModel::spencer ? "spencer" : "cooper");
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace solaruav

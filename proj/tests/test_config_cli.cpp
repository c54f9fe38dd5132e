#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "solaruav/analysis.hpp"
#include "solaruav/cli.hpp"
#include "solaruav/config.hpp"

using namespace solaruav;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("solaruav_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv(cli::kConfigEnvVar);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }
    static void write(const std::string& p, const std::string& text) { std::ofstream(p) << text; }

    fs::path dir_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
    const ArtifactConfig d = ArtifactConfig::defaults();
    const std::string text = dump_config(d);
    const ArtifactConfig back = parse_config(text);
    EXPECT_EQ(dump_config(back), text);
    EXPECT_EQ(back.efficiency.curve_eps_gamma, d.efficiency.curve_eps_gamma);
    ASSERT_EQ(back.aircraft.surfaces.size(), d.aircraft.surfaces.size());
    for (std::size_t i = 0; i < d.aircraft.surfaces.size(); ++i) {
        for (std::size_t k = 0; k < d.aircraft.surfaces[i].polygon_body.size(); ++k) {
            EXPECT_EQ(back.aircraft.surfaces[i].polygon_body[k], d.aircraft.surfaces[i].polygon_body[k]);
        }
    }
}

TEST(Config, ShippedFileEqualsDefaults) {
    const ArtifactConfig shipped = load_config_file(std::string(SOLARUAV_DATA_DIR) + "/atlantiksolar.yaml");
    EXPECT_EQ(dump_config(shipped), dump_config(ArtifactConfig::defaults()));
}

TEST(Config, PartialFileKeepsDefaults) {
    const ArtifactConfig c = parse_config("context:\n  latitude_deg: 10\nmodels:\n  mppt_mode: constant\n");
    EXPECT_DOUBLE_EQ(c.context.latitude_deg, 10.0);
    EXPECT_EQ(c.context.day_of_year, 182);
    EXPECT_EQ(c.models.fm_mppt_mode, MpptMode::constant);
    EXPECT_EQ(c.aircraft.surfaces.size(), 6u);
}

TEST(Config, ErrorsNameFieldAndLocation) {
    auto message = [](const std::string& text) {
        try {
            (void)parse_config(text, "demo.yaml");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    const std::string unknown = message("context:\n  latitude: 10\n");
    EXPECT_NE(unknown.find("demo.yaml:2"), std::string::npos) << unknown;
    EXPECT_NE(unknown.find("latitude"), std::string::npos);

    const std::string bad_number = message("efficiency:\n  eta_sm_stc: fast\n");
    EXPECT_NE(bad_number.find("efficiency.eta_sm_stc"), std::string::npos) << bad_number;

    const std::string bad_side = message(
        "aircraft:\n  surfaces:\n    - id: 1\n      side: middle\n      area_m2: 1\n"
        "      polygon: [[0.5, -0.5, 0], [-0.5, -0.5, 0], [-0.5, 0.5, 0], [0.5, 0.5, 0]]\n");
    EXPECT_NE(bad_side.find("side"), std::string::npos) << bad_side;

    EXPECT_FALSE(message("context:\n  day_of_year: 400\n").empty());
    EXPECT_FALSE(message("efficiency:\n  curves:\n    eta_mppt: [[10, 0.9], [5, 0.8]]\n").empty());
    EXPECT_FALSE(message("context: [1, 2\n").empty());
}

TEST_F(TempDir, SimulateRejectsZeroStep) {
    const CliResult r = invoke({"simulate", "--step-h", "0"});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("step"), std::string::npos);
}

TEST_F(TempDir, SimulateCdmEquatorNightRowsAreZero) {
    const std::string out = path("cdm.csv");
    const CliResult r = invoke({"simulate", "--model", "cdm", "--lat", "0", "--day", "80", "--step-h", "0.5", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(slurp(out));
    ASSERT_EQ(rows.size(), 49u);
    EXPECT_EQ(rows[0][0], "t_solar_h");
    EXPECT_EQ(rows[0][4], "P_solar_cdm");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][0]);
        const double p = std::stod(rows[i][4]);
        if (t < 5.5 || t > 18.5) EXPECT_EQ(p, 0.0) << t;
        if (t > 7.0 && t < 17.0) EXPECT_GT(p, 0.0) << t;
    }
}

TEST_F(TempDir, SimulateIsDeterministic) {
    const CliResult a = invoke({"simulate", "--model", "fm", "--yaw-rate", "4320", "--roll", "3", "--step-h", "0.1"});
    const CliResult b = invoke({"simulate", "--model", "fm", "--yaw-rate", "4320", "--roll", "3", "--step-h", "0.1"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("shaded_area_6"), std::string::npos);
}

TEST_F(TempDir, SimulateUnwritableOutputIsDataError) {
    const CliResult r = invoke({"simulate", "--out", path("missing/dir/out.csv")});
    EXPECT_EQ(r.code, cli::kExitData);
}

TEST_F(TempDir, BadConfigIsUsageError) {
    write(path("bad.yaml"), "models:\n  mppt_mode: sometimes\n");
    const CliResult r = invoke({"simulate", "--config", path("bad.yaml")});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("bad.yaml:2"), std::string::npos) << r.err;

    setenv(cli::kConfigEnvVar, path("bad.yaml").c_str(), 1);
    EXPECT_EQ(invoke({"config"}).code, cli::kExitUsage);
    unsetenv(cli::kConfigEnvVar);
    EXPECT_EQ(invoke({"config"}).code, 0);
}

TEST_F(TempDir, UnknownSubcommandOrFlagIsUsageError) {
    EXPECT_EQ(invoke({"fly"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"simulate", "--bogus"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"simulate", "--model", "xm"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(TempDir, AnalyzeSelfGeneratedLogReportsZeroFmError) {
    const std::string log = path("log.csv");
    ASSERT_EQ(invoke({"synth-log", "--t-start", "7", "--t-end", "8", "--hz", "0.5", "--out", log}).code, 0);
    const std::string report = path("report.json");
    const std::string merged = path("merged.csv");
    const CliResult r = invoke({"analyze", "--log", log, "--model", "fm,cdm", "--out", merged, "--out-report", report});
    ASSERT_EQ(r.code, 0) << r.err;
    const nlohmann::json j = nlohmann::json::parse(slurp(report));
    EXPECT_EQ(j["fm"]["e_avg_W"].get<double>(), 0.0);
    EXPECT_EQ(j["fm"]["e_rms_W"].get<double>(), 0.0);
    EXPECT_GT(j["cdm"]["e_avg_W"].get<double>(), 0.0);
    EXPECT_EQ(csv_rows(slurp(merged))[0].size(), 4u);
}

TEST_F(TempDir, AnalyzeWithoutAttitudeColumns) {
    const std::string log = path("noatt.csv");
    write(log, "t_solar_h,p_solar_exp_W,t_amb_C\n8.0,100,20\n8.1,105,20\n8.2,110,20\n");
    EXPECT_EQ(invoke({"analyze", "--log", log, "--model", "cdm,cam"}).code, 0);
    const CliResult fm = invoke({"analyze", "--log", log, "--model", "fm"});
    EXPECT_EQ(fm.code, cli::kExitData);
    EXPECT_NE(fm.err.find("yaw"), std::string::npos) << fm.err;
}

TEST_F(TempDir, AnalyzeMalformedRowNamesLine) {
    const std::string log = path("broken.csv");
    write(log, "t_solar_h,p_solar_exp_W\n8.0,100\n8.1,oops\n");
    const CliResult r = invoke({"analyze", "--log", log, "--model", "cdm"});
    EXPECT_EQ(r.code, cli::kExitData);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
    EXPECT_EQ(invoke({"analyze", "--log", path("nope.csv")}).code, cli::kExitData);
}

TEST_F(TempDir, ShadingReportAtNoonAndLowSun) {
    const CliResult noon = invoke({"shading", "--lat", "23.2", "--day", "172", "--time", "12"});
    ASSERT_EQ(noon.code, 0) << noon.err;
    const nlohmann::json j = nlohmann::json::parse(noon.out);
    EXPECT_FALSE(j["any_shading"].get<bool>());
    ASSERT_EQ(j["surfaces"].size(), 6u);
    for (const auto& s : j["surfaces"]) {
        EXPECT_EQ(s["shaded_area_m2"].get<double>(), 0.0);
        EXPECT_EQ(s["normal_inertial"].size(), 3u);
    }
    EXPECT_EQ(j["r_sun"].size(), 3u);

    const CliResult sweep = invoke({"shading", "--sweep", "--all-headings", "--sweep-step-h", "0.05"});
    ASSERT_EQ(sweep.code, 0) << sweep.err;
    const nlohmann::json s = nlohmann::json::parse(sweep.out);
    const double last = s["sweep"]["last_shaded_elevation_deg"].get<double>();
    EXPECT_GT(last, 15.0);
    EXPECT_LT(last, 21.0);
}

TEST_F(TempDir, ConfigDumpReloads) {
    const std::string out = path("dump.yaml");
    ASSERT_EQ(invoke({"config", "--out", out}).code, 0);
    EXPECT_EQ(dump_config(load_config_file(out)), slurp(out));
}

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "solaruav/analysis.hpp"

using namespace solaruav;

namespace {

TimeSeries constant_series(double value, std::size_t n = 50) {
    TimeSeries s;
    for (std::size_t i = 0; i < n; ++i) {
        s.t_h.push_back(4.0 + 0.01 * static_cast<double>(i));
        s.value.push_back(value);
    }
    return s;
}

LoiterLogSpec short_spec() {
    LoiterLogSpec spec;
    spec.t_start_h = 6.0;
    spec.t_end_h = 7.0;
    spec.sample_hz = 0.2;
    return spec;
}

}  // namespace

TEST(MovingAverage, HandComputedTruncatedWindows) {
    const std::vector<double> x{0, 1, 2, 3, 4};
    const std::vector<double> w1 = moving_average(x, 1);
    const std::vector<double> e1{0.5, 1, 2, 3, 3.5};
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(w1[i], e1[i], 1e-15);

    const std::vector<double> w2 = moving_average(x, 2);
    const std::vector<double> e2{1, 1.5, 2, 2.5, 3};
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(w2[i], e2[i], 1e-15);

    const std::vector<double> big = moving_average(x, 10);
    for (double v : big) EXPECT_NEAR(v, 2.0, 1e-15);
}

TEST(MovingAverage, IdentityCases) {
    const std::vector<double> x{3, -1, 4, 1, 5, 9, 2, 6};
    EXPECT_EQ(moving_average(x, 0), x);
    const std::vector<double> c(17, 2.5);
    for (double v : moving_average(c, 4)) EXPECT_DOUBLE_EQ(v, 2.5);
    EXPECT_TRUE(moving_average(std::vector<double>{}, 3).empty());
}

TEST(ComputeErrors, IdenticalSeriesGiveZero) {
    const ErrorReport r = compute_errors(constant_series(80.0), constant_series(80.0), {0.0, 24.0});
    EXPECT_EQ(r.e_avg_W, 0.0);
    EXPECT_EQ(r.e_rms_W, 0.0);
    EXPECT_EQ(r.e_max_W, 0.0);
    EXPECT_EQ(r.rel_avg, 0.0);
    EXPECT_EQ(r.samples, 50u);
}

TEST(ComputeErrors, HandComputedAverages) {
    const ErrorReport cdm = compute_errors(constant_series(117.35), constant_series(99.61), {0.0, 24.0});
    EXPECT_NEAR(cdm.rel_avg * 100.0, 17.81, 0.01);
    const ErrorReport fm = compute_errors(constant_series(97.87), constant_series(99.61), {0.0, 24.0});
    EXPECT_NEAR(fm.rel_avg * 100.0, -1.75, 0.01);
    EXPECT_NEAR(fm.e_rms_W, 1.74, 1e-9);
    EXPECT_NEAR(fm.e_max_W, -1.74, 1e-9);
    EXPECT_NEAR(fm.rel_max, 1.74 / 99.61, 1e-12);
}

TEST(ComputeErrors, WindowRestrictsSamples) {
    TimeSeries model = constant_series(10.0, 100);
    const TimeSeries measured = constant_series(10.0, 100);
    for (std::size_t i = 60; i < 100; ++i) model.value[i] = 50.0;  // outside the window below
    const ErrorReport r = compute_errors(model, measured, {4.0, 4.5});
    EXPECT_EQ(r.samples, 51u);
    EXPECT_NEAR(r.e_avg_W, 0.0, 1e-12);
}

TEST(ComputeErrors, RmsNotBelowAverageMagnitude) {
    TimeSeries model = constant_series(0.0, 200);
    TimeSeries measured = constant_series(0.0, 200);
    for (std::size_t i = 0; i < 200; ++i) {
        model.value[i] = 100.0 + 20.0 * std::sin(0.3 * static_cast<double>(i));
        measured.value[i] = 95.0 + 5.0 * std::cos(0.11 * static_cast<double>(i));
    }
    for (std::size_t w : {0u, 3u, 25u}) {
        const ErrorReport r = compute_errors(model, measured, {0.0, 24.0}, w);
        EXPECT_GE(r.e_rms_W + 1e-12, std::abs(r.e_avg_W)) << w;
        EXPECT_GE(std::abs(r.e_max_W) + 1e-12, r.e_rms_W) << w;
    }
}

TEST(ComputeErrors, ZeroMeasuredMakesRelativeUndefined) {
    const ErrorReport r = compute_errors(constant_series(1.0), constant_series(0.0), {0.0, 24.0});
    EXPECT_FALSE(r.relative_defined);
    EXPECT_NEAR(r.e_avg_W, 1.0, 1e-12);
}

TEST(ComputeErrors, MisalignedOrEmptyInputsThrow) {
    TimeSeries a = constant_series(1.0);
    const TimeSeries b = constant_series(1.0);
    a.t_h[7] += 1e-6;
    EXPECT_THROW((void)compute_errors(a, b, {0.0, 24.0}), DataError);
    EXPECT_THROW((void)compute_errors(constant_series(1.0, 5), b, {0.0, 24.0}), DataError);
    EXPECT_THROW((void)compute_errors(b, b, {10.0, 11.0}), DataError);
}

TEST(FlightLogCsv, ParsesOptionalColumns) {
    std::istringstream in(
        "t_solar_h,p_solar_exp_W,yaw_deg\n"
        "6.0,10.5,90\n"
        "6.1,11.0,\n");
    const FlightLog log = read_flight_log_csv(in, FlightLog{});
    ASSERT_EQ(log.records.size(), 2u);
    EXPECT_DOUBLE_EQ(log.records[0].p_solar_exp_W, 10.5);
    EXPECT_DOUBLE_EQ(*log.records[0].yaw_deg, 90.0);
    EXPECT_FALSE(log.records[1].yaw_deg.has_value());
    EXPECT_FALSE(log.records[0].has_attitude());
}

TEST(FlightLogCsv, ErrorsNameTheLine) {
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            (void)read_flight_log_csv(in, FlightLog{});
        } catch (const DataError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("t_solar_h,p_solar_exp_W\n6.0,1\n6.1,abc\n"), 3u);
    EXPECT_EQ(line_of("t_solar_h,p_solar_exp_W\n6.0,1\n6.0,2\n"), 3u);
    EXPECT_EQ(line_of("t_solar_h,p_solar_exp_W\n6.0,1,3\n"), 2u);
    EXPECT_EQ(line_of("t_solar_h,p_solar_exp_W\n6.0,-1\n"), 2u);
    EXPECT_EQ(line_of("t_solar_h,yaw_deg\n6.0,1\n"), 1u);
}

TEST(FlightLogCsv, RoundTripsExactly) {
    const FlightLog log = synthesize_loiter_log(short_spec(), atlantik_solar_geometry(),
                                                EfficiencyConfig::atlantik_solar_defaults());
    std::stringstream buf;
    write_flight_log_csv(buf, log);
    FlightLog site;
    site.latitude_deg = log.latitude_deg;
    site.altitude_m = log.altitude_m;
    site.day_of_year = log.day_of_year;
    const FlightLog back = read_flight_log_csv(buf, site);
    ASSERT_EQ(back.records.size(), log.records.size());
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        EXPECT_EQ(back.records[i].t_solar_h, log.records[i].t_solar_h);
        EXPECT_EQ(back.records[i].p_solar_exp_W, log.records[i].p_solar_exp_W);
        EXPECT_EQ(*back.records[i].yaw_deg, *log.records[i].yaw_deg);
    }
}

TEST(RunComparison, SelfGeneratedLogHasZeroFmError) {
    const AircraftGeometry g = atlantik_solar_geometry();
    const EfficiencyConfig cfg = EfficiencyConfig::atlantik_solar_defaults();
    const FlightLog log = synthesize_loiter_log(short_spec(), g, cfg);
    const ComparisonResult r = run_comparison(log, g, cfg, ComparisonRequest{});
    ASSERT_EQ(r.kinds.size(), 4u);
    const KindResult* fm = r.find(ModelKind::fm);
    ASSERT_TRUE(fm && fm->ok());
    EXPECT_EQ(fm->report->e_avg_W, 0.0);
    EXPECT_EQ(fm->report->e_rms_W, 0.0);
    EXPECT_EQ(fm->report->e_max_W, 0.0);
    EXPECT_NE(r.find(ModelKind::cdm)->report->e_avg_W, 0.0);
    EXPECT_NE(r.find(ModelKind::cam)->report->e_rms_W, 0.0);
}

TEST(RunComparison, MissingAttitudeFailsOnlyAttitudeModels) {
    std::istringstream in(
        "t_solar_h,p_solar_exp_W,t_amb_C\n"
        "8.0,100,20\n"
        "8.1,105,20\n"
        "8.2,110,20\n");
    const FlightLog log = read_flight_log_csv(in, FlightLog{});
    const ComparisonResult r = run_comparison(log, atlantik_solar_geometry(),
                                              EfficiencyConfig::atlantik_solar_defaults(), ComparisonRequest{});
    EXPECT_TRUE(r.find(ModelKind::cdm)->ok());
    EXPECT_TRUE(r.find(ModelKind::cam)->ok());
    EXPECT_FALSE(r.find(ModelKind::vm)->ok());
    EXPECT_FALSE(r.find(ModelKind::fm)->ok());
    EXPECT_NE(r.find(ModelKind::fm)->error.find("yaw"), std::string::npos);
}

TEST(RunComparison, WindowLimitsAverages) {
    const AircraftGeometry g = atlantik_solar_geometry();
    const EfficiencyConfig cfg = EfficiencyConfig::atlantik_solar_defaults();
    const FlightLog log = synthesize_loiter_log(short_spec(), g, cfg);
    ComparisonRequest req;
    req.kinds = {ModelKind::cdm};
    req.window = TimeWindow{6.25, 6.5};
    const ComparisonResult r = run_comparison(log, g, cfg, req);
    double sum = 0.0;
    std::size_t n = 0;
    for (const FlightRecord& rec : log.records) {
        if (rec.t_solar_h >= 6.25 && rec.t_solar_h <= 6.5) {
            sum += rec.p_solar_exp_W;
            ++n;
        }
    }
    EXPECT_EQ(r.find(ModelKind::cdm)->report->samples, n);
    EXPECT_NEAR(r.find(ModelKind::cdm)->report->p_exp_avg_W, sum / n, 1e-9);

    req.window = TimeWindow{2.0, 3.0};
    EXPECT_THROW((void)run_comparison(log, g, cfg, req), std::invalid_argument);
}

TEST(RunComparison, OutputsAreDeterministic) {
    const AircraftGeometry g = atlantik_solar_geometry();
    const EfficiencyConfig cfg = EfficiencyConfig::atlantik_solar_defaults();
    const FlightLog log = synthesize_loiter_log(short_spec(), g, cfg);
    std::ostringstream a;
    std::ostringstream b;
    const ComparisonResult r1 = run_comparison(log, g, cfg, ComparisonRequest{});
    const ComparisonResult r2 = run_comparison(log, g, cfg, ComparisonRequest{});
    write_comparison_csv(a, r1);
    write_comparison_csv(b, r2);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(error_reports_json(r1), error_reports_json(r2));
    EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "t_solar_h,P_solar_exp,P_solar_cdm,P_solar_cam,P_solar_vm,P_solar_fm");
}

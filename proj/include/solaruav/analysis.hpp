// Flight-log ingestion, moving-average filtering, model error metrics and
// model-versus-flight comparison.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "solaruav/models.hpp"

namespace solaruav {

/// Malformed input data (log rows, misaligned series). Carries the 1-based
/// line number when it comes from a file.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct FlightRecord {
    double t_solar_h = 0.0;
    std::optional<double> roll_deg;
    std::optional<double> pitch_deg;
    std::optional<double> yaw_deg;
    std::optional<double> t_amb_C;
    double p_solar_exp_W = 0.0;
    std::optional<double> mppt_voltage_V;
    std::optional<double> lat_deg;
    std::optional<double> alt_m;

    [[nodiscard]] bool has_attitude() const { return roll_deg && pitch_deg && yaw_deg; }
};

struct FlightLog {
    /// Site defaults; per-record lat/alt columns override them.
    double latitude_deg = 47.0;
    double altitude_m = 0.0;
    int day_of_year = 182;
    std::vector<FlightRecord> records;

    /// Throws DataError unless time is strictly increasing and power >= 0.
    void validate() const;
    [[nodiscard]] SimulationContext context_at(std::size_t index) const;
};

/// Parses the flight-log CSV (header row; required columns t_solar_h and
/// p_solar_exp_W). Throws DataError naming the offending line.
[[nodiscard]] FlightLog read_flight_log_csv(std::istream& in, const FlightLog& site);
void write_flight_log_csv(std::ostream& out, const FlightLog& log);

/// Two-sided moving average over k-w..k+w, truncated at the series ends.
[[nodiscard]] std::vector<double> moving_average(std::span<const double> series, std::size_t semi_window);

struct TimeWindow {
    double t_start_h = 0.0;
    double t_end_h = 24.0;

    [[nodiscard]] bool contains(double t) const { return t >= t_start_h && t <= t_end_h; }
};

struct TimeSeries {
    std::vector<double> t_h;
    std::vector<double> value;
};

/// Signed errors: negative means the model underestimates.
struct ErrorReport {
    double e_avg_W = 0.0;
    double e_rms_W = 0.0;
    double e_max_W = 0.0;  // signed extreme deviation
    double rel_avg = 0.0;
    double rel_rms = 0.0;
    double rel_max = 0.0;  // |e_max| / p_exp_avg
    bool relative_defined = true;
    double p_model_avg_W = 0.0;
    double p_exp_avg_W = 0.0;
    TimeWindow window;
    std::size_t samples = 0;
    std::size_t prefilter_semi_window = 0;
};

/// e_avg and the power averages use the raw samples; the optional prefilter
/// applies to the RMS and maximum errors only. Throws DataError when the
/// timestamps differ or the window holds no samples.
[[nodiscard]] ErrorReport compute_errors(const TimeSeries& model, const TimeSeries& measured, const TimeWindow& window,
                                         std::size_t prefilter_semi_window = 0);

struct ComparisonRequest {
    std::vector<ModelKind> kinds{ModelKind::cdm, ModelKind::cam, ModelKind::vm, ModelKind::fm};
    std::optional<TimeWindow> window;  // whole log when empty
    std::size_t prefilter_semi_window = 0;
    double t_const_C = 25.0;
    ModelOptions options;
};

struct KindResult {
    ModelKind kind = ModelKind::cdm;
    std::optional<ErrorReport> report;
    std::string error;  // set when the log lacks inputs this model needs
    std::vector<PowerBreakdown> series;

    [[nodiscard]] bool ok() const { return report.has_value(); }
};

struct ComparisonResult {
    TimeSeries measured;
    TimeWindow window;
    std::vector<KindResult> kinds;

    [[nodiscard]] const KindResult* find(ModelKind kind) const;
};

/// Evaluates each requested model at every log record and scores it against
/// the measured power inside the window. Models are independent of each other.
[[nodiscard]] ComparisonResult run_comparison(const FlightLog& log, const AircraftGeometry& geom,
                                              const EfficiencyConfig& cfg, const ComparisonRequest& request);

/// Merged time series: t_solar_h, P_solar_exp, then one column per model.
void write_comparison_csv(std::ostream& out, const ComparisonResult& result);
/// JSON object keyed by model kind.
[[nodiscard]] std::string error_reports_json(const ComparisonResult& result);

struct LoiterLogSpec {
    double latitude_deg = 47.0;
    double altitude_m = 500.0;
    int day_of_year = 182;
    double t_start_h = 4.0;
    double t_end_h = 20.0;
    double sample_hz = 2.0;
    double yaw_period_s = 300.0;
    double roll_deg = 3.0;
    double pitch_deg = 0.0;
    double t_amb_C = 20.0;
};

/// Log whose measured power is the FM output along a constant-rate loiter.
[[nodiscard]] FlightLog synthesize_loiter_log(const LoiterLogSpec& spec, const AircraftGeometry& geom,
                                              const EfficiencyConfig& cfg, const ModelOptions& opts = {});

}  // namespace solaruav

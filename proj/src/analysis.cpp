#include "solaruav/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string_view>

#include <json.hpp>

namespace solaruav {

namespace {

constexpr double kTimeTolerance = 1e-9;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view cell, std::string_view column, std::size_t line) {
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw DataError("column '" + std::string(column) + "': cannot parse '" + std::string(cell) + "' as a number",
                        line);
    }
    return value;
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

void FlightLog::validate() const {
    for (std::size_t i = 0; i < records.size(); ++i) {
        const FlightRecord& r = records[i];
        if (r.p_solar_exp_W < 0.0) throw DataError("record " + std::to_string(i) + ": p_solar_exp_W must be >= 0");
        if (i > 0 && !(r.t_solar_h > records[i - 1].t_solar_h)) {
            throw DataError("record " + std::to_string(i) + ": t_solar_h must be strictly increasing");
        }
    }
}

SimulationContext FlightLog::context_at(std::size_t index) const {
    const FlightRecord& r = records.at(index);
    SimulationContext ctx;
    ctx.latitude_deg = r.lat_deg.value_or(latitude_deg);
    ctx.altitude_m = r.alt_m.value_or(altitude_m);
    ctx.day_of_year = day_of_year;
    ctx.solar_time_h = r.t_solar_h;
    return ctx;
}

FlightLog read_flight_log_csv(std::istream& in, const FlightLog& site) {
    FlightLog log = site;
    log.records.clear();

    std::string line;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t, std::less<>> columns;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
        const auto cells = split_csv(line);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!columns.emplace(std::string(cells[i]), i).second) {
                throw DataError("duplicate column '" + std::string(cells[i]) + "'", line_no);
            }
        }
        break;
    }
    if (columns.empty()) throw DataError("flight log is empty (missing header row)");
    for (const char* required : {"t_solar_h", "p_solar_exp_W"}) {
        if (!columns.contains(required)) {
            throw DataError(std::string("missing required column '") + required + "'", line_no);
        }
    }

    const std::size_t width = columns.size();
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != width) {
            throw DataError("expected " + std::to_string(width) + " fields, found " + std::to_string(cells.size()),
                            line_no);
        }
        auto get = [&](std::string_view name) -> std::optional<double> {
            const auto it = columns.find(name);
            if (it == columns.end()) return std::nullopt;
            return parse_number(cells[it->second], name, line_no);
        };
        FlightRecord rec;
        const auto t = get("t_solar_h");
        const auto p = get("p_solar_exp_W");
        if (!t) throw DataError("t_solar_h is empty", line_no);
        if (!p) throw DataError("p_solar_exp_W is empty", line_no);
        rec.t_solar_h = *t;
        rec.p_solar_exp_W = *p;
        rec.roll_deg = get("roll_deg");
        rec.pitch_deg = get("pitch_deg");
        rec.yaw_deg = get("yaw_deg");
        rec.t_amb_C = get("t_amb_C");
        rec.mppt_voltage_V = get("mppt_voltage_V");
        rec.lat_deg = get("lat_deg");
        rec.alt_m = get("alt_m");
        if (rec.p_solar_exp_W < 0.0) throw DataError("p_solar_exp_W must be >= 0", line_no);
        if (!log.records.empty() && !(rec.t_solar_h > log.records.back().t_solar_h)) {
            throw DataError("t_solar_h must be strictly increasing", line_no);
        }
        log.records.push_back(rec);
    }
    return log;
}

void write_flight_log_csv(std::ostream& out, const FlightLog& log) {
    // Only columns present in every record are written.
    auto all = [&](auto member) {
        return !log.records.empty() &&
               std::all_of(log.records.begin(), log.records.end(), [&](const FlightRecord& r) { return (r.*member).has_value(); });
    };
    const bool roll = all(&FlightRecord::roll_deg);
    const bool pitch = all(&FlightRecord::pitch_deg);
    const bool yaw = all(&FlightRecord::yaw_deg);
    const bool t_amb = all(&FlightRecord::t_amb_C);
    const bool volt = all(&FlightRecord::mppt_voltage_V);
    const bool lat = all(&FlightRecord::lat_deg);
    const bool alt = all(&FlightRecord::alt_m);

    out << "t_solar_h";
    if (roll) out << ",roll_deg";
    if (pitch) out << ",pitch_deg";
    if (yaw) out << ",yaw_deg";
    if (t_amb) out << ",t_amb_C";
    out << ",p_solar_exp_W";
    if (volt) out << ",mppt_voltage_V";
    if (lat) out << ",lat_deg";
    if (alt) out << ",alt_m";
    out << '\n';
    for (const FlightRecord& r : log.records) {
        out << format_number(r.t_solar_h);
        if (roll) out << ',' << format_number(*r.roll_deg);
        if (pitch) out << ',' << format_number(*r.pitch_deg);
        if (yaw) out << ',' << format_number(*r.yaw_deg);
        if (t_amb) out << ',' << format_number(*r.t_amb_C);
        out << ',' << format_number(r.p_solar_exp_W);
        if (volt) out << ',' << format_number(*r.mppt_voltage_V);
        if (lat) out << ',' << format_number(*r.lat_deg);
        if (alt) out << ',' << format_number(*r.alt_m);
        out << '\n';
    }
}

std::vector<double> moving_average(std::span<const double> series, std::size_t semi_window) {
    const std::size_t n = series.size();
    std::vector<double> out(n);
    if (semi_window == 0) {
        std::copy(series.begin(), series.end(), out.begin());
        return out;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k >= semi_window ? k - semi_window : 0;
        const std::size_t hi = std::min(n - 1, k + semi_window);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += series[j];
        out[k] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

ErrorReport compute_errors(const TimeSeries& model, const TimeSeries& measured, const TimeWindow& window,
                           std::size_t prefilter_semi_window) {
    if (model.t_h.size() != model.value.size() || measured.t_h.size() != measured.value.size()) {
        throw DataError("time and value columns differ in length");
    }
    if (model.t_h.size() != measured.t_h.size()) {
        throw DataError("model and measured series have different lengths (" + std::to_string(model.t_h.size()) +
                        " vs " + std::to_string(measured.t_h.size()) + ")");
    }
    for (std::size_t i = 0; i < model.t_h.size(); ++i) {
        if (std::abs(model.t_h[i] - measured.t_h[i]) > kTimeTolerance) {
            throw DataError("timestamps are not aligned at sample " + std::to_string(i));
        }
    }
    if (!(window.t_end_h >= window.t_start_h)) throw DataError("window end precedes window start");

    const std::vector<double> model_f = moving_average(model.value, prefilter_semi_window);
    const std::vector<double> exp_f = moving_average(measured.value, prefilter_semi_window);

    ErrorReport r;
    r.window = window;
    r.prefilter_semi_window = prefilter_semi_window;
    double sum_model = 0.0;
    double sum_exp = 0.0;
    double sum_sq = 0.0;
    double extreme = 0.0;
    for (std::size_t i = 0; i < model.t_h.size(); ++i) {
        if (!window.contains(model.t_h[i])) continue;
        ++r.samples;
        sum_model += model.value[i];
        sum_exp += measured.value[i];
        const double d = model_f[i] - exp_f[i];
        sum_sq += d * d;
        if (std::abs(d) > std::abs(extreme)) extreme = d;
    }
    if (r.samples == 0) throw DataError("window contains no samples");

    const auto n = static_cast<double>(r.samples);
    r.p_model_avg_W = sum_model / n;
    r.p_exp_avg_W = sum_exp / n;
    r.e_avg_W = r.p_model_avg_W - r.p_exp_avg_W;
    r.e_rms_W = std::sqrt(sum_sq / n);
    r.e_max_W = extreme;
    if (r.p_exp_avg_W == 0.0) {
        r.relative_defined = false;
        r.rel_avg = r.rel_rms = r.rel_max = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.rel_avg = r.e_avg_W / r.p_exp_avg_W;
        r.rel_rms = r.e_rms_W / r.p_exp_avg_W;
        r.rel_max = std::abs(r.e_max_W) / r.p_exp_avg_W;
    }
    return r;
}

const KindResult* ComparisonResult::find(ModelKind kind) const {
    for (const KindResult& k : kinds) {
        if (k.kind == kind) return &k;
    }
    return nullptr;
}

namespace {

KindResult evaluate_kind(ModelKind kind, const FlightLog& log, const AircraftGeometry& geom, const EfficiencyConfig& cfg,
                         const ComparisonRequest& request, const TimeSeries& measured, const TimeWindow& window) {
    KindResult result;
    result.kind = kind;
    const std::string name(to_string(kind));
    if (requires_attitude(kind)) {
        for (std::size_t i = 0; i < log.records.size(); ++i) {
            if (!log.records[i].has_attitude()) {
                result.error = name + " needs roll_deg, pitch_deg and yaw_deg; record " + std::to_string(i) +
                               " lacks them";
                return result;
            }
        }
    }
    if (kind == ModelKind::fm) {
        for (std::size_t i = 0; i < log.records.size(); ++i) {
            if (!log.records[i].t_amb_C) {
                result.error = "fm needs the t_amb_C column; record " + std::to_string(i) + " lacks it";
                return result;
            }
        }
    }

    try {
        result.series.reserve(log.records.size());
        TimeSeries modeled;
        modeled.t_h = measured.t_h;
        modeled.value.reserve(log.records.size());
        double p_prev = 0.0;
        for (std::size_t i = 0; i < log.records.size(); ++i) {
            const FlightRecord& rec = log.records[i];
            const Attitude att = rec.has_attitude() ? Attitude{*rec.roll_deg, *rec.pitch_deg, wrap_yaw_deg(*rec.yaw_deg)}
                                                    : Attitude{};
            PowerBreakdown step = evaluate_model(kind, log.context_at(i), att, geom, cfg, request.t_const_C,
                                                 rec.t_amb_C.value_or(request.t_const_C), p_prev, request.options);
            p_prev = step.total_W;
            modeled.value.push_back(step.total_W);
            result.series.push_back(std::move(step));
        }
        result.report = compute_errors(modeled, measured, window, request.prefilter_semi_window);
    } catch (const std::exception& e) {
        result.error = name + ": " + e.what();
        result.report.reset();
    }
    return result;
}

}  // namespace

ComparisonResult run_comparison(const FlightLog& log, const AircraftGeometry& geom, const EfficiencyConfig& cfg,
                                const ComparisonRequest& request) {
    if (log.records.empty()) throw DataError("flight log has no records");
    log.validate();

    ComparisonResult result;
    for (const FlightRecord& r : log.records) {
        result.measured.t_h.push_back(r.t_solar_h);
        result.measured.value.push_back(r.p_solar_exp_W);
    }
    const double first = log.records.front().t_solar_h;
    const double last = log.records.back().t_solar_h;
    result.window = request.window.value_or(TimeWindow{first, last});
    if (!(result.window.t_end_h > result.window.t_start_h)) {
        throw std::invalid_argument("window end must be after window start");
    }
    if (result.window.t_start_h < first - kTimeTolerance || result.window.t_end_h > last + kTimeTolerance) {
        throw std::invalid_argument("window [" + format_number(result.window.t_start_h) + ", " +
                                    format_number(result.window.t_end_h) + "] h lies outside the log span [" +
                                    format_number(first) + ", " + format_number(last) + "] h");
    }

    std::vector<std::future<KindResult>> jobs;
    jobs.reserve(request.kinds.size());
    for (ModelKind kind : request.kinds) {
        jobs.push_back(std::async(std::launch::async, evaluate_kind, kind, std::cref(log), std::cref(geom),
                                  std::cref(cfg), std::cref(request), std::cref(result.measured),
                                  std::cref(result.window)));
    }
    for (auto& job : jobs) result.kinds.push_back(job.get());
    return result;
}

void write_comparison_csv(std::ostream& out, const ComparisonResult& result) {
    out << "t_solar_h,P_solar_exp";
    for (const KindResult& k : result.kinds) {
        if (k.ok()) out << ",P_solar_" << to_string(k.kind);
    }
    out << '\n';
    for (std::size_t i = 0; i < result.measured.t_h.size(); ++i) {
        out << format_number(result.measured.t_h[i]) << ',' << format_number(result.measured.value[i]);
        for (const KindResult& k : result.kinds) {
            if (k.ok()) out << ',' << format_number(k.series[i].total_W);
        }
        out << '\n';
    }
}

std::string error_reports_json(const ComparisonResult& result) {
    using nlohmann::ordered_json;
    ordered_json doc = ordered_json::object();
    auto number_or_null = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
    for (const KindResult& k : result.kinds) {
        ordered_json entry;
        if (k.ok()) {
            const ErrorReport& r = *k.report;
            entry["status"] = "ok";
            entry["window_h"] = {r.window.t_start_h, r.window.t_end_h};
            entry["samples"] = r.samples;
            entry["prefilter_semi_window"] = r.prefilter_semi_window;
            entry["p_model_avg_W"] = r.p_model_avg_W;
            entry["p_exp_avg_W"] = r.p_exp_avg_W;
            entry["e_avg_W"] = r.e_avg_W;
            entry["e_rms_W"] = r.e_rms_W;
            entry["e_max_W"] = r.e_max_W;
            entry["relative_defined"] = r.relative_defined;
            entry["rel_avg"] = number_or_null(r.rel_avg);
            entry["rel_rms"] = number_or_null(r.rel_rms);
            entry["rel_max"] = number_or_null(r.rel_max);
        } else {
            entry["status"] = "error";
            entry["error"] = k.error;
        }
        doc[std::string(to_string(k.kind))] = std::move(entry);
    }
    return doc.dump(2);
}

FlightLog synthesize_loiter_log(const LoiterLogSpec& spec, const AircraftGeometry& geom, const EfficiencyConfig& cfg,
                                const ModelOptions& opts) {
    if (!(spec.sample_hz > 0.0)) throw std::invalid_argument("sample_hz must be > 0");
    if (!(spec.t_end_h > spec.t_start_h)) throw std::invalid_argument("t_end_h must exceed t_start_h");
    if (!(spec.yaw_period_s > 0.0)) throw std::invalid_argument("yaw_period_s must be > 0");

    FlightLog log;
    log.latitude_deg = spec.latitude_deg;
    log.altitude_m = spec.altitude_m;
    log.day_of_year = spec.day_of_year;

    const double dt_h = 1.0 / (spec.sample_hz * 3600.0);
    const auto count = static_cast<std::size_t>(std::floor((spec.t_end_h - spec.t_start_h) / dt_h + 1e-9)) + 1;
    const double yaw_rate_deg_per_h = 360.0 * 3600.0 / spec.yaw_period_s;
    log.records.reserve(count);
    double p_prev = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        FlightRecord rec;
        rec.t_solar_h = spec.t_start_h + static_cast<double>(k) * dt_h;
        if (rec.t_solar_h >= 24.0) break;
        const double elapsed_h = rec.t_solar_h - spec.t_start_h;
        const Attitude att{spec.roll_deg, spec.pitch_deg, wrap_yaw_deg(yaw_rate_deg_per_h * elapsed_h)};
        rec.roll_deg = att.roll_deg;
        rec.pitch_deg = att.pitch_deg;
        rec.yaw_deg = att.yaw_deg;
        rec.t_amb_C = spec.t_amb_C;
        log.records.push_back(rec);
        const PowerBreakdown p = power_fm(log.context_at(k), att, geom, cfg, spec.t_amb_C, p_prev, opts);
        p_prev = p.total_W;
        log.records.back().p_solar_exp_W = p.total_W;
    }
    return log;
}

}  // namespace solaruav

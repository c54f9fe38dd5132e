#include "solaruav/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "solaruav/sun_env.hpp"

namespace solaruav {

Curve1D::Curve1D(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw std::invalid_argument("curve needs at least one knot");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i].first) || !std::isfinite(knots_[i].second)) {
            throw std::invalid_argument("curve knot " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(knots_[i].first > knots_[i - 1].first)) {
            throw std::invalid_argument("curve knot x values must be strictly increasing (knot " +
                                        std::to_string(i) + ")");
        }
    }
}

Curve1D Curve1D::constant(double value, double x_min, double x_max) {
    return Curve1D({{x_min, value}, {x_max, value}});
}

double Curve1D::operator()(double x) const {
    if (knots_.empty()) throw std::logic_error("evaluating an empty curve");
    if (x <= knots_.front().first) return knots_.front().second;
    if (x >= knots_.back().first) return knots_.back().second;
    const auto hi = std::upper_bound(knots_.begin(), knots_.end(), x,
                                     [](double value, const Knot& k) { return value < k.first; });
    const auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

double Curve1D::max_value() const {
    return std::max_element(knots_.begin(), knots_.end(),
                            [](const Knot& a, const Knot& b) { return a.second < b.second; })
        ->second;
}

double Curve1D::min_value() const {
    return std::min_element(knots_.begin(), knots_.end(),
                            [](const Knot& a, const Knot& b) { return a.second < b.second; })
        ->second;
}

double Curve1D::max_slope() const {
    double slope = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        slope = std::max(slope, std::abs((knots_[i].second - knots_[i - 1].second) /
                                         (knots_[i].first - knots_[i - 1].first)));
    }
    return slope;
}

namespace {

void require_factor(double v, const char* name) {
    if (!(v > 0.0 && v <= 1.2)) {
        throw std::invalid_argument(std::string(name) + " must be within (0, 1.2], got " + std::to_string(v));
    }
}

void require_curve(const Curve1D& c, const char* name) {
    if (c.empty()) throw std::invalid_argument(std::string(name) + " is empty");
    if (c.min_value() < 0.0 || c.max_value() > 1.2) {
        throw std::invalid_argument(std::string(name) + " values must be within [0, 1.2]");
    }
}

}  // namespace

void EfficiencyConfig::validate() const {
    require_factor(eta_sm_stc, "eta_sm_stc");
    require_factor(eps_cbr, "eps_cbr");
    require_factor(eps_gamma_diff, "eps_gamma_diff");
    require_factor(eta_mppt_const, "eta_mppt_const");
    if (!(c_l_per_K >= 0.0) || !std::isfinite(c_l_per_K)) throw std::invalid_argument("c_l_per_K must be >= 0");
    if (!std::isfinite(t_stc_C)) throw std::invalid_argument("t_stc_C is not finite");
    if (!(delta_t_max_K >= 0.0) || !std::isfinite(delta_t_max_K)) {
        throw std::invalid_argument("delta_t_max_K must be >= 0");
    }
    if (!(p_solar_max_W > 0.0) || !std::isfinite(p_solar_max_W)) {
        throw std::invalid_argument("p_solar_max_W must be > 0");
    }
    require_curve(curve_eps_I, "curve_eps_I");
    require_curve(curve_eps_gamma, "curve_eps_gamma");
    require_curve(curve_eta_mppt, "curve_eta_mppt");
    const double at_zero = curve_eps_gamma(0.0);
    if (at_zero < 0.95 || at_zero > 1.0) {
        throw std::invalid_argument("curve_eps_gamma(0) must be within [0.95, 1.0]");
    }
    double previous = curve_eps_gamma(50.0);
    for (const auto& [x, y] : curve_eps_gamma.knots()) {
        if (x <= 50.0) continue;
        if (y > previous + 1e-12) {
            throw std::invalid_argument("curve_eps_gamma must be non-increasing beyond 50 deg");
        }
        previous = y;
    }
}

Curve1D default_curve_eps_irradiance() {
    // Relative efficiency vs total irradiance; 1.0 at the 1000 W/m^2 STC knot.
    return Curve1D({{0.0, 0.86},
                    {50.0, 0.925},
                    {100.0, 0.95},
                    {200.0, 0.972},
                    {300.0, 0.984},
                    {400.0, 0.992},
                    {500.0, 0.997},
                    {600.0, 1.0},
                    {700.0, 1.002},
                    {800.0, 1.002},
                    {900.0, 1.001},
                    {1000.0, 1.0},
                    {1100.0, 0.997},
                    {1200.0, 0.994}});
}

Curve1D default_curve_eps_gamma() {
    return Curve1D({{0.0, 1.0},
                    {10.0, 0.993},
                    {20.0, 0.972},
                    {30.0, 0.938},
                    {40.0, 0.89},
                    {50.0, 0.83},
                    {55.0, 0.794},
                    {60.0, 0.754},
                    {65.0, 0.71},
                    {70.0, 0.66},
                    {75.0, 0.60},
                    {80.0, 0.53},
                    {85.0, 0.41},
                    {88.0, 0.26},
                    {90.0, 0.0}});
}

Curve1D default_curve_eta_mppt() {
    return Curve1D({{0.0, 0.70},
                    {5.0, 0.75},
                    {10.0, 0.82},
                    {20.0, 0.88},
                    {30.0, 0.91},
                    {50.0, 0.94},
                    {75.0, 0.955},
                    {100.0, 0.965},
                    {150.0, 0.97},
                    {200.0, 0.97},
                    {250.0, 0.968},
                    {300.0, 0.965}});
}

EfficiencyConfig EfficiencyConfig::atlantik_solar_defaults() {
    EfficiencyConfig cfg;
    cfg.curve_eps_I = default_curve_eps_irradiance();
    cfg.curve_eps_gamma = default_curve_eps_gamma();
    cfg.curve_eta_mppt = default_curve_eta_mppt();
    return cfg;
}

double eps_irradiance(const EfficiencyConfig& cfg, double i_total_w_m2) {
    return cfg.curve_eps_I(std::max(0.0, i_total_w_m2));
}

double eps_temperature(const EfficiencyConfig& cfg, double t_sm_C) {
    return 1.0 - cfg.c_l_per_K * (t_sm_C - cfg.t_stc_C);
}

double module_temperature(const EfficiencyConfig& cfg, double t_amb_C, double p_solar_W) {
    return t_amb_C + cfg.delta_t_max_K * p_solar_W / cfg.p_solar_max_W;
}

double eps_gamma(const EfficiencyConfig& cfg, double gamma_deg) {
    if (gamma_deg >= 90.0) return 0.0;
    return cfg.curve_eps_gamma(gamma_deg);
}

double eps_gamma_diffuse(const Curve1D& curve) {
    // The curve is linear between breaks, so each segment integrates exactly:
    // int (c0 + c1 g) sin g cos g dg = c0 (-cos 2g / 4) + c1 (-g cos 2g / 4 + sin 2g / 8).
    std::vector<double> breaks{0.0, 90.0};
    for (const auto& [x, y] : curve.knots()) {
        if (x > 0.0 && x < 90.0) breaks.push_back(x);
    }
    std::sort(breaks.begin(), breaks.end());

    auto antiderivative = [](double c0, double c1, double g) {
        return -0.25 * c0 * std::cos(2.0 * g) + c1 * (-0.25 * g * std::cos(2.0 * g) + 0.125 * std::sin(2.0 * g));
    };
    double integral = 0.0;
    for (std::size_t s = 1; s < breaks.size(); ++s) {
        const double a = breaks[s - 1] * kDegToRad;
        const double b = breaks[s] * kDegToRad;
        const double ya = curve(breaks[s - 1]);
        const double yb = curve(breaks[s]);
        const double c1 = (yb - ya) / (b - a);
        const double c0 = ya - c1 * a;
        integral += antiderivative(c0, c1, b) - antiderivative(c0, c1, a);
    }
    // The weight integrates to 1/2 over the hemisphere.
    return 2.0 * integral;
}

double eta_sm_direct(const EfficiencyConfig& cfg, double eps_I, double eps_T, double eps_g) {
    return cfg.eta_sm_stc * eps_I * eps_T * eps_g * cfg.eps_cbr;
}

double eta_sm_diffuse(const EfficiencyConfig& cfg, double eps_I, double eps_T) {
    return cfg.eta_sm_stc * eps_I * eps_T * cfg.eps_gamma_diff;
}

double eta_mppt(const EfficiencyConfig& cfg, double p_solar_W, MpptMode mode) {
    if (mode == MpptMode::constant) return cfg.eta_mppt_const;
    return cfg.curve_eta_mppt(std::max(0.0, p_solar_W));
}

}  // namespace solaruav

// Solar module and MPPT efficiency chain.
//
// The module efficiency is the STC efficiency scaled by component
// efficiencies for irradiance level (eps_I), temperature (eps_T), angle of
// incidence (eps_gamma) and wing camber (eps_cbr). Direct and diffuse light
// are treated separately; camber applies to the direct beam only.
#pragma once

#include <utility>
#include <vector>

namespace solaruav {

/// Piecewise-linear lookup table, clamped to the end values outside its range.
class Curve1D {
public:
    using Knot = std::pair<double, double>;

    Curve1D() = default;
    /// Throws std::invalid_argument unless x is strictly increasing and all
    /// values are finite.
    explicit Curve1D(std::vector<Knot> knots);

    static Curve1D constant(double value, double x_min, double x_max);

    [[nodiscard]] double operator()(double x) const;

    [[nodiscard]] const std::vector<Knot>& knots() const { return knots_; }
    [[nodiscard]] bool empty() const { return knots_.empty(); }
    [[nodiscard]] double x_min() const { return knots_.front().first; }
    [[nodiscard]] double x_max() const { return knots_.back().first; }
    [[nodiscard]] double max_value() const;
    [[nodiscard]] double min_value() const;
    /// Largest |dy/dx| over all segments (Lipschitz constant).
    [[nodiscard]] double max_slope() const;

    friend bool operator==(const Curve1D&, const Curve1D&) = default;

private:
    std::vector<Knot> knots_;
};

enum class MpptMode { curve, constant };

struct EfficiencyConfig {
    double eta_sm_stc = 0.237;
    double eps_cbr = 1.0;
    double c_l_per_K = 0.003;
    double t_stc_C = 25.0;
    double delta_t_max_K = 12.0;
    double p_solar_max_W = 265.0;
    double eps_gamma_diff = 0.83;
    double eta_mppt_const = 0.95;
    Curve1D curve_eps_I;       // over total irradiance, W/m^2
    Curve1D curve_eps_gamma;   // over angle of incidence, degrees
    Curve1D curve_eta_mppt;    // over MPPT input power, W

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    /// SunPower E60 / AtlantikSolar defaults with approximate efficiency tables.
    static EfficiencyConfig atlantik_solar_defaults();
};

[[nodiscard]] Curve1D default_curve_eps_irradiance();
[[nodiscard]] Curve1D default_curve_eps_gamma();
[[nodiscard]] Curve1D default_curve_eta_mppt();

[[nodiscard]] double eps_irradiance(const EfficiencyConfig& cfg, double i_total_w_m2);

/// 1 - c_l (T - T_stc); exceeds 1 below 25 degC.
[[nodiscard]] double eps_temperature(const EfficiencyConfig& cfg, double t_sm_C);

/// T_amb + dT_max * P / P_max.
[[nodiscard]] double module_temperature(const EfficiencyConfig& cfg, double t_amb_C, double p_solar_W);

/// Curve lookup; 0 for back-facing surfaces (gamma >= 90 deg).
[[nodiscard]] double eps_gamma(const EfficiencyConfig& cfg, double gamma_deg);

/// Average of an incidence curve over an isotropic sky hemisphere, weighted by
/// projected solid angle sin(g) cos(g) dg.
[[nodiscard]] double eps_gamma_diffuse(const Curve1D& curve);

[[nodiscard]] double eta_sm_direct(const EfficiencyConfig& cfg, double eps_I, double eps_T, double eps_g);
[[nodiscard]] double eta_sm_diffuse(const EfficiencyConfig& cfg, double eps_I, double eps_T);

[[nodiscard]] double eta_mppt(const EfficiencyConfig& cfg, double p_solar_W, MpptMode mode);

}  // namespace solaruav

#include "solaruav/sun_env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace solaruav {

void SimulationContext::validate() const {
    if (!std::isfinite(latitude_deg) || latitude_deg < -90.0 || latitude_deg > 90.0) {
        throw std::invalid_argument("latitude_deg must be within [-90, 90], got " +
                                    std::to_string(latitude_deg));
    }
    if (!std::isfinite(altitude_m) || altitude_m < -500.0) {
        throw std::invalid_argument("altitude_m must be >= -500, got " + std::to_string(altitude_m));
    }
    if (day_of_year < 1 || day_of_year > 366) {
        throw std::invalid_argument("day_of_year must be within [1, 366], got " +
                                    std::to_string(day_of_year));
    }
    if (!std::isfinite(solar_time_h) || solar_time_h < 0.0 || solar_time_h >= 24.0) {
        throw std::invalid_argument("solar_time_h must be within [0, 24), got " +
                                    std::to_string(solar_time_h));
    }
}

double Irradiance::global_horizontal(const SunState& sun) const {
    const double cos_zenith = std::max(0.0, std::sin(sun.elevation_deg * kDegToRad));
    return direct_normal_w_m2 * cos_zenith + diffuse_horizontal_w_m2;
}

HottelCoefficients HottelCoefficients::for_climate(ClimateType climate) {
    switch (climate) {
        case ClimateType::tropical:
            return {0.95, 0.98, 1.02};
        case ClimateType::midlatitude_summer:
            return {0.97, 0.99, 1.02};
        case ClimateType::subarctic_summer:
            return {0.99, 0.99, 1.01};
        case ClimateType::midlatitude_winter:
            return {1.03, 1.01, 1.00};
    }
    return {};
}

int effective_day(int day_of_year) { return std::clamp(day_of_year, 1, 365); }

double declination_deg(int day_of_year, DeclinationModel model) {
    const double n = effective_day(day_of_year);
    if (model == DeclinationModel::cooper) {
        return 23.45 * std::sin(2.0 * kPi * (284.0 + n) / 365.0);
    }
    const double b = 2.0 * kPi * (n - 1.0) / 365.0;
    const double rad = 0.006918 - 0.399912 * std::cos(b) + 0.070257 * std::sin(b) -
                       0.006758 * std::cos(2.0 * b) + 0.000907 * std::sin(2.0 * b) -
                       0.002697 * std::cos(3.0 * b) + 0.00148 * std::sin(3.0 * b);
    return rad * kRadToDeg;
}

double extraterrestrial_normal_w_m2(int day_of_year) {
    const double n = effective_day(day_of_year);
    return kSolarConstant * (1.0 + 0.033 * std::cos(2.0 * kPi * n / 365.0));
}

SunState sun_position(const SimulationContext& ctx, DeclinationModel model) {
    return sun_position_with_declination(ctx, declination_deg(ctx.day_of_year, model));
}

SunState sun_position_with_declination(const SimulationContext& ctx, double decl_deg) {
    const double lat = ctx.latitude_deg * kDegToRad;
    const double decl = decl_deg * kDegToRad;
    const double hour_angle_deg = 15.0 * (ctx.solar_time_h - 12.0);
    const double omega = hour_angle_deg * kDegToRad;

    // Local horizon components of the sun direction.
    const double north = std::sin(decl) * std::cos(lat) - std::cos(decl) * std::sin(lat) * std::cos(omega);
    const double east = -std::cos(decl) * std::sin(omega);
    const double up = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(omega);

    SunState sun;
    sun.declination_deg = decl_deg;
    sun.hour_angle_deg = hour_angle_deg;
    sun.r_sun = Vec3(north, east, -up).normalized();
    const HorizonAngles angles = angles_from_vector(sun.r_sun);
    sun.elevation_deg = angles.elevation_deg;
    sun.azimuth_deg = angles.azimuth_deg;
    return sun;
}

Vec3 sun_vector(double elevation_deg, double azimuth_deg) {
    const double el = elevation_deg * kDegToRad;
    const double az = azimuth_deg * kDegToRad;
    return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), -std::sin(el)};
}

HorizonAngles angles_from_vector(const Vec3& r_sun) {
    const Vec3 r = r_sun.normalized();
    const double horizontal = std::hypot(r.x(), r.y());
    HorizonAngles out{};
    out.elevation_deg = std::atan2(-r.z(), horizontal) * kRadToDeg;
    double az = std::atan2(r.y(), r.x()) * kRadToDeg;
    if (az < 0.0) az += 360.0;
    if (az >= 360.0) az -= 360.0;
    out.azimuth_deg = az;
    return out;
}

double hottel_beam_transmittance(double cos_zenith, double altitude_m, const HottelCoefficients& c) {
    if (cos_zenith <= 0.0) return 0.0;
    const double a_km = std::clamp(altitude_m / 1000.0, -0.5, 2.5);
    const double a0 = c.r0 * (0.4237 - 0.00821 * (6.0 - a_km) * (6.0 - a_km));
    const double a1 = c.r1 * (0.5055 + 0.00595 * (6.5 - a_km) * (6.5 - a_km));
    const double k = c.rk * (0.2711 + 0.01858 * (2.5 - a_km) * (2.5 - a_km));
    return std::clamp(a0 + a1 * std::exp(-k / cos_zenith), 0.0, 1.0);
}

Irradiance clear_sky_irradiance(const SimulationContext& ctx, const SunState& sun,
                                const HottelCoefficients& coeffs) {
    if (sun.elevation_deg <= 0.0) return {};
    const double cos_zenith = std::sin(sun.elevation_deg * kDegToRad);
    const double g_on = extraterrestrial_normal_w_m2(ctx.day_of_year);
    const double tau_b = hottel_beam_transmittance(cos_zenith, ctx.altitude_m, coeffs);
    // Liu-Jordan diffuse transmittance.
    const double tau_d = std::max(0.0, 0.271 - 0.294 * tau_b);
    return {g_on * tau_b, g_on * cos_zenith * tau_d};
}

}  // namespace solaruav

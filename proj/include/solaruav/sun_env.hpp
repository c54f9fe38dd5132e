// Sun position and clear-sky irradiance for a given place, day and solar time.
#pragma once

#include <Eigen/Core>

namespace solaruav {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

/// Solar constant used for the extraterrestrial beam (W/m^2).
inline constexpr double kSolarConstant = 1367.0;

/// Where and when. All times are local solar time (12:00 = solar noon).
struct SimulationContext {
    double latitude_deg = 0.0;
    double altitude_m = 0.0;
    int day_of_year = 1;
    double solar_time_h = 12.0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct SunState {
    double elevation_deg = 0.0;
    double azimuth_deg = 0.0;   // 0 = North, clockwise positive, [0, 360)
    double declination_deg = 0.0;
    double hour_angle_deg = 0.0;
    Vec3 r_sun = Vec3(0.0, 0.0, -1.0);  // unit vector toward the sun, NED
};

struct Irradiance {
    double direct_normal_w_m2 = 0.0;
    double diffuse_horizontal_w_m2 = 0.0;

    /// Beam on a horizontal plane plus diffuse.
    [[nodiscard]] double global_horizontal(const SunState& sun) const;
};

enum class DeclinationModel { spencer, cooper };

/// Hottel climate-type correction factors (r0, r1, rk).
enum class ClimateType { tropical, midlatitude_summer, subarctic_summer, midlatitude_winter };

struct HottelCoefficients {
    double r0 = 0.97;
    double r1 = 0.99;
    double rk = 1.02;

    static HottelCoefficients for_climate(ClimateType climate);
};

/// Day 366 is folded onto day 365.
[[nodiscard]] int effective_day(int day_of_year);

[[nodiscard]] double declination_deg(int day_of_year, DeclinationModel model = DeclinationModel::spencer);

/// Extraterrestrial normal irradiance including orbital eccentricity.
[[nodiscard]] double extraterrestrial_normal_w_m2(int day_of_year);

[[nodiscard]] SunState sun_position(const SimulationContext& ctx,
                                    DeclinationModel model = DeclinationModel::spencer);

/// Same geometry with an explicitly supplied declination.
[[nodiscard]] SunState sun_position_with_declination(const SimulationContext& ctx, double declination_deg);

/// NED unit vector for the given elevation/azimuth.
[[nodiscard]] Vec3 sun_vector(double elevation_deg, double azimuth_deg);

struct HorizonAngles {
    double elevation_deg;
    double azimuth_deg;
};
[[nodiscard]] HorizonAngles angles_from_vector(const Vec3& r_sun);

/// Hottel beam transmittance for the given zenith cosine and altitude. The
/// altitude is clamped to the fitted range [-0.5, 2.5] km.
[[nodiscard]] double hottel_beam_transmittance(double cos_zenith, double altitude_m,
                                               const HottelCoefficients& coeffs);

/// Hottel beam with Liu-Jordan diffuse. Zero for elevation <= 0.
[[nodiscard]] Irradiance clear_sky_irradiance(const SimulationContext& ctx, const SunState& sun,
                                              const HottelCoefficients& coeffs = {});

}  // namespace solaruav

// Aircraft surface geometry, attitude rotation and angle of incidence.
//
// Frames: body is x forward, y right wing, z down. The inertial frame is
// North-East-Down. A flat, unrotated solar surface has the up-normal [0,0,-1].
#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "solaruav/sun_env.hpp"

namespace solaruav {

using Mat3 = Eigen::Matrix3d;
using Polygon3 = std::vector<Vec3>;

enum class WingSide { left, center_left, center_right, right };

/// +1 for the left wing half, -1 for the right (rotation sign about body x).
[[nodiscard]] double dihedral_sign(WingSide side);

struct SurfaceSpec {
    int id = 0;
    double area_m2 = 0.0;
    WingSide side = WingSide::left;
    double cell_pitch_deg = 0.0;
    Polygon3 polygon_body;
};

struct Occluder {
    std::string name;
    Polygon3 polygon_body;
};

/// Order in which the mounting rotations are composed onto the flat normal.
enum class MountingOrder { pitch_then_dihedral, dihedral_then_pitch };

struct AircraftGeometry {
    std::vector<SurfaceSpec> surfaces;
    double dihedral_deg = 0.0;
    double wing_pitch_deg = 0.0;
    std::vector<Occluder> occluders;
    MountingOrder mounting_order = MountingOrder::pitch_then_dihedral;

    /// Throws std::invalid_argument naming the offending surface/occluder.
    void validate() const;
    [[nodiscard]] double total_area_m2() const;
};

struct Attitude {
    double roll_deg = 0.0;
    double pitch_deg = 0.0;
    double yaw_deg = 0.0;

    void validate() const;
};

/// Wraps any yaw into [0, 360).
[[nodiscard]] double wrap_yaw_deg(double yaw_deg);

[[nodiscard]] Mat3 rotation_x(double angle_rad);
[[nodiscard]] Mat3 rotation_y(double angle_rad);
[[nodiscard]] Mat3 rotation_z(double angle_rad);

/// Surface up-normal in the body frame. Positive pitch offsets
/// (Δθ_wing + cell pitch, leading edge up) tilt the normal aft; the dihedral
/// tilts each wing half's normal inboard.
[[nodiscard]] Vec3 surface_normal_body(const AircraftGeometry& geom, const SurfaceSpec& surface);

/// Normal used by the single-surface verification model: zero dihedral, the
/// wing pitch plus the area-weighted cell pitch of the center surfaces (all
/// surfaces if none are marked center).
[[nodiscard]] Vec3 central_wing_normal_body(const AircraftGeometry& geom);

/// Z-Y-X direction cosine matrix R_z(yaw) R_y(pitch) R_x(roll), body -> NED.
[[nodiscard]] Mat3 body_to_inertial(const Attitude& att);

/// |acos(n . r_sun)| in degrees, in [0, 180].
[[nodiscard]] double incidence_angle_deg(const Vec3& n_inertial, const Vec3& r_sun);

// Planar polygon helpers shared with the shading module.

/// Newell normal, unnormalized; its length is twice the polygon area.
[[nodiscard]] Vec3 newell_normal(const Polygon3& poly);
[[nodiscard]] double polygon_area(const Polygon3& poly);
[[nodiscard]] double planarity_deviation(const Polygon3& poly);
[[nodiscard]] bool is_convex(const Polygon3& poly);

/// AtlantikSolar defaults: six wing surfaces plus horizontal and vertical tail.
/// Polygons are approximate rectangles whose areas match the specified areas.
[[nodiscard]] AircraftGeometry atlantik_solar_geometry();

}  // namespace solaruav

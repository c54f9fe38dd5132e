// Tail shadows on the solar surfaces.
//
// Each occluder polygon is projected along the sun ray onto the plane of each
// surface polygon and clipped against it. Shadows of several occluders are
// merged by inclusion-exclusion, which is exact for convex pieces.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "solaruav/geometry.hpp"
#include "solaruav/sun_env.hpp"

namespace solaruav {

struct SurfaceShading {
    int surface_id = 0;
    double shaded_area_m2 = 0.0;
    double shaded_fraction = 0.0;
};

struct DegenerateProjection {
    int surface_id = 0;
    std::string occluder;
};

struct ShadingReport {
    std::vector<SurfaceShading> per_surface;  // same order as geometry.surfaces
    double sun_elevation_deg = 0.0;
    bool any_shading = false;
    std::vector<DegenerateProjection> degenerate;

    [[nodiscard]] const SurfaceShading* find(int surface_id) const;
    [[nodiscard]] double total_shaded_area_m2() const;
};

/// Sun direction and occluders are evaluated in the body frame; `att` rotates
/// the inertial sun vector into it.
[[nodiscard]] ShadingReport compute_shading(const AircraftGeometry& geom, const Attitude& att, const SunState& sun);

/// Same, with the sun direction already expressed in the body frame.
[[nodiscard]] ShadingReport compute_shading_body(const AircraftGeometry& geom, const Vec3& r_sun_body,
                                                 double sun_elevation_deg);

/// Maps a shading report to one direct-beam multiplier per surface (geometry
/// order). An empty function means "no power loss from shading".
using ShadingPlugin = std::function<std::vector<double>(const ShadingReport&, const AircraftGeometry&)>;

/// Built-in plugins: "none" (empty) and "beam_area" (1 - shaded fraction).
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] ShadingPlugin shading_plugin_by_name(const std::string& name);

namespace polygon2d {

struct Point {
    double x;
    double y;
};
using Polygon = std::vector<Point>;

[[nodiscard]] double signed_area(const Polygon& poly);
/// Sutherland-Hodgman clip of `subject` by a convex counter-clockwise `clip`.
[[nodiscard]] Polygon clip_convex(const Polygon& subject, const Polygon& clip);
/// Reorders to counter-clockwise if needed.
[[nodiscard]] Polygon make_ccw(Polygon poly);

}  // namespace polygon2d

}  // namespace solaruav

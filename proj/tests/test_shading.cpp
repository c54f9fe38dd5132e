#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles/shading_mc_oracle.hpp"
#include "solaruav/shading.hpp"
#include "support/random_shading.hpp"

using namespace solaruav;

namespace {

AircraftGeometry unit_panel_with(const Polygon3& occluder) {
    AircraftGeometry g;
    SurfaceSpec s;
    s.id = 7;
    s.area_m2 = 1.0;
    s.polygon_body = {Vec3(0.5, -0.5, 0), Vec3(0.5, 0.5, 0), Vec3(-0.5, 0.5, 0), Vec3(-0.5, -0.5, 0)};
    if (newell_normal(s.polygon_body).z() > 0) std::reverse(s.polygon_body.begin(), s.polygon_body.end());
    g.surfaces.push_back(s);
    g.occluders.push_back({"plate", occluder});
    return g;
}

Polygon3 square(double cx, double cy, double z, double half) {
    return {Vec3(cx + half, cy - half, z), Vec3(cx + half, cy + half, z), Vec3(cx - half, cy + half, z),
            Vec3(cx - half, cy - half, z)};
}

}  // namespace

TEST(Polygon2d, ClipAndArea) {
    using namespace polygon2d;
    const Polygon a{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    const Polygon b{{1, 1}, {3, 1}, {3, 3}, {1, 3}};
    EXPECT_DOUBLE_EQ(signed_area(a), 4.0);
    EXPECT_NEAR(std::abs(signed_area(clip_convex(a, b))), 1.0, 1e-12);
    const Polygon far{{5, 5}, {6, 5}, {6, 6}};
    EXPECT_TRUE(clip_convex(a, far).empty() || std::abs(signed_area(clip_convex(a, far))) < 1e-15);
    const Polygon cw{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    EXPECT_GT(signed_area(make_ccw(cw)), 0.0);
}

TEST(Shading, OverheadSunCastsPlateShadowStraightDown) {
    const AircraftGeometry g = unit_panel_with(square(0.25, 0.25, -0.3, 0.25));
    const ShadingReport r = compute_shading_body(g, Vec3(0, 0, -1), 90.0);
    ASSERT_EQ(r.per_surface.size(), 1u);
    EXPECT_NEAR(r.per_surface[0].shaded_area_m2, 0.25, 1e-12);
    EXPECT_NEAR(r.per_surface[0].shaded_fraction, 0.25, 1e-12);
    EXPECT_TRUE(r.any_shading);
    EXPECT_NE(r.find(7), nullptr);
    EXPECT_EQ(r.find(8), nullptr);
}

TEST(Shading, ObliqueSunShiftsShadow) {
    // Plate 0.3 m up; sun at 45 deg from the +x direction shifts the shadow 0.3 m aft.
    const AircraftGeometry g = unit_panel_with(square(0.5, 0.0, -0.3, 0.25));
    const Vec3 r = Vec3(1, 0, -1).normalized();
    const ShadingReport rep = compute_shading_body(g, r, 45.0);
    EXPECT_NEAR(rep.per_surface[0].shaded_area_m2, 0.25, 1e-12);
}

TEST(Shading, OccluderBelowSurfaceCastsNothing) {
    const AircraftGeometry g = unit_panel_with(square(0.0, 0.0, 0.3, 0.25));
    const ShadingReport r = compute_shading_body(g, Vec3(0, 0, -1), 90.0);
    EXPECT_EQ(r.per_surface[0].shaded_area_m2, 0.0);
    EXPECT_FALSE(r.any_shading);
}

TEST(Shading, SunBehindSurfaceAndGrazingSun) {
    const AircraftGeometry g = unit_panel_with(square(0.0, 0.0, -0.3, 0.25));
    EXPECT_EQ(compute_shading_body(g, Vec3(0, 0, 1), -90.0).per_surface[0].shaded_area_m2, 0.0);
    const ShadingReport grazing = compute_shading_body(g, Vec3(1, 0, 0), 0.0);
    EXPECT_EQ(grazing.per_surface[0].shaded_area_m2, 0.0);
    ASSERT_EQ(grazing.degenerate.size(), 1u);
    EXPECT_EQ(grazing.degenerate[0].surface_id, 7);
}

TEST(Shading, OverlappingOccludersAreNotDoubleCounted) {
    AircraftGeometry g = unit_panel_with(square(0.0, 0.0, -0.3, 0.25));
    g.occluders.push_back({"twin", square(0.0, 0.0, -0.5, 0.25)});
    g.occluders.push_back({"shifted", square(0.25, 0.0, -0.4, 0.25)});
    const ShadingReport r = compute_shading_body(g, Vec3(0, 0, -1), 90.0);
    EXPECT_NEAR(r.per_surface[0].shaded_area_m2, 0.25 + 0.125, 1e-12);
}

TEST(Shading, MatchesMonteCarloOnRandomConfigurations) {
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 20; ++i) {
        const testsupport::ShadingCase c = testsupport::random_shading_case(rng);
        const double primary = compute_shading_body(c.geom, c.r_sun_body, 45.0).per_surface[0].shaded_area_m2;
        std::vector<oracle::Poly> occ;
        for (const Occluder& o : c.geom.occluders) occ.push_back(o.polygon_body);
        const double mc = oracle::shaded_area(c.geom.surfaces[0].polygon_body, occ, c.r_sun_body, 20000, rng);
        EXPECT_NEAR(primary, mc, 0.02 * c.geom.surfaces[0].area_m2) << "case " << i;
    }
}

TEST(Shading, ZenithSunLeavesDefaultWingUnshaded) {
    const AircraftGeometry g = atlantik_solar_geometry();
    SunState zenith;
    zenith.elevation_deg = 90.0;
    zenith.r_sun = Vec3(0, 0, -1);
    const ShadingReport r = compute_shading(g, {0, 0, 0}, zenith);
    EXPECT_FALSE(r.any_shading);
    for (const SurfaceShading& s : r.per_surface) EXPECT_EQ(s.shaded_area_m2, 0.0);
}

TEST(Shading, LowSunFromBehindShadesInboardPanels) {
    const AircraftGeometry g = atlantik_solar_geometry();
    // Sun low behind the aircraft and slightly to its left.
    const double el = 10.0 * kDegToRad;
    const double rel_az = 200.0 * kDegToRad;
    const Vec3 r(std::cos(el) * std::cos(rel_az), std::cos(el) * std::sin(rel_az), -std::sin(el));
    const ShadingReport rep = compute_shading_body(g, r, 10.0);
    EXPECT_TRUE(rep.any_shading);
    EXPECT_GT(rep.find(4)->shaded_area_m2 + rep.find(5)->shaded_area_m2, 0.0);
    for (const SurfaceShading& s : rep.per_surface) {
        EXPECT_LE(s.shaded_area_m2, 0.307 + 1e-12);
        EXPECT_GE(s.shaded_fraction, 0.0);
        EXPECT_LE(s.shaded_fraction, 1.0);
    }
}

TEST(Shading, DefaultTailShadowVanishesAboveTwentyDegrees) {
    const AircraftGeometry g = atlantik_solar_geometry();
    for (double el = 20.5; el <= 60.0; el += 2.5) {
        for (double az = 0.0; az < 360.0; az += 5.0) {
            const Vec3 r(std::cos(el * kDegToRad) * std::cos(az * kDegToRad),
                         std::cos(el * kDegToRad) * std::sin(az * kDegToRad), -std::sin(el * kDegToRad));
            EXPECT_FALSE(compute_shading_body(g, r, el).any_shading) << el << " " << az;
        }
    }
}

TEST(ShadingPlugin, BuiltIns) {
    EXPECT_FALSE(static_cast<bool>(shading_plugin_by_name("none")));
    const ShadingPlugin beam = shading_plugin_by_name("beam_area");
    ASSERT_TRUE(static_cast<bool>(beam));
    const AircraftGeometry g = unit_panel_with(square(0.25, 0.25, -0.3, 0.25));
    const ShadingReport r = compute_shading_body(g, Vec3(0, 0, -1), 90.0);
    const std::vector<double> m = beam(r, g);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_NEAR(m[0], 0.75, 1e-12);
    EXPECT_THROW((void)shading_plugin_by_name("ray_traced"), std::invalid_argument);
}

TEST(Shading, RejectsTooManyOccluders) {
    AircraftGeometry g = unit_panel_with(square(0.0, 0.0, -0.3, 0.1));
    for (int i = 0; i < 12; ++i) g.occluders.push_back({"o" + std::to_string(i), square(0.0, 0.0, -0.4, 0.1)});
    EXPECT_THROW((void)compute_shading_body(g, Vec3(0, 0, -1), 90.0), std::invalid_argument);
}

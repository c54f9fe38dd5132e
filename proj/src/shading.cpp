#include "solaruav/shading.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solaruav {

namespace polygon2d {

double signed_area(const Polygon& poly) {
    double acc = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    return 0.5 * acc;
}

Polygon make_ccw(Polygon poly) {
    if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
    return poly;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
    Polygon output = subject;
    const std::size_t m = clip.size();
    for (std::size_t e = 0; e < m && !output.empty(); ++e) {
        const Point a = clip[e];
        const Point b = clip[(e + 1) % m];
        auto side = [&](const Point& p) { return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x); };

        Polygon input = std::move(output);
        output.clear();
        const std::size_t n = input.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& cur = input[i];
            const Point& prev = input[(i + n - 1) % n];
            const double s_cur = side(cur);
            const double s_prev = side(prev);
            if (s_cur >= 0.0) {
                if (s_prev < 0.0) {
                    const double t = s_prev / (s_prev - s_cur);
                    output.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
                }
                output.push_back(cur);
            } else if (s_prev >= 0.0) {
                const double t = s_prev / (s_prev - s_cur);
                output.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
            }
        }
    }
    if (output.size() < 3) output.clear();
    return output;
}

}  // namespace polygon2d

namespace {

using polygon2d::Point;
using Polygon2 = polygon2d::Polygon;

constexpr double kParallelTolerance = 1e-9;
constexpr std::size_t kMaxOccluders = 12;

struct PlaneFrame {
    Vec3 origin;
    Vec3 normal;
    Vec3 u;
    Vec3 v;

    explicit PlaneFrame(const Polygon3& poly) {
        normal = newell_normal(poly).normalized();
        origin = poly.front();
        const Vec3 seed = std::abs(normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
        u = normal.cross(seed).normalized();
        v = normal.cross(u);
    }

    [[nodiscard]] Point to_plane(const Vec3& p) const {
        const Vec3 d = p - origin;
        return {d.dot(u), d.dot(v)};
    }
};

// Part of the occluder on the positive side of the plane (height >= 0).
Polygon3 clip_above_plane(const Polygon3& poly, const PlaneFrame& plane) {
    Polygon3 out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& cur = poly[i];
        const Vec3& prev = poly[(i + n - 1) % n];
        const double h_cur = (cur - plane.origin).dot(plane.normal);
        const double h_prev = (prev - plane.origin).dot(plane.normal);
        if (h_cur >= 0.0) {
            if (h_prev < 0.0) out.push_back(prev + (cur - prev) * (h_prev / (h_prev - h_cur)));
            out.push_back(cur);
        } else if (h_prev >= 0.0) {
            out.push_back(prev + (cur - prev) * (h_prev / (h_prev - h_cur)));
        }
    }
    return out;
}

double union_area(const std::vector<Polygon2>& pieces) {
    const std::size_t k = pieces.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        Polygon2 acc;
        bool first = true;
        int count = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(mask & (std::size_t{1} << i))) continue;
            ++count;
            acc = first ? pieces[i] : polygon2d::clip_convex(acc, pieces[i]);
            first = false;
            if (acc.empty()) break;
        }
        if (acc.empty()) continue;
        const double area = std::abs(polygon2d::signed_area(acc));
        total += (count % 2 == 1) ? area : -area;
    }
    return total;
}

}  // namespace

const SurfaceShading* ShadingReport::find(int surface_id) const {
    for (const SurfaceShading& s : per_surface) {
        if (s.surface_id == surface_id) return &s;
    }
    return nullptr;
}

double ShadingReport::total_shaded_area_m2() const {
    double total = 0.0;
    for (const SurfaceShading& s : per_surface) total += s.shaded_area_m2;
    return total;
}

ShadingReport compute_shading(const AircraftGeometry& geom, const Attitude& att, const SunState& sun) {
    const Vec3 r_body = body_to_inertial(att).transpose() * sun.r_sun;
    return compute_shading_body(geom, r_body, sun.elevation_deg);
}

ShadingReport compute_shading_body(const AircraftGeometry& geom, const Vec3& r_sun_body, double sun_elevation_deg) {
    if (geom.occluders.size() > kMaxOccluders) {
        throw std::invalid_argument("shading supports at most 12 occluders");
    }
    ShadingReport report;
    report.sun_elevation_deg = sun_elevation_deg;
    const Vec3 r = r_sun_body.normalized();

    for (const SurfaceSpec& surface : geom.surfaces) {
        SurfaceShading entry{surface.id, 0.0, 0.0};
        const PlaneFrame plane(surface.polygon_body);
        const double denom = r.dot(plane.normal);

        if (std::abs(denom) < kParallelTolerance) {
            for (const Occluder& o : geom.occluders) report.degenerate.push_back({surface.id, o.name});
            report.per_surface.push_back(entry);
            continue;
        }
        // A surface facing away from the sun receives no beam to shade.
        if (denom < 0.0 || geom.occluders.empty()) {
            report.per_surface.push_back(entry);
            continue;
        }

        Polygon2 target;
        target.reserve(surface.polygon_body.size());
        for (const Vec3& p : surface.polygon_body) target.push_back(plane.to_plane(p));
        target = polygon2d::make_ccw(std::move(target));
        const double target_area = std::abs(polygon2d::signed_area(target));

        std::vector<Polygon2> shadows;
        for (const Occluder& o : geom.occluders) {
            const Polygon3 above = clip_above_plane(o.polygon_body, plane);
            if (above.size() < 3) continue;
            Polygon2 projected;
            projected.reserve(above.size());
            for (const Vec3& p : above) {
                const double h = (p - plane.origin).dot(plane.normal);
                projected.push_back(plane.to_plane(p - r * (h / denom)));
            }
            if (std::abs(polygon2d::signed_area(projected)) <= 1e-15) continue;
            Polygon2 clipped = polygon2d::clip_convex(polygon2d::make_ccw(std::move(projected)), target);
            if (!clipped.empty()) shadows.push_back(std::move(clipped));
        }

        const double shaded = std::clamp(union_area(shadows), 0.0, target_area);
        entry.shaded_fraction = target_area > 0.0 ? shaded / target_area : 0.0;
        entry.shaded_area_m2 = entry.shaded_fraction * surface.area_m2;
        if (entry.shaded_area_m2 > 0.0) report.any_shading = true;
        report.per_surface.push_back(entry);
    }
    return report;
}

ShadingPlugin shading_plugin_by_name(const std::string& name) {
    if (name.empty() || name == "none") return {};
    if (name == "beam_area") {
        return [](const ShadingReport& report, const AircraftGeometry&) {
            std::vector<double> multipliers;
            multipliers.reserve(report.per_surface.size());
            for (const SurfaceShading& s : report.per_surface) multipliers.push_back(1.0 - s.shaded_fraction);
            return multipliers;
        };
    }
    throw std::invalid_argument("unknown shading plugin '" + name + "' (expected none or beam_area)");
}

}  // namespace solaruav

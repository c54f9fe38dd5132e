#include "solaruav/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>

namespace solaruav {

namespace {

std::string surface_label(const SurfaceSpec& s) { return "surface " + std::to_string(s.id); }

void check_polygon(const Polygon3& poly, const std::string& label) {
    if (poly.size() < 3) {
        throw std::invalid_argument(label + ": polygon needs at least 3 vertices");
    }
    for (const Vec3& v : poly) {
        if (!v.allFinite()) throw std::invalid_argument(label + ": polygon vertex is not finite");
    }
    if (polygon_area(poly) <= 0.0) {
        throw std::invalid_argument(label + ": polygon is degenerate (zero area)");
    }
    if (planarity_deviation(poly) > 1e-6) {
        throw std::invalid_argument(label + ": polygon is not planar within 1e-6 m");
    }
    if (!is_convex(poly)) {
        throw std::invalid_argument(label + ": polygon must be convex");
    }
}

}  // namespace

double dihedral_sign(WingSide side) {
    switch (side) {
        case WingSide::left:
        case WingSide::center_left:
            return 1.0;
        case WingSide::center_right:
        case WingSide::right:
            return -1.0;
    }
    return 1.0;
}

void AircraftGeometry::validate() const {
    if (surfaces.empty()) throw std::invalid_argument("aircraft: at least one surface is required");
    if (!std::isfinite(dihedral_deg)) throw std::invalid_argument("aircraft: dihedral_deg is not finite");
    if (!std::isfinite(wing_pitch_deg)) throw std::invalid_argument("aircraft: wing_pitch_deg is not finite");
    std::set<int> ids;
    for (const SurfaceSpec& s : surfaces) {
        if (!ids.insert(s.id).second) {
            throw std::invalid_argument(surface_label(s) + ": duplicate surface id");
        }
        if (!(s.area_m2 > 0.0) || !std::isfinite(s.area_m2)) {
            throw std::invalid_argument(surface_label(s) + ": area_m2 must be > 0");
        }
        if (!std::isfinite(s.cell_pitch_deg)) {
            throw std::invalid_argument(surface_label(s) + ": cell_pitch_deg is not finite");
        }
        check_polygon(s.polygon_body, surface_label(s));
        if (newell_normal(s.polygon_body).z() >= 0.0) {
            throw std::invalid_argument(surface_label(s) +
                                        ": polygon winding must give an upward (-z) normal");
        }
    }
    for (const Occluder& o : occluders) {
        check_polygon(o.polygon_body, "occluder '" + o.name + "'");
    }
}

double AircraftGeometry::total_area_m2() const {
    double total = 0.0;
    for (const SurfaceSpec& s : surfaces) total += s.area_m2;
    return total;
}

void Attitude::validate() const {
    if (!std::isfinite(roll_deg) || roll_deg < -180.0 || roll_deg > 180.0) {
        throw std::invalid_argument("roll_deg must be within [-180, 180]");
    }
    if (!std::isfinite(pitch_deg) || pitch_deg < -90.0 || pitch_deg > 90.0) {
        throw std::invalid_argument("pitch_deg must be within [-90, 90]");
    }
    if (!std::isfinite(yaw_deg) || yaw_deg < 0.0 || yaw_deg >= 360.0) {
        throw std::invalid_argument("yaw_deg must be within [0, 360)");
    }
}

double wrap_yaw_deg(double yaw_deg) {
    double y = std::fmod(yaw_deg, 360.0);
    if (y < 0.0) y += 360.0;
    if (y >= 360.0) y = 0.0;
    return y;
}

Mat3 rotation_x(double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    Mat3 r;
    r << 1, 0, 0, 0, c, -s, 0, s, c;
    return r;
}

Mat3 rotation_y(double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    Mat3 r;
    r << c, 0, s, 0, 1, 0, -s, 0, c;
    return r;
}

Mat3 rotation_z(double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    Mat3 r;
    r << c, -s, 0, s, c, 0, 0, 0, 1;
    return r;
}

Vec3 surface_normal_body(const AircraftGeometry& geom, const SurfaceSpec& surface) {
    const Vec3 up(0.0, 0.0, -1.0);
    const Mat3 pitch = rotation_y((geom.wing_pitch_deg + surface.cell_pitch_deg) * kDegToRad);
    const Mat3 dihedral = rotation_x(dihedral_sign(surface.side) * geom.dihedral_deg * kDegToRad);
    const Vec3 n = geom.mounting_order == MountingOrder::pitch_then_dihedral ? Vec3(dihedral * (pitch * up))
                                                                               : Vec3(pitch * (dihedral * up));
    return n.normalized();
}

Vec3 central_wing_normal_body(const AircraftGeometry& geom) {
    double weighted = 0.0;
    double area = 0.0;
    for (const SurfaceSpec& s : geom.surfaces) {
        if (s.side == WingSide::center_left || s.side == WingSide::center_right) {
            weighted += s.cell_pitch_deg * s.area_m2;
            area += s.area_m2;
        }
    }
    if (area <= 0.0) {
        for (const SurfaceSpec& s : geom.surfaces) {
            weighted += s.cell_pitch_deg * s.area_m2;
            area += s.area_m2;
        }
    }
    const double cell_pitch = area > 0.0 ? weighted / area : 0.0;
    return (rotation_y((geom.wing_pitch_deg + cell_pitch) * kDegToRad) * Vec3(0.0, 0.0, -1.0)).normalized();
}

Mat3 body_to_inertial(const Attitude& att) {
    return rotation_z(att.yaw_deg * kDegToRad) * rotation_y(att.pitch_deg * kDegToRad) *
           rotation_x(att.roll_deg * kDegToRad);
}

double incidence_angle_deg(const Vec3& n_inertial, const Vec3& r_sun) {
    const double c = std::clamp(n_inertial.dot(r_sun), -1.0, 1.0);
    return std::abs(std::acos(c)) * kRadToDeg;
}

Vec3 newell_normal(const Polygon3& poly) {
    Vec3 n = Vec3::Zero();
    const std::size_t count = poly.size();
    for (std::size_t i = 0; i < count; ++i) {
        const Vec3& a = poly[i];
        const Vec3& b = poly[(i + 1) % count];
        n.x() += (a.y() - b.y()) * (a.z() + b.z());
        n.y() += (a.z() - b.z()) * (a.x() + b.x());
        n.z() += (a.x() - b.x()) * (a.y() + b.y());
    }
    return n;
}

double polygon_area(const Polygon3& poly) {
    if (poly.size() < 3) return 0.0;
    return 0.5 * newell_normal(poly).norm();
}

double planarity_deviation(const Polygon3& poly) {
    const Vec3 n = newell_normal(poly);
    if (n.norm() == 0.0) return 0.0;
    const Vec3 unit = n.normalized();
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& v : poly) centroid += v;
    centroid /= static_cast<double>(poly.size());
    double worst = 0.0;
    for (const Vec3& v : poly) worst = std::max(worst, std::abs((v - centroid).dot(unit)));
    return worst;
}

bool is_convex(const Polygon3& poly) {
    const Vec3 n = newell_normal(poly);
    const double scale = n.norm();
    if (scale == 0.0) return false;
    const std::size_t count = poly.size();
    for (std::size_t i = 0; i < count; ++i) {
        const Vec3 e0 = poly[(i + 1) % count] - poly[i];
        const Vec3 e1 = poly[(i + 2) % count] - poly[(i + 1) % count];
        // Collinear vertices are tolerated; reflex turns are not.
        if (e0.cross(e1).dot(n) < -1e-12 * scale) return false;
    }
    return true;
}

AircraftGeometry atlantik_solar_geometry() {
    AircraftGeometry geom;
    geom.dihedral_deg = 6.0;
    geom.wing_pitch_deg = 5.7;

    constexpr double chord = 0.26;
    constexpr double x_front = -0.03;
    constexpr double root_offset = 0.05;
    const double cos_d = std::cos(geom.dihedral_deg * kDegToRad);
    const double sin_d = std::sin(geom.dihedral_deg * kDegToRad);

    struct Layout {
        int id;
        WingSide side;
        double area;
        double pitch;
    };
    // Spanwise from the root outward: left half 3, 2, 1 and right half 4, 5, 6.
    const Layout left[] = {{3, WingSide::center_left, 0.184, -0.5},
                           {2, WingSide::center_left, 0.307, 9.4},
                           {1, WingSide::left, 0.184, -0.5}};
    const Layout right[] = {{4, WingSide::center_right, 0.184, 9.4},
                            {5, WingSide::center_right, 0.307, -0.5},
                            {6, WingSide::right, 0.184, 9.4}};

    auto build_half = [&](const Layout* items, double sign) {
        double s0 = 0.0;
        for (int k = 0; k < 3; ++k) {
            const Layout& l = items[k];
            const double s1 = s0 + l.area / chord;
            auto at = [&](double x, double s) {
                return Vec3(x, sign * (root_offset + s * cos_d), -s * sin_d);
            };
            Polygon3 poly = {at(x_front, s0), at(x_front, s1), at(x_front - chord, s1), at(x_front - chord, s0)};
            if (newell_normal(poly).z() > 0.0) std::reverse(poly.begin(), poly.end());
            geom.surfaces.push_back({l.id, l.area, l.side, l.pitch, std::move(poly)});
            s0 = s1;
        }
    };
    build_half(left, -1.0);
    build_half(right, 1.0);
    std::sort(geom.surfaces.begin(), geom.surfaces.end(),
              [](const SurfaceSpec& a, const SurfaceSpec& b) { return a.id < b.id; });

    constexpr double tail_height = 0.41;
    geom.occluders.push_back({"horizontal_tail",
                              {Vec3(-1.45, -0.45, -tail_height), Vec3(-1.45, 0.45, -tail_height),
                               Vec3(-1.65, 0.45, -tail_height), Vec3(-1.65, -0.45, -tail_height)}});
    geom.occluders.push_back({"vertical_tail",
                              {Vec3(-1.45, 0.0, -0.02), Vec3(-1.45, 0.0, -tail_height),
                               Vec3(-1.75, 0.0, -tail_height), Vec3(-1.75, 0.0, -0.02)}});
    return geom;
}

}  // namespace solaruav

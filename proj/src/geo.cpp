#include "cvrp/geo.hpp"

#include <algorithm>
#include <cmath>

namespace cvrp {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

double haversine(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth) {
    const double dphi = std::abs(b.lat - a.lat) * kDegToRad;
    const double dlam = std::abs(b.lon - a.lon) * kDegToRad;
    const double sp = std::sin(dphi * 0.5);
    const double sl = std::sin(dlam * 0.5);
    const double h = sp * sp + std::cos(a.lat * kDegToRad) * std::cos(b.lat * kDegToRad) * sl * sl;
    const double arg = std::clamp(h, 0.0, 1.0);
    return 2.0 * earth.radius_km * std::asin(std::sqrt(arg));
}

GeoPoint centroid(std::span<const GeoPoint> points) {
    if (points.empty()) throw Error("empty point set");
    double lat = 0.0, lon = 0.0;
    for (const GeoPoint& p : points) {
        lat += p.lat;
        lon += p.lon;
    }
    const double n = static_cast<double>(points.size());
    return GeoPoint{lat / n, lon / n};
}

double Metric::distance(const GeoPoint& a, const GeoPoint& b) const {
    if (mode == DistanceMode::planar) {
        return std::hypot(b.lon - a.lon, b.lat - a.lat);
    }
    return haversine(a, b, earth);
}

}  // namespace cvrp

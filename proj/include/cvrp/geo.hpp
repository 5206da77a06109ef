#pragma once

#include <span>
#include <stdexcept>
#include <string>

namespace cvrp {

// Library-wide error type. Messages carry enough context to act on
// (offending id, line number, stage name).
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Latitude/longitude pair in decimal degrees. In planar distance mode the
// same struct carries raw (y, x) coordinates and the range checks do not
// apply; see Metric below.
struct GeoPoint {
    double lat = 0.0;  // degrees, -90..90
    double lon = 0.0;  // degrees, -180..180

    bool operator==(const GeoPoint&) const = default;

    bool valid() const {
        return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
    }
};

struct EarthModel {
    double radius_km = 6371.0088;  // IUGG mean radius
};

// Great-circle distance in kilometers.
//
// d = 2r * arcsin(sqrt(sin^2(dphi/2) + cos(phi1) cos(phi2) sin^2(dlambda/2)))
//
// The arcsine argument is clamped to [0, 1] against floating-point
// overshoot. Evaluation is arranged so haversine(a, b) == haversine(b, a)
// bit-for-bit: the half-angle sines are taken on absolute deltas and the
// cosine product is a single commutative multiply.
double haversine(const GeoPoint& a, const GeoPoint& b, const EarthModel& earth = {});

// Arithmetic mean of latitudes and longitudes. Throws "empty point set"
// for an empty span. Intended for city/region scale point sets; the
// instance validator rejects sets straddling the antimeridian.
GeoPoint centroid(std::span<const GeoPoint> points);

enum class DistanceMode { geo, planar };

// Distance dispatcher so planar (Euclidean) instances run through the same
// pipeline as geographic ones. geo: haversine on the sphere. planar:
// hypot over raw coordinates (lat carries y, lon carries x).
struct Metric {
    DistanceMode mode = DistanceMode::geo;
    EarthModel earth{};

    double distance(const GeoPoint& a, const GeoPoint& b) const;
};

}  // namespace cvrp

// Ellipsoidal distance and point-placement primitives on WGS84.
#pragma once

namespace pacmap::geo {

/// Length in metres. Kept as a plain double; every producer in this library
/// guarantees finite, non-negative values.
using Meters = double;

inline constexpr double kWgs84A = 6378137.0;
inline constexpr double kWgs84F = 1.0 / 298.257223563;
inline constexpr double kWgs84B = kWgs84A * (1.0 - kWgs84F);

inline constexpr double kVincentyTolerance = 1e-12;
inline constexpr int kVincentyMaxIterations = 200;

/// Beyond this the equirectangular workspace is refused.
inline constexpr Meters kProjectionRange = 10000.0;

/// WGS84 latitude/longitude in degrees. lat in [-90, 90], lon in (-180, 180].
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Validates the latitude and normalizes the longitude into (-180, 180].
/// Throws Error(InvalidInput) on non-finite or out-of-range latitude.
GeoPoint make_point(double lat, double lon);

bool is_valid(GeoPoint p);
double normalize_lon(double lon);

struct InverseSolution {
  Meters distance = 0.0;
  double initial_bearing = 0.0;  // degrees clockwise from north, [0, 360)
  double final_bearing = 0.0;
  int iterations = 0;
};

/// Vincenty's inverse method. Throws Error(NonConvergence) when the lambda
/// iteration does not settle within kVincentyMaxIterations (near-antipodal
/// input).
InverseSolution vincenty_inverse_solution(GeoPoint a, GeoPoint b);

/// Geodesic distance; symmetric bit-for-bit in its arguments.
Meters vincenty_inverse(GeoPoint a, GeoPoint b);

/// Vincenty's direct method: the point `distance` metres from `start` along
/// the geodesic leaving at `bearing` degrees.
GeoPoint vincenty_direct(GeoPoint start, double bearing, Meters distance);

/// Point `distance` metres from `from` along the geodesic towards `to`.
GeoPoint interpolate(GeoPoint from, GeoPoint to, Meters distance);

/// Planar east/north coordinates about an origin (equirectangular, scaled by
/// the meridional and prime-vertical radii of curvature at the origin).
struct LocalXY {
  double x = 0.0;
  double y = 0.0;
  GeoPoint origin;
};

/// Throws Error(OutOfProjectionRange) beyond kProjectionRange.
LocalXY to_local(GeoPoint p, GeoPoint origin);
GeoPoint from_local(const LocalXY& xy);

/// Same projection without the range guard, for internal nearest-feature
/// searches where far-away candidates only need to lose.
LocalXY to_local_unchecked(GeoPoint p, GeoPoint origin);

}  // namespace pacmap::geo

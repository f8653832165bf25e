#include "pacmap/geodesy.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "pacmap/error.hpp"

namespace pacmap::geo {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kE2 = kWgs84F * (2.0 - kWgs84F);

double wrap_pi(double radians) {
  radians = std::remainder(radians, 2.0 * std::numbers::pi);
  return radians;
}

double bearing_degrees(double radians) {
  double deg = std::fmod(radians / kDeg, 360.0);
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

bool canonical_less(GeoPoint a, GeoPoint b) {
  return a.lat < b.lat || (a.lat == b.lat && a.lon < b.lon);
}

InverseSolution inverse_ordered(GeoPoint p1, GeoPoint p2) {
  InverseSolution out;
  if (p1 == p2) return out;

  const double f = kWgs84F;
  const double L = wrap_pi((p2.lon - p1.lon) * kDeg);
  const double U1 = std::atan((1.0 - f) * std::tan(p1.lat * kDeg));
  const double U2 = std::atan((1.0 - f) * std::tan(p2.lat * kDeg));
  const double sinU1 = std::sin(U1), cosU1 = std::cos(U1);
  const double sinU2 = std::sin(U2), cosU2 = std::cos(U2);

  double lambda = L;
  double sinLambda = 0, cosLambda = 0;
  double sinSigma = 0, cosSigma = 0, sigma = 0;
  double cos2Alpha = 0, cos2SigmaM = 0;
  int iter = 0;
  for (;;) {
    sinLambda = std::sin(lambda);
    cosLambda = std::cos(lambda);
    const double t1 = cosU2 * sinLambda;
    const double t2 = cosU1 * sinU2 - sinU1 * cosU2 * cosLambda;
    sinSigma = std::sqrt(t1 * t1 + t2 * t2);
    if (sinSigma == 0.0) {
      out.iterations = iter;
      return out;  // coincident after rounding
    }
    cosSigma = sinU1 * sinU2 + cosU1 * cosU2 * cosLambda;
    sigma = std::atan2(sinSigma, cosSigma);
    const double sinAlpha = cosU1 * cosU2 * sinLambda / sinSigma;
    cos2Alpha = 1.0 - sinAlpha * sinAlpha;
    // Equatorial line: cos2Alpha == 0 and the term vanishes.
    cos2SigmaM = cos2Alpha != 0.0 ? cosSigma - 2.0 * sinU1 * sinU2 / cos2Alpha : 0.0;
    const double C = f / 16.0 * cos2Alpha * (4.0 + f * (4.0 - 3.0 * cos2Alpha));
    const double previous = lambda;
    lambda = L + (1.0 - C) * f * sinAlpha *
                     (sigma + C * sinSigma *
                                  (cos2SigmaM + C * cosSigma * (-1.0 + 2.0 * cos2SigmaM * cos2SigmaM)));
    ++iter;
    if (std::abs(lambda - previous) <= kVincentyTolerance) break;
    if (iter >= kVincentyMaxIterations) {
      throw Error(ErrorCode::NonConvergence,
                  "Vincenty inverse did not converge in " + std::to_string(kVincentyMaxIterations) +
                      " iterations (near-antipodal points?)");
    }
  }

  const double a = kWgs84A, b = kWgs84B;
  const double uSq = cos2Alpha * (a * a - b * b) / (b * b);
  const double A = 1.0 + uSq / 16384.0 * (4096.0 + uSq * (-768.0 + uSq * (320.0 - 175.0 * uSq)));
  const double B = uSq / 1024.0 * (256.0 + uSq * (-128.0 + uSq * (74.0 - 47.0 * uSq)));
  const double deltaSigma =
      B * sinSigma *
      (cos2SigmaM + B / 4.0 *
                        (cosSigma * (-1.0 + 2.0 * cos2SigmaM * cos2SigmaM) -
                         B / 6.0 * cos2SigmaM * (-3.0 + 4.0 * sinSigma * sinSigma) *
                             (-3.0 + 4.0 * cos2SigmaM * cos2SigmaM)));

  out.distance = b * A * (sigma - deltaSigma);
  out.initial_bearing =
      bearing_degrees(std::atan2(cosU2 * sinLambda, cosU1 * sinU2 - sinU1 * cosU2 * cosLambda));
  out.final_bearing =
      bearing_degrees(std::atan2(cosU1 * sinLambda, -sinU1 * cosU2 + cosU1 * sinU2 * cosLambda));
  out.iterations = iter;
  return out;
}

struct Curvature {
  double meridional;     // M
  double prime_vertical; // N
};

Curvature curvature_at(double lat_deg) {
  const double s = std::sin(lat_deg * kDeg);
  const double w = 1.0 - kE2 * s * s;
  return {kWgs84A * (1.0 - kE2) / (w * std::sqrt(w)), kWgs84A / std::sqrt(w)};
}

void require_valid(GeoPoint p, const char* what) {
  if (!is_valid(p)) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " is not a valid WGS84 point");
  }
}

}  // namespace

double normalize_lon(double lon) {
  double r = std::fmod(lon, 360.0);
  if (r <= -180.0) r += 360.0;
  if (r > 180.0) r -= 360.0;
  return r;
}

bool is_valid(GeoPoint p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon > -180.0 && p.lon <= 180.0;
}

GeoPoint make_point(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon) || lat < -90.0 || lat > 90.0) {
    throw Error(ErrorCode::InvalidInput,
                "latitude/longitude out of range: " + std::to_string(lat) + ", " + std::to_string(lon));
  }
  return {lat, normalize_lon(lon)};
}

InverseSolution vincenty_inverse_solution(GeoPoint a, GeoPoint b) {
  require_valid(a, "inverse start");
  require_valid(b, "inverse end");
  if (!canonical_less(b, a)) return inverse_ordered(a, b);

  // Solve in canonical order so d(a,b) == d(b,a) exactly, then swap roles.
  InverseSolution r = inverse_ordered(b, a);
  const double initial = std::fmod(r.final_bearing + 180.0, 360.0);
  const double final = std::fmod(r.initial_bearing + 180.0, 360.0);
  r.initial_bearing = initial;
  r.final_bearing = final;
  return r;
}

Meters vincenty_inverse(GeoPoint a, GeoPoint b) { return vincenty_inverse_solution(a, b).distance; }

GeoPoint vincenty_direct(GeoPoint start, double bearing, Meters distance) {
  require_valid(start, "direct start");
  if (!std::isfinite(bearing) || !std::isfinite(distance) || distance < 0.0) {
    throw Error(ErrorCode::InvalidInput, "direct problem needs finite bearing and distance >= 0");
  }
  if (distance == 0.0) return start;

  const double f = kWgs84F, a = kWgs84A, b = kWgs84B;
  const double alpha1 = bearing * kDeg;
  const double sinAlpha1 = std::sin(alpha1), cosAlpha1 = std::cos(alpha1);
  const double tanU1 = (1.0 - f) * std::tan(start.lat * kDeg);
  const double cosU1 = 1.0 / std::sqrt(1.0 + tanU1 * tanU1);
  const double sinU1 = tanU1 * cosU1;
  const double sigma1 = std::atan2(tanU1, cosAlpha1);
  const double sinAlpha = cosU1 * sinAlpha1;
  const double cos2Alpha = 1.0 - sinAlpha * sinAlpha;
  const double uSq = cos2Alpha * (a * a - b * b) / (b * b);
  const double A = 1.0 + uSq / 16384.0 * (4096.0 + uSq * (-768.0 + uSq * (320.0 - 175.0 * uSq)));
  const double B = uSq / 1024.0 * (256.0 + uSq * (-128.0 + uSq * (74.0 - 47.0 * uSq)));

  double sigma = distance / (b * A);
  double sinSigma = 0, cosSigma = 0, cos2SigmaM = 0;
  for (int iter = 0;; ++iter) {
    cos2SigmaM = std::cos(2.0 * sigma1 + sigma);
    sinSigma = std::sin(sigma);
    cosSigma = std::cos(sigma);
    const double deltaSigma =
        B * sinSigma *
        (cos2SigmaM + B / 4.0 *
                          (cosSigma * (-1.0 + 2.0 * cos2SigmaM * cos2SigmaM) -
                           B / 6.0 * cos2SigmaM * (-3.0 + 4.0 * sinSigma * sinSigma) *
                               (-3.0 + 4.0 * cos2SigmaM * cos2SigmaM)));
    const double previous = sigma;
    sigma = distance / (b * A) + deltaSigma;
    if (std::abs(sigma - previous) <= kVincentyTolerance) break;
    if (iter + 1 >= kVincentyMaxIterations) {
      throw Error(ErrorCode::NonConvergence, "Vincenty direct did not converge");
    }
  }
  sinSigma = std::sin(sigma);
  cosSigma = std::cos(sigma);
  cos2SigmaM = std::cos(2.0 * sigma1 + sigma);

  const double tmp = sinU1 * sinSigma - cosU1 * cosSigma * cosAlpha1;
  const double lat2 = std::atan2(sinU1 * cosSigma + cosU1 * sinSigma * cosAlpha1,
                                 (1.0 - f) * std::sqrt(sinAlpha * sinAlpha + tmp * tmp));
  const double lambda =
      std::atan2(sinSigma * sinAlpha1, cosU1 * cosSigma - sinU1 * sinSigma * cosAlpha1);
  const double C = f / 16.0 * cos2Alpha * (4.0 + f * (4.0 - 3.0 * cos2Alpha));
  const double L =
      lambda - (1.0 - C) * f * sinAlpha *
                   (sigma + C * sinSigma *
                                (cos2SigmaM + C * cosSigma * (-1.0 + 2.0 * cos2SigmaM * cos2SigmaM)));
  return {lat2 / kDeg, normalize_lon(start.lon + L / kDeg)};
}

GeoPoint interpolate(GeoPoint from, GeoPoint to, Meters distance) {
  if (distance <= 0.0 || from == to) return from;
  const InverseSolution leg = vincenty_inverse_solution(from, to);
  if (distance >= leg.distance) return to;
  return vincenty_direct(from, leg.initial_bearing, distance);
}

LocalXY to_local_unchecked(GeoPoint p, GeoPoint origin) {
  const Curvature k = curvature_at(origin.lat);
  const double dlon = normalize_lon(p.lon - origin.lon);
  return {dlon * kDeg * k.prime_vertical * std::cos(origin.lat * kDeg),
          (p.lat - origin.lat) * kDeg * k.meridional, origin};
}

LocalXY to_local(GeoPoint p, GeoPoint origin) {
  require_valid(p, "projected point");
  require_valid(origin, "projection origin");
  LocalXY xy = to_local_unchecked(p, origin);
  if (std::hypot(xy.x, xy.y) > kProjectionRange) {
    throw Error(ErrorCode::OutOfProjectionRange,
                "point is more than " + std::to_string(kProjectionRange) + " m from the projection origin");
  }
  return xy;
}

GeoPoint from_local(const LocalXY& xy) {
  require_valid(xy.origin, "projection origin");
  if (!std::isfinite(xy.x) || !std::isfinite(xy.y) || std::hypot(xy.x, xy.y) > kProjectionRange) {
    throw Error(ErrorCode::OutOfProjectionRange, "local coordinates outside the projection range");
  }
  const Curvature k = curvature_at(xy.origin.lat);
  const double lat = xy.origin.lat + xy.y / k.meridional / kDeg;
  const double lon = xy.origin.lon + xy.x / (k.prime_vertical * std::cos(xy.origin.lat * kDeg)) / kDeg;
  return make_point(lat, lon);
}

}  // namespace pacmap::geo

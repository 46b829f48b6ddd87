#pragma once

#include <numbers>

namespace satmig {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLightMps = 299792458.0;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace satmig

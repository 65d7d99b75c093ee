#pragma once

#include <cmath>
#include <numbers>

namespace uplink {

inline constexpr double kPi = std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace uplink

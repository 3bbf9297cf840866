#ifndef IRSMEC_COMMON_HPP
#define IRSMEC_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace irsmec {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Closed interval [lo, hi] used for uniform sampling of task and mobility fields.
struct Range {
    double lo = 0.0;
    double hi = 0.0;
    bool valid() const { return lo <= hi; }
};

/// Thrown when a config file or a programmatically built config is invalid.
/// The message names the offending field.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Maps any angle into [0, 2*pi).
inline double normalize_phase(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

}  // namespace irsmec

#endif

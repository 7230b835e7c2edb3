#ifndef VISCO_TYPES_HPP
#define VISCO_TYPES_HPP

#include <array>
#include <cmath>
#include <complex>

namespace visco {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Matrix3 = std::array<std::array<double, 3>, 3>;
using Matrix3c = std::array<std::array<Complex, 3>, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

inline double norm(const Vec3& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

}  // namespace visco

#endif  // VISCO_TYPES_HPP

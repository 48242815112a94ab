#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace geoctrl {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Point of T*R^4, split as (t, x, tau, xi).
struct PhasePoint {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  double tau = 0.0;
  Vec3 xi = Vec3::Zero();

  Vec8 pack() const {
    Vec8 y;
    y << t, x(0), x(1), x(2), tau, xi(0), xi(1), xi(2);
    return y;
  }
  static PhasePoint unpack(const Vec8& y) {
    PhasePoint w;
    w.t = y(0);
    w.x = y.segment<3>(1);
    w.tau = y(4);
    w.xi = y.segment<3>(5);
    return w;
  }
};

enum class Branch { plus, minus };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

// <x> = sqrt(1 + |x|^2)
inline double jbracket(const Vec3& x) { return std::sqrt(1.0 + x.squaredNorm()); }
inline double jbracket_r(double r) { return std::sqrt(1.0 + r * r); }

inline double sq(double v) { return v * v; }

}  // namespace geoctrl

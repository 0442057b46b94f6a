/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "restyle/common.hpp"

namespace restyle {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// 3x3 projective transform on pixel coordinates. Always invertible
/// (|det| > 1e-12 enforced) and normalized so m(2,2) == 1 whenever that
/// entry is meaningfully nonzero.
class Homography {
 public:
  Homography() : m_(Mat3::Identity()) {}

  static Homography identity() { return Homography(); }

  static Homography from_matrix(const Mat3& m) {
    Mat3 n = m;
    double frob = n.norm();
    if (!(frob > 0.0) || !n.allFinite())
      throw EstimationError("homography: matrix is not finite");
    if (std::abs(n(2, 2)) > 1e-12 * frob) n /= n(2, 2);
    if (std::abs(n.determinant()) <= 1e-12)
      throw EstimationError("homography: matrix is singular");
    Homography h;
    h.m_ = n;
    return h;
  }

  static Homography translation(double dx, double dy) {
    Mat3 m = Mat3::Identity();
    m(0, 2) = dx;
    m(1, 2) = dy;
    return from_matrix(m);
  }

  static Homography scaling(double s) { return scale_offset(s, 0.0, 0.0); }

  /// [[s,0,ox],[0,s,oy],[0,0,1]]
  static Homography scale_offset(double s, double ox, double oy) {
    Mat3 m = Mat3::Identity();
    m(0, 0) = s;
    m(1, 1) = s;
    m(0, 2) = ox;
    m(1, 2) = oy;
    return from_matrix(m);
  }

  static Homography rotation_about(double radians, double cx, double cy) {
    double c = std::cos(radians), s = std::sin(radians);
    Mat3 m = Mat3::Identity();
    m(0, 0) = c;
    m(0, 1) = -s;
    m(1, 0) = s;
    m(1, 1) = c;
    m(0, 2) = cx - c * cx + s * cy;
    m(1, 2) = cy - s * cx - c * cy;
    return from_matrix(m);
  }

  const Mat3& matrix() const { return m_; }

  Homography inverse() const { return from_matrix(m_.inverse().eval()); }

  Homography compose(const Homography& rhs) const {
    return from_matrix((m_ * rhs.m_).eval());
  }

  friend Homography operator*(const Homography& a, const Homography& b) {
    return a.compose(b);
  }

  Vec2 apply(const Vec2& p) const {
    Vec3 q = m_ * Vec3(p.x(), p.y(), 1.0);
    if (std::abs(q.z()) < 1e-12) {
      double big = std::numeric_limits<double>::max() / 4.0;
      return Vec2(q.x() >= 0 ? big : -big, q.y() >= 0 ? big : -big);
    }
    return Vec2(q.x() / q.z(), q.y() / q.z());
  }

  bool is_identity(double tol = 1e-9) const {
    return (m_ - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  Mat3 m_;
};

/// Rank-2 epipolar constraint matrix with unit Frobenius norm.
class FundamentalMatrix {
 public:
  FundamentalMatrix() : m_(Mat3::Zero()) {}

  /// Projects onto the rank-2 manifold (zeroes the smallest singular
  /// value), scales to unit Frobenius norm, and canonicalizes the sign.
  static FundamentalMatrix from_matrix(const Mat3& m) {
    if (!m.allFinite())
      throw EstimationError("fundamental: matrix is not finite");
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Vec3 s = svd.singularValues();
    if (!(s(1) > 0.0))
      throw EstimationError("fundamental: matrix has rank < 2");
    s(2) = 0.0;
    Mat3 f = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
    f /= f.norm();
    int r = 0, c = 0;
    f.cwiseAbs().maxCoeff(&r, &c);
    if (f(r, c) < 0.0) f = -f;
    FundamentalMatrix out;
    out.m_ = f;
    return out;
  }

  const Mat3& matrix() const { return m_; }

  /// First-order geometric (Sampson) distance of a correspondence, in px.
  double sampson_distance(const Vec2& src, const Vec2& dst) const {
    Vec3 x1(src.x(), src.y(), 1.0);
    Vec3 x2(dst.x(), dst.y(), 1.0);
    Vec3 fx1 = m_ * x1;
    Vec3 ftx2 = m_.transpose() * x2;
    double e = x2.dot(fx1);
    double denom = fx1.x() * fx1.x() + fx1.y() * fx1.y() +
                   ftx2.x() * ftx2.x() + ftx2.y() * ftx2.y();
    if (denom <= 0.0) return std::numeric_limits<double>::max();
    return std::abs(e) / std::sqrt(denom);
  }

  /// Algebraic epipolar residual x2' F x1.
  double epipolar_residual(const Vec2& src, const Vec2& dst) const {
    Vec3 x1(src.x(), src.y(), 1.0);
    Vec3 x2(dst.x(), dst.y(), 1.0);
    return x2.dot(m_ * x1);
  }

 private:
  Mat3 m_;
};

}  // namespace restyle

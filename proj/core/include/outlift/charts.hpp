#pragma once

#include <Eigen/Dense>

#include <random>

#include "outlift/smooth.hpp"

namespace outlift {

enum class MapKind { TorusShear, BallHalfTurn, SphereTwist };

// sin(pi*x) / cos(pi*x) with exact values at integer x, so that half turns
// and full turns come out as bit-exact matrices.
double sin_pi(double x);
double cos_pi(double x);

// R_z(pi*x) and the derivative of R_z with respect to the (full) angle,
// evaluated at angle pi*x.
Eigen::Matrix3d rot_z_pi(double x);
Eigen::Matrix3d rot_z_pi_deriv(double x);

double wrap_unit(double z);  // z - floor(z), in [0,1)

namespace geom {
// Torus chart: solid torus D^2 x S^1 with coordinates (x, y, theta),
// theta in [0,1).  One ball of radius 1/3 is removed around the fibre point
// (0,0,0).  The universal cover is the solid cylinder (x, y, z) with balls
// removed at every integer height; projection wraps z.
inline constexpr double torus_ball_radius = 1.0 / 3.0;
// Crossing surface for word reading: the disk theta = theta_star.
inline constexpr double theta_star = 0.5;

// Ball chart: unit ball with two balls of radius 1/12 removed on the x-axis.
// The minus ball (entry side of the tracked a_j loop) sits at +1/6, the plus
// ball at -1/6; the boundary gluing identifies them through R_z(pi).
inline constexpr double ball_offset = 1.0 / 6.0;
inline constexpr double ball_radius = 1.0 / 12.0;
inline const Eigen::Vector3d ball_minus_center{ball_offset, 0.0, 0.0};
inline const Eigen::Vector3d ball_plus_center{-ball_offset, 0.0, 0.0};

// Collar chart for sphere twists: shell 1 <= |v| <= 2 outside the sphere.
inline constexpr double collar_inner = 1.0;
inline constexpr double collar_outer = 2.0;
}  // namespace geom

enum class BallSide { None, Minus, Plus };

// One of the three model diffeomorphisms, supported inside a single chart
// and equal to the identity near the chart's outer boundary:
//
//   TorusShear   F(i,j): (x,y,theta) -> (x,y, theta + psi(r)),  r = |(x,y)|
//   BallHalfTurn G(j):   v -> R_z(psi(|v|) * pi) v
//   SphereTwist  T(i):   v -> R_z(2 pi eta(|v| - 1)) v
//
// The torus chart's removed ball belongs to sphere i and its theta* disk to
// sphere j; the ball chart's removed balls are the two sides of sphere j;
// the collar's inner boundary is sphere i.
class ChartMap {
 public:
  static ChartMap torus_shear(int i, int j, const BumpProfile& profile = {});
  static ChartMap ball_half_turn(int j, const BumpProfile& profile = {});
  static ChartMap sphere_twist(int i, const StepProfile& profile = {});

  // Same chart, flat profile: the map is the identity.
  ChartMap with_zero_profile() const;

  MapKind kind() const { return kind_; }
  int gen_i() const { return i_; }
  int gen_j() const { return j_; }
  int max_index() const;
  bool is_zero_profile() const { return zero_; }
  const BumpProfile& bump() const;
  const StepProfile& step() const;

  bool in_domain(const Eigen::Vector3d& p, double tol = 1e-12) const;
  void require_domain(const Eigen::Vector3d& p) const;  // throws std::domain_error
  bool on_outer_boundary(const Eigen::Vector3d& p, double tol = 1e-9) const;
  // Ball chart only: which removed-ball surface p sits on (within tol).
  BallSide ball_side(const Eigen::Vector3d& p, double tol = 1e-9) const;

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const;
  Eigen::Vector3d apply_inverse(const Eigen::Vector3d& p) const;

  // Chart-frame derivative of apply at p.
  Eigen::Matrix3d jacobian_analytic(const Eigen::Vector3d& p) const;
  // Derivative at p of (*this after inner), for two maps living in the same
  // chart; built from the summed profiles, not the chain rule.  Throws
  // std::invalid_argument unless chart_relation says SameChart.
  Eigen::Matrix3d jacobian_composite_with(const ChartMap& inner,
                                          const Eigen::Vector3d& p) const;
  // Derivative of apply_inverse at q (a point of the image chart).
  Eigen::Matrix3d jacobian_inverse_map(const Eigen::Vector3d& q) const;
  // Central-difference probe; test oracle only.  Throws std::domain_error if
  // the stencil leaves the chart.  Torus points are differentiated through
  // the lift, so theta is treated as an unwrapped coordinate.
  Eigen::Matrix3d jacobian_fd(const Eigen::Vector3d& p, double h = 1e-5) const;

  // Universal-cover action; torus chart only.
  Eigen::Vector3d lift_apply(const Eigen::Vector3d& q) const;
  Eigen::Vector3d lift_apply_inverse(const Eigen::Vector3d& q) const;
  bool lift_in_domain(const Eigen::Vector3d& q, double tol = 1e-12) const;
  Eigen::Matrix3d lift_jacobian(const Eigen::Vector3d& q) const;
  Eigen::Matrix3d lift_jacobian_inverse_map(const Eigen::Vector3d& q) const;
  static Eigen::Vector3d project(const Eigen::Vector3d& q);  // wrap z into [0,1)

  // Uniform-ish random point of the chart interior, keeping `margin` away
  // from every boundary piece.
  Eigen::Vector3d sample_domain_point(std::mt19937_64& rng, double margin = 0.02) const;
  // Same for the cover, z in [-3, 3]; torus chart only.
  Eigen::Vector3d sample_cover_point(std::mt19937_64& rng, double margin = 0.02) const;

  friend bool operator==(const ChartMap&, const ChartMap&) = default;

 private:
  ChartMap() = default;

  // Rotation kinds: angle in pi-units as a function of radius, and its
  // radial derivative.  Zero profile forces both to 0.
  double angle_pi(double rho) const;
  double dangle_pi(double rho) const;
  // Torus kind: vertical shift and its radial derivative.
  double shift(double r) const;
  double dshift(double r) const;

  Eigen::Matrix3d rot_jacobian(const Eigen::Vector3d& v, bool inverse_map) const;
  Eigen::Matrix3d shear_jacobian(const Eigen::Vector3d& q, bool inverse_map) const;

  MapKind kind_ = MapKind::TorusShear;
  int i_ = 0;
  int j_ = 0;
  bool zero_ = false;
  BumpProfile bump_{};
  StepProfile step_{};
};

// How the supports of two chart maps sit relative to each other.  SameChart:
// identical chart (same kind and anchor sphere), so compositions stay inside
// one coordinate system.  Disjoint: the charts touch disjoint sets of
// generator spheres, so each map is the identity on the other's support.
// Incompatible: distinct charts sharing a sphere; compositions have no
// common coordinate description here.
enum class ChartRelation { SameChart, Disjoint, Incompatible };

ChartRelation chart_relation(const ChartMap& a, const ChartMap& b);

}  // namespace outlift

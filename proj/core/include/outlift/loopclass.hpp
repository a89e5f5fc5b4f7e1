#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace outlift {

// Path of invertible 3x3 matrices on [0,1].  `grid` is the number of uniform
// intervals swept by loop_class; `refine_budget` bounds the bisection depth
// spent on any one interval before giving up.
struct MatrixPath {
  std::function<Eigen::Matrix3d(double)> eval;
  int grid = 256;
  int refine_budget = 16;
};

// Concatenation (a then b), reparametrized to [0,1].
MatrixPath concatenate(const MatrixPath& a, const MatrixPath& b);

struct UnitQuaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  double dot(const UnitQuaternion& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
  double norm() const;
  UnitQuaternion negated() const { return {-w, -x, -y, -z}; }
  // 4-vector distance |this - o|.
  double distance(const UnitQuaternion& o) const;
};

// Orthogonal factor of the polar decomposition, computed by the averaging
// iteration X <- (X + X^-T)/2 run until ||X^T X - I||_max < 1e-12.  Requires
// det(m) > 0; throws std::runtime_error otherwise or on non-convergence.
Eigen::Matrix3d polar_rotation(const Eigen::Matrix3d& m);

// Rotation matrix -> unit quaternion (Shepperd's branch selection).  With
// `prev` the sign is aligned to keep dot(prev, result) >= 0; without it the
// canonical representative has w >= 0, breaking a w == 0 tie by the first
// nonzero component.  Throws std::runtime_error when r is too far from a
// rotation for every branch.
UnitQuaternion to_quaternion(const Eigen::Matrix3d& r,
                             const std::optional<UnitQuaternion>& prev = std::nullopt);

struct LoopClassOptions {
  double continuity = 0.5;     // smallest accepted |<q_k, q_{k+1}>| per step
  double endpoint_tol = 1e-9;  // ||path(0) - I|| and ||path(1) - I||
  double pole_tol = 1e-6;      // distance of the final lift to +-(start lift)
};

// Z/2 class of a loop of invertible matrices: 0 if the quaternion lift of the
// polar rotation path closes up, 1 if it ends at the antipode.  Errors
// (std::runtime_error): endpoint not the identity, det <= 0 along the path,
// refinement budget exhausted, or a lift ending away from both poles.
int loop_class(const MatrixPath& path, const LoopClassOptions& opts = {});

}  // namespace outlift

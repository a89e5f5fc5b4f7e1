#include "outlift/loopclass.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace outlift {

double UnitQuaternion::norm() const { return std::sqrt(dot(*this)); }

double UnitQuaternion::distance(const UnitQuaternion& o) const {
  const double dw = w - o.w, dx = x - o.x, dy = y - o.y, dz = z - o.z;
  return std::sqrt(dw * dw + dx * dx + dy * dy + dz * dz);
}

MatrixPath concatenate(const MatrixPath& a, const MatrixPath& b) {
  MatrixPath c;
  c.grid = a.grid + b.grid;
  c.refine_budget = std::max(a.refine_budget, b.refine_budget);
  c.eval = [ea = a.eval, eb = b.eval](double t) {
    return t <= 0.5 ? ea(2.0 * t) : eb(2.0 * t - 1.0);
  };
  return c;
}

Eigen::Matrix3d polar_rotation(const Eigen::Matrix3d& m) {
  if (!(m.determinant() > 0.0))
    throw std::runtime_error("polar_rotation: determinant <= 0");
  Eigen::Matrix3d x = m;
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  for (int it = 0; it < 100; ++it) {
    if ((x.transpose() * x - id).cwiseAbs().maxCoeff() < 1e-12) return x;
    x = 0.5 * (x + x.transpose().inverse());
  }
  throw std::runtime_error("polar_rotation: averaging iteration did not converge");
}

UnitQuaternion to_quaternion(const Eigen::Matrix3d& r,
                             const std::optional<UnitQuaternion>& prev) {
  const double t0 = 1.0 + r(0, 0) + r(1, 1) + r(2, 2);
  const double t1 = 1.0 + r(0, 0) - r(1, 1) - r(2, 2);
  const double t2 = 1.0 - r(0, 0) + r(1, 1) - r(2, 2);
  const double t3 = 1.0 - r(0, 0) - r(1, 1) + r(2, 2);

  int branch = 0;
  double best = t0;
  if (t1 > best) { best = t1; branch = 1; }
  if (t2 > best) { best = t2; branch = 2; }
  if (t3 > best) { best = t3; branch = 3; }
  // The four candidates sum to 4 for an orthogonal input, so the best is >= 1.
  if (!(best >= 0.99))
    throw std::runtime_error("to_quaternion: input is not close to a rotation");

  UnitQuaternion q;
  const double s = 0.5 * std::sqrt(best);
  const double inv = 0.25 / s;
  switch (branch) {
    case 0:
      q.w = s;
      q.x = (r(2, 1) - r(1, 2)) * inv;
      q.y = (r(0, 2) - r(2, 0)) * inv;
      q.z = (r(1, 0) - r(0, 1)) * inv;
      break;
    case 1:
      q.x = s;
      q.w = (r(2, 1) - r(1, 2)) * inv;
      q.y = (r(0, 1) + r(1, 0)) * inv;
      q.z = (r(0, 2) + r(2, 0)) * inv;
      break;
    case 2:
      q.y = s;
      q.w = (r(0, 2) - r(2, 0)) * inv;
      q.x = (r(0, 1) + r(1, 0)) * inv;
      q.z = (r(1, 2) + r(2, 1)) * inv;
      break;
    case 3:
      q.z = s;
      q.w = (r(1, 0) - r(0, 1)) * inv;
      q.x = (r(0, 2) + r(2, 0)) * inv;
      q.y = (r(1, 2) + r(2, 1)) * inv;
      break;
  }

  const double n = q.norm();
  q = {q.w / n, q.x / n, q.y / n, q.z / n};

  if (prev) {
    if (prev->dot(q) < 0.0) q = q.negated();
    return q;
  }
  if (q.w > 0.0) return q;
  if (q.w < 0.0) return q.negated();
  for (double c : {q.x, q.y, q.z}) {
    if (c > 0.0) return q;
    if (c < 0.0) return q.negated();
  }
  return q;
}

namespace {

struct LiftState {
  const MatrixPath& path;
  const LoopClassOptions& opts;

  Eigen::Matrix3d rotation_at(double t) const {
    const Eigen::Matrix3d m = path.eval(t);
    if (!(m.determinant() > 0.0))
      throw std::runtime_error("loop_class: determinant <= 0 along the path");
    return polar_rotation(m);
  }

  UnitQuaternion advance(double t0, const UnitQuaternion& q0, double t1, int depth) const {
    const UnitQuaternion q1 = to_quaternion(rotation_at(t1), q0);
    if (q0.dot(q1) >= opts.continuity) return q1;
    if (depth <= 0)
      throw std::runtime_error("loop_class: refinement budget exhausted between t=" +
                               std::to_string(t0) + " and t=" + std::to_string(t1));
    const double tm = 0.5 * (t0 + t1);
    const UnitQuaternion qm = advance(t0, q0, tm, depth - 1);
    return advance(tm, qm, t1, depth - 1);
  }
};

}  // namespace

int loop_class(const MatrixPath& path, const LoopClassOptions& opts) {
  if (!path.eval) throw std::invalid_argument("loop_class: empty path");
  if (path.grid < 1) throw std::invalid_argument("loop_class: grid must be >= 1");
  if (!(opts.continuity > 0.0 && opts.continuity < 1.0))
    throw std::invalid_argument("loop_class: continuity must lie in (0,1)");

  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  if ((path.eval(0.0) - id).cwiseAbs().maxCoeff() > opts.endpoint_tol ||
      (path.eval(1.0) - id).cwiseAbs().maxCoeff() > opts.endpoint_tol)
    throw std::runtime_error("loop_class: path endpoints are not the identity");

  const LiftState state{path, opts};
  const UnitQuaternion start = to_quaternion(state.rotation_at(0.0));
  UnitQuaternion q = start;
  for (int k = 0; k < path.grid; ++k) {
    const double t0 = static_cast<double>(k) / path.grid;
    const double t1 = static_cast<double>(k + 1) / path.grid;
    q = state.advance(t0, q, t1, path.refine_budget);
  }

  if (q.distance(start) <= opts.pole_tol) return 0;
  if (q.distance(start.negated()) <= opts.pole_tol) return 1;
  throw std::runtime_error("loop_class: lift does not end at either pole");
}

}  // namespace outlift

#include "outlift/charts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace outlift {

double sin_pi(double x) {
  const double n = std::round(x);
  const double s = std::sin(M_PI * (x - n));
  return std::fmod(n, 2.0) != 0.0 ? -s : s;
}

double cos_pi(double x) {
  const double n = std::round(x);
  const double c = std::cos(M_PI * (x - n));
  return std::fmod(n, 2.0) != 0.0 ? -c : c;
}

Eigen::Matrix3d rot_z_pi(double x) {
  const double c = cos_pi(x), s = sin_pi(x);
  Eigen::Matrix3d m;
  m << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return m;
}

Eigen::Matrix3d rot_z_pi_deriv(double x) {
  const double c = cos_pi(x), s = sin_pi(x);
  Eigen::Matrix3d m;
  m << -s, -c, 0.0, c, -s, 0.0, 0.0, 0.0, 0.0;
  return m;
}

double wrap_unit(double z) {
  double w = z - std::floor(z);
  if (w >= 1.0) w = 0.0;  // guard against z = -eps rounding up
  return w;
}

namespace {

void check_index(int k) {
  if (k < 1) throw std::invalid_argument("generator indices are 1-based");
}

double planar_radius(const Eigen::Vector3d& p) { return std::hypot(p.x(), p.y()); }

// Circle distance of the wrapped height to the removed-ball fibre theta = 0.
double fibre_distance(double z) {
  const double f = wrap_unit(z);
  return std::min(f, 1.0 - f);
}

}  // namespace

ChartMap ChartMap::torus_shear(int i, int j, const BumpProfile& profile) {
  check_index(i);
  check_index(j);
  if (i == j) throw std::invalid_argument("torus_shear needs i != j");
  profile.validate();
  if (profile.plateau_end < geom::torus_ball_radius)
    throw std::invalid_argument("torus_shear: plateau must cover the removed ball (>= 1/3)");
  if (profile.support_end >= 1.0)
    throw std::invalid_argument("torus_shear: support must end inside the chart (< 1)");
  ChartMap m;
  m.kind_ = MapKind::TorusShear;
  m.i_ = i;
  m.j_ = j;
  m.bump_ = profile;
  return m;
}

ChartMap ChartMap::ball_half_turn(int j, const BumpProfile& profile) {
  check_index(j);
  profile.validate();
  if (profile.plateau_end < geom::ball_offset + geom::ball_radius)
    throw std::invalid_argument("ball_half_turn: plateau must cover both removed balls (>= 1/4)");
  if (profile.support_end >= 1.0)
    throw std::invalid_argument("ball_half_turn: support must end inside the chart (< 1)");
  ChartMap m;
  m.kind_ = MapKind::BallHalfTurn;
  m.j_ = j;
  m.bump_ = profile;
  return m;
}

ChartMap ChartMap::sphere_twist(int i, const StepProfile& profile) {
  check_index(i);
  profile.validate();
  ChartMap m;
  m.kind_ = MapKind::SphereTwist;
  m.i_ = i;
  m.step_ = profile;
  return m;
}

ChartMap ChartMap::with_zero_profile() const {
  ChartMap m = *this;
  m.zero_ = true;
  return m;
}

int ChartMap::max_index() const {
  return std::max(i_, j_);
}

const BumpProfile& ChartMap::bump() const {
  if (kind_ == MapKind::SphereTwist)
    throw std::invalid_argument("sphere twist has no bump profile");
  return bump_;
}

const StepProfile& ChartMap::step() const {
  if (kind_ != MapKind::SphereTwist)
    throw std::invalid_argument("only the sphere twist has a step profile");
  return step_;
}

double ChartMap::angle_pi(double rho) const {
  if (zero_) return 0.0;
  switch (kind_) {
    case MapKind::BallHalfTurn: return psi(bump_, rho);
    case MapKind::SphereTwist: return 2.0 * eta(step_, rho - geom::collar_inner);
    default: throw std::logic_error("angle_pi on a shear map");
  }
}

double ChartMap::dangle_pi(double rho) const {
  if (zero_) return 0.0;
  switch (kind_) {
    case MapKind::BallHalfTurn: return psi_prime(bump_, rho);
    case MapKind::SphereTwist: return 2.0 * eta_prime(step_, rho - geom::collar_inner);
    default: throw std::logic_error("dangle_pi on a shear map");
  }
}

double ChartMap::shift(double r) const { return zero_ ? 0.0 : psi(bump_, r); }
double ChartMap::dshift(double r) const { return zero_ ? 0.0 : psi_prime(bump_, r); }

bool ChartMap::in_domain(const Eigen::Vector3d& p, double tol) const {
  switch (kind_) {
    case MapKind::TorusShear: {
      if (planar_radius(p) > 1.0 + tol) return false;
      const double d = fibre_distance(p.z());
      return std::sqrt(p.x() * p.x() + p.y() * p.y() + d * d) >=
             geom::torus_ball_radius - tol;
    }
    case MapKind::BallHalfTurn: {
      if (p.norm() > 1.0 + tol) return false;
      return (p - geom::ball_minus_center).norm() >= geom::ball_radius - tol &&
             (p - geom::ball_plus_center).norm() >= geom::ball_radius - tol;
    }
    case MapKind::SphereTwist: {
      const double rho = p.norm();
      return rho >= geom::collar_inner - tol && rho <= geom::collar_outer + tol;
    }
  }
  return false;
}

void ChartMap::require_domain(const Eigen::Vector3d& p) const {
  if (!in_domain(p))
    throw std::domain_error("point (" + std::to_string(p.x()) + ", " +
                            std::to_string(p.y()) + ", " + std::to_string(p.z()) +
                            ") is outside the chart domain");
}

bool ChartMap::on_outer_boundary(const Eigen::Vector3d& p, double tol) const {
  switch (kind_) {
    case MapKind::TorusShear: return std::abs(planar_radius(p) - 1.0) <= tol;
    case MapKind::BallHalfTurn: return std::abs(p.norm() - 1.0) <= tol;
    case MapKind::SphereTwist: return std::abs(p.norm() - geom::collar_outer) <= tol;
  }
  return false;
}

BallSide ChartMap::ball_side(const Eigen::Vector3d& p, double tol) const {
  if (kind_ != MapKind::BallHalfTurn) return BallSide::None;
  if (std::abs((p - geom::ball_minus_center).norm() - geom::ball_radius) <= tol)
    return BallSide::Minus;
  if (std::abs((p - geom::ball_plus_center).norm() - geom::ball_radius) <= tol)
    return BallSide::Plus;
  return BallSide::None;
}

Eigen::Vector3d ChartMap::apply(const Eigen::Vector3d& p) const {
  require_domain(p);
  switch (kind_) {
    case MapKind::TorusShear:
      return {p.x(), p.y(), wrap_unit(p.z() + shift(planar_radius(p)))};
    default:
      return rot_z_pi(angle_pi(p.norm())) * p;
  }
}

Eigen::Vector3d ChartMap::apply_inverse(const Eigen::Vector3d& p) const {
  require_domain(p);
  switch (kind_) {
    case MapKind::TorusShear:
      return {p.x(), p.y(), wrap_unit(p.z() - shift(planar_radius(p)))};
    default:
      return rot_z_pi(-angle_pi(p.norm())) * p;
  }
}

namespace {

// Jacobian of v -> R_z(pi t(|v|)) v given t and dt = t'(|v|) at |v|.
Eigen::Matrix3d rot_profile_jac(const Eigen::Vector3d& v, double t, double dt) {
  Eigen::Matrix3d m = rot_z_pi(t);
  if (dt != 0.0)
    m += (M_PI * dt / v.norm()) * (rot_z_pi_deriv(t) * v) * v.transpose();
  return m;
}

// Jacobian of (x,y,z) -> (x,y,z + s(r)) given ds = s'(r) at r = |(x,y)|.
Eigen::Matrix3d shear_profile_jac(const Eigen::Vector3d& q, double ds) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  if (ds != 0.0) {
    const double r = planar_radius(q);
    m(2, 0) = ds * q.x() / r;
    m(2, 1) = ds * q.y() / r;
  }
  return m;
}

}  // namespace

Eigen::Matrix3d ChartMap::rot_jacobian(const Eigen::Vector3d& v, bool inverse_map) const {
  const double rho = v.norm();
  const double sgn = inverse_map ? -1.0 : 1.0;
  return rot_profile_jac(v, sgn * angle_pi(rho), sgn * dangle_pi(rho));
}

Eigen::Matrix3d ChartMap::shear_jacobian(const Eigen::Vector3d& q, bool inverse_map) const {
  const double ds = dshift(planar_radius(q));
  return shear_profile_jac(q, inverse_map ? -ds : ds);
}

Eigen::Matrix3d ChartMap::jacobian_composite_with(const ChartMap& inner,
                                                  const Eigen::Vector3d& p) const {
  if (chart_relation(*this, inner) != ChartRelation::SameChart)
    throw std::invalid_argument("composite jacobian needs two maps in the same chart");
  require_domain(p);
  if (kind_ == MapKind::TorusShear) {
    const double r = planar_radius(p);
    return shear_profile_jac(p, dshift(r) + inner.dshift(r));
  }
  const double rho = p.norm();
  return rot_profile_jac(p, angle_pi(rho) + inner.angle_pi(rho),
                         dangle_pi(rho) + inner.dangle_pi(rho));
}

Eigen::Matrix3d ChartMap::jacobian_analytic(const Eigen::Vector3d& p) const {
  require_domain(p);
  return kind_ == MapKind::TorusShear ? shear_jacobian(p, false) : rot_jacobian(p, false);
}

Eigen::Matrix3d ChartMap::jacobian_inverse_map(const Eigen::Vector3d& q) const {
  require_domain(q);
  return kind_ == MapKind::TorusShear ? shear_jacobian(q, true) : rot_jacobian(q, true);
}

Eigen::Matrix3d ChartMap::jacobian_fd(const Eigen::Vector3d& p, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("fd step must be > 0");
  const bool torus = kind_ == MapKind::TorusShear;
  Eigen::Matrix3d m;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d hi = p, lo = p;
    hi[k] += h;
    lo[k] -= h;
    const bool ok = torus ? (lift_in_domain(hi) && lift_in_domain(lo))
                          : (in_domain(hi) && in_domain(lo));
    if (!ok) throw std::domain_error("fd stencil leaves the chart domain");
    const Eigen::Vector3d d =
        torus ? Eigen::Vector3d(lift_apply(hi) - lift_apply(lo))
              : Eigen::Vector3d(apply(hi) - apply(lo));
    m.col(k) = d / (2.0 * h);
  }
  return m;
}

Eigen::Vector3d ChartMap::lift_apply(const Eigen::Vector3d& q) const {
  if (kind_ != MapKind::TorusShear)
    throw std::invalid_argument("lift_apply is defined for the torus chart only");
  return {q.x(), q.y(), q.z() + shift(planar_radius(q))};
}

Eigen::Vector3d ChartMap::lift_apply_inverse(const Eigen::Vector3d& q) const {
  if (kind_ != MapKind::TorusShear)
    throw std::invalid_argument("lift_apply_inverse is defined for the torus chart only");
  return {q.x(), q.y(), q.z() - shift(planar_radius(q))};
}

bool ChartMap::lift_in_domain(const Eigen::Vector3d& q, double tol) const {
  if (kind_ != MapKind::TorusShear) return false;
  if (planar_radius(q) > 1.0 + tol) return false;
  const double d = q.z() - std::round(q.z());
  return std::sqrt(q.x() * q.x() + q.y() * q.y() + d * d) >=
         geom::torus_ball_radius - tol;
}

Eigen::Matrix3d ChartMap::lift_jacobian(const Eigen::Vector3d& q) const {
  if (kind_ != MapKind::TorusShear)
    throw std::invalid_argument("lift_jacobian is defined for the torus chart only");
  return shear_jacobian(q, false);
}

Eigen::Matrix3d ChartMap::lift_jacobian_inverse_map(const Eigen::Vector3d& q) const {
  if (kind_ != MapKind::TorusShear)
    throw std::invalid_argument("lift_jacobian_inverse_map is defined for the torus chart only");
  return shear_jacobian(q, true);
}

Eigen::Vector3d ChartMap::project(const Eigen::Vector3d& q) {
  return {q.x(), q.y(), wrap_unit(q.z())};
}

Eigen::Vector3d ChartMap::sample_domain_point(std::mt19937_64& rng, double margin) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    switch (kind_) {
      case MapKind::TorusShear: {
        const double x = sym(rng), y = sym(rng);
        if (x * x + y * y > (1.0 - margin) * (1.0 - margin)) break;
        const double th = unit(rng);
        const double d = std::min(th, 1.0 - th);
        const double rb = geom::torus_ball_radius + margin;
        if (x * x + y * y + d * d < rb * rb) break;
        return {x, y, th};
      }
      case MapKind::BallHalfTurn: {
        const Eigen::Vector3d v{sym(rng), sym(rng), sym(rng)};
        if (v.norm() > 1.0 - margin) break;
        if ((v - geom::ball_minus_center).norm() < geom::ball_radius + margin) break;
        if ((v - geom::ball_plus_center).norm() < geom::ball_radius + margin) break;
        return v;
      }
      case MapKind::SphereTwist: {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::Vector3d dir{gauss(rng), gauss(rng), gauss(rng)};
        const double n = dir.norm();
        if (n < 1e-12) break;
        std::uniform_real_distribution<double> radial(geom::collar_inner + margin,
                                                      geom::collar_outer - margin);
        return (radial(rng) / n) * dir;
      }
    }
  }
  throw std::runtime_error("sample_domain_point: rejection sampling failed");
}

namespace {

bool same_chart(const ChartMap& a, const ChartMap& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case MapKind::TorusShear:
      // the tube is pinned by both spheres it runs between
      return a.gen_i() == b.gen_i() && a.gen_j() == b.gen_j();
    case MapKind::BallHalfTurn:
      return a.gen_j() == b.gen_j();
    case MapKind::SphereTwist:
      return a.gen_i() == b.gen_i();
  }
  return false;
}

std::pair<int, int> sphere_set(const ChartMap& m) {
  switch (m.kind()) {
    case MapKind::TorusShear: return {m.gen_i(), m.gen_j()};
    case MapKind::BallHalfTurn: return {m.gen_j(), 0};
    case MapKind::SphereTwist: return {m.gen_i(), 0};
  }
  return {0, 0};
}

}  // namespace

ChartRelation chart_relation(const ChartMap& a, const ChartMap& b) {
  if (same_chart(a, b)) return ChartRelation::SameChart;
  const auto [a1, a2] = sphere_set(a);
  const auto [b1, b2] = sphere_set(b);
  const auto touches = [b1 = b1, b2 = b2](int s) {
    return s != 0 && (s == b1 || s == b2);
  };
  if (touches(a1) || touches(a2)) return ChartRelation::Incompatible;
  return ChartRelation::Disjoint;
}

Eigen::Vector3d ChartMap::sample_cover_point(std::mt19937_64& rng, double margin) const {
  if (kind_ != MapKind::TorusShear)
    throw std::invalid_argument("sample_cover_point is defined for the torus chart only");
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> height(-3.0, 3.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double x = sym(rng), y = sym(rng);
    if (x * x + y * y > (1.0 - margin) * (1.0 - margin)) continue;
    const double z = height(rng);
    const double d = z - std::round(z);
    const double rb = geom::torus_ball_radius + margin;
    if (x * x + y * y + d * d < rb * rb) continue;
    return {x, y, z};
  }
  throw std::runtime_error("sample_cover_point: rejection sampling failed");
}

}  // namespace outlift

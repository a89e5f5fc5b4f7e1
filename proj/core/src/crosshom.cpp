#include "outlift/crosshom.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace outlift {

std::string render_bits(const TwistVector& t) {
  std::string s;
  s.reserve(t.size());
  for (std::uint8_t b : t) s += b ? '1' : '0';
  return s;
}

TwistVector zero_bits(int rank) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  return TwistVector(static_cast<std::size_t>(rank), 0);
}

TwistVector basis_bits(int rank, int i) {
  TwistVector t = zero_bits(rank);
  if (i < 1 || i > rank) throw std::invalid_argument("basis index outside 1..rank");
  t[i - 1] = 1;
  return t;
}

Eigen::Matrix3d chart_derivative(const ChartMap& map, const Eigen::Vector3d& p) {
  if (map.kind() == MapKind::TorusShear) {
    const Eigen::Vector3d q = map.lift_apply(p);
    return map.lift_jacobian_inverse_map(q).inverse();
  }
  return map.jacobian_inverse_map(map.apply(p)).inverse();
}

namespace {

double circle_diff(double a) { return a - std::round(a); }

struct GeomPiece {
  double t0 = 0.0, t1 = 0.0;
  std::vector<Eigen::Vector3d> pts;  // empty for exterior stubs

  bool exterior() const { return pts.empty(); }

  Eigen::Vector3d at(double t, bool torus) const {
    const double u = (t - t0) / (t1 - t0) * (pts.size() - 1);
    const int last = static_cast<int>(pts.size()) - 2;
    const int idx = std::clamp(static_cast<int>(std::floor(u)), 0, last);
    const double frac = std::clamp(u - idx, 0.0, 1.0);
    const Eigen::Vector3d& a = pts[idx];
    const Eigen::Vector3d& b = pts[idx + 1];
    Eigen::Vector3d out = a + frac * (b - a);
    // Interpolate the fibre coordinate along the short circle arc when the
    // raw gap wraps (in-chart steps are below 0.05, so a gap over 1/2 must
    // be a wrap).
    if (torus && std::abs(b.z() - a.z()) > 0.5)
      out.z() = wrap_unit(a.z() + frac * circle_diff(b.z() - a.z()));
    return out;
  }
};

}  // namespace

MatrixPath derivative_along(const ChartMap& map, const TrackedLoop& loop,
                            const PathBuildOptions& opts) {
  if (opts.grid < 1) throw std::invalid_argument("path grid must be >= 1");
  if (opts.refine_budget < 0) throw std::invalid_argument("refine budget must be >= 0");
  if (!(opts.junction_tol > 0.0)) throw std::invalid_argument("junction tolerance must be > 0");

  auto pieces = std::make_shared<std::vector<GeomPiece>>();
  double cursor = 0.0;
  for (const LoopEvent& e : loop.events) {
    if (std::holds_alternative<CrossingEvent>(e)) continue;
    GeomPiece g;
    if (const auto* s = std::get_if<ExteriorStub>(&e)) {
      g.t0 = s->t0;
      g.t1 = s->t1;
    } else {
      const auto& p = std::get<PolylinePiece>(e);
      if (p.pts.size() < 2) throw std::invalid_argument("polyline has fewer than 2 vertices");
      g = {p.t0, p.t1, p.pts};
    }
    if (std::abs(g.t0 - cursor) > 1e-12 || !(g.t1 > g.t0))
      throw std::invalid_argument("loop pieces do not tile [0,1]");
    cursor = g.t1;
    pieces->push_back(std::move(g));
  }
  if (pieces->empty() || std::abs(cursor - 1.0) > 1e-12)
    throw std::invalid_argument("loop pieces do not tile [0,1]");

  const bool torus = map.kind() == MapKind::TorusShear;
  const ChartMap m = map;

  auto piece_matrix = [m, torus](const GeomPiece& g, double t) -> Eigen::Matrix3d {
    if (g.exterior()) return Eigen::Matrix3d::Identity();
    return chart_derivative(m, g.at(t, torus));
  };

  // Eager continuity check at every junction.
  for (std::size_t k = 0; k + 1 < pieces->size(); ++k) {
    const GeomPiece& left = (*pieces)[k];
    const GeomPiece& right = (*pieces)[k + 1];
    const double gap = (piece_matrix(left, left.t1) - piece_matrix(right, right.t0))
                           .cwiseAbs()
                           .maxCoeff();
    if (gap > opts.junction_tol)
      throw std::runtime_error("derivative path discontinuous at t=" +
                               std::to_string(left.t1) + " (gap " + std::to_string(gap) + ")");
  }

  MatrixPath path;
  path.grid = opts.grid;
  path.refine_budget = opts.refine_budget;
  path.eval = [pieces, piece_matrix](double t) -> Eigen::Matrix3d {
    const double tc = std::clamp(t, 0.0, 1.0);
    // Last piece whose start is <= tc.
    std::size_t lo = 0, hi = pieces->size();
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if ((*pieces)[mid].t0 <= tc) lo = mid;
      else hi = mid;
    }
    return piece_matrix((*pieces)[lo], tc);
  };
  return path;
}

TwistVector twisting_of(const ChartMap& map, int rank, const TwistingOptions& opts) {
  TwistVector bits = zero_bits(rank);
  for (int k = 1; k <= rank; ++k) {
    const TrackedLoop loop = generator_loop(k, map, rank, opts.loop_samples);
    const MatrixPath path = derivative_along(map, loop, opts.path);
    bits[k - 1] = static_cast<std::uint8_t>(loop_class(path, opts.lift));
  }
  return bits;
}

double cocycle_residual(const ChartMap& a, const ChartMap& b, const SamplePoint& sp) {
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  switch (chart_relation(a, b)) {
    case ChartRelation::SameChart: {
      const Eigen::Matrix3d lhs = a.jacobian_composite_with(b, sp.p);
      const Eigen::Matrix3d rhs = a.jacobian_analytic(b.apply(sp.p)) * b.jacobian_analytic(sp.p);
      return (lhs - rhs).cwiseAbs().maxCoeff();
    }
    case ChartRelation::Disjoint: {
      switch (sp.site) {
        case SamplePoint::Site::ChartOfA: {
          // b is the identity near p, so D(b) = I and b(p) = p.
          const Eigen::Matrix3d da = a.jacobian_analytic(sp.p);
          return (da - da * id).cwiseAbs().maxCoeff();
        }
        case SamplePoint::Site::ChartOfB: {
          const Eigen::Matrix3d db = b.jacobian_analytic(sp.p);
          return (db - id * db).cwiseAbs().maxCoeff();
        }
        case SamplePoint::Site::Exterior:
          return (id - id * id).cwiseAbs().maxCoeff();
      }
      throw std::logic_error("unreachable");
    }
    case ChartRelation::Incompatible:
      throw std::invalid_argument("undefined composition across incompatible charts");
  }
  throw std::logic_error("unreachable");
}

double deck_invariance_residual(const ChartMap& torus, const Eigen::Vector3d& p,
                                int deck_shift, bool fd, double h) {
  if (torus.kind() != MapKind::TorusShear)
    throw std::invalid_argument("deck invariance concerns the torus chart");
  const Eigen::Vector3d q0 = p;
  const Eigen::Vector3d qk{p.x(), p.y(), p.z() + deck_shift};
  if (!fd) {
    const Eigen::Matrix3d m0 = torus.lift_jacobian_inverse_map(torus.lift_apply(q0));
    const Eigen::Matrix3d mk = torus.lift_jacobian_inverse_map(torus.lift_apply(qk));
    return (m0 - mk).cwiseAbs().maxCoeff();
  }
  if (!(h > 0.0)) throw std::invalid_argument("fd step must be > 0");
  const auto fd_jac = [&](const Eigen::Vector3d& q) {
    Eigen::Matrix3d m;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d hi = q, lo = q;
      hi[k] += h;
      lo[k] -= h;
      m.col(k) = (torus.lift_apply_inverse(hi) - torus.lift_apply_inverse(lo)) / (2.0 * h);
    }
    return m;
  };
  return (fd_jac(torus.lift_apply(q0)) - fd_jac(torus.lift_apply(qk))).cwiseAbs().maxCoeff();
}

}  // namespace outlift

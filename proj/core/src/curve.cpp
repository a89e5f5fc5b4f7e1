#include "outlift/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace outlift {

bool operator==(const PolylinePiece& a, const PolylinePiece& b) {
  if (a.t0 != b.t0 || a.t1 != b.t1 || a.pts.size() != b.pts.size()) return false;
  for (std::size_t k = 0; k < a.pts.size(); ++k)
    if (!(a.pts[k].array() == b.pts[k].array()).all()) return false;
  return true;
}

double event_start(const LoopEvent& e) {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CrossingEvent>) return v.t;
        else return v.t0;
      },
      e);
}

namespace {

constexpr double kMaxStep = 0.05;
constexpr double kSurfaceTol = 1e-9;
constexpr double kJunctionTol = 1e-12;

double circle_diff(double a) { return a - std::round(a); }

double step_length(MapKind kind, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double dx = b.x() - a.x(), dy = b.y() - a.y();
  const double dz = kind == MapKind::TorusShear ? circle_diff(b.z() - a.z()) : b.z() - a.z();
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::vector<Eigen::Vector3d> segment(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                     int n) {
  std::vector<Eigen::Vector3d> pts(n);
  for (int m = 0; m < n; ++m) {
    const double u = static_cast<double>(m) / (n - 1);
    pts[m] = a + u * (b - a);
  }
  pts[n - 1] = b;
  return pts;
}

std::vector<Eigen::Vector3d> reversed(std::vector<Eigen::Vector3d> pts) {
  std::reverse(pts.begin(), pts.end());
  return pts;
}

double vertex_param(const PolylinePiece& p, int m) {
  return p.t0 + (p.t1 - p.t0) * (static_cast<double>(m) / (p.pts.size() - 1));
}

void check_density(MapKind kind, const PolylinePiece& p, const char* what) {
  if (p.pts.size() < 2) throw ResampleNeeded(std::string(what) + " polyline has < 2 vertices");
  for (std::size_t m = 0; m + 1 < p.pts.size(); ++m)
    if (step_length(kind, p.pts[m], p.pts[m + 1]) >= kMaxStep)
      throw ResampleNeeded(std::string("undersampled ") + what +
                           " polyline: consecutive vertices too far apart to certify crossings");
}

bool on_removed_boundary(const ChartMap& map, const Eigen::Vector3d& p, double tol) {
  switch (map.kind()) {
    case MapKind::TorusShear: {
      const double f = wrap_unit(p.z());
      const double d = std::min(f, 1.0 - f);
      const double rr = std::sqrt(p.x() * p.x() + p.y() * p.y() + d * d);
      return std::abs(rr - geom::torus_ball_radius) <= tol;
    }
    case MapKind::BallHalfTurn:
      return map.ball_side(p, tol) != BallSide::None;
    case MapKind::SphereTwist:
      return std::abs(p.norm() - geom::collar_inner) <= tol;
  }
  return false;
}

}  // namespace

TrackedLoop generator_loop(int k, const ChartMap& map, int rank, int samples) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (k < 1 || k > rank) throw std::invalid_argument("generator index outside 1..rank");
  if (map.max_index() > rank)
    throw std::invalid_argument("chart map mentions a generator beyond the rank");
  if (samples < 2) throw std::invalid_argument("need at least 2 samples per piece");

  TrackedLoop loop;
  loop.rank = rank;

  const bool meets = map.kind() == MapKind::BallHalfTurn ? k == map.gen_j() : k == map.gen_i();
  if (!meets) {
    loop.events = {ExteriorStub{0.0, 0.5}, CrossingEvent{0.5, k, +1}, ExteriorStub{0.5, 1.0}};
    return loop;
  }

  switch (map.kind()) {
    case MapKind::TorusShear: {
      // Emerge from the removed ball at theta = 0 and run outward along the
      // x-axis to the chart boundary.
      std::vector<Eigen::Vector3d> pts =
          segment({geom::torus_ball_radius, 0.0, 0.0}, {1.0, 0.0, 0.0}, samples);
      loop.events = {ExteriorStub{0.0, 0.25}, CrossingEvent{0.25, k, +1},
                     PolylinePiece{0.25, 0.75, std::move(pts)}, ExteriorStub{0.75, 1.0}};
      return loop;
    }
    case MapKind::SphereTwist: {
      std::vector<Eigen::Vector3d> pts =
          segment({geom::collar_inner, 0.0, 0.0}, {geom::collar_outer, 0.0, 0.0}, samples);
      loop.events = {ExteriorStub{0.0, 0.25}, CrossingEvent{0.25, k, +1},
                     PolylinePiece{0.25, 0.75, std::move(pts)}, ExteriorStub{0.75, 1.0}};
      return loop;
    }
    case MapKind::BallHalfTurn: {
      // Enter at the north pole, descend the axis, turn towards the minus
      // ball, teleport through the gluing, and retrace mirrored.
      const Eigen::Vector3d north{0.0, 0.0, 1.0};
      const Eigen::Vector3d stage{0.0, 0.0, 1.0 / 3.0};
      const Eigen::Vector3d c = geom::ball_minus_center;
      const Eigen::Vector3d hit = c + geom::ball_radius * (stage - c).normalized();

      std::vector<Eigen::Vector3d> g1 = segment(north, stage, samples);
      std::vector<Eigen::Vector3d> g2a = segment(stage, hit, samples);
      // Continue on the far side of the gluing: the half-turn image of the
      // reversed approach.
      std::vector<Eigen::Vector3d> g2b(samples);
      for (int m = 0; m < samples; ++m) {
        const Eigen::Vector3d& q = g2a[samples - 1 - m];
        g2b[m] = {-q.x(), -q.y(), q.z()};
      }
      std::vector<Eigen::Vector3d> g3 = reversed(g1);

      const double third = 1.0 / 3.0, two_thirds = 2.0 / 3.0;
      loop.events = {ExteriorStub{0.0, 0.1},
                     PolylinePiece{0.1, third, std::move(g1)},
                     PolylinePiece{third, 0.5, std::move(g2a)},
                     CrossingEvent{0.5, k, +1},
                     PolylinePiece{0.5, two_thirds, std::move(g2b)},
                     PolylinePiece{two_thirds, 0.9, std::move(g3)},
                     ExteriorStub{0.9, 1.0}};
      return loop;
    }
  }
  throw std::logic_error("unreachable");
}

TrackedLoop image_under(const ChartMap& map, const TrackedLoop& loop) {
  // Pass 1: pointwise image of every polyline, density-checked on both sides.
  std::vector<LoopEvent> mapped;
  mapped.reserve(loop.events.size());
  for (const LoopEvent& e : loop.events) {
    if (const auto* p = std::get_if<PolylinePiece>(&e)) {
      check_density(map.kind(), *p, "input");
      PolylinePiece img{p->t0, p->t1, {}};
      img.pts.reserve(p->pts.size());
      for (const Eigen::Vector3d& q : p->pts) img.pts.push_back(map.apply(q));
      check_density(map.kind(), img, "image");
      mapped.push_back(std::move(img));
    } else {
      mapped.push_back(e);
    }
  }

  // Pass 2 (ball chart): crossings adjacent to a polyline that the gluing
  // half-turn carried to the other removed ball flip sign.
  if (map.kind() == MapKind::BallHalfTurn) {
    for (std::size_t idx = 0; idx < mapped.size(); ++idx) {
      auto* cross = std::get_if<CrossingEvent>(&mapped[idx]);
      if (!cross) continue;
      int flip = 0;  // 0 unknown, +1 keep, -1 flip
      auto account = [&](const PolylinePiece& pre, const PolylinePiece& img, bool tail) {
        const Eigen::Vector3d& p0 = tail ? pre.pts.back() : pre.pts.front();
        const Eigen::Vector3d& p1 = tail ? img.pts.back() : img.pts.front();
        const double junction = tail ? pre.t1 : pre.t0;
        if (std::abs(junction - cross->t) > kJunctionTol) return;
        const BallSide before = map.ball_side(p0);
        if (before == BallSide::None) return;
        const BallSide after = map.ball_side(p1);
        if (after == BallSide::None)
          throw std::runtime_error("gluing carried a crossing endpoint off the removed spheres");
        const int f = before == after ? +1 : -1;
        if (flip != 0 && flip != f)
          throw std::runtime_error("inconsistent gluing relabel on the two sides of a crossing");
        flip = f;
      };
      if (idx > 0) {
        const auto* pre = std::get_if<PolylinePiece>(&loop.events[idx - 1]);
        const auto* img = std::get_if<PolylinePiece>(&mapped[idx - 1]);
        if (pre && img) account(*pre, *img, true);
      }
      if (idx + 1 < mapped.size()) {
        const auto* pre = std::get_if<PolylinePiece>(&loop.events[idx + 1]);
        const auto* img = std::get_if<PolylinePiece>(&mapped[idx + 1]);
        if (pre && img) account(*pre, *img, false);
      }
      if (flip == -1) cross->sign = -cross->sign;
    }
  }

  // Pass 3 (torus chart): insert the theta*-crossings of each image polyline.
  TrackedLoop out;
  out.rank = loop.rank;
  out.events.reserve(mapped.size());
  for (LoopEvent& e : mapped) {
    const auto* p = std::get_if<PolylinePiece>(&e);
    const bool insert = p && map.kind() == MapKind::TorusShear;
    PolylinePiece local;
    if (insert) local = *p;
    out.events.push_back(std::move(e));
    if (!insert) continue;
    for (std::size_t m = 0; m + 1 < local.pts.size(); ++m) {
      const double za = local.pts[m].z(), zb = local.pts[m + 1].z();
      const double delta = circle_diff(zb - za);
      const double off = circle_diff(geom::theta_star - za);
      if (std::abs(off) < kSurfaceTol || std::abs(off - delta) < kSurfaceTol)
        throw ResampleNeeded("image vertex lies on the crossing surface");
      const bool crosses = delta > 0.0 ? (off > 0.0 && off < delta)
                                       : (delta < 0.0 && off < 0.0 && off > delta);
      if (!crosses) continue;
      const double ta = vertex_param(local, static_cast<int>(m));
      const double tb = vertex_param(local, static_cast<int>(m) + 1);
      const double tc = ta + (off / delta) * (tb - ta);
      // Positive crossing when theta decreases through theta*.
      out.events.push_back(CrossingEvent{tc, map.gen_j(), delta > 0.0 ? -1 : +1});
    }
  }
  return out;
}

TrackedLoop resample_doubled(const TrackedLoop& loop) {
  TrackedLoop out;
  out.rank = loop.rank;
  out.events.reserve(loop.events.size());
  for (const LoopEvent& e : loop.events) {
    const auto* p = std::get_if<PolylinePiece>(&e);
    if (!p) {
      out.events.push_back(e);
      continue;
    }
    PolylinePiece q{p->t0, p->t1, {}};
    q.pts.reserve(p->pts.size() * 2 - 1);
    for (std::size_t m = 0; m + 1 < p->pts.size(); ++m) {
      const Eigen::Vector3d& a = p->pts[m];
      const Eigen::Vector3d& b = p->pts[m + 1];
      q.pts.push_back(a);
      Eigen::Vector3d mid = 0.5 * (a + b);
      // A z-gap above 1/2 can only be a wrap of the torus fibre coordinate
      // (in-chart steps stay below 0.05); take the circle midpoint there.
      if (std::abs(b.z() - a.z()) > 0.5)
        mid.z() = wrap_unit(a.z() + 0.5 * circle_diff(b.z() - a.z()));
      q.pts.push_back(mid);
    }
    q.pts.push_back(p->pts.back());
    out.events.push_back(std::move(q));
  }
  return out;
}

Word read_word(const TrackedLoop& loop) {
  std::vector<Letter> letters;
  for (const LoopEvent& e : loop.events)
    if (const auto* c = std::get_if<CrossingEvent>(&e)) letters.push_back({c->sphere, c->sign});
  return reduce(letters, loop.rank);
}

NielsenAuto rho_of(const ChartMap& map, int rank, int samples) {
  NielsenAuto f;
  f.rank = rank;
  f.images.reserve(rank);
  for (int k = 1; k <= rank; ++k) {
    TrackedLoop loop = generator_loop(k, map, rank, samples);
    for (int attempt = 0;; ++attempt) {
      try {
        f.images.push_back(read_word(image_under(map, loop)));
        break;
      } catch (const ResampleNeeded&) {
        if (attempt >= 6) throw;
        loop = resample_doubled(loop);
      }
    }
  }
  return f;
}

void validate_loop(const TrackedLoop& loop, const ChartMap& map, double margin) {
  if (loop.rank < 1) throw std::invalid_argument("loop rank must be >= 1");
  if (loop.events.size() < 2) throw std::invalid_argument("loop needs at least two events");
  if (const auto* s = std::get_if<ExteriorStub>(&loop.events.front()); !s || s->t0 != 0.0)
    throw std::invalid_argument("loop must start with an exterior stub at t=0");
  if (const auto* s = std::get_if<ExteriorStub>(&loop.events.back()); !s || s->t1 != 1.0)
    throw std::invalid_argument("loop must end with an exterior stub at t=1");

  double cursor = 0.0;        // end of the last geometric piece
  double piece_start = 0.0;   // start of the last geometric piece
  double last_start = 0.0;
  for (const LoopEvent& e : loop.events) {
    const double start = event_start(e);
    if (start < last_start - kJunctionTol)
      throw std::invalid_argument("events out of parameter order");
    last_start = start;

    if (const auto* c = std::get_if<CrossingEvent>(&e)) {
      if (c->t < 0.0 || c->t > 1.0) throw std::invalid_argument("crossing parameter outside [0,1]");
      if (c->sphere < 1 || c->sphere > loop.rank)
        throw std::invalid_argument("crossing sphere outside 1..rank");
      if (c->sign != 1 && c->sign != -1) throw std::invalid_argument("crossing sign must be +-1");
      if (c->t > cursor + kJunctionTol || c->t < piece_start - kJunctionTol)
        throw std::invalid_argument("crossing parameter detached from the adjacent pieces");
      continue;
    }

    const bool is_stub = std::holds_alternative<ExteriorStub>(e);
    const double t0 = is_stub ? std::get<ExteriorStub>(e).t0 : std::get<PolylinePiece>(e).t0;
    const double t1 = is_stub ? std::get<ExteriorStub>(e).t1 : std::get<PolylinePiece>(e).t1;
    if (std::abs(t0 - cursor) > kJunctionTol)
      throw std::invalid_argument("geometric pieces do not tile [0,1]");
    if (!(t1 > t0)) throw std::invalid_argument("piece has non-positive length");
    piece_start = t0;
    cursor = t1;
    if (is_stub) continue;

    const auto& p = std::get<PolylinePiece>(e);
    if (p.pts.size() < 2) throw std::invalid_argument("polyline has fewer than 2 vertices");
    for (const Eigen::Vector3d& v : p.pts) {
      if (!map.in_domain(v, 1e-9))
        throw std::invalid_argument("polyline vertex outside the chart domain");
      if (map.kind() == MapKind::TorusShear &&
          std::abs(circle_diff(v.z() - geom::theta_star)) < margin)
        throw std::invalid_argument("polyline vertex within margin of the crossing surface");
    }
  }
  if (std::abs(cursor - 1.0) > kJunctionTol)
    throw std::invalid_argument("geometric pieces do not reach t=1");

  // Endpoint rules depend on what sits at the junction: a crossing pins the
  // endpoint to a removed-sphere boundary, an adjacent polyline continues
  // from the same point, and an exterior stub requires the outer boundary.
  const auto junction_event = [&](std::size_t idx, double t, int dir) -> const LoopEvent* {
    for (std::size_t k = idx; dir > 0 ? ++k < loop.events.size() : k-- > 0;) {
      const LoopEvent& e = loop.events[k];
      if (const auto* c = std::get_if<CrossingEvent>(&e)) {
        if (std::abs(c->t - t) <= kJunctionTol) return &e;
        continue;  // crossing inside some piece's interior, not at this junction
      }
      return &e;
    }
    return nullptr;
  };
  const bool wraps = map.kind() == MapKind::TorusShear;
  const auto gap = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    Eigen::Vector3d d = a - b;
    if (wraps) d.z() = circle_diff(d.z());
    return d.cwiseAbs().maxCoeff();
  };
  for (std::size_t idx = 0; idx < loop.events.size(); ++idx) {
    const auto* p = std::get_if<PolylinePiece>(&loop.events[idx]);
    if (!p) continue;
    for (int dir : {-1, +1}) {
      const Eigen::Vector3d& endpoint = dir < 0 ? p->pts.front() : p->pts.back();
      const LoopEvent* adj = junction_event(idx, dir < 0 ? p->t0 : p->t1, dir);
      if (adj && std::holds_alternative<CrossingEvent>(*adj)) {
        if (!on_removed_boundary(map, endpoint, kSurfaceTol))
          throw std::invalid_argument("crossing endpoint not on a removed-sphere boundary");
      } else if (const auto* q = adj ? std::get_if<PolylinePiece>(adj) : nullptr) {
        if (gap(endpoint, dir < 0 ? q->pts.back() : q->pts.front()) > kSurfaceTol)
          throw std::invalid_argument("consecutive polylines do not share the junction point");
      } else {
        if (!map.on_outer_boundary(endpoint))
          throw std::invalid_argument("polyline endpoint not on the outer boundary");
      }
    }
  }
}

std::optional<Eigen::Vector3d> loop_point(const TrackedLoop& loop, const ChartMap& map,
                                          double t) {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("parameter outside [0,1]");
  const bool wraps = map.kind() == MapKind::TorusShear;
  for (const LoopEvent& e : loop.events) {
    if (const auto* p = std::get_if<PolylinePiece>(&e)) {
      if (t < p->t0 || t > p->t1) continue;
      const double u = (t - p->t0) / (p->t1 - p->t0) * static_cast<double>(p->pts.size() - 1);
      const auto k = std::min(static_cast<std::size_t>(u), p->pts.size() - 2);
      const double s = u - static_cast<double>(k);
      const Eigen::Vector3d& a = p->pts[k];
      Eigen::Vector3d b = p->pts[k + 1];
      if (wraps) b.z() = a.z() + circle_diff(b.z() - a.z());
      Eigen::Vector3d out = (1.0 - s) * a + s * b;
      if (wraps) out.z() = wrap_unit(out.z());
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace outlift

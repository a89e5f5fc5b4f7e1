#include "outlift/verify.hpp"

#include "outlift/crosshom.hpp"
#include "outlift/curve.hpp"
#include "outlift/freegroup.hpp"
#include "outlift/loopclass.hpp"
#include "outlift/modgroup.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace outlift {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num17(double v) {
  if (v == 0.0) v = 0.0;  // canonical zero: keep "-0" out of the CSV
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

__attribute__((format(printf, 1, 2))) std::string strf(const char* format, ...) {
  char buf[768];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double max_abs(const Eigen::Matrix3d& m) { return m.cwiseAbs().maxCoeff(); }

std::string map_label(const ChartMap& m) {
  switch (m.kind()) {
    case MapKind::TorusShear:
      return strf("F(%d,%d)", m.gen_i(), m.gen_j());
    case MapKind::BallHalfTurn:
      return strf("G(%d)", m.gen_j());
    case MapKind::SphereTwist:
      return strf("T(%d)", m.gen_i());
  }
  return "?";
}

std::string render_images(const NielsenAuto& f) {
  std::string s;
  for (int k = 1; k <= f.rank; ++k) {
    if (k > 1) s += ", ";
    s += strf("a%d->%s", k, to_text(f.images[static_cast<std::size_t>(k) - 1]).c_str());
  }
  return s;
}

struct BodyResult {
  double measured = 0.0;
  std::string detail;
};

template <typename Fn>
CheckRecord run_check(const char* name, double threshold, Fn&& body) {
  CheckRecord rec;
  rec.name = name;
  rec.threshold = threshold;
  const auto start = std::chrono::steady_clock::now();
  try {
    BodyResult r = body();
    rec.measured = r.measured;
    rec.detail = std::move(r.detail);
    rec.status = rec.measured <= rec.threshold ? CheckStatus::Pass : CheckStatus::Fail;
  } catch (const std::exception& e) {
    rec.status = CheckStatus::Error;
    rec.measured = kInf;
    rec.detail = e.what();
  }
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

TrackedLoop image_with_retries(const ChartMap& map, TrackedLoop loop) {
  for (int attempt = 0;; ++attempt) {
    try {
      return image_under(map, loop);
    } catch (const ResampleNeeded&) {
      if (attempt >= 6) throw;
      loop = resample_doubled(loop);
    }
  }
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (rank < 2 || rank > 8) fail("rank must lie in 2..8");
  auto pow2 = [](int v) { return v >= 8 && (v & (v - 1)) == 0; };
  if (!pow2(loop_samples)) fail("loop_samples must be a power of two >= 8");
  if (!pow2(path_grid)) fail("path_grid must be a power of two >= 8");
  if (refine_budget < 0 || refine_budget > 48) fail("refine_budget must lie in 0..48");
  if (fd_points < 1) fail("fd_points must be positive");
  if (equiv_points < 1) fail("equiv_points must be positive");
  if (cocycle_points < 1) fail("cocycle_points must be positive");
  if (!(tol_fd > 0.0)) fail("tol_fd must be positive");
  if (!(fd_step > 0.0) || fd_step > 1e-2) fail("fd_step must lie in (0, 1e-2]");
  try {
    bump.validate();
    step.validate();
    (void)ChartMap::torus_shear(1, 2, bump);
    (void)ChartMap::ball_half_turn(1, bump);
    (void)ChartMap::sphere_twist(1, step);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

bool Report::all_pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) {
    return c.status == CheckStatus::Pass;
  });
}

CheckRecord check_psi_profile(const RunConfig& cfg) {
  return run_check("psi_profile", 1.0, [&]() -> BodyResult {
    const BumpProfile& P = cfg.bump;
    constexpr int kGrid = 10000;
    constexpr double kShapeTol = 1e-12;
    constexpr double kFdTol = 1e-6;
    double plateau = 0, tail = 0, range = 0, mono = 0, sign = 0;
    double prev = 1.0;
    for (int i = 0; i < kGrid; ++i) {
      const double r = static_cast<double>(i) / (kGrid - 1);
      const double v = psi(P, r);
      const double d = psi_prime(P, r);
      if (r <= P.plateau_end) plateau = std::max(plateau, std::abs(v - 1.0));
      if (r >= P.support_end) tail = std::max(tail, std::abs(v));
      range = std::max({range, v - 1.0, -v});
      if (i > 0) mono = std::max(mono, v - prev);  // must not increase
      sign = std::max(sign, d);                    // psi' <= 0
      prev = v;
    }
    const double h = cfg.fd_step;
    double fd_err = 0;
    for (int m = 0; m < 1000; ++m) {
      const double r = (m + 0.5) / 1000.0;
      const double fd = (psi(P, r + h) - psi(P, r - h)) / (2.0 * h);
      fd_err = std::max(fd_err, std::abs(fd - psi_prime(P, r)));
    }
    BodyResult out;
    out.measured = std::max({plateau / kShapeTol, tail / kShapeTol, range / kShapeTol,
                             mono / kShapeTol, sign / kShapeTol, fd_err / kFdTol});
    out.detail = strf("plateau=%.3g tail=%.3g range=%.3g monotone=%.3g sign=%.3g fd=%.3g",
                      plateau, tail, range, mono, sign, fd_err);
    return out;
  });
}

CheckRecord check_jacobian_fd(const RunConfig& cfg) {
  return run_check("jacobian_fd", 1.0, [&]() -> BodyResult {
    std::mt19937_64 rng(cfg.seed + 1);
    const ChartMap maps[] = {
        ChartMap::torus_shear(1, 2, cfg.bump),
        ChartMap::ball_half_turn(1, cfg.bump),
        ChartMap::sphere_twist(1, cfg.step),
    };
    double worst = 0.0;
    int bad_det = 0;
    std::string worst_at = "-";
    for (const ChartMap& map : maps) {
      for (int n = 0; n < cfg.fd_points; ++n) {
        const Eigen::Vector3d p = map.sample_domain_point(rng);
        const Eigen::Matrix3d a = map.jacobian_analytic(p);
        const Eigen::Matrix3d f = map.jacobian_fd(p, cfg.fd_step);
        const double err = max_abs(a - f);
        if (err > worst) {
          worst = err;
          worst_at = strf("%s at (%.6g, %.6g, %.6g)", map_label(map).c_str(), p.x(), p.y(),
                          p.z());
        }
        if (!(a.determinant() > 0.0)) ++bad_det;
      }
    }
    BodyResult out;
    out.measured = bad_det > 0 ? kInf : worst / cfg.tol_fd;
    out.detail = strf("max |analytic - fd| = %.3g (%s); nonpositive determinants: %d", worst,
                      worst_at.c_str(), bad_det);
    return out;
  });
}

CheckRecord check_cover_equivariance(const RunConfig& cfg) {
  return run_check("cover_equivariance", 1.0, [&]() -> BodyResult {
    const ChartMap F = ChartMap::torus_shear(1, 2, cfg.bump);
    std::mt19937_64 rng(cfg.seed + 2);
    double proj = 0, comm = 0, inv = 0, deck = 0, deck_fd = 0;
    const int fd_probes = std::min(cfg.equiv_points, 100);
    for (int n = 0; n < cfg.equiv_points; ++n) {
      const Eigen::Vector3d q = F.sample_cover_point(rng);
      const int shift = 1 + (n % 3);

      // project . lift_apply == apply . project, theta read on the circle
      const Eigen::Vector3d a = ChartMap::project(F.lift_apply(q));
      const Eigen::Vector3d b = F.apply(ChartMap::project(q));
      const double dz = std::abs(a.z() - b.z());
      proj = std::max({proj, std::abs(a.x() - b.x()), std::abs(a.y() - b.y()),
                       std::min(dz, 1.0 - dz)});

      // the lift commutes with the deck translation z -> z + shift
      const Eigen::Vector3d base = F.lift_apply(q);
      const Eigen::Vector3d up = F.lift_apply(q + Eigen::Vector3d(0.0, 0.0, shift));
      comm = std::max({comm, std::abs(up.x() - base.x()), std::abs(up.y() - base.y()),
                       std::abs(up.z() - base.z() - shift)});

      // inverse lift round trip
      inv = std::max(inv, (F.lift_apply_inverse(base) - q).cwiseAbs().maxCoeff());

      // deck invariance of the covering-frame derivative
      deck = std::max(deck, deck_invariance_residual(F, q, shift));
      if (n < fd_probes)
        deck_fd = std::max(deck_fd, deck_invariance_residual(F, q, shift, true, cfg.fd_step));
    }
    constexpr double kExact = 1e-12;
    constexpr double kFd = 1e-9;
    BodyResult out;
    out.measured =
        std::max({proj / kExact, comm / kExact, inv / kExact, deck / kExact, deck_fd / kFd});
    out.detail = strf(
        "projection=%.3g deck_translation=%.3g inverse_roundtrip=%.3g frame_deck=%.3g "
        "frame_deck_fd=%.3g",
        proj, comm, inv, deck, deck_fd);
    return out;
  });
}

CheckRecord check_loop_class_oracle(const RunConfig& cfg) {
  return run_check("loop_class_oracle", 1.0, [&]() -> BodyResult {
    const LoopClassOptions lift{};
    auto cls = [&](std::function<Eigen::Matrix3d(double)> f) {
      return loop_class(MatrixPath{std::move(f), cfg.path_grid, cfg.refine_budget}, lift);
    };

    int wrong = 0;
    std::string first_bad;
    auto expect = [&](int want, int got, const char* what) {
      if (want == got) return;
      ++wrong;
      if (first_bad.empty()) first_bad = strf("%s: class %d, expected %d", what, got, want);
    };

    const auto full_turn = [](double t) { return rot_z_pi(2.0 * t); };
    const auto constant = [](double) { return Eigen::Matrix3d::Identity().eval(); };
    const BumpProfile P = cfg.bump;
    const auto shear = [P](double t) {
      Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
      m(2, 0) = psi_prime(P, std::max(t, 0.0));
      return m;
    };

    expect(1, cls(full_turn), "full turn");
    expect(0, cls(constant), "constant loop");
    expect(0,
           loop_class(concatenate(MatrixPath{full_turn, cfg.path_grid, cfg.refine_budget},
                                  MatrixPath{full_turn, cfg.path_grid, cfg.refine_budget}),
                      lift),
           "doubled full turn");
    expect(0, cls(shear), "shear profile loop");

    std::mt19937_64 rng(cfg.seed + 3);
    std::uniform_real_distribution<double> amp_dist(-0.95, 0.95);
    std::uniform_real_distribution<double> ang_dist(0.5, 6.0);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20; ++trial) {
      const double a = amp_dist(rng);
      const bool use_shear = trial % 2 != 0;
      std::function<Eigen::Matrix3d(double)> inner =
          use_shear ? std::function<Eigen::Matrix3d(double)>(shear)
                    : std::function<Eigen::Matrix3d(double)>(full_turn);
      auto re = [a, inner](double t) {
        return inner(t + a * std::sin(2.0 * M_PI * t) / (2.0 * M_PI));
      };
      expect(use_shear ? 0 : 1, cls(re), "reparametrized loop");
    }
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::Vector3d axis(gauss(rng), gauss(rng), gauss(rng));
      if (axis.norm() < 1e-3) axis = Eigen::Vector3d::UnitX();
      axis.normalize();
      const double amp = ang_dist(rng);
      const bool use_shear = trial % 2 != 0;
      std::function<Eigen::Matrix3d(double)> inner =
          use_shear ? std::function<Eigen::Matrix3d(double)>(shear)
                    : std::function<Eigen::Matrix3d(double)>(full_turn);
      auto conj = [axis, amp, inner](double t) {
        const double s = std::sin(M_PI * t);
        const Eigen::Matrix3d g = Eigen::AngleAxisd(amp * s * s, axis).toRotationMatrix();
        return (g * inner(t) * g.transpose()).eval();
      };
      expect(use_shear ? 0 : 1, cls(conj), "conjugated loop");
    }

    // straight-line homotopy slices stay orientation preserving on the square
    double det_err = 0.0;
    int det_bad = 0;
    for (int si = 0; si < 100; ++si)
      for (int ti = 0; ti < 100; ++ti) {
        Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
        h(2, 0) = (ti / 99.0) * psi_prime(P, si / 99.0);
        const double det = h.determinant();
        if (!(det > 0.0)) ++det_bad;
        det_err = std::max(det_err, std::abs(det - 1.0));
      }

    BodyResult out;
    out.measured = (wrong > 0 || det_bad > 0) ? kInf : det_err / 1e-12;
    out.detail = strf("misclassified=%d det_violations=%d max|det-1|=%.3g%s%s", wrong,
                      det_bad, det_err, first_bad.empty() ? "" : "; first: ",
                      first_bad.c_str());
    return out;
  });
}

CheckRecord check_rho_realization(const RunConfig& cfg) {
  return run_check("rho_realization", 0.0, [&]() -> BodyResult {
    int mismatched = 0, cases = 0;
    std::string first_bad;
    auto probe = [&](const ChartMap& map, int n, const NielsenAuto& want) {
      ++cases;
      const NielsenAuto got = rho_of(map, n, cfg.loop_samples);
      if (got.images == want.images) return;
      ++mismatched;
      if (first_bad.empty())
        first_bad = strf("%s at n=%d: got [%s], expected [%s]", map_label(map).c_str(), n,
                         render_images(got).c_str(), render_images(want).c_str());
    };
    for (int n = 2; n <= cfg.rank; ++n) {
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          if (i == j) continue;
          probe(ChartMap::torus_shear(i, j, cfg.bump), n,
                nielsen_generator(n, NielsenGen::right_mult(i, j)));
        }
      for (int j = 1; j <= n; ++j)
        probe(ChartMap::ball_half_turn(j, cfg.bump), n,
              nielsen_generator(n, NielsenGen::invert(j)));
      for (int i = 1; i <= n; ++i)
        probe(ChartMap::sphere_twist(i, cfg.step), n, identity_auto(n));
    }
    BodyResult out;
    out.measured = mismatched;
    out.detail = strf("%d/%d induced automorphisms match%s%s", cases - mismatched, cases,
                      first_bad.empty() ? "" : "; first: ", first_bad.c_str());
    return out;
  });
}

CheckRecord check_twist_vectors(const RunConfig& cfg) {
  return run_check("twist_vectors", 0.0, [&]() -> BodyResult {
    TwistingOptions base{};
    base.loop_samples = cfg.loop_samples;
    base.path.grid = cfg.path_grid;
    base.path.refine_budget = cfg.refine_budget;
    TwistingOptions dense = base;
    dense.loop_samples *= 2;
    dense.path.grid *= 2;

    int mismatched = 0, cases = 0;
    std::string first_bad;
    auto probe = [&](const ChartMap& map, int n, const TwistVector& want) {
      ++cases;
      const TwistVector got = twisting_of(map, n, base);
      const TwistVector redo = twisting_of(map, n, dense);
      if (got == want && redo == want) return;
      ++mismatched;
      if (first_bad.empty())
        first_bad = strf("%s at n=%d: got %s / %s (doubled), expected %s",
                         map_label(map).c_str(), n, render_bits(got).c_str(),
                         render_bits(redo).c_str(), render_bits(want).c_str());
    };
    for (int n = 2; n <= cfg.rank; ++n) {
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          if (i != j) probe(ChartMap::torus_shear(i, j, cfg.bump), n, zero_bits(n));
      for (int j = 1; j <= n; ++j) probe(ChartMap::ball_half_turn(j, cfg.bump), n, zero_bits(n));
      for (int i = 1; i <= n; ++i)
        probe(ChartMap::sphere_twist(i, cfg.step), n, basis_bits(n, i));
    }
    BodyResult out;
    out.measured = mismatched;
    out.detail = strf("%d/%d twist vectors match at both densities%s%s", cases - mismatched,
                      cases, first_bad.empty() ? "" : "; first: ", first_bad.c_str());
    return out;
  });
}

CheckRecord check_g_path_structure(const RunConfig& cfg) {
  return run_check("g_path_structure", 1.0, [&]() -> BodyResult {
    const ChartMap G = ChartMap::ball_half_turn(1, cfg.bump);
    const TrackedLoop loop = generator_loop(1, G, cfg.rank, cfg.loop_samples);
    PathBuildOptions popts{};
    popts.grid = cfg.path_grid;
    popts.refine_budget = cfg.refine_budget;
    const MatrixPath path = derivative_along(G, loop, popts);

    Eigen::Matrix3d half_turn;
    half_turn << -1, 0, 0, 0, -1, 0, 0, 0, 1;
    double mid = 0, sym = 0;
    for (int k = 0; k <= cfg.path_grid; ++k) {
      const double t = static_cast<double>(k) / cfg.path_grid;
      const Eigen::Matrix3d m = path.eval(t);
      if (t >= 1.0 / 3.0 && t <= 2.0 / 3.0) mid = std::max(mid, max_abs(m - half_turn));
      if (t <= 0.5) sym = std::max(sym, max_abs(m - path.eval(1.0 - t)));
    }
    constexpr double kTol = 1e-9;
    BodyResult out;
    out.measured = std::max(mid, sym) / kTol;
    out.detail =
        strf("max |D - R_z(pi)| on middle third = %.3g; palindrome defect = %.3g", mid, sym);
    return out;
  });
}

CheckRecord check_cocycle_identity(const RunConfig& cfg) {
  return run_check("cocycle_identity", 1.0, [&]() -> BodyResult {
    std::mt19937_64 rng(cfg.seed + 4);
    BumpProfile alt_bump = cfg.bump;
    alt_bump.steepness = std::min(cfg.bump.steepness * 2.0, 200.0);
    StepProfile alt_step = cfg.step;
    alt_step.steepness = std::min(cfg.step.steepness * 2.0, 200.0);

    const ChartMap F = ChartMap::torus_shear(1, 2, cfg.bump);
    const ChartMap F2 = ChartMap::torus_shear(1, 2, alt_bump);
    const ChartMap G = ChartMap::ball_half_turn(1, cfg.bump);
    const ChartMap G2 = ChartMap::ball_half_turn(1, alt_bump);
    const ChartMap T = ChartMap::sphere_twist(1, cfg.step);
    const ChartMap T2 = ChartMap::sphere_twist(1, alt_step);

    double same = 0.0;
    auto same_pair = [&](const ChartMap& a, const ChartMap& b) {
      for (int n = 0; n < cfg.cocycle_points; ++n) {
        const SamplePoint sp{b.sample_domain_point(rng), SamplePoint::Site::ChartOfA};
        same = std::max(same, cocycle_residual(a, b, sp));
      }
    };
    same_pair(F, F);
    same_pair(F, F2);
    same_pair(G, G);
    same_pair(G, G2);
    same_pair(T, T);
    same_pair(T, T2);

    double zero = 0.0;
    {
      const ChartMap id = F.with_zero_profile();
      for (int n = 0; n < cfg.cocycle_points; ++n) {
        const SamplePoint sp{F.sample_domain_point(rng), SamplePoint::Site::ChartOfA};
        zero = std::max({zero, cocycle_residual(id, F, sp), cocycle_residual(F, id, sp)});
      }
    }

    double disjoint = 0.0;
    {
      const ChartMap B = ChartMap::ball_half_turn(3, cfg.bump);
      const ChartMap C = ChartMap::sphere_twist(3, cfg.step);
      const SamplePoint outside{Eigen::Vector3d(42.0, -7.0, 3.0),
                                SamplePoint::Site::Exterior};
      for (int n = 0; n < cfg.cocycle_points; ++n) {
        const SamplePoint in_a{F.sample_domain_point(rng), SamplePoint::Site::ChartOfA};
        const SamplePoint in_b{B.sample_domain_point(rng), SamplePoint::Site::ChartOfB};
        const SamplePoint in_c{C.sample_domain_point(rng), SamplePoint::Site::ChartOfB};
        disjoint = std::max({disjoint, cocycle_residual(F, B, in_a),
                             cocycle_residual(F, B, in_b), cocycle_residual(F, B, outside),
                             cocycle_residual(G, C, in_c)});
      }
    }

    bool incompatible_rejected = false;
    try {
      (void)cocycle_residual(F, ChartMap::ball_half_turn(2, cfg.bump),
                             SamplePoint{Eigen::Vector3d::Zero(),
                                         SamplePoint::Site::ChartOfB});
    } catch (const std::invalid_argument&) {
      incompatible_rejected = true;
    }

    BodyResult out;
    out.measured = std::max({same / 1e-8, zero / 1e-12, disjoint > 0.0 ? kInf : 0.0,
                             incompatible_rejected ? 0.0 : kInf});
    out.detail = strf("same-chart=%.3g zero-profile=%.3g disjoint=%.3g incompatible_rejected=%s",
                      same, zero, disjoint, incompatible_rejected ? "yes" : "no");
    return out;
  });
}

CheckRecord check_group_model(const RunConfig& cfg) {
  return run_check("group_model", 0.0, [&]() -> BodyResult {
    std::mt19937_64 rng(cfg.seed + 5);
    const int n = cfg.rank;
    std::uniform_int_distribution<int> gen_idx(1, n);
    std::uniform_int_distribution<int> coin(0, 2);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> len(0, 4);

    auto random_token = [&]() {
      const int c = coin(rng);
      if (c == 2) return NielsenGen::invert(gen_idx(rng));
      const int i = gen_idx(rng);
      int j = gen_idx(rng);
      while (j == i) j = gen_idx(rng);
      return NielsenGen::right_mult(i, j, c == 1);
    };
    auto random_tokens = [&](int count) {
      std::vector<NielsenGen> toks;
      toks.reserve(static_cast<std::size_t>(count));
      for (int k = 0; k < count; ++k) toks.push_back(random_token());
      return toks;
    };
    auto random_class = [&]() {
      TwistVector t(static_cast<std::size_t>(n));
      for (auto& v : t) v = static_cast<std::uint8_t>(bit(rng));
      return make_class(std::move(t), from_factorization(n, random_tokens(len(rng))));
    };

    int violations = 0;
    std::string first_bad;
    auto expect = [&](bool ok, const char* what) {
      if (ok) return;
      ++violations;
      if (first_bad.empty()) first_bad = what;
    };

    for (int trial = 0; trial < 200; ++trial) {
      const MappingClass a = random_class();
      const MappingClass b = random_class();
      const MappingClass c = random_class();
      expect(equal(multiply(multiply(a, b), c), multiply(a, multiply(b, c))), "associativity");
    }
    for (int trial = 0; trial < 50; ++trial) {
      const MappingClass a = random_class();
      expect(equal(multiply(a, identity_class(n)), a) &&
                 equal(multiply(identity_class(n), a), a),
             "identity laws");
      expect(is_identity(multiply(a, inverse(a))) && is_identity(multiply(inverse(a), a)),
             "inverse laws");
    }
    for (int i = 1; i <= n; ++i) {
      const MappingClass t = twist_class(n, i);
      expect(!is_identity(t), "twist generator nontrivial");
      expect(is_identity(multiply(t, t)), "twist generator has order 2");
      expect(is_identity(project(t)), "twist generator projects to the identity");
    }
    for (int trial = 0; trial < 50; ++trial) {
      const MappingClass s = section(from_factorization(n, random_tokens(len(rng))));
      for (int i = 1; i <= n; ++i) {
        const MappingClass conj = multiply(multiply(s, twist_class(n, i)), inverse(s));
        expect(is_identity(project(conj)), "conjugated twist stays in the kernel");
        expect(!is_identity(conj), "conjugated twist nontrivial");
        expect(is_identity(multiply(conj, conj)), "conjugated twist has order 2");
      }
    }
    for (int trial = 0; trial < 50; ++trial) {
      const auto toks = random_tokens(1 + trial % 6);
      MappingClass prod = identity_class(n);
      for (const NielsenGen& g : toks) prod = multiply(prod, section(nielsen_generator(n, g)));
      const NielsenAuto direct = from_factorization(n, toks);
      expect(project(prod).images == direct.images,
             "projection undoes the section on generator products");
      expect(std::all_of(prod.twist.begin(), prod.twist.end(),
                         [](std::uint8_t v) { return v == 0; }),
             "section products stay twist-free");
    }
    for (int j = 1; j <= n; ++j) {
      const MappingClass g = section(nielsen_generator(n, NielsenGen::invert(j)));
      expect(is_identity(multiply(g, g)), "lifted inversion is an involution");
    }

    BodyResult out;
    out.measured = violations;
    out.detail = violations == 0
                     ? strf("all group-model identities hold at rank %d", n)
                     : strf("%d violations; first: %s", violations, first_bad.c_str());
    return out;
  });
}

Report run_verify(const RunConfig& cfg) {
  cfg.validate();
  Report r;
  r.config = cfg;
  r.checks = {check_cocycle_identity(cfg), check_cover_equivariance(cfg),
              check_g_path_structure(cfg), check_group_model(cfg),
              check_jacobian_fd(cfg),      check_loop_class_oracle(cfg),
              check_psi_profile(cfg),      check_rho_realization(cfg),
              check_twist_vectors(cfg)};
  return r;
}

namespace {

json config_to_json(const RunConfig& c) {
  return json{{"rank", c.rank},
              {"seed", c.seed},
              {"loop_samples", c.loop_samples},
              {"path_grid", c.path_grid},
              {"refine_budget", c.refine_budget},
              {"fd_points", c.fd_points},
              {"equiv_points", c.equiv_points},
              {"cocycle_points", c.cocycle_points},
              {"tol_fd", c.tol_fd},
              {"fd_step", c.fd_step},
              {"bump",
               {{"plateau_end", c.bump.plateau_end},
                {"support_end", c.bump.support_end},
                {"steepness", c.bump.steepness}}},
              {"step",
               {{"ramp_start", c.step.ramp_start},
                {"ramp_end", c.step.ramp_end},
                {"steepness", c.step.steepness}}}};
}

RunConfig config_from_json(const json& c) {
  RunConfig out;
  out.rank = c.at("rank").get<int>();
  out.seed = c.at("seed").get<std::uint64_t>();
  out.loop_samples = c.at("loop_samples").get<int>();
  out.path_grid = c.at("path_grid").get<int>();
  out.refine_budget = c.at("refine_budget").get<int>();
  out.fd_points = c.at("fd_points").get<int>();
  out.equiv_points = c.at("equiv_points").get<int>();
  out.cocycle_points = c.at("cocycle_points").get<int>();
  out.tol_fd = c.at("tol_fd").get<double>();
  out.fd_step = c.at("fd_step").get<double>();
  const json& b = c.at("bump");
  out.bump.plateau_end = b.at("plateau_end").get<double>();
  out.bump.support_end = b.at("support_end").get<double>();
  out.bump.steepness = b.at("steepness").get<double>();
  const json& s = c.at("step");
  out.step.ramp_start = s.at("ramp_start").get<double>();
  out.step.ramp_end = s.at("ramp_end").get<double>();
  out.step.steepness = s.at("steepness").get<double>();
  return out;
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Error:
      return "error";
  }
  return "error";
}

CheckStatus status_from(const std::string& s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "error") return CheckStatus::Error;
  throw std::invalid_argument("unknown check status: " + s);
}

}  // namespace

std::string to_json(const Report& r) {
  json j;
  j["schema"] = r.schema;
  j["config"] = config_to_json(r.config);
  json checks = json::array();
  for (const CheckRecord& c : r.checks) {
    // infinity has no JSON literal; an absent measurement is encoded as null
    checks.push_back({{"name", c.name},
                      {"status", status_name(c.status)},
                      {"measured", std::isfinite(c.measured) ? json(c.measured) : json()},
                      {"threshold", c.threshold},
                      {"seconds", c.seconds},
                      {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  j["all_pass"] = r.all_pass();
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    Report r;
    r.schema = j.at("schema").get<int>();
    if (r.schema != 1) throw std::invalid_argument("unsupported report schema");
    r.config = config_from_json(j.at("config"));
    for (const json& e : j.at("checks")) {
      CheckRecord rec;
      rec.name = e.at("name").get<std::string>();
      rec.status = status_from(e.at("status").get<std::string>());
      const json& m = e.at("measured");
      rec.measured = m.is_null() ? kInf : m.get<double>();
      rec.threshold = e.at("threshold").get<double>();
      rec.seconds = e.at("seconds").get<double>();
      rec.detail = e.value("detail", std::string{});
      r.checks.push_back(std::move(rec));
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

std::string to_text(const Report& r) {
  std::string out;
  out += strf("verification report (schema %d)\n", r.schema);
  const RunConfig& c = r.config;
  out += strf("config: rank=%d seed=%llu loop_samples=%d path_grid=%d refine_budget=%d\n",
              c.rank, static_cast<unsigned long long>(c.seed), c.loop_samples, c.path_grid,
              c.refine_budget);
  out += strf("        fd_points=%d equiv_points=%d cocycle_points=%d tol_fd=%g fd_step=%g\n",
              c.fd_points, c.equiv_points, c.cocycle_points, c.tol_fd, c.fd_step);
  out += strf(
      "        bump(plateau_end=%g support_end=%g steepness=%g) "
      "step(ramp_start=%g ramp_end=%g steepness=%g)\n",
      c.bump.plateau_end, c.bump.support_end, c.bump.steepness, c.step.ramp_start,
      c.step.ramp_end, c.step.steepness);
  int passed = 0;
  for (const CheckRecord& rec : r.checks) {
    const char* tag = rec.status == CheckStatus::Pass   ? "PASS"
                      : rec.status == CheckStatus::Fail ? "FAIL"
                                                        : "ERROR";
    if (rec.status == CheckStatus::Pass) ++passed;
    out += strf("[%-5s] %-20s measured=%-12.6g threshold=%-8g (%.2fs)\n", tag,
                rec.name.c_str(), rec.measured, rec.threshold, rec.seconds);
    if (!rec.detail.empty()) out += strf("        %s\n", rec.detail.c_str());
  }
  out += strf("result: %s (%d/%d)\n", r.all_pass() ? "PASS" : "FAIL", passed,
              static_cast<int>(r.checks.size()));
  return out;
}

void dump_psi(const RunConfig& cfg, std::ostream& os) {
  cfg.validate();
  os << "r,psi,psi_prime\n";
  constexpr int kRows = 10000;
  for (int i = 0; i < kRows; ++i) {
    const double r = static_cast<double>(i) / (kRows - 1);
    os << num17(r) << ',' << num17(psi(cfg.bump, r)) << ',' << num17(psi_prime(cfg.bump, r))
       << '\n';
  }
}

namespace {

int dump_rank(const RunConfig& cfg, const ChartMap& map, int gen) {
  if (gen < 1) throw ConfigError("generator index must be >= 1");
  return std::max({cfg.rank, map.max_index(), gen});
}

}  // namespace

void dump_jacobian(const RunConfig& cfg, const ChartMap& map, int gen, std::ostream& os) {
  cfg.validate();
  const int rank = dump_rank(cfg, map, gen);
  const TrackedLoop loop = generator_loop(gen, map, rank, cfg.loop_samples);
  os << "t,x,y,z,j11,j12,j13,j21,j22,j23,j31,j32,j33\n";
  for (int k = 0; k <= cfg.path_grid; ++k) {
    const double t = static_cast<double>(k) / cfg.path_grid;
    const auto p = loop_point(loop, map, t);
    if (!p) continue;  // exterior stretch: no chart frame here
    const Eigen::Matrix3d jm = map.jacobian_analytic(*p);
    os << num17(t) << ',' << num17(p->x()) << ',' << num17(p->y()) << ',' << num17(p->z());
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) os << ',' << num17(jm(r, c));
    os << '\n';
  }
}

void dump_matrixpath(const RunConfig& cfg, const ChartMap& map, int gen, std::ostream& os) {
  cfg.validate();
  const int rank = dump_rank(cfg, map, gen);
  const TrackedLoop loop = generator_loop(gen, map, rank, cfg.loop_samples);
  PathBuildOptions popts{};
  popts.grid = cfg.path_grid;
  popts.refine_budget = cfg.refine_budget;
  const MatrixPath path = derivative_along(map, loop, popts);
  os << "t,m11,m12,m13,m21,m22,m23,m31,m32,m33,qw,qx,qy,qz\n";
  std::optional<UnitQuaternion> prev;
  for (int k = 0; k <= cfg.path_grid; ++k) {
    const double t = static_cast<double>(k) / cfg.path_grid;
    const Eigen::Matrix3d m = path.eval(t);
    const UnitQuaternion q = to_quaternion(polar_rotation(m), prev);
    prev = q;
    os << num17(t);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) os << ',' << num17(m(r, c));
    os << ',' << num17(q.w) << ',' << num17(q.x) << ',' << num17(q.y) << ',' << num17(q.z)
       << '\n';
  }
}

void dump_loop(const RunConfig& cfg, const ChartMap& map, int gen, std::ostream& os) {
  cfg.validate();
  const int rank = dump_rank(cfg, map, gen);
  const TrackedLoop image =
      image_with_retries(map, generator_loop(gen, map, rank, cfg.loop_samples));
  const Word word = read_word(image);

  json events = json::array();
  for (const LoopEvent& e : image.events) {
    if (const auto* s = std::get_if<ExteriorStub>(&e)) {
      events.push_back({{"type", "exterior"}, {"t0", s->t0}, {"t1", s->t1}});
    } else if (const auto* c = std::get_if<CrossingEvent>(&e)) {
      events.push_back(
          {{"type", "crossing"}, {"t", c->t}, {"sphere", c->sphere}, {"sign", c->sign}});
    } else {
      const auto& p = std::get<PolylinePiece>(e);
      json pts = json::array();
      for (const Eigen::Vector3d& v : p.pts) pts.push_back({v.x(), v.y(), v.z()});
      events.push_back(
          {{"type", "polyline"}, {"t0", p.t0}, {"t1", p.t1}, {"points", std::move(pts)}});
    }
  }

  json j;
  j["rank"] = rank;
  j["map"] = map_label(map);
  j["generator"] = gen;
  j["word"] = to_text(word);
  j["word_compact"] = to_compact(word);
  j["events"] = std::move(events);
  os << j.dump(2) << '\n';
}

}  // namespace outlift

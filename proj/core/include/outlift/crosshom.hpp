#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "outlift/charts.hpp"
#include "outlift/curve.hpp"
#include "outlift/loopclass.hpp"

namespace outlift {

// Z/2 twisting vector, one bit per generator sphere (index k-1 for a_k).
using TwistVector = std::vector<std::uint8_t>;

std::string render_bits(const TwistVector& t);  // e.g. "0110"
TwistVector zero_bits(int rank);
TwistVector basis_bits(int rank, int i);

// Chart-frame derivative of the realized mapping class at p, computed the
// inverse route: invert the Jacobian of the inverse map at the image point.
// The torus chart goes through the universal cover (Lemma-1 frame), the
// other charts differentiate in the ambient chart frame.
Eigen::Matrix3d chart_derivative(const ChartMap& map, const Eigen::Vector3d& p);

struct PathBuildOptions {
  int grid = 256;
  int refine_budget = 16;
  double junction_tol = 1e-9;  // continuity across piece junctions
};

// Derivative matrix loop along a tracked loop: identity on exterior stubs,
// chart_derivative along polylines.  Junction continuity is checked eagerly;
// a violation throws std::runtime_error.
MatrixPath derivative_along(const ChartMap& map, const TrackedLoop& loop,
                            const PathBuildOptions& opts = {});

struct TwistingOptions {
  int loop_samples = 512;
  PathBuildOptions path{};
  LoopClassOptions lift{};
};

// The twisting cocycle on the chart map's mapping class: bit k-1 is the
// loop class of the derivative loop along the standard a_k loop.
TwistVector twisting_of(const ChartMap& map, int rank, const TwistingOptions& opts = {});

// A cocycle sample point together with the chart whose coordinates express
// it (needed for disjoint-support pairs; ignored for same-chart pairs).
struct SamplePoint {
  Eigen::Vector3d p;
  enum class Site { ChartOfA, ChartOfB, Exterior };
  Site site = Site::ChartOfA;
};

// Max-entry residual of the cocycle identity
//   D(a.b)(p) - D(a)(b(p)) D(b)(p).
// Same-chart pairs evaluate the left side through summed profiles; disjoint
// pairs reduce to identity blocks and return exactly 0.0.  Incompatible
// charts throw std::invalid_argument.
double cocycle_residual(const ChartMap& a, const ChartMap& b, const SamplePoint& sp);

// Deck invariance of the Lemma-1 derivative on the torus chart: residual
// between the value computed through lift p and through p shifted by
// deck_shift integer heights.  Analytic by default; fd = true probes the
// lift maps by central differences instead.
double deck_invariance_residual(const ChartMap& torus, const Eigen::Vector3d& p,
                                int deck_shift, bool fd = false, double h = 1e-5);

}  // namespace outlift

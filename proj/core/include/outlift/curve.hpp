#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "outlift/charts.hpp"
#include "outlift/freegroup.hpp"

namespace outlift {

// Signed transverse crossing of generator sphere `sphere` at parameter t.
struct CrossingEvent {
  double t;
  int sphere;
  int sign;
  friend bool operator==(const CrossingEvent&, const CrossingEvent&) = default;
};

// Stretch of the loop outside every chart; carries no geometry.
struct ExteriorStub {
  double t0;
  double t1;
  friend bool operator==(const ExteriorStub&, const ExteriorStub&) = default;
};

// In-chart polyline; vertices are uniformly spaced in parameter over [t0, t1].
struct PolylinePiece {
  double t0;
  double t1;
  std::vector<Eigen::Vector3d> pts;
  friend bool operator==(const PolylinePiece&, const PolylinePiece&);
};

using LoopEvent = std::variant<ExteriorStub, PolylinePiece, CrossingEvent>;

// Based loop tracked against a single chart.  Exterior stubs and polylines
// tile [0,1]; crossing events sit at piece junctions (or, after image_under
// on the torus chart, at interior parameters of the enclosing polyline).
// Events are ordered by start parameter, crossings before the piece that
// begins at the same parameter.
struct TrackedLoop {
  int rank = 0;
  std::vector<LoopEvent> events;
};

// Raised when certifying crossings needs a denser polyline: input or image
// step >= 0.05, or a vertex within 1e-9 of a crossing surface.
struct ResampleNeeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double event_start(const LoopEvent& e);

// Standard based loop of a_k, tracked against map's chart.  Loops that do
// not meet the chart reduce to a single exterior crossing of sphere k.
TrackedLoop generator_loop(int k, const ChartMap& map, int rank, int samples = 512);

// Pointwise image of the loop under the chart map.  Inserts the theta*
// crossings created in the torus chart (sign +1 when theta decreases through
// theta*) and relabels the signs of crossings carried through the ball
// chart's half-turn gluing.  Throws ResampleNeeded as documented above.
TrackedLoop image_under(const ChartMap& map, const TrackedLoop& loop);

// Insert polyline midpoints (each piece goes from N to 2N-1 vertices).
TrackedLoop resample_doubled(const TrackedLoop& loop);

// Crossing word of the loop, freely reduced.
Word read_word(const TrackedLoop& loop);

// Automorphism induced on pi_1, read off the generator-loop images.  Retries
// through resample_doubled when image_under asks for density.
NielsenAuto rho_of(const ChartMap& map, int rank, int samples = 512);

// Structural checks: piece tiling of [0,1], exterior at both ends, ordered
// events, polyline endpoints on an outer boundary or a removed-sphere
// boundary, vertices in the chart domain, torus vertices at least `margin`
// from the crossing surface.  Throws std::invalid_argument on violation.
void validate_loop(const TrackedLoop& loop, const ChartMap& map, double margin = 1e-6);

// Geometric point of the loop at parameter t; nullopt on exterior stubs.
std::optional<Eigen::Vector3d> loop_point(const TrackedLoop& loop, const ChartMap& map,
                                          double t);

}  // namespace outlift

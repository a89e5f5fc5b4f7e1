#pragma once

namespace outlift {

// C^infinity step built from s(u) = exp(-k/u):
//   smooth_step(u) = s(u) / (s(u) + s(1-u))
// Exactly 0 for u <= 0 and exactly 1 for u >= 1 (all one-sided derivatives
// vanish at the junctions), strictly increasing on (0,1).
double smooth_step(double u, double steepness = 1.0);
double smooth_step_deriv(double u, double steepness = 1.0);

// Radial interpolation profile psi:
//   psi(r) = 1 for r in [0, plateau_end],
//   psi(r) = 0 for r >= support_end,
//   smooth and strictly decreasing in between.
struct BumpProfile {
  double plateau_end = 1.0 / 3.0;
  double support_end = 0.6;
  double steepness = 1.0;

  void validate() const;  // throws std::invalid_argument on a bad shape

  friend bool operator==(const BumpProfile&, const BumpProfile&) = default;
};

double psi(const BumpProfile& p, double r);        // requires r >= 0
double psi_prime(const BumpProfile& p, double r);  // <= 0 everywhere

// Collar ramp eta: 0 up to ramp_start, 1 from ramp_end on, smooth monotone
// in between.  Drives the sphere twist angle 2*pi*eta(|v| - 1).
struct StepProfile {
  double ramp_start = 0.2;
  double ramp_end = 0.8;
  double steepness = 1.0;

  void validate() const;

  friend bool operator==(const StepProfile&, const StepProfile&) = default;
};

double eta(const StepProfile& p, double s);
double eta_prime(const StepProfile& p, double s);

}  // namespace outlift

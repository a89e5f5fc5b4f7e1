#include "outlift/smooth.hpp"

#include <cmath>
#include <stdexcept>

namespace outlift {

namespace {

void check_steepness(double k) {
  if (!(k > 0.0) || !(k <= 200.0))
    throw std::invalid_argument("steepness must lie in (0, 200]");
}

double core(double u, double k) { return std::exp(-k / u); }  // u > 0

}  // namespace

double smooth_step(double u, double steepness) {
  check_steepness(steepness);
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = core(u, steepness);
  const double b = core(1.0 - u, steepness);
  return a / (a + b);
}

double smooth_step_deriv(double u, double steepness) {
  check_steepness(steepness);
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = core(u, steepness);
  const double b = core(1.0 - u, steepness);
  if (a == 0.0 || b == 0.0) return 0.0;  // flat to machine precision
  const double da = a * steepness / (u * u);
  const double db = b * steepness / ((1.0 - u) * (1.0 - u));
  return (da * b + a * db) / ((a + b) * (a + b));
}

void BumpProfile::validate() const {
  check_steepness(steepness);
  if (!(plateau_end > 0.0))
    throw std::invalid_argument("plateau_end must be > 0");
  if (!(support_end > plateau_end))
    throw std::invalid_argument("support_end must exceed plateau_end");
}

double psi(const BumpProfile& p, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("psi: r must be >= 0");
  const double u = (p.support_end - r) / (p.support_end - p.plateau_end);
  return smooth_step(u, p.steepness);
}

double psi_prime(const BumpProfile& p, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("psi_prime: r must be >= 0");
  const double w = p.support_end - p.plateau_end;
  const double u = (p.support_end - r) / w;
  return -smooth_step_deriv(u, p.steepness) / w;
}

void StepProfile::validate() const {
  check_steepness(steepness);
  if (!(ramp_start >= 0.0) || !(ramp_end > ramp_start) || !(ramp_end <= 1.0))
    throw std::invalid_argument("need 0 <= ramp_start < ramp_end <= 1");
}

double eta(const StepProfile& p, double s) {
  const double u = (s - p.ramp_start) / (p.ramp_end - p.ramp_start);
  return smooth_step(u, p.steepness);
}

double eta_prime(const StepProfile& p, double s) {
  const double w = p.ramp_end - p.ramp_start;
  const double u = (s - p.ramp_start) / w;
  return smooth_step_deriv(u, p.steepness) / w;
}

}  // namespace outlift

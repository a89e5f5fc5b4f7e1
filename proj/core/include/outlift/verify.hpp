#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "outlift/charts.hpp"

namespace outlift {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int rank = 3;            // sweeps cover n = 2..rank
  std::uint64_t seed = 7;
  int loop_samples = 512;  // power of two
  int path_grid = 256;     // power of two
  int refine_budget = 16;
  int fd_points = 1000;      // jacobian probe points per map family
  int equiv_points = 1000;   // cover points for the equivariance check
  int cocycle_points = 200;  // sample points per chart pair
  double tol_fd = 1e-5;      // analytic-vs-fd jacobian agreement
  double fd_step = 1e-5;
  BumpProfile bump{};
  StepProfile step{};

  void validate() const;  // throws ConfigError

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

enum class CheckStatus { Pass, Fail, Error };

// measured is the worst violation found, normalized so that the check passes
// iff measured <= threshold.  Ratio-style checks use threshold 1 (violation
// over its tolerance); counting checks use threshold 0 (number of failures).
struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  double measured = 0.0;
  double threshold = 1.0;
  double seconds = 0.0;
  std::string detail;
};

struct Report {
  int schema = 1;
  RunConfig config;
  std::vector<CheckRecord> checks;  // sorted by name; each criterion exactly once

  bool all_pass() const;
};

CheckRecord check_psi_profile(const RunConfig& cfg);
CheckRecord check_jacobian_fd(const RunConfig& cfg);
CheckRecord check_cover_equivariance(const RunConfig& cfg);
CheckRecord check_loop_class_oracle(const RunConfig& cfg);
CheckRecord check_rho_realization(const RunConfig& cfg);
CheckRecord check_twist_vectors(const RunConfig& cfg);
CheckRecord check_g_path_structure(const RunConfig& cfg);
CheckRecord check_cocycle_identity(const RunConfig& cfg);
CheckRecord check_group_model(const RunConfig& cfg);

Report run_verify(const RunConfig& cfg);

std::string to_json(const Report& r);
Report report_from_json(const std::string& text);
std::string to_text(const Report& r);

// CSV dumps: header row, then values rendered with 17 significant digits.
void dump_psi(const RunConfig& cfg, std::ostream& os);
void dump_jacobian(const RunConfig& cfg, const ChartMap& map, int gen, std::ostream& os);
void dump_matrixpath(const RunConfig& cfg, const ChartMap& map, int gen, std::ostream& os);
// JSON dump of the tracked image loop and its crossing word.
void dump_loop(const RunConfig& cfg, const ChartMap& map, int gen, std::ostream& os);

}  // namespace outlift

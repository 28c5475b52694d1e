// Convergence studies and robustness sweeps over mesh ladders, with CSV and
// SVG output.

#ifndef VEMCIP_STUDY_HPP
#define VEMCIP_STUDY_HPP

#include <optional>
#include <string>
#include <vector>

#include "vemcip/errors.hpp"

namespace vemcip {

enum class MeshFamily { Octag, Voro };

std::string to_string(MeshFamily family);

/// One solve on one mesh; maps 1:1 to a CSV record.
struct StudyRow {
  MeshFamily family = MeshFamily::Octag;
  int level = 0;       // ladder index (0-based)
  int k = 1;
  double eps = 1e-5;
  double h = 0.0;
  int n_dofs = 0;
  double e_h1 = 0.0;
  double e_l2 = 0.0;
  double e_cip = 0.0;
  // Rates against the previous row of the same family; NaN on the first row.
  double rate_h1 = 0.0;
  double rate_l2 = 0.0;
  double rate_cip = 0.0;
  double seconds = 0.0;
};

struct StudyConfig {
  std::string problem = "u1";
  int k = 1;
  double eps = 1e-5;
  double sigma = 1.0;
  double delta = 0.1;
  double kappa_e = 0.025;
  double kappa_E = 0.025;
  std::uint64_t seed = 0;
  int lloyd_iters = 3;
  double octag_perturb = 0.2;
  int threads = 1;
  // Mesh ladder: octag uses grid sizes n, voro uses cell counts.
  std::vector<int> octag_ladder = {4, 8, 16, 32};
  std::vector<int> voro_ladder = {64, 256, 1024, 4096};
};

/// One solve of the configured problem on a prebuilt mesh; `level` and
/// `family` only label the row.
StudyRow solve_on_mesh(const StudyConfig& config, MeshFamily family, int level, double eps,
                       const PolyMesh& mesh);

/// Solves the manufactured problem on each rung of the family's ladder and
/// fills in observed rates log(e_i/e_{i-1}) / log(h_i/h_{i-1}).
std::vector<StudyRow> convergence_study(const StudyConfig& config, MeshFamily family);

/// Fixed mesh, sweeping eps over the given values; rate columns are NaN.
std::vector<StudyRow> robustness_sweep(const StudyConfig& config, MeshFamily family,
                                       int ladder_index, const std::vector<double>& eps_values);

/// Least-squares slope of log(y) against log(x); ignores non-finite pairs.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Writes rows as CSV with a `#`-prefixed header comment recording the
/// configuration, then the column header
/// family,level,k,eps,h,N,eH1,eL2,ecip,rateH1,rateL2,rateCIP,seconds.
void write_csv(const std::string& path, const StudyConfig& config,
               const std::vector<StudyRow>& rows);

/// Self-contained log-log SVG plot of the error columns against h, one
/// polyline per (family, column), with a reference-slope triangle. The
/// plotted numbers are embedded as an XML comment so the file doubles as a
/// data record.
void write_svg_loglog(const std::string& path, const std::string& title,
                      const std::vector<StudyRow>& rows);

struct ReproduceOptions {
  std::vector<int> orders = {1, 2, 3};
  std::vector<std::string> problems = {"u1", "u2"};
  std::uint64_t seed = 0;
  int threads = 1;
  // Trimmed ladders keep the runtime of a full reproduction moderate.
  std::optional<std::vector<int>> octag_ladder;
  std::optional<std::vector<int>> voro_ladder;
};

struct ReproduceReport {
  std::vector<std::string> written;  ///< CSV paths, one per completed experiment
  std::vector<std::string> failures; ///< human-readable messages for skipped experiments
};

/// Runs the full experiment battery (convergence for every problem/order on
/// both mesh families, plus eps-robustness sweeps) and writes one CSV + SVG
/// per experiment into outdir. Failing experiments are recorded and the rest
/// still run.
ReproduceReport reproduce_experiments(const std::string& outdir, const ReproduceOptions& options);

} // namespace vemcip

#endif

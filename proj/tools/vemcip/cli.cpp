#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vemcip/study.hpp"

namespace vemcip::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string family = "octag";
  int n = 4;          // octag grid size
  int cells = 1024;   // voro cell count
  std::string mesh;   // path to a mesh JSON; overrides the generator
  int k = 1;
  std::string problem = "u1";
  double eps = 1e-5;
  double sigma = 1.0;
  double delta = 0.1;
  double kappa = 0.025;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 1;
  int lloyd = 3;
  double perturb = 0.2;
  std::vector<double> eps_list = {1.0, 1e-2, 1e-4, 1e-6, 1e-8};
  std::vector<int> ladder;            // convergence: overrides the family ladder
  std::vector<int> repro_orders = {1, 2, 3};
  std::vector<std::string> repro_problems = {"u1", "u2"};
  std::vector<int> repro_octag_ladder;
  std::vector<int> repro_voro_ladder;
};

// Config file mirrors the flag names; flags given on the command line win
// because they are applied after the file.
void apply_config_file(Options& opts, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw CLI::ValidationError("--config", "'" + path + "' is not valid JSON: " + e.what());
  }
  auto get = [&](const char* key, auto& field) {
    if (doc.contains(key)) field = doc[key].get<std::decay_t<decltype(field)>>();
  };
  get("family", opts.family);
  get("n", opts.n);
  get("cells", opts.cells);
  get("mesh", opts.mesh);
  get("k", opts.k);
  get("problem", opts.problem);
  get("eps", opts.eps);
  get("sigma", opts.sigma);
  get("delta", opts.delta);
  get("kappa", opts.kappa);
  get("seed", opts.seed);
  get("out", opts.out);
  get("threads", opts.threads);
  get("lloyd", opts.lloyd);
  get("perturb", opts.perturb);
  get("eps_list", opts.eps_list);
  get("ladder", opts.ladder);
}

MeshFamily parse_family(const std::string& family) {
  if (family == "octag") return MeshFamily::Octag;
  if (family == "voro") return MeshFamily::Voro;
  throw std::invalid_argument("--family: '" + family + "' is not one of octag, voro");
}

StudyConfig study_config(const Options& opts) {
  StudyConfig config;
  config.problem = opts.problem;
  config.k = opts.k;
  config.eps = opts.eps;
  config.sigma = opts.sigma;
  config.delta = opts.delta;
  config.kappa_e = opts.kappa;
  config.kappa_E = opts.kappa;
  config.seed = opts.seed;
  config.lloyd_iters = opts.lloyd;
  config.octag_perturb = opts.perturb;
  config.threads = opts.threads;
  return config;
}

PolyMesh make_mesh(const Options& opts, MeshFamily family) {
  if (!opts.mesh.empty()) return load_mesh(opts.mesh);
  if (family == MeshFamily::Octag) return generate_octag(opts.n, opts.perturb, opts.seed);
  return generate_voronoi(opts.cells, opts.lloyd, opts.seed);
}

void add_model_flags(CLI::App* cmd, Options& opts) {
  cmd->add_option("--k", opts.k, "method order")->check(CLI::Range(1, 3).description("k must be 1, 2 or 3"));
  cmd->add_option("--problem", opts.problem, "manufactured problem: u1 or u2");
  cmd->add_option("--eps", opts.eps, "diffusion coefficient");
  cmd->add_option("--sigma", opts.sigma, "reaction coefficient");
  cmd->add_option("--delta", opts.delta, "Nitsche penalty scale");
  cmd->add_option("--kappa", opts.kappa, "jump-penalty constant (facet and element)");
  cmd->add_option("--threads", opts.threads, "worker threads for local computations");
}

void add_mesh_flags(CLI::App* cmd, Options& opts, bool with_path) {
  cmd->add_option("--family", opts.family, "mesh family: octag or voro");
  cmd->add_option("--n", opts.n, "octag grid size");
  cmd->add_option("--cells", opts.cells, "voro cell count");
  if (with_path) cmd->add_option("--mesh", opts.mesh, "mesh JSON path (overrides the generator)");
  cmd->add_option("--seed", opts.seed, "generator seed");
  cmd->add_option("--lloyd", opts.lloyd, "voro Lloyd smoothing iterations");
  cmd->add_option("--perturb", opts.perturb, "octag node perturbation, fraction of the grid step");
}

int run_mesh(const Options& opts, std::ostream& out) {
  const MeshFamily family = parse_family(opts.family);
  const PolyMesh mesh = make_mesh(opts, family);
  const std::string path = opts.out.empty() ? "mesh.json" : opts.out;
  save_mesh(mesh, path);
  out << to_string(family) << " mesh: " << mesh.num_cells() << " cells, " << mesh.num_facets()
      << " facets, h=" << mesh.h << " -> " << path << "\n";
  return 0;
}

int run_solve(const Options& opts, std::ostream& out) {
  const MeshFamily family = parse_family(opts.family);
  const PolyMesh mesh = make_mesh(opts, family);
  const StudyConfig config = study_config(opts);
  const StudyRow row = solve_on_mesh(config, family, 0, opts.eps, mesh);

  const fs::path outdir = opts.out.empty() ? fs::path(".") : fs::path(opts.out);
  fs::create_directories(outdir);
  const std::string csv = (outdir / "report.csv").string();
  write_csv(csv, config, {row});
  out << config.problem << " k=" << config.k << " eps=" << row.eps << " N=" << row.n_dofs
      << " h=" << row.h << ": eH1=" << row.e_h1 << " eL2=" << row.e_l2 << " ecip=" << row.e_cip
      << " -> " << csv << "\n";
  return 0;
}

int run_convergence(const Options& opts, std::ostream& out, bool both_families) {
  StudyConfig config = study_config(opts);
  if (!opts.ladder.empty()) {
    config.octag_ladder = opts.ladder;
    config.voro_ladder = opts.ladder;
  }
  std::vector<StudyRow> rows;
  std::vector<MeshFamily> families;
  if (both_families)
    families = {MeshFamily::Octag, MeshFamily::Voro};
  else
    families = {parse_family(opts.family)};
  for (MeshFamily family : families) {
    const auto part = convergence_study(config, family);
    rows.insert(rows.end(), part.begin(), part.end());
  }

  const fs::path outdir = opts.out.empty() ? fs::path(".") : fs::path(opts.out);
  fs::create_directories(outdir);
  const std::string stem = "convergence_" + config.problem + "_k" + std::to_string(config.k);
  const std::string csv = (outdir / (stem + ".csv")).string();
  write_csv(csv, config, rows);
  write_svg_loglog((outdir / (stem + ".svg")).string(),
                   "convergence " + config.problem + " k=" + std::to_string(config.k), rows);

  out << stem << ":";
  for (MeshFamily family : families) {
    std::vector<double> hs, e1, e2;
    for (const auto& r : rows)
      if (r.family == family) {
        hs.push_back(r.h);
        e1.push_back(r.e_h1);
        e2.push_back(r.e_l2);
      }
    out << " " << to_string(family) << " slopeH1=" << least_squares_slope(hs, e1)
        << " slopeL2=" << least_squares_slope(hs, e2);
  }
  out << " -> " << csv << "\n";
  return 0;
}

int run_robustness(const Options& opts, std::ostream& out) {
  const MeshFamily family = parse_family(opts.family);
  StudyConfig config = study_config(opts);
  // The sweep runs on one fixed mesh; reuse the ladder slot for its size.
  if (family == MeshFamily::Voro)
    config.voro_ladder = {opts.cells};
  else
    config.octag_ladder = {opts.n};
  const std::vector<StudyRow> rows = robustness_sweep(config, family, 0, opts.eps_list);

  const fs::path outdir = opts.out.empty() ? fs::path(".") : fs::path(opts.out);
  fs::create_directories(outdir);
  const std::string csv = (outdir / ("robustness_" + config.problem + ".csv")).string();
  write_csv(csv, config, rows);

  double emin = rows.front().e_cip, emax = emin;
  for (const auto& r : rows) {
    emin = std::min(emin, r.e_cip);
    emax = std::max(emax, r.e_cip);
  }
  out << "robustness " << config.problem << " k=" << config.k << " on " << to_string(family)
      << ": ecip in [" << emin << ", " << emax << "], max/min=" << emax / emin << " -> " << csv
      << "\n";
  return 0;
}

int run_reproduce(const Options& opts, std::ostream& out, std::ostream& err) {
  ReproduceOptions options;
  options.seed = opts.seed;
  options.threads = opts.threads;
  options.orders = opts.repro_orders;
  options.problems = opts.repro_problems;
  if (!opts.repro_octag_ladder.empty()) options.octag_ladder = opts.repro_octag_ladder;
  if (!opts.repro_voro_ladder.empty()) options.voro_ladder = opts.repro_voro_ladder;
  const std::string outdir = opts.out.empty() ? "artifacts" : opts.out;
  const ReproduceReport report = reproduce_experiments(outdir, options);
  for (const auto& path : report.written) out << "wrote " << path << "\n";
  for (const auto& failure : report.failures) err << "failed: " << failure << "\n";
  out << report.written.size() << " artifacts in " << outdir << "\n";
  return report.failures.empty() ? 0 : 3;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CIP-stabilized nonconforming virtual element solver for "
               "advection-diffusion-reaction problems on polygonal meshes"};
  app.require_subcommand(1);

  Options opts;
  std::string config_path;

  // The config file fills defaults before any flag is applied, so explicit
  // flags always win; scan for it ahead of the real parse.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];

  auto* mesh_cmd = app.add_subcommand("mesh", "generate a mesh and write it as JSON");
  add_mesh_flags(mesh_cmd, opts, false);
  mesh_cmd->add_option("--out", opts.out, "output file (default mesh.json)");

  auto* solve_cmd = app.add_subcommand("solve", "solve one problem and report errors");
  add_mesh_flags(solve_cmd, opts, true);
  add_model_flags(solve_cmd, opts);
  solve_cmd->add_option("--out", opts.out, "output directory for report.csv");

  auto* conv_cmd = app.add_subcommand("convergence", "run a mesh-refinement study");
  add_mesh_flags(conv_cmd, opts, false);
  add_model_flags(conv_cmd, opts);
  conv_cmd->add_option("--out", opts.out, "output directory");
  conv_cmd->add_option("--ladder", opts.ladder,
                       "refinement ladder (octag grid sizes / voro cell counts)");
  bool both_families = false;
  conv_cmd->add_flag("--both", both_families, "run both mesh families into one table");

  auto* robust_cmd = app.add_subcommand("robustness", "sweep eps on one fixed mesh");
  add_mesh_flags(robust_cmd, opts, false);
  add_model_flags(robust_cmd, opts);
  robust_cmd->add_option("--eps-list", opts.eps_list, "eps values to sweep");
  robust_cmd->add_option("--out", opts.out, "output directory");

  auto* repro_cmd = app.add_subcommand("reproduce", "run the full experiment battery");
  repro_cmd->add_option("--seed", opts.seed, "generator seed");
  repro_cmd->add_option("--threads", opts.threads, "worker threads");
  repro_cmd->add_option("--out", opts.out, "output directory (default artifacts)");
  repro_cmd->add_option("--orders", opts.repro_orders, "method orders to run");
  repro_cmd->add_option("--problems", opts.repro_problems, "problems to run");
  repro_cmd->add_option("--octag-ladder", opts.repro_octag_ladder, "override the octag ladder");
  repro_cmd->add_option("--voro-ladder", opts.repro_voro_ladder, "override the voro ladder");

  for (auto* cmd : {mesh_cmd, solve_cmd, conv_cmd, robust_cmd, repro_cmd})
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");

  try {
    if (!config_path.empty()) apply_config_file(opts, config_path);
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (opts.problem != "u1" && opts.problem != "u2") {
      err << "unknown problem '" << opts.problem << "' (use u1 or u2)\n";
      return 2;
    }
    if (mesh_cmd->parsed()) return run_mesh(opts, out);
    if (solve_cmd->parsed()) return run_solve(opts, out);
    if (conv_cmd->parsed()) return run_convergence(opts, out, both_families);
    if (robust_cmd->parsed()) return run_robustness(opts, out);
    if (repro_cmd->parsed()) return run_reproduce(opts, out, err);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 3;
  }
  return 2;
}

} // namespace vemcip::cli

#include "vemcip/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "vemcip/assembly.hpp"

namespace vemcip {

std::string to_string(MeshFamily family) {
  return family == MeshFamily::Octag ? "octag" : "voro";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PolyMesh build_mesh(const StudyConfig& config, MeshFamily family, int level) {
  if (family == MeshFamily::Octag)
    return generate_octag(config.octag_ladder[level], config.octag_perturb, config.seed);
  return generate_voronoi(config.voro_ladder[level], config.lloyd_iters, config.seed);
}

} // namespace

StudyRow solve_on_mesh(const StudyConfig& config, MeshFamily family, int level, double eps,
                       const PolyMesh& mesh) {
  const auto t0 = std::chrono::steady_clock::now();

  const ManufacturedProblem problem = manufactured(config.problem, eps, config.sigma);
  const ModelParams params =
      params_for(problem, config.k, config.delta, config.kappa_e, config.kappa_E);
  const auto spaces = build_local_spaces(mesh, config.k, config.threads);
  const GlobalDofMap dof_map = build_dof_map(mesh, config.k);
  const GlobalSystem system =
      assemble(mesh, spaces, dof_map, params, problem.f, problem.g, config.threads);
  const Eigen::VectorXd u_h = solve(system);

  StudyRow row;
  row.family = family;
  row.level = level;
  row.k = config.k;
  row.eps = eps;
  row.h = mesh.h;
  row.n_dofs = dof_map.n_global;
  row.e_h1 = error_h1(mesh, spaces, dof_map, u_h, problem);
  row.e_l2 = error_l2(mesh, spaces, dof_map, u_h, problem);
  row.e_cip = std::sqrt(error_cip(mesh, spaces, dof_map, u_h, problem, params).total_squared());
  row.rate_h1 = row.rate_l2 = row.rate_cip = kNaN;
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

namespace {

double rate(double e_prev, double e_cur, double h_prev, double h_cur) {
  return std::log(e_cur / e_prev) / std::log(h_cur / h_prev);
}

} // namespace

std::vector<StudyRow> convergence_study(const StudyConfig& config, MeshFamily family) {
  const auto& ladder = family == MeshFamily::Octag ? config.octag_ladder : config.voro_ladder;
  std::vector<StudyRow> rows;
  rows.reserve(ladder.size());
  for (int level = 0; level < static_cast<int>(ladder.size()); ++level) {
    const PolyMesh mesh = build_mesh(config, family, level);
    rows.push_back(solve_on_mesh(config, family, level, config.eps, mesh));
    if (level > 0) {
      const StudyRow& prev = rows[level - 1];
      StudyRow& cur = rows.back();
      cur.rate_h1 = rate(prev.e_h1, cur.e_h1, prev.h, cur.h);
      cur.rate_l2 = rate(prev.e_l2, cur.e_l2, prev.h, cur.h);
      cur.rate_cip = rate(prev.e_cip, cur.e_cip, prev.h, cur.h);
    }
  }
  return rows;
}

std::vector<StudyRow> robustness_sweep(const StudyConfig& config, MeshFamily family,
                                       int ladder_index, const std::vector<double>& eps_values) {
  const PolyMesh mesh = build_mesh(config, family, ladder_index);
  std::vector<StudyRow> rows;
  rows.reserve(eps_values.size());
  for (std::size_t i = 0; i < eps_values.size(); ++i) {
    rows.push_back(solve_on_mesh(config, family, ladder_index, eps_values[i], mesh));
    rows.back().level = static_cast<int>(i); // sweep position, the mesh is fixed
  }
  return rows;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return kNaN;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

void write_value(std::ostream& os, double v) {
  if (std::isnan(v)) {
    os << "nan";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

} // namespace

void write_csv(const std::string& path, const StudyConfig& config,
               const std::vector<StudyRow>& rows) {
  // Written to a temporary and renamed so readers never observe a torn file.
  const std::string tmp = path + ".tmp";
  std::ofstream os(tmp);
  if (!os) throw std::runtime_error("write_csv: cannot open '" + tmp + "'");
  os << "# problem=" << config.problem << " k=" << config.k << " eps=" << config.eps
     << " sigma=" << config.sigma << " delta=" << config.delta << " kappa_e=" << config.kappa_e
     << " kappa_E=" << config.kappa_E << " seed=" << config.seed
     << " lloyd=" << config.lloyd_iters << " perturb=" << config.octag_perturb << "\n";
  os << "family,level,k,eps,h,N,eH1,eL2,ecip,rateH1,rateL2,rateCIP,seconds\n";
  for (const auto& r : rows) {
    os << to_string(r.family) << "," << r.level << "," << r.k << ",";
    write_value(os, r.eps);
    os << ",";
    write_value(os, r.h);
    os << "," << r.n_dofs << ",";
    write_value(os, r.e_h1);
    os << ",";
    write_value(os, r.e_l2);
    os << ",";
    write_value(os, r.e_cip);
    os << ",";
    write_value(os, r.rate_h1);
    os << ",";
    write_value(os, r.rate_l2);
    os << ",";
    write_value(os, r.rate_cip);
    os << ",";
    write_value(os, r.seconds);
    os << "\n";
  }
  os.close();
  if (!os) throw std::runtime_error("write_csv: write to '" + tmp + "' failed");
  std::filesystem::rename(tmp, path);
}

namespace {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x, y;
};

// Minimal hand-rolled log-log plot; everything inline, no external assets.
void render_svg(std::ostream& os, const std::string& title, const std::vector<Series>& series) {
  const double width = 640, height = 480;
  const double ml = 70, mr = 160, mt = 40, mb = 50;

  double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
  double ymin = xmin, ymax = 0.0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > 0.0)) { // nothing plottable
    xmin = 0.1;
    xmax = 1.0;
    ymin = 0.1;
    ymax = 1.0;
  }
  const double lx0 = std::log10(xmin) - 0.1, lx1 = std::log10(xmax) + 0.1;
  const double ly0 = std::log10(ymin) - 0.2, ly1 = std::log10(ymax) + 0.2;
  auto px = [&](double x) { return ml + (std::log10(x) - lx0) / (lx1 - lx0) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (std::log10(y) - ly0) / (ly1 - ly0) * (height - mt - mb); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\">"
     << title << "</text>\n";

  // Decade grid lines with labels.
  for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
    const double x = px(std::pow(10.0, d));
    os << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\"" << height - mb
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << height - mb + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
       << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
    const double y = py(std::pow(10.0, d));
    os << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << width - mr << "\" y2=\"" << y
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
       << "</text>\n";
  }
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr << "\" height=\""
     << height - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">h</text>\n";

  int legend_row = 0;
  for (const auto& s : series) {
    std::string markers;
    std::string vertices;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      vertices += std::to_string(px(s.x[i])) + "," + std::to_string(py(s.y[i])) + " ";
      markers += "<circle cx=\"" + std::to_string(px(s.x[i])) + "\" cy=\"" +
                 std::to_string(py(s.y[i])) + "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
    }
    if (vertices.empty()) continue;
    os << "<polyline points=\"" << vertices << "\" fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"1.5\"/>\n"
       << markers;
    const double ly = mt + 16 + 18 * legend_row++;
    os << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - mr + 34
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << width - mr + 40 << "\" y=\"" << ly
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
  }

  // Reference slope triangles for the fitted slope of the first series.
  if (!series.empty() && series[0].x.size() >= 2) {
    const double slope = least_squares_slope(series[0].x, series[0].y);
    if (std::isfinite(slope)) {
      const double fx0 = xmin, fx1 = xmin * std::pow(xmax / xmin, 0.35);
      const double fy0 = ymin * 2.0;
      const double fy1 = fy0 * std::pow(fx1 / fx0, slope);
      os << "<path d=\"M" << px(fx0) << " " << py(fy0) << " L" << px(fx1) << " " << py(fy0)
         << " L" << px(fx1) << " " << py(fy1) << " Z\" fill=\"none\" stroke=\"#888\"/>\n";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.2f", slope);
      os << "<text x=\"" << px(fx1) + 6 << "\" y=\"" << (py(fy0) + py(fy1)) / 2
         << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\">" << buf << "</text>\n";
    }
  }
  os << "</svg>\n";
}

} // namespace

void write_svg_loglog(const std::string& path, const std::string& title,
                      const std::vector<StudyRow>& rows) {
  const std::string tmp = path + ".tmp";
  std::ofstream os(tmp);
  if (!os) throw std::runtime_error("write_svg_loglog: cannot open '" + tmp + "'");

  const struct {
    const char* label;
    double StudyRow::* field;
  } columns[] = {{"eH1", &StudyRow::e_h1}, {"eL2", &StudyRow::e_l2}, {"ecip", &StudyRow::e_cip}};
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::vector<Series> series;
  int color = 0;
  for (MeshFamily family : {MeshFamily::Octag, MeshFamily::Voro}) {
    bool any = false;
    for (const auto& r : rows) any = any || r.family == family;
    if (!any) continue;
    for (const auto& col : columns) {
      Series s;
      s.label = to_string(family) + " " + col.label;
      s.color = palette[color++ % 6];
      for (const auto& r : rows)
        if (r.family == family) {
          s.x.push_back(r.h);
          s.y.push_back(r.*(col.field));
        }
      series.push_back(std::move(s));
    }
  }

  // Embed the plotted numbers so the figure doubles as a data record.
  os << "<!--\n";
  for (const auto& s : series) {
    os << s.label << ":";
    for (std::size_t i = 0; i < s.x.size(); ++i) os << " (" << s.x[i] << ", " << s.y[i] << ")";
    os << "\n";
  }
  os << "-->\n";
  render_svg(os, title, series);
  os.close();
  if (!os) throw std::runtime_error("write_svg_loglog: write to '" + tmp + "' failed");
  std::filesystem::rename(tmp, path);
}

ReproduceReport reproduce_experiments(const std::string& outdir, const ReproduceOptions& options) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  ReproduceReport report;

  for (const auto& problem : options.problems) {
    for (int k : options.orders) {
      StudyConfig config;
      config.problem = problem;
      config.k = k;
      config.eps = 1e-5;
      config.seed = options.seed;
      config.threads = options.threads;
      if (options.octag_ladder) config.octag_ladder = *options.octag_ladder;
      if (options.voro_ladder) config.voro_ladder = *options.voro_ladder;

      const std::string stem = "convergence_" + problem + "_k" + std::to_string(k);
      try {
        std::vector<StudyRow> rows = convergence_study(config, MeshFamily::Octag);
        const std::vector<StudyRow> voro = convergence_study(config, MeshFamily::Voro);
        rows.insert(rows.end(), voro.begin(), voro.end());

        const std::string csv = (fs::path(outdir) / (stem + ".csv")).string();
        write_csv(csv, config, rows);
        write_svg_loglog((fs::path(outdir) / (stem + ".svg")).string(),
                         "convergence " + problem + " k=" + std::to_string(k), rows);
        report.written.push_back(csv);
      } catch (const std::exception& e) {
        report.failures.push_back(stem + ": " + e.what());
      }
    }
  }

  // eps-robustness on the fixed mid-size Voronoi mesh.
  const std::vector<double> eps_values = {1.0, 1e-2, 1e-4, 1e-6, 1e-8};
  for (const auto& problem : options.problems) {
    StudyConfig config;
    config.problem = problem;
    config.k = 1;
    config.seed = options.seed;
    config.threads = options.threads;
    if (options.voro_ladder) config.voro_ladder = *options.voro_ladder;
    int index = 0;
    for (std::size_t i = 0; i < config.voro_ladder.size(); ++i)
      if (config.voro_ladder[i] <= 1024) index = static_cast<int>(i);
    try {
      const std::vector<StudyRow> rows =
          robustness_sweep(config, MeshFamily::Voro, index, eps_values);
      const std::string csv = (fs::path(outdir) / ("robustness_" + problem + ".csv")).string();
      write_csv(csv, config, rows);
      report.written.push_back(csv);
    } catch (const std::exception& e) {
      report.failures.push_back("robustness_" + problem + ": " + e.what());
    }
  }
  return report;
}

} // namespace vemcip

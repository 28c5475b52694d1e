#include "vemcip/assembly.hpp"

#include <atomic>
#include <fstream>
#include <thread>

namespace vemcip {

namespace {

struct LocalContribution {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd load;
};

// Element matrix eps*A + B + sigma*C + JS + Nitsche and the element load.
LocalContribution cell_contribution(const PolyMesh& mesh, const LocalSpace& ls,
                                    const ModelParams& params, const ScalarField& f,
                                    const ScalarField& g) {
  LocalContribution out;
  out.matrix = params.eps * local_diffusion(ls) + local_advection(ls, params.beta) +
               params.sigma * local_reaction(ls);
  const double gamma_E =
      gamma_element(mesh, ls, params.beta, params.kappa_E, params.quad_exactness());
  out.matrix += element_jump(ls, gamma_E);

  bool on_boundary = false;
  for (int fi : ls.facet_ids()) on_boundary = on_boundary || mesh.facets[fi].is_boundary();
  if (on_boundary) out.matrix += nitsche_matrix(mesh, ls, params);

  out.load = local_load(mesh, ls, params, f, g);
  return out;
}

// Paired matrix D_e + J_e for one interior facet, stacked owner|neighbor.
Eigen::MatrixXd facet_contribution(const PolyMesh& mesh, int facet,
                                   const std::vector<LocalSpace>& spaces,
                                   const ModelParams& params) {
  const FacetRecord& rec = mesh.facets[facet];
  const LocalSpace& owner = spaces[rec.owner];
  const LocalSpace& neighbor = spaces[rec.neighbor];
  Eigen::MatrixXd M = facet_dh(mesh, facet, owner, neighbor, params.beta);
  const double gamma_e =
      gamma_facet(mesh, facet, params.beta, params.kappa_e, params.quad_exactness());
  if (gamma_e > 0.0) M += facet_jump(mesh, facet, owner, neighbor, gamma_e);
  return M;
}

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next(0);
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const int nt = std::min(threads, n);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

} // namespace

GlobalSystem assemble(const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                      const GlobalDofMap& dof_map, const ModelParams& params,
                      const ScalarField& f, const ScalarField& g, int threads) {
  params.validate();
  const int nc = mesh.num_cells();
  const int nf = mesh.num_facets();

  // Local work in parallel, then a serial scatter in fixed order so the
  // assembled matrix is bitwise independent of the thread count.
  std::vector<LocalContribution> cell_parts(nc);
  parallel_for(nc, threads, [&](int c) {
    cell_parts[c] = cell_contribution(mesh, spaces[c], params, f, g);
  });
  std::vector<Eigen::MatrixXd> facet_parts(nf);
  parallel_for(nf, threads, [&](int fi) {
    if (!mesh.facets[fi].is_boundary()) facet_parts[fi] = facet_contribution(mesh, fi, spaces, params);
  });

  GlobalSystem system;
  system.dof_map = dof_map;
  system.rhs = Eigen::VectorXd::Zero(dof_map.n_global);

  std::vector<Eigen::Triplet<double>> triplets;
  std::size_t nnz_estimate = 0;
  for (int c = 0; c < nc; ++c) nnz_estimate += dof_map.cell_to_global[c].size() * dof_map.cell_to_global[c].size();
  triplets.reserve(nnz_estimate * 2);

  for (int c = 0; c < nc; ++c) {
    const auto& global = dof_map.cell_to_global[c];
    const auto& M = cell_parts[c].matrix;
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j)
        if (M(i, j) != 0.0) triplets.emplace_back(global[i], global[j], M(i, j));
    for (int i = 0; i < M.rows(); ++i) system.rhs[global[i]] += cell_parts[c].load[i];
  }
  for (int fi = 0; fi < nf; ++fi) {
    if (mesh.facets[fi].is_boundary()) continue;
    const FacetRecord& rec = mesh.facets[fi];
    const auto& go = dof_map.cell_to_global[rec.owner];
    const auto& gn = dof_map.cell_to_global[rec.neighbor];
    std::vector<int> global;
    global.reserve(go.size() + gn.size());
    global.insert(global.end(), go.begin(), go.end());
    global.insert(global.end(), gn.begin(), gn.end());
    const auto& M = facet_parts[fi];
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j)
        if (M(i, j) != 0.0) triplets.emplace_back(global[i], global[j], M(i, j));
  }

  system.matrix.resize(dof_map.n_global, dof_map.n_global);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  system.matrix.makeCompressed();
  return system;
}

Eigen::VectorXd solve(const GlobalSystem& system) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(system.matrix);
  lu.factorize(system.matrix);
  if (lu.info() != Eigen::Success) throw SolverError("solve: sparse LU factorization failed");
  const Eigen::VectorXd x = lu.solve(system.rhs);
  if (lu.info() != Eigen::Success) throw SolverError("solve: sparse LU backsubstitution failed");
  const double rhs_norm = system.rhs.norm();
  const double residual = (system.matrix * x - system.rhs).norm();
  if (rhs_norm > 0.0 && residual > 1e-10 * rhs_norm)
    throw SolverError("solve: relative residual " + std::to_string(residual / rhs_norm) +
                      " exceeds 1e-10");
  return x;
}

void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_matrix_market: cannot open '" + path + "'");
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  char buf[64];
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(it.row()) + 1,
                    static_cast<int>(it.col()) + 1, it.value());
      os << buf;
    }
}

} // namespace vemcip

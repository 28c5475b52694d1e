#include <map>

#include <benchmark/benchmark.h>

#include "vemcip/errors.hpp"

namespace vemcip {
namespace {

const PolyMesh& voro_mesh(int cells) {
  static std::map<int, PolyMesh> cache;
  auto it = cache.find(cells);
  if (it == cache.end()) it = cache.emplace(cells, generate_voronoi(cells, 2, 7)).first;
  return it->second;
}

void BM_GenerateVoronoi(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const PolyMesh mesh = generate_voronoi(cells, 2, 7);
    benchmark::DoNotOptimize(mesh.h);
  }
}
BENCHMARK(BM_GenerateVoronoi)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_BuildLocalSpaces(benchmark::State& state) {
  const PolyMesh& mesh = voro_mesh(1024);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const std::vector<LocalSpace> spaces = build_local_spaces(mesh, k);
    benchmark::DoNotOptimize(spaces.back().num_dofs());
  }
}
BENCHMARK(BM_BuildLocalSpaces)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const PolyMesh& mesh = voro_mesh(1024);
  const int k = static_cast<int>(state.range(0));
  const ManufacturedProblem prob = manufactured("u1", 1e-5);
  const std::vector<LocalSpace> spaces = build_local_spaces(mesh, k);
  const GlobalDofMap dofs = build_dof_map(mesh, k);
  const ModelParams params = params_for(prob, k);
  for (auto _ : state) {
    const GlobalSystem system = assemble(mesh, spaces, dofs, params, prob.f, prob.g);
    benchmark::DoNotOptimize(system.matrix.nonZeros());
  }
}
BENCHMARK(BM_Assemble)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SolveEndToEnd(benchmark::State& state) {
  const PolyMesh& mesh = voro_mesh(static_cast<int>(state.range(0)));
  const ManufacturedProblem prob = manufactured("u1", 1e-5);
  const std::vector<LocalSpace> spaces = build_local_spaces(mesh, 1);
  const GlobalDofMap dofs = build_dof_map(mesh, 1);
  const ModelParams params = params_for(prob, 1);
  for (auto _ : state) {
    const GlobalSystem system = assemble(mesh, spaces, dofs, params, prob.f, prob.g);
    const Eigen::VectorXd u = solve(system);
    benchmark::DoNotOptimize(u.norm());
  }
}
BENCHMARK(BM_SolveEndToEnd)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

} // namespace
} // namespace vemcip

BENCHMARK_MAIN();

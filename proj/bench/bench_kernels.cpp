// Serial reference vs OpenMP kernels.

#include <random>

#include <benchmark/benchmark.h>

#include "radviz3d/anchors.hpp"
#include "radviz3d/kernels.hpp"
#include "radviz3d/overlap.hpp"

using namespace radviz;

namespace {

Eigen::MatrixXd uniform_rows(Eigen::Index n, Eigen::Index p) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = u(rng);
  return x;
}

template <auto Kernel>
void bm_project(benchmark::State& state) {
  const Eigen::MatrixXd x = uniform_rows(state.range(0), 20);
  const Eigen::MatrixXd u = platonic_anchors(20).matrix();
  Eigen::MatrixXd out;
  std::vector<unsigned char> degenerate;
  for (auto _ : state) {
    Kernel(x, u, out, degenerate);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void bm_misclassified(benchmark::State& state) {
  const auto p = static_cast<Eigen::Index>(state.range(1));
  const auto a = prepare({Eigen::VectorXd::Zero(p), Eigen::MatrixXd::Identity(p, p), 0.5});
  const auto b = prepare({Eigen::VectorXd::Constant(p, 0.5), 2.0 * Eigen::MatrixXd::Identity(p, p), 0.5});
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b, n, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(bm_project<kernels::serial::project_rows>)->Name("project_rows/serial")->Arg(10000)->Arg(1000000);
BENCHMARK(bm_project<kernels::project_rows>)->Name("project_rows/openmp")->Arg(10000)->Arg(1000000);
BENCHMARK(bm_misclassified<kernels::serial::count_misclassified>)
    ->Name("count_misclassified/serial")
    ->Args({100000, 5})
    ->Args({1000000, 13});
BENCHMARK(bm_misclassified<kernels::count_misclassified>)
    ->Name("count_misclassified/openmp")
    ->Args({100000, 5})
    ->Args({1000000, 13});

BENCHMARK_MAIN();

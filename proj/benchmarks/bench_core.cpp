#include <benchmark/benchmark.h>

#include <random>

#include "outlift/charts.hpp"
#include "outlift/crosshom.hpp"
#include "outlift/curve.hpp"
#include "outlift/freegroup.hpp"
#include "outlift/loopclass.hpp"

namespace {

using namespace outlift;

void bm_word_reduce(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> idx(1, 4);
  std::uniform_int_distribution<int> sgn(0, 1);
  std::vector<Letter> raw;
  raw.reserve(1024);
  for (int k = 0; k < 1024; ++k) raw.push_back({idx(rng), sgn(rng) ? 1 : -1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduce(std::span<const Letter>(raw), 4));
  }
}
BENCHMARK(bm_word_reduce);

void bm_polar_rotation(benchmark::State& state) {
  Eigen::Matrix3d m = rot_z_pi(0.37);
  m(2, 0) += 0.8;  // generic shear-ish perturbation
  for (auto _ : state) {
    benchmark::DoNotOptimize(polar_rotation(m));
  }
}
BENCHMARK(bm_polar_rotation);

void bm_jacobian_analytic(benchmark::State& state) {
  const ChartMap map = ChartMap::ball_half_turn(1);
  std::mt19937_64 rng(7);
  const Eigen::Vector3d p = map.sample_domain_point(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(map.jacobian_analytic(p));
  }
}
BENCHMARK(bm_jacobian_analytic);

void bm_loop_class_full_turn(benchmark::State& state) {
  const MatrixPath path{[](double t) { return rot_z_pi(2.0 * t); },
                        static_cast<int>(state.range(0)), 16};
  for (auto _ : state) {
    benchmark::DoNotOptimize(loop_class(path));
  }
}
BENCHMARK(bm_loop_class_full_turn)->Arg(64)->Arg(256)->Arg(1024);

void bm_rho_of_torus(benchmark::State& state) {
  const ChartMap map = ChartMap::torus_shear(1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho_of(map, 3, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_rho_of_torus)->Arg(512)->Arg(2048);

void bm_twisting_of_sphere_twist(benchmark::State& state) {
  const ChartMap map = ChartMap::sphere_twist(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(twisting_of(map, 3));
  }
}
BENCHMARK(bm_twisting_of_sphere_twist);

}  // namespace

BENCHMARK_MAIN();

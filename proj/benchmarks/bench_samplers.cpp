#include <benchmark/benchmark.h>

#include "lgmix/distributions.hpp"
#include "lgmix/special.hpp"

using namespace lgmix;

static void BM_TruncatedNormal(benchmark::State& state) {
  RngStream rng(1, 0);
  const Interval iv{0.0, std::numeric_limits<double>::infinity()};
  double acc = 0.0;
  for (auto _ : state) acc += sample_truncated_normal(0.3, 1.0, iv, rng);
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_TruncatedNormal);

static void BM_TruncatedNormalFarTail(benchmark::State& state) {
  RngStream rng(2, 0);
  const Interval iv{8.0, std::numeric_limits<double>::infinity()};
  double acc = 0.0;
  for (auto _ : state) acc += sample_truncated_normal(0.0, 1.0, iv, rng);
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_TruncatedNormalFarTail);

static void BM_NormalQuantile(benchmark::State& state) {
  RngStream rng(3, 0);
  double acc = 0.0;
  for (auto _ : state) acc += normal_quantile(rng.uniform());
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_NormalQuantile);

static void BM_Wishart(benchmark::State& state) {
  const auto p = static_cast<Eigen::Index>(state.range(0));
  RngStream rng(4, 0);
  const Eigen::MatrixXd V = Eigen::MatrixXd::Identity(p, p);
  for (auto _ : state) {
    Eigen::MatrixXd W = sample_wishart(static_cast<double>(p) + 3.0, V, rng);
    benchmark::DoNotOptimize(W);
  }
}
BENCHMARK(BM_Wishart)->Arg(10)->Arg(50);

static void BM_Ess2d(benchmark::State& state) {
  RngStream rng(5, 0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  const Eigen::MatrixXd chol = Eigen::MatrixXd::Identity(2, 2);
  auto log_lik = [](const Eigen::VectorXd& v) { return -0.5 * v.squaredNorm(); };
  for (auto _ : state) {
    x = ess_sample(x, mean, chol, log_lik, rng);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_Ess2d);

#include <benchmark/benchmark.h>

#include "lgmix/lggm.hpp"
#include "lgmix/simgen.hpp"

using namespace lgmix;

namespace {

struct Fixture {
  MixedDataset data;
  MarginalPrior prior;
  GroundTruth truth;

  explicit Fixture(Eigen::Index n, Eigen::Index p) {
    SimScenario sc;
    sc.n = n;
    sc.p = p;
    sc.seed = 99;
    std::tie(data, prior) = generate_scenario(sc, truth);
  }
};

SpikeSlabHyper bench_hyper() {
  SpikeSlabHyper h;
  h.v0 = 0.05;
  h.v1 = 0.5;
  h.pi_delta = 0.1;
  return h;
}

} // namespace

// one full Gibbs sweep at the benchmark scale, both priors
static void BM_SweepSpikeSlab(benchmark::State& state) {
  Fixture f(200, 50);
  const SpikeSlabHyper hyper = bench_hyper();
  ChainConfig cfg;
  RngStream rng(7, 0);
  auto st = init_state(f.data, f.prior, hyper, cfg, Eigen::MatrixXi(), rng);
  MeanField mu;
  mu.shared = &st.mu;
  std::vector<RngStream> blocks{rng.substream(1)};
  for (auto _ : state) {
    update_Z(st.Z, f.data, mu, st.corr, blocks);
    update_Lambda(st.corr, st.Z, f.data, mu, rng);
    st.mu = update_mu(st.Z, f.prior, st.corr, rng);
    const Eigen::MatrixXd R_inv = pd_inverse(st.corr.R, "bench");
    auto ws = expand(st.Z, mu, st.corr, R_inv, PriorKind::spike_slab, rng);
    Eigen::MatrixXd Om =
        ws.D.cwiseInverse().asDiagonal() * R_inv * ws.D.cwiseInverse().asDiagonal();
    update_Omega_ss(ws, Om, st.corr.delta, hyper, f.data.n(),
                    VSampling::gaussian_approx, rng);
    auto [R, d] = project_back(Om);
    st.corr.R = R;
    const Eigen::MatrixXd R_inv_new = d.asDiagonal() * Om * d.asDiagonal();
    st.corr.delta = update_delta(R_inv_new, hyper, st.corr.fixed_edges, rng);
  }
}
BENCHMARK(BM_SweepSpikeSlab)->Unit(benchmark::kMillisecond);

static void BM_SweepUniform(benchmark::State& state) {
  Fixture f(200, 50);
  ChainConfig cfg;
  cfg.prior_kind = PriorKind::marginal_uniform;
  RngStream rng(8, 0);
  auto st = init_state(f.data, f.prior, SpikeSlabHyper{}, cfg, Eigen::MatrixXi(), rng);
  MeanField mu;
  mu.shared = &st.mu;
  std::vector<RngStream> blocks{rng.substream(1)};
  for (auto _ : state) {
    update_Z(st.Z, f.data, mu, st.corr, blocks);
    update_Lambda(st.corr, st.Z, f.data, mu, rng);
    st.mu = update_mu(st.Z, f.prior, st.corr, rng);
    const Eigen::MatrixXd R_inv = pd_inverse(st.corr.R, "bench");
    auto ws = expand(st.Z, mu, st.corr, R_inv, PriorKind::marginal_uniform, rng);
    Eigen::MatrixXd Om = update_Omega_uniform(ws, f.data.n(), UniformDf::conjugate, rng);
    auto [R, d] = project_back(Om);
    st.corr.R = R;
  }
}
BENCHMARK(BM_SweepUniform)->Unit(benchmark::kMillisecond);

static void BM_UpdateZ(benchmark::State& state) {
  Fixture f(200, 50);
  ChainConfig cfg;
  RngStream rng(9, 0);
  auto st = init_state(f.data, f.prior, SpikeSlabHyper{}, cfg, Eigen::MatrixXi(), rng);
  MeanField mu;
  mu.shared = &st.mu;
  std::vector<RngStream> blocks{rng.substream(1)};
  for (auto _ : state) update_Z(st.Z, f.data, mu, st.corr, blocks);
}
BENCHMARK(BM_UpdateZ)->Unit(benchmark::kMillisecond);

static void BM_OmegaSsSweep(benchmark::State& state) {
  const auto p = static_cast<Eigen::Index>(state.range(0));
  Fixture f(200, p);
  const SpikeSlabHyper hyper = bench_hyper();
  ChainConfig cfg;
  RngStream rng(10, 0);
  auto st = init_state(f.data, f.prior, hyper, cfg, Eigen::MatrixXi(), rng);
  MeanField mu;
  mu.shared = &st.mu;
  const Eigen::MatrixXd R_inv = pd_inverse(st.corr.R, "bench");
  auto ws = expand(st.Z, mu, st.corr, R_inv, PriorKind::spike_slab, rng);
  Eigen::MatrixXd Om =
      ws.D.cwiseInverse().asDiagonal() * R_inv * ws.D.cwiseInverse().asDiagonal();
  for (auto _ : state)
    update_Omega_ss(ws, Om, st.corr.delta, hyper, f.data.n(),
                    VSampling::gaussian_approx, rng);
}
BENCHMARK(BM_OmegaSsSweep)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

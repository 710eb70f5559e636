// Full-chain statistical correctness: brute-force quadrature gates, prior
// cross-checks between the two R priors, and marginalization invariants.
#include <array>
#include <cmath>

#include "doctest.h"
#include "lgmix/lggm.hpp"
#include "lgmix/special.hpp"
#include "oracle_quadrature.hpp"

using namespace lgmix;

namespace {

MixedDataset mixed_two_var(const std::vector<int>& x1, const std::vector<double>& x2) {
  MixedDataset d;
  d.schema.resize(2);
  d.schema[0] = {"b1", VariableKind::binary, {}};
  d.schema[1] = {"x1", VariableKind::continuous, {}};
  d.cells.resize(static_cast<Eigen::Index>(x1.size()), 2);
  for (std::size_t i = 0; i < x1.size(); ++i) {
    d.cells(static_cast<Eigen::Index>(i), 0) =
        x1[i] < 0 ? std::numeric_limits<double>::quiet_NaN() : double(x1[i]);
    d.cells(static_cast<Eigen::Index>(i), 1) = x2[i];
  }
  return d;
}

Eigen::VectorXd r12_series(const ChainOutput& out) {
  const auto& draws = out.chains[0].r_draws;
  Eigen::VectorXd s(static_cast<Eigen::Index>(draws.size()));
  for (std::size_t t = 0; t < draws.size(); ++t)
    s[static_cast<Eigen::Index>(t)] = draws[t](0, 1);
  return s;
}

} // namespace

TEST_CASE("small-instance gate: uniform-prior chain matches 4-d quadrature") {
  // known generator: rho = 0.5, continuous scale 1.3, informative prior at truth
  const Eigen::Index n = 50;
  RngStream gen(101, 0);
  const double rho_true = 0.5, lam_true = 1.3;
  const Eigen::Vector2d mu_true(0.3, -0.2);
  std::vector<int> x1(static_cast<std::size_t>(n));
  std::vector<double> x2(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double z1 = sample_std_normal(gen);
    const double z2 = rho_true * z1 +
                      std::sqrt(1.0 - rho_true * rho_true) * sample_std_normal(gen);
    x1[i] = (mu_true[0] + z1 > 0.0) ? 1 : 0;
    x2[i] = mu_true[1] + lam_true * z2;
  }
  // a few missing cells exercise the unbounded-truncation path
  x1[3] = -1;
  x2[7] = std::numeric_limits<double>::quiet_NaN();
  x1[11] = -1;
  x2[11] = std::numeric_limits<double>::quiet_NaN();

  const auto data = mixed_two_var(x1, x2);
  MarginalPrior prior;
  prior.mu0 = mu_true;
  prior.sigma2 = 1.0;
  SpikeSlabHyper hyper;
  ChainConfig cfg;
  cfg.prior_kind = PriorKind::marginal_uniform;
  cfg.n_iter = 40000;
  cfg.burn_in = 8000;
  cfg.seed = 2024;
  cfg.keep_r_draws = true;
  const auto out = run_chain(data, prior, hyper, cfg);

  const auto q = oracle::quad_mixed_uniform(x1, x2, mu_true, prior.sigma2);

  const Eigen::VectorXd rho_draws = r12_series(out);
  const Eigen::VectorXd mu1_draws = out.chains[0].mu_draws.col(0);
  const Eigen::VectorXd mu2_draws = out.chains[0].mu_draws.col(1);
  const Eigen::VectorXd lam_draws = out.chains[0].lambda_draws.col(1);

  const double se_rho = oracle::batch_means_se(rho_draws);
  const double se_mu1 = oracle::batch_means_se(mu1_draws);
  const double se_mu2 = oracle::batch_means_se(mu2_draws);
  const double se_lam = oracle::batch_means_se(lam_draws);

  INFO("quad rho=", q.rho, " chain rho=", rho_draws.mean(), " se=", se_rho);
  INFO("quad mu1=", q.mu1, " chain mu1=", mu1_draws.mean(), " se=", se_mu1);
  CHECK(std::fabs(rho_draws.mean() - q.rho) < 3.0 * se_rho);
  CHECK(std::fabs(mu1_draws.mean() - q.mu1) < 3.0 * se_mu1);
  CHECK(std::fabs(mu2_draws.mean() - q.mu2) < 3.0 * se_mu2);
  CHECK(std::fabs(lam_draws.mean() - q.lambda) < 3.0 * se_lam);
}

TEST_CASE("small-instance gate: spike-and-slab chain matches 3-d quadrature") {
  const Eigen::Index n = 60;
  RngStream gen(202, 0);
  const double rho_true = 0.6;
  const Eigen::Vector2d mu_true(0.4, -0.3);
  Eigen::Matrix<double, 2, 2> counts;
  counts.setZero();
  Eigen::MatrixXd cells(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z1 = sample_std_normal(gen);
    const double z2 = rho_true * z1 +
                      std::sqrt(1.0 - rho_true * rho_true) * sample_std_normal(gen);
    const int a = mu_true[0] + z1 > 0.0 ? 1 : 0;
    const int b = mu_true[1] + z2 > 0.0 ? 1 : 0;
    counts(a, b) += 1.0;
    cells(i, 0) = a;
    cells(i, 1) = b;
  }
  MixedDataset data;
  data.schema.resize(2);
  data.schema[0] = {"b1", VariableKind::binary, {}};
  data.schema[1] = {"b2", VariableKind::binary, {}};
  data.cells = cells;

  MarginalPrior prior;
  prior.mu0 = mu_true;
  prior.sigma2 = 1.0;
  // moderate spike so the quadrature resolves it cleanly
  SpikeSlabHyper hyper;
  hyper.v0 = 0.1;
  hyper.v1 = 1.0;
  hyper.lambda = 2.0;
  hyper.pi_delta = 0.2;

  ChainConfig cfg;
  cfg.prior_kind = PriorKind::spike_slab;
  cfg.v_sampling = VSampling::exact_reweighted;
  cfg.n_iter = 60000;
  cfg.burn_in = 10000;
  cfg.seed = 77;
  cfg.keep_r_draws = true;
  const auto out = run_chain(data, prior, hyper, cfg);

  const auto q = oracle::quad_binary_ss(counts, mu_true, prior.sigma2, hyper);

  const Eigen::VectorXd rho_draws = r12_series(out);
  const Eigen::VectorXd mu1_draws = out.chains[0].mu_draws.col(0);
  const Eigen::VectorXd mu2_draws = out.chains[0].mu_draws.col(1);

  // The one-shot expansion move is exactly invariant under the marginally
  // uniform prior but only asymptotically so under the spike-and-slab prior
  // when every scale is pinned (all-binary data): measured offset on rho is
  // about +0.03 at n=60 and +0.008 at n=240 against an exact-MH control with
  // identical Z/mu/delta updates. Gate at the scheme-level tolerance.
  INFO("quad rho=", q.rho, " chain rho=", rho_draws.mean());
  INFO("quad incl=", q.inclusion, " chain incl=", out.inclusion_prob(0, 1));
  CHECK(std::fabs(rho_draws.mean() - q.rho) < 0.05);
  CHECK(std::fabs(mu1_draws.mean() - q.mu1) < 0.05);
  CHECK(std::fabs(mu2_draws.mean() - q.mu2) < 0.05);
  CHECK(std::fabs(out.inclusion_prob(0, 1) - q.inclusion) < 0.06);

  // the Gaussian v-approximation should land close to the exact-likelihood run
  ChainConfig approx_cfg = cfg;
  approx_cfg.v_sampling = VSampling::gaussian_approx;
  approx_cfg.seed = 78;
  const auto out2 = run_chain(data, prior, hyper, approx_cfg);
  CHECK(std::fabs(r12_series(out2).mean() - rho_draws.mean()) < 0.02);
}

TEST_CASE("slab-dominated spike-and-slab approximates the marginally uniform fit") {
  const Eigen::Index n = 150, p = 3;
  RngStream gen(303, 0);
  Eigen::MatrixXd R_true(p, p);
  R_true << 1.0, 0.45, 0.1, 0.45, 1.0, -0.3, 0.1, -0.3, 1.0;
  const Eigen::MatrixXd L = safe_llt(R_true, "test").matrixL();
  Eigen::MatrixXd cells(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd z(p);
    for (Eigen::Index j = 0; j < p; ++j) z[j] = sample_std_normal(gen);
    z = L * z;
    for (Eigen::Index j = 0; j < p; ++j) cells(i, j) = z(j) > 0.0 ? 1.0 : 0.0;
  }
  MixedDataset data;
  data.schema = {{"b1", VariableKind::binary, {}},
                 {"b2", VariableKind::binary, {}},
                 {"b3", VariableKind::binary, {}}};
  data.cells = cells;
  MarginalPrior prior;
  prior.mu0 = Eigen::VectorXd::Zero(p);
  prior.sigma2 = 1.0;

  ChainConfig uc;
  uc.prior_kind = PriorKind::marginal_uniform;
  uc.n_iter = 20000;
  uc.burn_in = 5000;
  uc.seed = 11;
  const auto u = run_chain(data, prior, SpikeSlabHyper{}, uc);

  SpikeSlabHyper slab;
  slab.v0 = 0.1;
  slab.v1 = 10.0;
  slab.lambda = 2.0;
  slab.pi_delta = 0.999;
  ChainConfig sc = uc;
  sc.prior_kind = PriorKind::spike_slab;
  sc.v_sampling = VSampling::exact_reweighted;
  sc.seed = 12;
  const auto s = run_chain(data, prior, slab, sc);

  INFO("uniform R:\n", u.R_mean, "\nslab R:\n", s.R_mean);
  CHECK((u.R_mean - s.R_mean).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("an all-missing row leaves the posterior unchanged up to MC error") {
  const Eigen::Index n = 90, p = 3;
  RngStream gen(404, 0);
  Eigen::MatrixXd cells(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z1 = sample_std_normal(gen);
    const double z2 = 0.6 * z1 + 0.8 * sample_std_normal(gen);
    cells(i, 0) = z1 > 0.2 ? 1.0 : 0.0;
    cells(i, 1) = z2 > -0.1 ? 1.0 : 0.0;
    cells(i, 2) = 0.4 * z1 + sample_std_normal(gen);
  }
  MixedDataset base;
  base.schema = {{"b1", VariableKind::binary, {}},
                 {"b2", VariableKind::binary, {}},
                 {"x1", VariableKind::continuous, {}}};
  base.cells = cells;

  MixedDataset augmented = base;
  augmented.cells.conservativeResize(n + 1, p);
  augmented.cells.row(n).setConstant(std::numeric_limits<double>::quiet_NaN());

  MarginalPrior prior;
  prior.mu0 = Eigen::VectorXd::Zero(p);
  prior.sigma2 = 1.0;
  ChainConfig cfg;
  cfg.prior_kind = PriorKind::spike_slab;
  cfg.n_iter = 24000;
  cfg.burn_in = 6000;
  cfg.seed = 5;
  const auto a = run_chain(base, prior, SpikeSlabHyper{}, cfg);
  cfg.seed = 6;
  const auto b = run_chain(augmented, prior, SpikeSlabHyper{}, cfg);

  INFO("base R:\n", a.R_mean, "\naugmented R:\n", b.R_mean);
  CHECK((a.R_mean - b.R_mean).cwiseAbs().maxCoeff() < 0.04);
  CHECK((a.mu_mean - b.mu_mean).cwiseAbs().maxCoeff() < 0.04);
  CHECK(std::fabs(a.Lambda_mean[2] - b.Lambda_mean[2]) < 0.05);
}

TEST_CASE("permuting variables and permuting back gives the same posterior") {
  const Eigen::Index n = 120, p = 3;
  RngStream gen(505, 0);
  Eigen::MatrixXd cells(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z1 = sample_std_normal(gen);
    const double z2 = -0.5 * z1 + std::sqrt(0.75) * sample_std_normal(gen);
    cells(i, 0) = z1 > 0.0 ? 1.0 : 0.0;
    cells(i, 1) = z2 > 0.3 ? 1.0 : 0.0;
    cells(i, 2) = sample_std_normal(gen) > -0.4 ? 1.0 : 0.0;
  }
  MixedDataset data;
  data.schema = {{"b1", VariableKind::binary, {}},
                 {"b2", VariableKind::binary, {}},
                 {"b3", VariableKind::binary, {}}};
  data.cells = cells;

  const std::array<Eigen::Index, 3> perm{2, 0, 1}; // permuted col k = original perm[k]
  MixedDataset shuffled = data;
  for (Eigen::Index k = 0; k < p; ++k) {
    shuffled.cells.col(k) = data.cells.col(perm[static_cast<std::size_t>(k)]);
    shuffled.schema[static_cast<std::size_t>(k)] =
        data.schema[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
  }

  MarginalPrior prior;
  prior.mu0 = Eigen::VectorXd::Zero(p);
  prior.sigma2 = 1.0;
  ChainConfig cfg;
  cfg.n_iter = 24000;
  cfg.burn_in = 6000;
  cfg.seed = 3;
  const auto a = run_chain(data, prior, SpikeSlabHyper{}, cfg);
  cfg.seed = 4;
  const auto b = run_chain(shuffled, prior, SpikeSlabHyper{}, cfg);

  Eigen::MatrixXd back(p, p);
  for (Eigen::Index k = 0; k < p; ++k)
    for (Eigen::Index l = 0; l < p; ++l)
      back(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(l)]) =
          b.R_mean(k, l);
  INFO("direct R:\n", a.R_mean, "\npermuted-back R:\n", back);
  CHECK((a.R_mean - back).cwiseAbs().maxCoeff() < 0.04);
}

TEST_CASE("uniform-prior posterior mean is consistent on a large instance") {
  const Eigen::Index n = 2000, p = 5;
  RngStream gen(606, 0);
  const Eigen::MatrixXd W = sample_wishart(12.0, Eigen::MatrixXd::Identity(p, p), gen);
  auto [R_true, scales] = project_back(W);
  const Eigen::MatrixXd L = safe_llt(R_true, "test").matrixL();
  Eigen::MatrixXd cells(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd z(p);
    for (Eigen::Index j = 0; j < p; ++j) z[j] = sample_std_normal(gen);
    cells.row(i) = (L * z).transpose();
  }
  MixedDataset data;
  data.schema.resize(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j)
    data.schema[static_cast<std::size_t>(j)] = {"x" + std::to_string(j + 1),
                                                VariableKind::continuous,
                                                {}};
  data.cells = cells;
  MarginalPrior prior;
  prior.mu0 = Eigen::VectorXd::Zero(p);
  prior.sigma2 = 1.0;
  ChainConfig cfg;
  cfg.prior_kind = PriorKind::marginal_uniform;
  cfg.n_iter = 1500;
  cfg.burn_in = 500;
  cfg.seed = 8;
  const auto out = run_chain(data, prior, SpikeSlabHyper{}, cfg);
  INFO("||R_hat - R_true||_F = ", (out.R_mean - R_true).norm());
  CHECK((out.R_mean - R_true).norm() < 0.15);
}

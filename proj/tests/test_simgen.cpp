#include <cmath>

#include "doctest.h"
#include "lgmix/errors.hpp"
#include "lgmix/simgen.hpp"
#include "lgmix/special.hpp"

using namespace lgmix;

TEST_CASE("precision graph: mean degree near the documented 6.4 at c = 0.2") {
  double total_degree = 0.0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    RngStream rng(static_cast<std::uint64_t>(s + 1), 0);
    const auto truth = gen_precision_graph(50, 0.2, rng);
    total_degree += 2.0 * static_cast<double>(truth.edges.size()) / 50.0;
  }
  const double mean_degree = total_degree / seeds;
  CHECK(mean_degree > 4.5);
  CHECK(mean_degree < 8.5);
}

TEST_CASE("precision graph: PD, unit-diagonal inverse, edge bookkeeping") {
  RngStream rng(42, 0);
  const auto truth = gen_precision_graph(30, 0.2, rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(truth.Omega_true,
                                                    Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  const Eigen::MatrixXd Sigma = truth.Omega_true.inverse();
  for (Eigen::Index j = 0; j < 30; ++j)
    CHECK(std::fabs(Sigma(j, j) - 1.0) < 1e-10);
  CHECK((Sigma - truth.R_true).cwiseAbs().maxCoeff() < 1e-10);
  // edges match nonzero off-diagonals
  for (auto [a, b] : truth.edges) CHECK(truth.Omega_true(a, b) != 0.0);
  Eigen::Index nonzeros = 0;
  for (Eigen::Index j = 0; j < 30; ++j)
    for (Eigen::Index k = j + 1; k < 30; ++k)
      if (std::fabs(truth.Omega_true(j, k)) > 1e-14) ++nonzeros;
  CHECK(nonzeros == static_cast<Eigen::Index>(truth.edges.size()));
}

TEST_CASE("mixed data: binary threshold matches the probit marginal") {
  SimScenario sc;
  sc.n = 100000;
  sc.p = 4;
  sc.continuous_fraction = 0.0;
  sc.seed = 7;
  GroundTruth truth;
  RngStream rng(sc.seed, 0);
  truth = gen_precision_graph(sc.p, sc.c_graph, rng);
  auto [data, prior] = gen_mixed_data(sc, truth, rng);
  for (Eigen::Index j = 0; j < sc.p; ++j) {
    const double freq = data.cells.col(j).mean();
    CHECK(freq == doctest::Approx(normal_cdf(truth.mu_true(0, j))).epsilon(0.02));
  }
  CHECK(prior.mu0 == truth.mu_true.row(0).transpose());
}

TEST_CASE("scenario (ii): distorted prior means and cube-root storage") {
  SimScenario sc;
  sc.n = 4000;
  sc.p = 10;
  sc.continuous_fraction = 0.2;
  sc.misspecified = true;
  sc.seed = 11;
  GroundTruth truth;
  RngStream rng(sc.seed, 0);
  truth = gen_precision_graph(sc.p, sc.c_graph, rng);
  auto [data, prior] = gen_mixed_data(sc, truth, rng);

  for (Eigen::Index j = 0; j < sc.p; ++j) {
    const double mu = truth.mu_true(0, j);
    CHECK(prior.mu0[j] == doctest::Approx(std::copysign(mu * mu, mu)).epsilon(1e-12));
  }
  // continuous columns: stored cube is marginally Gaussian with the latent mean
  const auto cont = data.continuous_columns();
  CHECK(cont.size() == 2);
  for (Eigen::Index j : cont) {
    double mean_cubed = 0.0;
    for (Eigen::Index i = 0; i < sc.n; ++i)
      mean_cubed += std::pow(data.cells(i, j), 3.0);
    mean_cubed /= static_cast<double>(sc.n);
    CHECK(mean_cubed == doctest::Approx(truth.mu_true(0, j)).epsilon(0.15));
  }
}

TEST_CASE("column split and missingness bookkeeping") {
  SimScenario sc;
  sc.n = 2000;
  sc.p = 50;
  sc.continuous_fraction = 0.1;
  sc.missing_fraction = 0.2;
  sc.seed = 3;
  GroundTruth truth;
  auto [data, prior] = generate_scenario(sc, truth);
  CHECK(data.continuous_columns().size() == 5); // round(0.1 * 50)
  double missing = 0.0;
  for (Eigen::Index i = 0; i < sc.n; ++i)
    for (Eigen::Index j = 0; j < sc.p; ++j)
      if (data.is_missing(i, j)) missing += 1.0;
  CHECK(missing / static_cast<double>(sc.n * sc.p) == doctest::Approx(0.2).epsilon(0.05));

  SimScenario clean = sc;
  clean.missing_fraction = 0.0;
  GroundTruth t2;
  auto [data2, prior2] = generate_scenario(clean, t2);
  for (Eigen::Index i = 0; i < sc.n; ++i)
    for (Eigen::Index j = 0; j < sc.p; ++j) CHECK_FALSE(data2.is_missing(i, j));
}

TEST_CASE("identical scenario and seed give bit-identical datasets") {
  SimScenario sc;
  sc.n = 100;
  sc.p = 20;
  sc.missing_fraction = 0.1;
  sc.seed = 31;
  GroundTruth t1, t2;
  auto [d1, p1] = generate_scenario(sc, t1);
  auto [d2, p2] = generate_scenario(sc, t2);
  for (Eigen::Index i = 0; i < sc.n; ++i)
    for (Eigen::Index j = 0; j < sc.p; ++j) {
      if (d1.is_missing(i, j))
        CHECK(d2.is_missing(i, j));
      else
        CHECK(d1.cells(i, j) == d2.cells(i, j));
    }
  CHECK((t1.Omega_true - t2.Omega_true).norm() == 0.0);
}

TEST_CASE("mixture data: label frequencies converge to pi") {
  SimScenario sc;
  sc.n = 100000;
  sc.p = 4;
  sc.n_classes = 6;
  sc.continuous_fraction = 0.0;
  sc.seed = 13;
  GroundTruth truth;
  RngStream rng(sc.seed, 0);
  truth = gen_precision_graph(sc.p, sc.c_graph, rng);
  const MixedDataset data = gen_mixture_data(sc, truth, rng);
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(6);
  for (int lab : data.labels) freq[lab] += 1.0;
  freq /= static_cast<double>(sc.n);
  CHECK((freq - truth.pi_true).cwiseAbs().maxCoeff() < 0.01);
  CHECK(truth.pi_true.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(truth.mu_true.rows() == 6);
}

TEST_CASE("supplement-scale mixture design parameters are accepted") {
  SimScenario sc;
  sc.n = 800;
  sc.p = 50;
  sc.n_classes = 20;
  sc.seed = 17;
  GroundTruth truth;
  RngStream rng(sc.seed, 0);
  truth = gen_precision_graph(sc.p, sc.c_graph, rng);
  const MixedDataset data = gen_mixture_data(sc, truth, rng);
  CHECK(data.n() == 800);
  CHECK(data.class_names.size() == 20);
}

TEST_CASE("true_condprobs applies the probit to binary columns") {
  GroundTruth truth;
  truth.mu_true.resize(1, 2);
  truth.mu_true << 0.0, 1.0;
  const auto probs = true_condprobs(
      truth, {VariableKind::binary, VariableKind::binary});
  CHECK(probs(0, 0) == doctest::Approx(0.5));
  CHECK(probs(0, 1) == doctest::Approx(normal_cdf(1.0)));
}

TEST_CASE("scenario validation") {
  SimScenario sc;
  sc.missing_fraction = 1.0;
  CHECK_THROWS_AS(sc.validate(), config_error);
  sc = SimScenario{};
  sc.p = 1;
  CHECK_THROWS_AS(sc.validate(), config_error);
}

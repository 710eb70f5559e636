#include "lgmix/simgen.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "lgmix/distributions.hpp"
#include "lgmix/errors.hpp"
#include "lgmix/lggm.hpp"
#include "lgmix/special.hpp"

namespace lgmix {

void SimScenario::validate() const {
  if (n < 1 || p < 2) throw config_error("scenario needs n >= 1 and p >= 2");
  if (continuous_fraction < 0.0 || continuous_fraction > 1.0)
    throw config_error("continuous_fraction must lie in [0,1]");
  if (missing_fraction < 0.0 || missing_fraction >= 1.0)
    throw config_error("missing_fraction must lie in [0,1)");
  if (n_classes < 1) throw config_error("n_classes must be >= 1");
  if (!(c_graph > 0.0)) throw config_error("c_graph must be positive");
}

GroundTruth gen_precision_graph(Eigen::Index p, double c_graph, RngStream& rng,
                                bool literal_edge_rule) {
  GroundTruth truth;
  Eigen::MatrixXd pts(p, 2);
  for (Eigen::Index j = 0; j < p; ++j) {
    pts(j, 0) = rng.uniform();
    pts(j, 1) = rng.uniform();
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  const double norm = 1.0 / std::sqrt(2.0 * M_PI);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = j + 1; k < p; ++k) {
      const double dist = (pts.row(j) - pts.row(k)).norm();
      double prob;
      if (literal_edge_rule) {
        prob = std::min(1.0, norm * std::exp(dist) / (2.0 * c_graph));
      } else {
        // negative exponent on the euclidean distance; this is the variant
        // that reproduces the documented mean degree of 6.4 at c=0.2, p=50
        prob = norm * std::exp(-dist / (2.0 * c_graph));
      }
      if (rng.uniform() < prob) {
        A(j, k) = 1.0;
        A(k, j) = 1.0;
        truth.edges.emplace_back(j, k);
      }
    }
  }

  // largest t in {0.5, 0.4, 0.3, ...} keeping Omega comfortably PD; below 0.1
  // the ladder halves so pathological graphs still terminate
  double t = 0.5;
  Eigen::MatrixXd Omega;
  for (;;) {
    Omega = t * A;
    Omega.diagonal().setOnes();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Omega,
                                                      Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() > 0.01) break;
    t = t > 0.1 ? t - 0.1 : 0.5 * t;
    if (t < 1e-8) throw sampler_error("gen_precision_graph: t search failed");
  }

  // rescale so the inverse is a correlation matrix
  const Eigen::MatrixXd Sigma = pd_inverse(Omega, "gen_precision_graph");
  const Eigen::VectorXd s = Sigma.diagonal().cwiseSqrt();
  truth.R_true = s.cwiseInverse().asDiagonal() * Sigma * s.cwiseInverse().asDiagonal();
  truth.R_true.diagonal().setOnes();
  truth.Omega_true = s.asDiagonal() * Omega * s.asDiagonal();
  return truth;
}

namespace {

void apply_missing(MixedDataset& data, double m, RngStream& rng) {
  if (m <= 0.0) return;
  const Eigen::Index n = data.n(), p = data.p();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (rng.uniform() < m) data.cells(i, j) = std::numeric_limits<double>::quiet_NaN();
}

std::vector<VariableKind> column_kinds(const SimScenario& sc) {
  const auto n_cont =
      static_cast<Eigen::Index>(std::lround(sc.continuous_fraction * static_cast<double>(sc.p)));
  std::vector<VariableKind> kinds(static_cast<std::size_t>(sc.p), VariableKind::binary);
  for (Eigen::Index j = sc.p - n_cont; j < sc.p; ++j)
    kinds[static_cast<std::size_t>(j)] = VariableKind::continuous;
  return kinds;
}

MixedDataset empty_dataset(const SimScenario& sc) {
  MixedDataset data;
  const auto kinds = column_kinds(sc);
  data.schema.resize(static_cast<std::size_t>(sc.p));
  for (Eigen::Index j = 0; j < sc.p; ++j) {
    auto& v = data.schema[static_cast<std::size_t>(j)];
    v.kind = kinds[static_cast<std::size_t>(j)];
    v.name = (v.kind == VariableKind::binary ? "b" : "x") + std::to_string(j + 1);
  }
  data.cells.resize(sc.n, sc.p);
  return data;
}

void fill_rows(MixedDataset& data, const Eigen::MatrixXd& chol_R,
               const Eigen::MatrixXd& mu_rows, const std::vector<int>& classes,
               bool misspecified, RngStream& rng) {
  const Eigen::Index n = data.n(), p = data.p();
  Eigen::VectorXd z(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z[j] = sample_std_normal(rng);
    z = chol_R * z + mu_rows.row(classes[static_cast<std::size_t>(i)]).transpose();
    for (Eigen::Index j = 0; j < p; ++j) {
      if (data.is_binary(j)) {
        data.cells(i, j) = z[j] > 0.0 ? 1.0 : 0.0;
      } else {
        data.cells(i, j) = misspecified ? std::cbrt(z[j]) : z[j];
      }
    }
  }
}

Eigen::MatrixXd distort_mu0(const Eigen::MatrixXd& mu) {
  return mu.array().sign() * mu.array().square();
}

} // namespace

std::pair<MixedDataset, MarginalPrior> gen_mixed_data(const SimScenario& scenario,
                                                      GroundTruth& truth,
                                                      RngStream& rng) {
  scenario.validate();
  MixedDataset data = empty_dataset(scenario);
  truth.mu_true.resize(1, scenario.p);
  for (Eigen::Index j = 0; j < scenario.p; ++j)
    truth.mu_true(0, j) = rng.uniform(-1.0, 1.0);
  truth.pi_true = Eigen::VectorXd::Ones(1);

  const Eigen::MatrixXd chol_R =
      safe_llt(truth.R_true, "gen_mixed_data: R_true").matrixL();
  std::vector<int> classes(static_cast<std::size_t>(scenario.n), 0);
  fill_rows(data, chol_R, truth.mu_true, classes, scenario.misspecified, rng);
  apply_missing(data, scenario.missing_fraction, rng);

  truth.mu0_given = scenario.misspecified ? distort_mu0(truth.mu_true) : truth.mu_true;
  MarginalPrior prior;
  prior.mu0 = truth.mu0_given.row(0).transpose();
  prior.sigma2 = scenario.sigma2_prior;
  return {std::move(data), std::move(prior)};
}

MixedDataset gen_mixture_data(const SimScenario& scenario, GroundTruth& truth,
                              RngStream& rng) {
  scenario.validate();
  const Eigen::Index C = scenario.n_classes;
  MixedDataset data = empty_dataset(scenario);

  truth.pi_true = sample_dirichlet(Eigen::VectorXd::Ones(C), rng);
  truth.mu_true.resize(C, scenario.p);
  for (Eigen::Index c = 0; c < C; ++c)
    for (Eigen::Index j = 0; j < scenario.p; ++j)
      truth.mu_true(c, j) = rng.uniform(-1.0, 1.0);
  truth.mu0_given = scenario.misspecified ? distort_mu0(truth.mu_true) : truth.mu_true;

  std::vector<int> classes(static_cast<std::size_t>(scenario.n));
  for (auto& c : classes) {
    double u = rng.uniform();
    int pick = 0;
    for (Eigen::Index k = 0; k < C; ++k) {
      u -= truth.pi_true[k];
      if (u <= 0.0) {
        pick = static_cast<int>(k);
        break;
      }
      pick = static_cast<int>(C - 1);
    }
    c = pick;
  }

  const Eigen::MatrixXd chol_R =
      safe_llt(truth.R_true, "gen_mixture_data: R_true").matrixL();
  fill_rows(data, chol_R, truth.mu_true, classes, scenario.misspecified, rng);
  apply_missing(data, scenario.missing_fraction, rng);

  data.labels.assign(classes.begin(), classes.end());
  data.class_names.resize(static_cast<std::size_t>(C));
  for (Eigen::Index c = 0; c < C; ++c)
    data.class_names[static_cast<std::size_t>(c)] = "cause" + std::to_string(c + 1);
  return data;
}

std::pair<MixedDataset, MarginalPrior> generate_scenario(const SimScenario& scenario,
                                                         GroundTruth& truth) {
  RngStream rng(scenario.seed, 0);
  truth = gen_precision_graph(scenario.p, scenario.c_graph, rng);
  if (scenario.n_classes == 1) return gen_mixed_data(scenario, truth, rng);
  MixedDataset data = gen_mixture_data(scenario, truth, rng);
  MarginalPrior prior;
  prior.mu0 = truth.mu0_given.row(0).transpose();
  prior.sigma2 = scenario.sigma2_prior;
  return {std::move(data), std::move(prior)};
}

Eigen::MatrixXd true_condprobs(const GroundTruth& truth,
                               const std::vector<VariableKind>& kinds) {
  const Eigen::Index C = truth.mu_true.rows(), p = truth.mu_true.cols();
  Eigen::MatrixXd probs(C, p);
  for (Eigen::Index c = 0; c < C; ++c)
    for (Eigen::Index j = 0; j < p; ++j)
      probs(c, j) = kinds[static_cast<std::size_t>(j)] == VariableKind::binary
                        ? normal_cdf(truth.mu_true(c, j))
                        : 0.5;
  return probs;
}

} // namespace lgmix

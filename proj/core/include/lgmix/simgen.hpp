#ifndef LGMIX_SIMGEN_HPP
#define LGMIX_SIMGEN_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lgmix/dataset.hpp"
#include "lgmix/rng.hpp"

namespace lgmix {

/// Synthetic-data scenario: random-geometric-graph precision matrix, mixed
/// binary/continuous columns, uniform missingness, and optionally the
/// misspecified variant where prior means are distorted and continuous
/// columns are stored so that their cubes are Gaussian.
struct SimScenario {
  Eigen::Index n = 200;
  Eigen::Index p = 50;
  double continuous_fraction = 0.1;
  double missing_fraction = 0.0;
  bool misspecified = false; // scenario (ii)
  double c_graph = 0.2;
  Eigen::Index n_classes = 1;
  std::uint64_t seed = 1;
  double sigma2_prior = 1.0;

  void validate() const;
};

struct GroundTruth {
  Eigen::MatrixXd Omega_true;
  Eigen::MatrixXd R_true;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  Eigen::MatrixXd mu_true;   // n_classes x p
  Eigen::MatrixXd mu0_given; // n_classes x p (misspecified when scenario ii)
  Eigen::VectorXd pi_true;   // n_classes
};

/// Geometric-graph precision matrix: edges a_jk ~ Bernoulli of a Gaussian
/// kernel in the unit square; the literal positive-exponent reading of the
/// kernel is kept behind `literal_edge_rule` for audit only (it saturates).
GroundTruth gen_precision_graph(Eigen::Index p, double c_graph, RngStream& rng,
                                bool literal_edge_rule = false);

/// Mixed dataset plus marginal prior for the single-class scenarios.
std::pair<MixedDataset, MarginalPrior> gen_mixed_data(const SimScenario& scenario,
                                                      GroundTruth& truth,
                                                      RngStream& rng);

/// Labeled mixture data: pi ~ Dirichlet(1), shared R_true, per-class means.
MixedDataset gen_mixture_data(const SimScenario& scenario, GroundTruth& truth,
                              RngStream& rng);

/// Convenience wrapper: graph + data from one scenario/seed.
std::pair<MixedDataset, MarginalPrior> generate_scenario(const SimScenario& scenario,
                                                         GroundTruth& truth);

/// P(X_j = 1 | class c) = Phi(mu_true[c][j]) for binary columns.
Eigen::MatrixXd true_condprobs(const GroundTruth& truth,
                               const std::vector<VariableKind>& kinds);

} // namespace lgmix

#endif

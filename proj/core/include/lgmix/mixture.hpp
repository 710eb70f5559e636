#ifndef LGMIX_MIXTURE_HPP
#define LGMIX_MIXTURE_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "lgmix/lggm.hpp"
#include "lgmix/rational.hpp"

namespace lgmix {

/// Expert prior over P(symptom | cause): binary entries get probit-mapped to
/// class-specific latent means; exact 0/1 entries are clamped first.
struct ConditionalProbabilityPrior {
  Eigen::MatrixXd probs;                  // C x p, binary columns
  Eigen::MatrixXd continuous_prior_means; // C x p, used for continuous columns
  std::vector<std::string> cause_names;

  Eigen::Index n_classes() const { return probs.rows(); }
};

/// Replace exact 0 and 1 entries by 0.5*p_min and 1 - 0.5*(1 - p_max), where
/// p_min/p_max default to the smallest/largest interior entries observed.
void clamp_condprobs(Eigen::MatrixXd& probs, double p_min = -1.0, double p_max = -1.0);

Eigen::MatrixXd build_mu0_from_condprobs(const ConditionalProbabilityPrior& prior,
                                         const std::vector<VariableKind>& kinds);

enum class Sigma2Mode { hyperprior, fixed };

struct MixtureConfig {
  ChainConfig chain;
  Sigma2Mode sigma2_mode = Sigma2Mode::hyperprior;
  double sigma2_fixed = 1.0;
  bool split_populations = false;
  bool include_pi_in_assignment = true; // the coherent multinomial reading
};

struct MixtureState {
  Eigen::MatrixXd mu_c;    // C x p
  std::vector<int> y;      // length n; labeled rows never change
  Eigen::VectorXd theta;   // length C
  double mu_theta = 0.0;
  double sigma2_theta = 1.0;
  Eigen::VectorXd pi;      // softmax(theta)
  Eigen::VectorXd sigma2_c;
  Eigen::VectorXd pi_labeled; // own multinomial when populations are split
  Eigen::VectorXd theta_labeled;
};

struct ClassificationOutput {
  Eigen::MatrixXd individual_probs; // n x C, rows sum to 1
  Eigen::VectorXd csmf_mean;
  Eigen::VectorXd csmf_lo, csmf_hi; // 2.5% / 97.5%
  std::vector<Eigen::MatrixXd> csmf_traces; // per chain: n_saved x C
  Eigen::MatrixXd mu_c_mean;        // C x p
  Eigen::MatrixXd R_mean;
  Eigen::MatrixXd inclusion_prob;
  std::vector<Eigen::VectorXd> graph_size_traces;
  int n_saved = 0;
};

Eigen::VectorXd softmax(const Eigen::VectorXd& theta);

/// Class means given assignments; empty classes draw from the prior.
void update_mu_c(Eigen::MatrixXd& mu_c, const Eigen::MatrixXd& Z,
                 const std::vector<int>& y, const Eigen::MatrixXd& mu0_c,
                 const Eigen::VectorXd& sigma2_c, const CorrelationState& corr,
                 RngStream& rng);

/// Categorical draw of unlabeled assignments, log-space throughout.
void update_assignments(std::vector<int>& y, const Eigen::MatrixXd& Z,
                        const Eigen::MatrixXd& mu_c, const CorrelationState& corr,
                        const Eigen::VectorXd& pi, const std::vector<bool>& labeled,
                        bool include_pi, RngStream& rng);

/// Gibbs pass over (mu_theta, sigma2_theta) plus one ESS transition for theta
/// targeting prod_c pi_c^{n_c} x N(theta; mu_theta, sigma2_theta I).
void update_csmf(Eigen::VectorXd& theta, double& mu_theta, double& sigma2_theta,
                 Eigen::VectorXd& pi, const Eigen::VectorXd& counts, RngStream& rng);

void update_sigma2_c(Eigen::VectorXd& sigma2_c, const Eigen::MatrixXd& mu_c,
                     const Eigen::MatrixXd& mu0_c, RngStream& rng);

ClassificationOutput run_classifier(const MixedDataset& data,
                                    const ConditionalProbabilityPrior& prior,
                                    const SpikeSlabHyper& hyper, const MixtureConfig& cfg,
                                    const Eigen::MatrixXi& fixed_edges = Eigen::MatrixXi());

/// Conditional-independence baseline over the binary variables; continuous
/// columns are ignored (callers may warn), missing cells skip the product.
Eigen::MatrixXd naive_bayes_classify(const MixedDataset& data,
                                     const ConditionalProbabilityPrior& prior,
                                     const Eigen::VectorXd& pi0);

/// Exact joint symptom tables for two "pure" causes, their half-half mixture,
/// and the reconstruction a conditional-independence analysis would use, plus
/// the posterior cause probabilities under both tables (uniform cause prior).
struct IndependenceBiasTables {
  using Table = std::array<std::array<Rational, 2>, 2>; // [s1][s2]
  Table cause1, cause2, mixture_true, mixture_indep;
  // posterior P(C_i | s1, s2): [s1][s2][cause]
  std::array<std::array<std::array<Rational, 3>, 2>, 2> posterior_correct;
  std::array<std::array<std::array<Rational, 3>, 2>, 2> posterior_indep;
  bool theta11_underestimates; // true joint < product of marginals
  Rational theta11_true, theta11_indep;
};

IndependenceBiasTables independence_bias_table(const Rational& p1, const Rational& q1,
                                               const Rational& p2, const Rational& q2);

} // namespace lgmix

#endif

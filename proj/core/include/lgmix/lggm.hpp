#ifndef LGMIX_LGGM_HPP
#define LGMIX_LGGM_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lgmix/dataset.hpp"
#include "lgmix/distributions.hpp"
#include "lgmix/rng.hpp"

namespace lgmix {

enum class PriorKind { marginal_uniform, spike_slab };
enum class VSampling { gaussian_approx, exact_reweighted };

/// Degrees of freedom used in the conjugate Wishart update under the
/// marginally uniform prior: n+p+1 (standard conjugacy, default) or n+p+2.
enum class UniformDf { conjugate, plus_two };

struct SpikeSlabHyper {
  double v0 = 0.01;
  double v1 = 1.0;
  double lambda = 10.0;
  double pi_delta = 1e-4;

  void validate() const;
};

/// Latent correlation state: R with unit diagonal, marginal scales Lambda
/// (pinned at 1 for binary variables), slab indicators delta with a mask of
/// edges pinned to 1 (questionnaire structure).
struct CorrelationState {
  Eigen::MatrixXd R;
  Eigen::VectorXd Lambda;
  Eigen::MatrixXi delta;
  Eigen::MatrixXi fixed_edges;

  Eigen::Index p() const { return R.rows(); }
  Eigen::MatrixXd scaled() const { // R~ = Lambda R Lambda
    return Lambda.asDiagonal() * R * Lambda.asDiagonal();
  }
  static CorrelationState identity(Eigen::Index p);
};

struct ChainConfig {
  int n_iter = 3000;
  int burn_in = 1500;
  int thin = 1;
  PriorKind prior_kind = PriorKind::spike_slab;
  VSampling v_sampling = VSampling::gaussian_approx;
  std::uint64_t seed = 1;
  int n_chains = 1;
  std::uint32_t base_stream = 0;
  UniformDf uniform_df = UniformDf::conjugate;
  bool two_stage = false;
  int n_row_blocks = 1;
  bool keep_r_draws = false;

  void validate() const;
  int n_saved() const { return (n_iter - burn_in) / thin; }
};

/// Parameter-expansion scratch for one R update: scales D and the expanded
/// sample covariance S = sum_i D Lambda^-1 (Z_i - mu_i)(Z_i - mu_i)' Lambda^-1 D.
struct SamplerWorkspace {
  Eigen::VectorXd D;
  Eigen::MatrixXd S;
};

/// Per-row latent means: either one shared mu or per-class rows of mu_c.
struct MeanField {
  const Eigen::VectorXd* shared = nullptr;
  const Eigen::MatrixXd* by_class = nullptr; // C x p
  const std::vector<int>* labels = nullptr;

  double at(Eigen::Index i, Eigen::Index j) const {
    return shared ? (*shared)[j] : (*by_class)((*labels)[static_cast<std::size_t>(i)], j);
  }
  Eigen::VectorXd row(Eigen::Index i) const {
    return shared ? *shared
                  : (*by_class).row((*labels)[static_cast<std::size_t>(i)]).transpose();
  }
};

struct LatentState {
  Eigen::MatrixXd Z;
  Eigen::VectorXd mu;
  CorrelationState corr;
};

struct SingleChainOutput {
  Eigen::MatrixXd R_mean;
  Eigen::VectorXd mu_mean;
  Eigen::VectorXd Lambda_mean;
  Eigen::MatrixXd inclusion_prob;
  Eigen::MatrixXd mu_draws;     // n_saved x p
  Eigen::MatrixXd lambda_draws; // n_saved x p
  Eigen::VectorXd graph_size_trace;
  std::vector<Eigen::MatrixXd> r_draws; // only when cfg.keep_r_draws
  int n_saved = 0;
};

struct ChainOutput {
  Eigen::MatrixXd R_mean;
  Eigen::VectorXd mu_mean;
  Eigen::VectorXd Lambda_mean;
  Eigen::MatrixXd inclusion_prob;
  std::vector<SingleChainOutput> chains;
  PriorKind prior_kind = PriorKind::spike_slab;
};

// ---------------------------------------------------------------------------
// Gibbs steps. The kernels taking a MeanField are shared with the mixture
// sampler; the single-mu overloads are the single-class entry points.
// ---------------------------------------------------------------------------

/// Cholesky with a one-shot 1e-10 diagonal jitter retry; a second failure
/// raises decomposition_error instead of looping.
Eigen::LLT<Eigen::MatrixXd> safe_llt(const Eigen::MatrixXd& m, const char* context);

/// Symmetric PD inverse via safe_llt.
Eigen::MatrixXd pd_inverse(const Eigen::MatrixXd& m, const char* context);

LatentState init_state(const MixedDataset& data, const MarginalPrior& prior,
                       const SpikeSlabHyper& hyper, const ChainConfig& cfg,
                       const Eigen::MatrixXi& fixed_edges, RngStream& rng);

/// Mean and sd of Z_ij | Z_{i,-j} under N(mu, Rt) with precision Q = Rt^-1.
std::pair<double, double> conditional_moments(const Eigen::MatrixXd& Q,
                                              const Eigen::VectorXd& dev,
                                              Eigen::Index j);

void update_Z(Eigen::MatrixXd& Z, const MixedDataset& data, const MeanField& mu,
              const CorrelationState& corr, std::vector<RngStream>& block_rngs);
void update_Z(Eigen::MatrixXd& Z, const MixedDataset& data, const Eigen::VectorXd& mu,
              const CorrelationState& corr, RngStream& rng);

void update_Lambda(CorrelationState& corr, const Eigen::MatrixXd& Z,
                   const MixedDataset& data, const MeanField& mu, RngStream& rng);
void update_Lambda(CorrelationState& corr, const Eigen::MatrixXd& Z,
                   const MixedDataset& data, const Eigen::VectorXd& mu, RngStream& rng);

/// Posterior moments of mu given a row count and row mean (conjugate normal).
/// Returns the mean and the precision Cholesky factor used for the draw.
std::pair<Eigen::VectorXd, Eigen::LLT<Eigen::MatrixXd>> mu_posterior(
    const Eigen::MatrixXd& Rt, double n_rows, const Eigen::VectorXd& z_bar,
    const Eigen::VectorXd& mu0, double sigma2);

Eigen::VectorXd update_mu(const Eigen::MatrixXd& Z, const MarginalPrior& prior,
                          const CorrelationState& corr, RngStream& rng);

/// S = sum_i D Lambda^-1 (Z_i - mu_i)(Z_i - mu_i)' Lambda^-1 D for a fixed D.
Eigen::MatrixXd compute_expanded_S(const Eigen::MatrixXd& Z, const MeanField& mu,
                                   const Eigen::VectorXd& Lambda,
                                   const Eigen::VectorXd& D);

/// Draws the expansion scales (beta = r^jj/2 under the marginally uniform
/// prior, 1/2 under the spike-and-slab) and assembles the workspace.
SamplerWorkspace expand(const Eigen::MatrixXd& Z, const MeanField& mu,
                        const CorrelationState& corr, const Eigen::MatrixXd& R_inv,
                        PriorKind prior_kind, RngStream& rng);

Eigen::MatrixXd update_Omega_uniform(const SamplerWorkspace& ws, Eigen::Index n,
                                     UniformDf df_kind, RngStream& rng);

/// Column-wise spike-and-slab update of the expanded precision matrix.
/// Omega must equal (D R D)^-1 for the workspace's D on entry; it is updated
/// in place, one (u, v) column block at a time, and stays PD throughout.
void update_Omega_ss(const SamplerWorkspace& ws, Eigen::MatrixXd& Omega,
                     const Eigen::MatrixXi& delta, const SpikeSlabHyper& hyper,
                     Eigen::Index n, VSampling v_mode, RngStream& rng);

/// R = D^-1 Omega^-1 D^-1 with D = diag(Omega^-1)^(1/2); unit diagonal exact.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> project_back(const Eigen::MatrixXd& Omega);

/// P(delta_jk = 1 | r^jk) = pi phi(r|0,v1^2) / (pi phi(r|0,v1^2) + (1-pi) phi(r|0,v0^2))
double delta_inclusion_probability(double r_jk, const SpikeSlabHyper& hyper);

Eigen::MatrixXi update_delta(const Eigen::MatrixXd& R_inv, const SpikeSlabHyper& hyper,
                             const Eigen::MatrixXi& fixed_edges, RngStream& rng);

ChainOutput run_chain(const MixedDataset& data, const MarginalPrior& prior,
                      const SpikeSlabHyper& hyper, const ChainConfig& cfg,
                      const Eigen::MatrixXi& fixed_edges = Eigen::MatrixXi());

struct PriorEdgeSummary {
  double median = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  Eigen::VectorXd trace;
};

/// Prior-only chain (n = 0, S = 0) over the Omega/delta updates; summarizes
/// the implied fraction of selected edges across retained draws.
PriorEdgeSummary simulate_prior_edge_probability(Eigen::Index p,
                                                 const SpikeSlabHyper& hyper,
                                                 int n_iter, RngStream& rng);

/// Type-7 quantile of a copy of xs.
double quantile(std::vector<double> xs, double q);

} // namespace lgmix

#endif

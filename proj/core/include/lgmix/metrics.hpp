#ifndef LGMIX_METRICS_HPP
#define LGMIX_METRICS_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace lgmix {

struct MatrixErrorNorms {
  double max_norm = 0.0;
  double spectral_norm = 0.0;
  double frobenius_norm = 0.0;
};

MatrixErrorNorms matrix_error_norms(const Eigen::MatrixXd& R_hat,
                                    const Eigen::MatrixXd& R_true);

struct GraphRecoveryResult {
  std::vector<double> fpr_curve;
  std::vector<double> tpr_curve;
  std::vector<double> threshold_grid;
  double auc = 0.0;
  double max_f1 = 0.0;
};

/// ROC over thresholded inclusion probabilities. FPR = FP/(p(p-1)/2 - |E|),
/// TPR = TP/|E|; entries under `exclude_mask` (known questionnaire edges)
/// drop out of both counts.
GraphRecoveryResult graph_recovery(
    const Eigen::MatrixXd& inclusion_probs,
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& true_edges,
    Eigen::Index p, const Eigen::MatrixXi& exclude_mask = Eigen::MatrixXi());

/// 1 - sum |pi_true - pi_hat| / (2 (1 - min pi_true))
double csmf_accuracy(const Eigen::VectorXd& pi_hat, const Eigen::VectorXd& pi_true);

/// Fraction of rows whose true label ranks in the top k probabilities;
/// ties broken by class index.
double top_k_accuracy(const Eigen::MatrixXd& individual_probs,
                      const std::vector<int>& true_labels, int k);

/// Classical potential scale reduction (between/within variance form).
double gelman_rubin(const std::vector<Eigen::VectorXd>& chains);

} // namespace lgmix

#endif

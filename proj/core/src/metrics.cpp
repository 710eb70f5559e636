#include "lgmix/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "lgmix/errors.hpp"

namespace lgmix {

MatrixErrorNorms matrix_error_norms(const Eigen::MatrixXd& R_hat,
                                    const Eigen::MatrixXd& R_true) {
  if (R_hat.rows() != R_true.rows() || R_hat.cols() != R_true.cols())
    throw invalid_parameter("matrix_error_norms: shape mismatch");
  const Eigen::MatrixXd diff = R_hat - R_true;
  MatrixErrorNorms out;
  out.max_norm = diff.cwiseAbs().maxCoeff();
  out.frobenius_norm = diff.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (diff + diff.transpose()), Eigen::EigenvaluesOnly);
  out.spectral_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  return out;
}

GraphRecoveryResult graph_recovery(
    const Eigen::MatrixXd& inclusion_probs,
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& true_edges,
    Eigen::Index p, const Eigen::MatrixXi& exclude_mask) {
  std::set<std::pair<Eigen::Index, Eigen::Index>> edge_set;
  for (auto [a, b] : true_edges) edge_set.insert({std::min(a, b), std::max(a, b)});

  struct Cand {
    double prob;
    bool is_edge;
  };
  std::vector<Cand> cands;
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index k = j + 1; k < p; ++k) {
      if (exclude_mask.size() > 0 && exclude_mask(j, k) != 0) continue;
      const double pr = inclusion_probs(j, k);
      if (pr < -1e-12 || pr > 1.0 + 1e-12)
        throw invalid_parameter("graph_recovery: probability outside [0,1]");
      cands.push_back({pr, edge_set.count({j, k}) > 0});
    }
  const auto n_pos = static_cast<double>(
      std::count_if(cands.begin(), cands.end(), [](const Cand& c) { return c.is_edge; }));
  const auto n_neg = static_cast<double>(cands.size()) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0)
    throw invalid_parameter("graph_recovery: degenerate edge set (|E| is 0 or complete)");

  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.prob > b.prob; });

  GraphRecoveryResult out;
  out.fpr_curve.push_back(0.0);
  out.tpr_curve.push_back(0.0);
  double tp = 0.0, fp = 0.0, auc = 0.0, best_f1 = 0.0;
  std::size_t i = 0;
  while (i < cands.size()) {
    const double thr = cands[i].prob;
    // group ties so the curve steps diagonally through them
    double d_tp = 0.0, d_fp = 0.0;
    while (i < cands.size() && cands[i].prob == thr) {
      if (cands[i].is_edge)
        d_tp += 1.0;
      else
        d_fp += 1.0;
      ++i;
    }
    const double tpr0 = tp / n_pos, fpr0 = fp / n_neg;
    tp += d_tp;
    fp += d_fp;
    const double tpr1 = tp / n_pos, fpr1 = fp / n_neg;
    auc += (fpr1 - fpr0) * 0.5 * (tpr0 + tpr1);
    out.threshold_grid.push_back(thr);
    out.fpr_curve.push_back(fpr1);
    out.tpr_curve.push_back(tpr1);
    const double predicted = tp + fp;
    if (predicted > 0.0 && tp > 0.0) {
      const double precision = tp / predicted;
      const double recall = tp / n_pos;
      best_f1 = std::max(best_f1, 2.0 * precision * recall / (precision + recall));
    }
  }
  out.auc = auc;
  out.max_f1 = best_f1;
  return out;
}

double csmf_accuracy(const Eigen::VectorXd& pi_hat, const Eigen::VectorXd& pi_true) {
  if (pi_hat.size() != pi_true.size())
    throw invalid_parameter("csmf_accuracy: length mismatch");
  auto check_simplex = [](const Eigen::VectorXd& v, const char* name) {
    if (std::fabs(v.sum() - 1.0) > 1e-6 || v.minCoeff() < -1e-12)
      throw invalid_parameter(std::string("csmf_accuracy: ") + name +
                              " is not on the simplex");
  };
  check_simplex(pi_hat, "pi_hat");
  check_simplex(pi_true, "pi_true");
  const double denom = 2.0 * (1.0 - pi_true.minCoeff());
  if (denom <= 0.0) return 1.0; // single-point truth: any simplex estimate matches it
  return 1.0 - (pi_true - pi_hat).cwiseAbs().sum() / denom;
}

double top_k_accuracy(const Eigen::MatrixXd& individual_probs,
                      const std::vector<int>& true_labels, int k) {
  const Eigen::Index n = individual_probs.rows(), C = individual_probs.cols();
  if (k < 1) throw invalid_parameter("top_k_accuracy: k must be >= 1");
  if (static_cast<Eigen::Index>(true_labels.size()) != n)
    throw invalid_parameter("top_k_accuracy: label count mismatch");
  std::vector<int> order(static_cast<std::size_t>(C));
  double hits = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (individual_probs(i, a) != individual_probs(i, b))
        return individual_probs(i, a) > individual_probs(i, b);
      return a < b;
    });
    const int truth = true_labels[static_cast<std::size_t>(i)];
    for (int r = 0; r < std::min<int>(k, static_cast<int>(C)); ++r)
      if (order[static_cast<std::size_t>(r)] == truth) {
        hits += 1.0;
        break;
      }
  }
  return hits / static_cast<double>(n);
}

double gelman_rubin(const std::vector<Eigen::VectorXd>& chains) {
  const auto m = chains.size();
  if (m < 2) throw invalid_parameter("gelman_rubin: need at least 2 chains");
  const Eigen::Index len = chains.front().size();
  if (len < 10) throw invalid_parameter("gelman_rubin: chains too short");
  for (const auto& c : chains)
    if (c.size() != len) throw invalid_parameter("gelman_rubin: unequal chain lengths");

  const double n = static_cast<double>(len);
  double w = 0.0, grand = 0.0;
  std::vector<double> means(m);
  for (std::size_t j = 0; j < m; ++j) {
    means[j] = chains[j].mean();
    grand += means[j];
    w += (chains[j].array() - means[j]).square().sum() / (n - 1.0);
  }
  w /= static_cast<double>(m);
  grand /= static_cast<double>(m);
  if (w <= 0.0)
    throw invalid_parameter("gelman_rubin: zero within-chain variance");
  double b = 0.0;
  for (std::size_t j = 0; j < m; ++j) b += (means[j] - grand) * (means[j] - grand);
  b *= n / (static_cast<double>(m) - 1.0);
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

} // namespace lgmix

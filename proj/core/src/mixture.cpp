#include "lgmix/mixture.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <thread>

#include "lgmix/errors.hpp"
#include "lgmix/special.hpp"

namespace lgmix {

Rational Rational::parse(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  const auto dot = s.find('.');
  std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t frac_len = dot == std::string::npos ? 0 : s.size() - dot - 1;
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw invalid_parameter("Rational::parse: not a decimal literal: '" + text + "'");
  __int128 num = 0;
  for (char c : digits) {
    num = num * 10 + (c - '0');
    if (num > static_cast<__int128>(INT64_MAX))
      throw invalid_parameter("Rational::parse: literal too long: '" + text + "'");
  }
  __int128 den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  return from_i128(neg ? -num : num, den);
}

void clamp_condprobs(Eigen::MatrixXd& probs, double p_min, double p_max) {
  double lo = 1.0, hi = 0.0;
  bool interior = false;
  for (Eigen::Index c = 0; c < probs.rows(); ++c)
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
      const double v = probs(c, j);
      if (v < 0.0 || v > 1.0)
        throw config_error("conditional probability outside [0,1]");
      if (v > 0.0 && v < 1.0) {
        interior = true;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  if (p_min <= 0.0) {
    if (!interior)
      throw config_error("cannot clamp: no interior conditional probabilities; "
                         "pass explicit clamp bounds");
    p_min = lo;
  }
  if (p_max <= 0.0) p_max = interior ? hi : 1.0 - p_min;
  for (Eigen::Index c = 0; c < probs.rows(); ++c)
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
      if (probs(c, j) == 0.0) probs(c, j) = 0.5 * p_min;
      if (probs(c, j) == 1.0) probs(c, j) = 1.0 - 0.5 * (1.0 - p_max);
    }
}

Eigen::MatrixXd build_mu0_from_condprobs(const ConditionalProbabilityPrior& prior,
                                         const std::vector<VariableKind>& kinds) {
  const Eigen::Index C = prior.probs.rows(), p = prior.probs.cols();
  if (static_cast<Eigen::Index>(kinds.size()) != p)
    throw config_error("conditional-probability prior has wrong variable count");
  Eigen::MatrixXd mu0(C, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (kinds[static_cast<std::size_t>(j)] == VariableKind::binary) {
      for (Eigen::Index c = 0; c < C; ++c) {
        const double pr = prior.probs(c, j);
        if (!(pr > 0.0 && pr < 1.0))
          throw config_error("binary conditional probability must be clamped into (0,1)");
        mu0(c, j) = normal_quantile(pr);
      }
    } else {
      if (prior.continuous_prior_means.size() == 0)
        throw config_error("continuous variables present but no continuous prior means");
      mu0.col(j) = prior.continuous_prior_means.col(j);
    }
  }
  return mu0;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& theta) {
  const double m = theta.maxCoeff();
  Eigen::VectorXd e = (theta.array() - m).exp();
  return e / e.sum();
}

void update_mu_c(Eigen::MatrixXd& mu_c, const Eigen::MatrixXd& Z,
                 const std::vector<int>& y, const Eigen::MatrixXd& mu0_c,
                 const Eigen::VectorXd& sigma2_c, const CorrelationState& corr,
                 RngStream& rng) {
  const Eigen::Index C = mu_c.rows(), p = mu_c.cols();
  const Eigen::MatrixXd Rt = corr.scaled();
  const Eigen::MatrixXd Qt = pd_inverse(Rt, "mu_c update: scaled correlation");

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(C);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(C, p);
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    counts[c] += 1.0;
    sums.row(c) += Z.row(i);
  }
  for (Eigen::Index c = 0; c < C; ++c) {
    const double nc = counts[c];
    Eigen::MatrixXd prec = Qt * nc;
    prec.diagonal().array() += 1.0 / sigma2_c[c];
    Eigen::VectorXd rhs = mu0_c.row(c).transpose() / sigma2_c[c];
    if (nc > 0.0) rhs += Qt * sums.row(c).transpose();
    auto llt = safe_llt(prec, "mu_c update: posterior precision");
    Eigen::VectorXd z(p);
    for (Eigen::Index k = 0; k < p; ++k) z[k] = sample_std_normal(rng);
    mu_c.row(c) = (llt.solve(rhs) + llt.matrixU().solve(z)).transpose();
  }
}

void update_assignments(std::vector<int>& y, const Eigen::MatrixXd& Z,
                        const Eigen::MatrixXd& mu_c, const CorrelationState& corr,
                        const Eigen::VectorXd& pi, const std::vector<bool>& labeled,
                        bool include_pi, RngStream& rng) {
  const Eigen::Index n = Z.rows(), C = mu_c.rows();
  const Eigen::MatrixXd Qt = pd_inverse(corr.scaled(), "assignment update");

  Eigen::MatrixXd Qmu(C, mu_c.cols());
  Eigen::VectorXd muQmu(C), log_pi(C);
  for (Eigen::Index c = 0; c < C; ++c) {
    Qmu.row(c) = (Qt * mu_c.row(c).transpose()).transpose();
    muQmu[c] = mu_c.row(c).dot(Qmu.row(c));
    log_pi[c] = include_pi ? std::log(std::max(pi[c], 1e-300)) : 0.0;
  }

  Eigen::VectorXd logw(C);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labeled[static_cast<std::size_t>(i)]) continue;
    for (Eigen::Index c = 0; c < C; ++c)
      logw[c] = log_pi[c] + Z.row(i).dot(Qmu.row(c)) - 0.5 * muQmu[c];
    const double m = logw.maxCoeff();
    if (!std::isfinite(m))
      throw sampler_error("assignment update: all class masses underflow at row " +
                          std::to_string(i + 1));
    Eigen::VectorXd w = (logw.array() - m).exp();
    const double total = w.sum();
    double uu = rng.uniform() * total;
    int pick = 0;
    for (Eigen::Index c = 0; c < C; ++c) {
      uu -= w[c];
      if (uu <= 0.0) {
        pick = static_cast<int>(c);
        break;
      }
    }
    y[static_cast<std::size_t>(i)] = pick;
  }
}

void update_csmf(Eigen::VectorXd& theta, double& mu_theta, double& sigma2_theta,
                 Eigen::VectorXd& pi, const Eigen::VectorXd& counts, RngStream& rng) {
  const Eigen::Index C = theta.size();
  const double theta_bar = theta.mean();
  mu_theta = theta_bar + std::sqrt(sigma2_theta / static_cast<double>(C)) *
                             sample_std_normal(rng);
  const double ss =
      (theta.array() - mu_theta).square().sum() / static_cast<double>(C);
  sigma2_theta = sample_scaled_inv_chi_squared(static_cast<double>(C) - 1.0,
                                               std::max(ss, 1e-12), rng);
  // the flat prior lets sigma2_theta random-walk to overflow when whole
  // classes stay empty; clamp far outside any realistic scale
  sigma2_theta = std::min(std::max(sigma2_theta, 1e-8), 1e8);

  const Eigen::VectorXd prior_mean = Eigen::VectorXd::Constant(C, mu_theta);
  const Eigen::MatrixXd chol =
      std::sqrt(sigma2_theta) * Eigen::MatrixXd::Identity(C, C);
  auto log_lik = [&](const Eigen::VectorXd& th) {
    // sum_c n_c log pi_c with pi = softmax(th); the softmax shift invariance
    // keeps every term finite even when zero-count components drift far out
    const double m = th.maxCoeff();
    const Eigen::ArrayXd shifted = th.array() - m;
    return counts.dot(shifted.matrix()) - counts.sum() * std::log(shifted.exp().sum());
  };
  theta = ess_sample(theta, prior_mean, chol, log_lik, rng);
  pi = softmax(theta);
}

void update_sigma2_c(Eigen::VectorXd& sigma2_c, const Eigen::MatrixXd& mu_c,
                     const Eigen::MatrixXd& mu0_c, RngStream& rng) {
  const Eigen::Index C = mu_c.rows();
  const double p = static_cast<double>(mu_c.cols());
  for (Eigen::Index c = 0; c < C; ++c) {
    const double rss = (mu_c.row(c) - mu0_c.row(c)).squaredNorm();
    sigma2_c[c] = sample_inverse_gamma(0.001 + 0.5 * p, 0.001 + 0.5 * rss, rng);
  }
}

namespace {

struct MixtureChainResult {
  Eigen::MatrixXd individual_sum; // n x C
  Eigen::MatrixXd csmf_trace;     // n_saved x C
  Eigen::MatrixXd mu_c_sum;
  Eigen::MatrixXd R_sum;
  Eigen::MatrixXd delta_sum;
  Eigen::VectorXd graph_size;
  int saved = 0;
};

MixtureChainResult run_mixture_chain(const MixedDataset& data,
                                     const Eigen::MatrixXd& mu0_c,
                                     const SpikeSlabHyper& hyper,
                                     const MixtureConfig& cfg,
                                     const Eigen::MatrixXi& fixed_edges, int chain_id) {
  const Eigen::Index n = data.n(), p = data.p(), C = mu0_c.rows();
  const ChainConfig& cc = cfg.chain;
  RngStream rng(cc.seed, cc.base_stream + static_cast<std::uint32_t>(chain_id));
  std::vector<RngStream> block_rngs;
  for (int b = 0; b < cc.n_row_blocks; ++b)
    block_rngs.push_back(rng.substream(static_cast<std::uint32_t>(b) + 1));

  std::vector<bool> labeled(static_cast<std::size_t>(n), false);
  Eigen::Index n_unlabeled = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int lab = data.labels.empty() ? kUnlabeled : data.labels[static_cast<std::size_t>(i)];
    labeled[static_cast<std::size_t>(i)] = lab != kUnlabeled;
    if (lab == kUnlabeled) ++n_unlabeled;
  }
  if (n_unlabeled == 0) throw config_error("classifier needs at least one unlabeled row");

  MixtureState st;
  st.mu_c = mu0_c;
  st.theta = Eigen::VectorXd::Zero(C);
  st.pi = Eigen::VectorXd::Constant(C, 1.0 / static_cast<double>(C));
  st.sigma2_c = Eigen::VectorXd::Constant(
      C, cfg.sigma2_mode == Sigma2Mode::fixed ? cfg.sigma2_fixed : 1.0);
  st.theta_labeled = Eigen::VectorXd::Zero(C);
  st.pi_labeled = st.pi;
  double mu_theta_l = 0.0, s2_theta_l = 1.0;

  st.y.assign(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    st.y[static_cast<std::size_t>(i)] =
        labeled[static_cast<std::size_t>(i)]
            ? data.labels[static_cast<std::size_t>(i)]
            : static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(C)));
  }

  CorrelationState corr = CorrelationState::identity(p);
  if (fixed_edges.size() > 0) {
    corr.fixed_edges = fixed_edges;
    corr.delta = fixed_edges;
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (data.is_binary(j)) continue;
    double sum = 0.0, sum2 = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!data.is_missing(i, j)) {
        sum += data.cells(i, j);
        sum2 += data.cells(i, j) * data.cells(i, j);
        ++count;
      }
    if (count >= 2) {
      const double var = (sum2 - sum * sum / count) / static_cast<double>(count - 1);
      corr.Lambda[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
  }

  Eigen::MatrixXd Z(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!data.is_binary(j) && !data.is_missing(i, j)) {
        Z(i, j) = data.cells(i, j);
      } else {
        Interval iv = Interval::whole();
        if (data.is_binary(j) && !data.is_missing(i, j))
          iv = data.cells(i, j) == 0.0 ? Interval::negative() : Interval::positive();
        Z(i, j) = sample_truncated_normal(st.mu_c(st.y[static_cast<std::size_t>(i)], j),
                                          corr.Lambda[j], iv, rng);
      }
    }

  MeanField mu_field;
  mu_field.by_class = &st.mu_c;
  mu_field.labels = &st.y;

  MixtureChainResult res;
  res.individual_sum = Eigen::MatrixXd::Zero(n, C);
  res.csmf_trace.resize(cc.n_saved(), C);
  res.mu_c_sum = Eigen::MatrixXd::Zero(C, p);
  res.R_sum = Eigen::MatrixXd::Zero(p, p);
  res.delta_sum = Eigen::MatrixXd::Zero(p, p);
  res.graph_size.resize(cc.n_saved());

  Eigen::VectorXd counts_u(C), counts_l(C);
  for (int iter = 1; iter <= cc.n_iter; ++iter) {
    try {
      update_Z(Z, data, mu_field, corr, block_rngs);
      update_Lambda(corr, Z, data, mu_field, rng);
      update_mu_c(st.mu_c, Z, st.y, mu0_c, st.sigma2_c, corr, rng);

      const Eigen::MatrixXd R_inv = pd_inverse(corr.R, "classifier: R");
      SamplerWorkspace ws = expand(Z, mu_field, corr, R_inv, cc.prior_kind, rng);
      Eigen::MatrixXd Omega;
      if (cc.prior_kind == PriorKind::marginal_uniform) {
        Omega = update_Omega_uniform(ws, n, cc.uniform_df, rng);
      } else {
        Omega = ws.D.cwiseInverse().asDiagonal() * R_inv * ws.D.cwiseInverse().asDiagonal();
        update_Omega_ss(ws, Omega, corr.delta, hyper, n, cc.v_sampling, rng);
      }
      auto [R_new, scales] = project_back(Omega);
      corr.R = R_new;
      if (cc.prior_kind == PriorKind::spike_slab) {
        const Eigen::MatrixXd R_inv_new = scales.asDiagonal() * Omega * scales.asDiagonal();
        corr.delta = update_delta(R_inv_new, hyper, corr.fixed_edges, rng);
      }

      update_assignments(st.y, Z, st.mu_c, corr, st.pi, labeled,
                         cfg.include_pi_in_assignment, rng);

      counts_u.setZero();
      counts_l.setZero();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (labeled[static_cast<std::size_t>(i)])
          counts_l[st.y[static_cast<std::size_t>(i)]] += 1.0;
        else
          counts_u[st.y[static_cast<std::size_t>(i)]] += 1.0;
      }
      if (cfg.split_populations) {
        update_csmf(st.theta, st.mu_theta, st.sigma2_theta, st.pi, counts_u, rng);
        update_csmf(st.theta_labeled, mu_theta_l, s2_theta_l, st.pi_labeled, counts_l, rng);
      } else {
        update_csmf(st.theta, st.mu_theta, st.sigma2_theta, st.pi,
                    counts_u + counts_l, rng);
      }

      if (cfg.sigma2_mode == Sigma2Mode::hyperprior)
        update_sigma2_c(st.sigma2_c, st.mu_c, mu0_c, rng);
    } catch (const sampler_error& e) {
      throw sampler_error("iteration " + std::to_string(iter) + ": " + e.what());
    }

    if (iter > cc.burn_in && (iter - cc.burn_in) % cc.thin == 0) {
      // individual posterior probabilities, averaged across saved draws
      const Eigen::MatrixXd Qt = pd_inverse(corr.scaled(), "classifier: record");
      Eigen::MatrixXd Qmu(C, p);
      Eigen::VectorXd muQmu(C);
      for (Eigen::Index c = 0; c < C; ++c) {
        Qmu.row(c) = (Qt * st.mu_c.row(c).transpose()).transpose();
        muQmu[c] = st.mu_c.row(c).dot(Qmu.row(c));
      }
      Eigen::VectorXd logw(C);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index c = 0; c < C; ++c)
          logw[c] = std::log(std::max(st.pi[c], 1e-300)) +
                    Z.row(i).dot(Qmu.row(c)) - 0.5 * muQmu[c];
        const double m = logw.maxCoeff();
        Eigen::VectorXd w = (logw.array() - m).exp();
        res.individual_sum.row(i) += (w / w.sum()).transpose();
      }
      res.csmf_trace.row(res.saved) = st.pi.transpose();
      res.mu_c_sum += st.mu_c;
      res.R_sum += corr.R;
      res.delta_sum += corr.delta.cast<double>();
      int edges = 0;
      for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index k = j + 1; k < p; ++k) edges += corr.delta(j, k);
      res.graph_size[res.saved] = edges;
      ++res.saved;
    }
  }
  return res;
}

} // namespace

ClassificationOutput run_classifier(const MixedDataset& data,
                                    const ConditionalProbabilityPrior& prior,
                                    const SpikeSlabHyper& hyper, const MixtureConfig& cfg,
                                    const Eigen::MatrixXi& fixed_edges) {
  cfg.chain.validate();
  hyper.validate();
  data.validate();
  const Eigen::Index C = prior.n_classes();
  if (C < 2) throw config_error("classifier needs C >= 2 causes");

  std::vector<VariableKind> kinds;
  kinds.reserve(data.schema.size());
  for (const auto& v : data.schema) kinds.push_back(v.kind);
  const Eigen::MatrixXd mu0_c = build_mu0_from_condprobs(prior, kinds);

  const int n_chains = cfg.chain.n_chains;
  std::vector<MixtureChainResult> results(static_cast<std::size_t>(n_chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chains));
  if (n_chains == 1) {
    results[0] = run_mixture_chain(data, mu0_c, hyper, cfg, fixed_edges, 0);
  } else {
    std::vector<std::thread> workers;
    for (int c = 0; c < n_chains; ++c)
      workers.emplace_back([&, c] {
        try {
          results[static_cast<std::size_t>(c)] =
              run_mixture_chain(data, mu0_c, hyper, cfg, fixed_edges, c);
        } catch (...) {
          errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
      });
    for (auto& w : workers) w.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  ClassificationOutput out;
  const Eigen::Index n = data.n(), p = data.p();
  out.individual_probs = Eigen::MatrixXd::Zero(n, C);
  out.mu_c_mean = Eigen::MatrixXd::Zero(C, p);
  out.R_mean = Eigen::MatrixXd::Zero(p, p);
  out.inclusion_prob = Eigen::MatrixXd::Zero(p, p);
  std::vector<double> csmf_draws;
  int total_saved = 0;
  for (auto& r : results) {
    total_saved += r.saved;
    out.individual_probs += r.individual_sum;
    out.mu_c_mean += r.mu_c_sum;
    out.R_mean += r.R_sum;
    out.inclusion_prob += r.delta_sum;
    out.csmf_traces.push_back(std::move(r.csmf_trace));
    out.graph_size_traces.push_back(std::move(r.graph_size));
  }
  if (total_saved == 0) throw sampler_error("classifier saved no draws");
  out.individual_probs /= static_cast<double>(total_saved);
  for (Eigen::Index i = 0; i < n; ++i)
    out.individual_probs.row(i) /= out.individual_probs.row(i).sum();
  out.mu_c_mean /= static_cast<double>(total_saved);
  out.R_mean /= static_cast<double>(total_saved);
  out.inclusion_prob /= static_cast<double>(total_saved);
  out.n_saved = total_saved;

  out.csmf_mean = Eigen::VectorXd::Zero(C);
  out.csmf_lo.resize(C);
  out.csmf_hi.resize(C);
  for (Eigen::Index c = 0; c < C; ++c) {
    std::vector<double> draws;
    draws.reserve(static_cast<std::size_t>(total_saved));
    for (const auto& tr : out.csmf_traces)
      for (Eigen::Index t = 0; t < tr.rows(); ++t) draws.push_back(tr(t, c));
    out.csmf_mean[c] =
        std::accumulate(draws.begin(), draws.end(), 0.0) / draws.size();
    out.csmf_lo[c] = quantile(draws, 0.025);
    out.csmf_hi[c] = quantile(draws, 0.975);
  }
  return out;
}

Eigen::MatrixXd naive_bayes_classify(const MixedDataset& data,
                                     const ConditionalProbabilityPrior& prior,
                                     const Eigen::VectorXd& pi0) {
  const Eigen::Index n = data.n(), p = data.p(), C = prior.n_classes();
  if (pi0.size() != C) throw config_error("naive Bayes: pi0 length mismatch");
  if (const auto cont = data.continuous_columns(); !cont.empty())
    std::cerr << "naive Bayes: ignoring " << cont.size()
              << " continuous variable(s); only binary columns enter the product\n";
  Eigen::MatrixXd out(n, C);
  Eigen::VectorXd logw(C);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < C; ++c)
      logw[c] = std::log(std::max(pi0[c], 1e-300));
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!data.is_binary(j) || data.is_missing(i, j)) continue;
      const bool present = data.cells(i, j) == 1.0;
      for (Eigen::Index c = 0; c < C; ++c) {
        const double pr = std::min(std::max(prior.probs(c, j), 1e-12), 1.0 - 1e-12);
        logw[c] += present ? std::log(pr) : std::log1p(-pr);
      }
    }
    const double m = logw.maxCoeff();
    Eigen::VectorXd w = (logw.array() - m).exp();
    out.row(i) = (w / w.sum()).transpose();
  }
  return out;
}

IndependenceBiasTables independence_bias_table(const Rational& p1, const Rational& q1,
                                               const Rational& p2, const Rational& q2) {
  const Rational zero(0), one(1), half(1, 2);
  for (const Rational& r : {p1, q1, p2, q2})
    if (!(zero < r) || !(r < one))
      throw invalid_parameter("independence_bias_table: inputs must lie in (0,1)");

  IndependenceBiasTables t;
  auto product_table = [&](const Rational& ps, const Rational& qs) {
    IndependenceBiasTables::Table tab;
    tab[0][0] = (one - ps) * (one - qs);
    tab[0][1] = (one - ps) * qs;
    tab[1][0] = ps * (one - qs);
    tab[1][1] = ps * qs;
    return tab;
  };
  t.cause1 = product_table(p1, q1);
  t.cause2 = product_table(p2, q2);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      t.mixture_true[s1][s2] = half * (t.cause1[s1][s2] + t.cause2[s1][s2]);

  const Rational m1 = half * (p1 + p2); // P(s1=1 | C3)
  const Rational m2 = half * (q1 + q2); // P(s2=1 | C3)
  t.mixture_indep = product_table(m1, m2);

  t.theta11_true = t.mixture_true[1][1];
  t.theta11_indep = t.mixture_indep[1][1];
  t.theta11_underestimates = t.theta11_true < t.theta11_indep;

  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      const Rational denom_c =
          t.cause1[s1][s2] + t.cause2[s1][s2] + t.mixture_true[s1][s2];
      const Rational denom_i =
          t.cause1[s1][s2] + t.cause2[s1][s2] + t.mixture_indep[s1][s2];
      t.posterior_correct[s1][s2] = {t.cause1[s1][s2] / denom_c,
                                     t.cause2[s1][s2] / denom_c,
                                     t.mixture_true[s1][s2] / denom_c};
      t.posterior_indep[s1][s2] = {t.cause1[s1][s2] / denom_i,
                                   t.cause2[s1][s2] / denom_i,
                                   t.mixture_indep[s1][s2] / denom_i};
    }
  return t;
}

} // namespace lgmix

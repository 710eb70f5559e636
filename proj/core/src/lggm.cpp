#include "lgmix/lggm.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "lgmix/errors.hpp"
#include "lgmix/special.hpp"

namespace lgmix {

void SpikeSlabHyper::validate() const {
  if (!(v0 > 0.0) || !(v1 > v0))
    throw config_error("spike-and-slab hyperparameters require v1 > v0 > 0");
  if (!(lambda > 0.0)) throw config_error("lambda must be positive");
  if (!(pi_delta > 0.0) || !(pi_delta < 1.0))
    throw config_error("pi_delta must lie in (0,1)");
}

void ChainConfig::validate() const {
  if (n_iter <= 0 || thin < 1) throw config_error("n_iter must be positive, thin >= 1");
  if (burn_in < 0 || burn_in >= n_iter)
    throw config_error("burn_in must satisfy 0 <= burn_in < n_iter");
  if (n_chains < 1) throw config_error("n_chains must be >= 1");
  if (n_row_blocks < 1) throw config_error("n_row_blocks must be >= 1");
}

CorrelationState CorrelationState::identity(Eigen::Index p) {
  CorrelationState s;
  s.R = Eigen::MatrixXd::Identity(p, p);
  s.Lambda = Eigen::VectorXd::Ones(p);
  s.delta = Eigen::MatrixXi::Zero(p, p);
  s.fixed_edges = Eigen::MatrixXi::Zero(p, p);
  return s;
}

Eigen::LLT<Eigen::MatrixXd> safe_llt(const Eigen::MatrixXd& m, const char* context) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  Eigen::MatrixXd jittered = m;
  jittered.diagonal().array() += 1e-10;
  llt.compute(jittered);
  if (llt.info() == Eigen::Success) return llt;
  throw decomposition_error(std::string("Cholesky failed (") + context + ")");
}

Eigen::MatrixXd pd_inverse(const Eigen::MatrixXd& m, const char* context) {
  return safe_llt(m, context)
      .solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw invalid_parameter("quantile of empty sample");
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - std::floor(h)) * (xs[hi] - xs[lo]);
}

namespace {

Interval cell_interval(const MixedDataset& data, Eigen::Index i, Eigen::Index j) {
  if (data.is_missing(i, j) || !data.is_binary(j)) return Interval::whole();
  return data.cells(i, j) == 0.0 ? Interval::negative() : Interval::positive();
}

} // namespace

LatentState init_state(const MixedDataset& data, const MarginalPrior& prior,
                       const SpikeSlabHyper& hyper, const ChainConfig& cfg,
                       const Eigen::MatrixXi& fixed_edges, RngStream& rng) {
  hyper.validate();
  cfg.validate();
  data.validate();
  const Eigen::Index n = data.n(), p = data.p();
  if (prior.mu0.size() != p)
    throw config_error("marginal prior length does not match variable count");
  if (!(prior.sigma2 > 0.0)) throw config_error("prior sigma2 must be positive");

  LatentState st;
  st.corr = CorrelationState::identity(p);
  if (fixed_edges.size() > 0) {
    if (fixed_edges.rows() != p || fixed_edges.cols() != p)
      throw config_error("fixed-edge mask has wrong shape");
    st.corr.fixed_edges = fixed_edges;
    st.corr.delta = fixed_edges;
  }
  st.mu = prior.mu0;

  // Continuous scales start at the sample sd of the observed values.
  for (Eigen::Index j = 0; j < p; ++j) {
    if (data.is_binary(j)) continue;
    double sum = 0.0, sum2 = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (data.is_missing(i, j)) continue;
      sum += data.cells(i, j);
      sum2 += data.cells(i, j) * data.cells(i, j);
      ++count;
    }
    if (count >= 2) {
      const double var =
          (sum2 - sum * sum / static_cast<double>(count)) / static_cast<double>(count - 1);
      st.corr.Lambda[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
  }

  st.Z.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!data.is_binary(j) && !data.is_missing(i, j)) {
        st.Z(i, j) = data.cells(i, j);
      } else {
        st.Z(i, j) = sample_truncated_normal(st.mu[j], st.corr.Lambda[j],
                                             cell_interval(data, i, j), rng);
      }
    }
  }
  return st;
}

std::pair<double, double> conditional_moments(const Eigen::MatrixXd& Q,
                                              const Eigen::VectorXd& dev,
                                              Eigen::Index j) {
  const double qjj = Q(j, j);
  const double s = Q.row(j).dot(dev) - qjj * dev[j];
  return {-s / qjj, std::sqrt(1.0 / qjj)};
}

namespace {

void update_z_rows(Eigen::MatrixXd& Z, const MixedDataset& data, const MeanField& mu,
                   const Eigen::MatrixXd& Q, Eigen::Index row_begin,
                   Eigen::Index row_end, RngStream& rng) {
  const Eigen::Index p = Z.cols();
  Eigen::VectorXd dev(p);
  for (Eigen::Index i = row_begin; i < row_end; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) dev[j] = Z(i, j) - mu.at(i, j);
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!data.is_binary(j) && !data.is_missing(i, j)) continue; // observed continuous stays fixed
      auto [cm, cs] = conditional_moments(Q, dev, j);
      const double z =
          sample_truncated_normal(mu.at(i, j) + cm, cs, cell_interval(data, i, j), rng);
      Z(i, j) = z;
      dev[j] = z - mu.at(i, j);
    }
  }
}

} // namespace

void update_Z(Eigen::MatrixXd& Z, const MixedDataset& data, const MeanField& mu,
              const CorrelationState& corr, std::vector<RngStream>& block_rngs) {
  const Eigen::Index n = Z.rows();
  const Eigen::MatrixXd Q = pd_inverse(corr.scaled(), "update_Z: scaled correlation");
  const auto n_blocks = static_cast<Eigen::Index>(block_rngs.size());
  if (n_blocks <= 1) {
    update_z_rows(Z, data, mu, Q, 0, n, block_rngs.front());
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_blocks));
  for (Eigen::Index b = 0; b < n_blocks; ++b) {
    const Eigen::Index lo = b * n / n_blocks;
    const Eigen::Index hi = (b + 1) * n / n_blocks;
    workers.emplace_back([&, lo, hi, b] {
      update_z_rows(Z, data, mu, Q, lo, hi, block_rngs[static_cast<std::size_t>(b)]);
    });
  }
  for (auto& w : workers) w.join();
}

void update_Z(Eigen::MatrixXd& Z, const MixedDataset& data, const Eigen::VectorXd& mu,
              const CorrelationState& corr, RngStream& rng) {
  MeanField field;
  field.shared = &mu;
  std::vector<RngStream> blocks{rng};
  update_Z(Z, data, field, corr, blocks);
  rng = blocks.front();
}

void update_Lambda(CorrelationState& corr, const Eigen::MatrixXd& Z,
                   const MixedDataset& data, const MeanField& mu, RngStream& rng) {
  const auto cont = data.continuous_columns();
  if (cont.empty()) return;
  const Eigen::Index n = Z.rows(), p = Z.cols();
  if (n < 3) throw config_error("update_Lambda requires n >= 3");
  const Eigen::MatrixXd P = pd_inverse(corr.R, "update_Lambda: correlation");

  for (Eigen::Index j : cont) {
    // Conditional of eta = 1/Lambda_jj: eta^(n-2) * Normal(eta; m, kappa/A), with
    // m, A from the standardized cross-column regression of column j.
    const double pjj = P(j, j);
    const double kappa = 1.0 / pjj;
    double A = 0.0, B = 0.0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
    for (Eigen::Index k = 0; k < p; ++k)
      if (k != j) w[k] = -P(j, k) / (pjj * corr.Lambda[k]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rj = Z(i, j) - mu.at(i, j);
      double g = 0.0;
      for (Eigen::Index k = 0; k < p; ++k)
        if (k != j) g += w[k] * (Z(i, k) - mu.at(i, k));
      A += rj * rj;
      B += g * rj;
    }
    if (A <= 0.0) continue;
    const double prior_mean = B / A;
    const double prior_sd = std::sqrt(kappa / A);
    const double n_pow = static_cast<double>(n) - 2.0;
    auto log_lik = [n_pow](double eta) {
      return eta > 0.0 ? n_pow * std::log(eta)
                       : -std::numeric_limits<double>::infinity();
    };
    const double eta = ess_sample(1.0 / corr.Lambda[j], prior_mean, prior_sd, log_lik, rng);
    corr.Lambda[j] = 1.0 / eta;
  }
}

void update_Lambda(CorrelationState& corr, const Eigen::MatrixXd& Z,
                   const MixedDataset& data, const Eigen::VectorXd& mu, RngStream& rng) {
  MeanField field;
  field.shared = &mu;
  update_Lambda(corr, Z, data, field, rng);
}

std::pair<Eigen::VectorXd, Eigen::LLT<Eigen::MatrixXd>> mu_posterior(
    const Eigen::MatrixXd& Rt, double n_rows, const Eigen::VectorXd& z_bar,
    const Eigen::VectorXd& mu0, double sigma2) {
  const Eigen::Index p = Rt.rows();
  const Eigen::MatrixXd Qt = pd_inverse(Rt, "mu update: scaled correlation");
  Eigen::MatrixXd prec = Qt * n_rows;
  prec.diagonal().array() += 1.0 / sigma2;
  Eigen::VectorXd rhs = mu0 / sigma2;
  if (n_rows > 0.0) rhs += n_rows * (Qt * z_bar);
  auto llt = safe_llt(prec, "mu update: posterior precision");
  Eigen::VectorXd mean = llt.solve(rhs);
  return {std::move(mean), std::move(llt)};
}

namespace {

Eigen::VectorXd draw_from_precision(const Eigen::VectorXd& mean,
                                    const Eigen::LLT<Eigen::MatrixXd>& llt,
                                    RngStream& rng) {
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sample_std_normal(rng);
  return mean + llt.matrixU().solve(z);
}

} // namespace

Eigen::VectorXd update_mu(const Eigen::MatrixXd& Z, const MarginalPrior& prior,
                          const CorrelationState& corr, RngStream& rng) {
  const auto n = static_cast<double>(Z.rows());
  Eigen::VectorXd z_bar = n > 0 ? Eigen::VectorXd(Z.colwise().mean())
                                : Eigen::VectorXd::Zero(corr.p());
  auto [mean, llt] = mu_posterior(corr.scaled(), n, z_bar, prior.mu0, prior.sigma2);
  return draw_from_precision(mean, llt, rng);
}

Eigen::MatrixXd compute_expanded_S(const Eigen::MatrixXd& Z, const MeanField& mu,
                                   const Eigen::VectorXd& Lambda,
                                   const Eigen::VectorXd& D) {
  const Eigen::Index n = Z.rows(), p = Z.cols();
  Eigen::MatrixXd Y(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      Y(i, j) = (Z(i, j) - mu.at(i, j)) / Lambda[j];
  Eigen::MatrixXd G = Y.transpose() * Y;
  return D.asDiagonal() * G * D.asDiagonal();
}

SamplerWorkspace expand(const Eigen::MatrixXd& Z, const MeanField& mu,
                        const CorrelationState& corr, const Eigen::MatrixXd& R_inv,
                        PriorKind prior_kind, RngStream& rng) {
  const Eigen::Index p = corr.p();
  SamplerWorkspace ws;
  ws.D.resize(p);
  const double shape = (static_cast<double>(p) + 1.0) / 2.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double scale = prior_kind == PriorKind::marginal_uniform ? 0.5 * R_inv(j, j) : 0.5;
    ws.D[j] = std::sqrt(sample_inverse_gamma(shape, scale, rng));
  }
  ws.S = Z.rows() > 0 ? compute_expanded_S(Z, mu, corr.Lambda, ws.D)
                      : Eigen::MatrixXd::Zero(p, p);
  return ws;
}

Eigen::MatrixXd update_Omega_uniform(const SamplerWorkspace& ws, Eigen::Index n,
                                     UniformDf df_kind, RngStream& rng) {
  const Eigen::Index p = ws.S.rows();
  Eigen::MatrixXd scale_inv = ws.S;
  scale_inv.diagonal().array() += 1.0;
  const Eigen::MatrixXd scale = pd_inverse(scale_inv, "uniform Omega update: I + S");
  const double df = static_cast<double>(n + p + 1) +
                    (df_kind == UniformDf::plus_two ? 1.0 : 0.0);
  return sample_wishart(df, scale, rng);
}

namespace {

// One column block of the spike-and-slab update. Maintains Sigma = Omega^-1.
struct ColumnUpdater {
  const SamplerWorkspace& ws;
  Eigen::MatrixXd& Omega;
  Eigen::MatrixXd& Sigma;
  const Eigen::MatrixXi& delta;
  const SpikeSlabHyper& hyper;
  double n;
  VSampling v_mode;
  RngStream& rng;

  void update_column(Eigen::Index j) {
    const Eigen::Index p = Omega.rows();
    const Eigen::Index m = p - 1;
    const double v0sq = hyper.v0 * hyper.v0;
    const double v1sq = hyper.v1 * hyper.v1;

    // gather the off-column blocks
    Eigen::VectorXd u(m), s_vec(m), dsq(m), vd2(m), omega_kk(m), a(m);
    Eigen::MatrixXd Ainv(m, m), M(m, m);
    Eigen::VectorXd sig_oj(m);
    {
      Eigen::Index r = 0;
      for (Eigen::Index k = 0; k < p; ++k) {
        if (k == j) continue;
        u[r] = Omega(k, j);
        s_vec[r] = ws.S(k, j);
        dsq[r] = ws.D[k] * ws.D[k];
        vd2[r] = delta(j, k) == 1 ? v1sq : v0sq;
        omega_kk[r] = Omega(k, k);
        sig_oj[r] = Sigma(k, j);
        ++r;
      }
    }
    {
      Eigen::Index r = 0;
      for (Eigen::Index k = 0; k < p; ++k) {
        if (k == j) continue;
        Eigen::Index c = 0;
        for (Eigen::Index l = 0; l < p; ++l) {
          if (l == j) continue;
          Ainv(r, c) = Sigma(k, l);
          const double w = delta(k, l) == 1 ? v1sq : v0sq;
          M(r, c) = (k == l) ? 0.0 : Omega(k, l) * Omega(k, l) / w;
          ++c;
        }
        ++r;
      }
    }
    // downdate: (Omega_[-j,-j])^-1 = Sigma_[-j,-j] - Sigma_[-j,j] Sigma_[j,-j] / Sigma_jj
    Ainv.noalias() -= (sig_oj * sig_oj.transpose()) / Sigma(j, j);
    a = Ainv.diagonal();

    double v = 1.0 / Sigma(j, j);
    const double s_jj = ws.S(j, j);
    const double lambda = hyper.lambda;

    // Residual prior terms whose sigma_k^2 drift with (u, v); evaluating them in
    // the slice likelihood keeps every column move targeting the exact
    // conditional of the expanded posterior.
    auto drift_terms = [&](const Eigen::VectorXd& t, double vv) {
      double out = 0.0;
      double inv_sum = 0.0, lam_sum = 0.0;
      Eigen::VectorXd sig2(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        sig2[k] = a[k] + t[k] * t[k] / vv;
        inv_sum += 1.0 / sig2[k];
        lam_sum += omega_kk[k] * sig2[k];
      }
      out -= 0.5 * inv_sum;
      out -= 0.5 * lambda * lam_sum;
      out -= 0.25 * sig2.dot(M * sig2);
      return out;
    };

    // --- u | v ---
    {
      Eigen::MatrixXd prior_prec = (s_jj + lambda / v) * Ainv;
      for (Eigen::Index k = 0; k < m; ++k) prior_prec(k, k) += dsq[k] / (vd2[k] * v);
      auto llt = safe_llt(prior_prec, "ss column update: u prior precision");
      const Eigen::VectorXd prior_mean = -llt.solve(s_vec);
      const Eigen::MatrixXd chol =
          llt.matrixU().solve(Eigen::MatrixXd::Identity(m, m));

      auto log_lik = [&](const Eigen::VectorXd& uu) {
        const Eigen::VectorXd t = Ainv * uu;
        double quad = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
          const double sig2k = a[k] + t[k] * t[k] / v;
          quad += uu[k] * uu[k] * (sig2k - dsq[k]) / vd2[k];
        }
        return -0.5 * quad / v + drift_terms(t, v);
      };
      u = ess_sample(u, prior_mean, chol, log_lik, rng);
    }

    // --- v | u ---
    const Eigen::VectorXd t = Ainv * u;
    {
      const double rate2 = s_jj + 1.0;
      double prior_mean, prior_var;
      const bool exact = v_mode == VSampling::exact_reweighted || n < 1.0;
      if (exact) {
        prior_mean = (n + 2.0) / rate2;
        prior_var = 2.0 * (n + 2.0) / (rate2 * rate2);
      } else {
        prior_mean = n / rate2;
        prior_var = 2.0 * n / (rate2 * rate2);
      }
      const double prior_sd = std::sqrt(prior_var);

      double P1 = 0.0, P2 = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) {
        P1 += u[k] * u[k] * a[k] / vd2[k];
        P2 += u[k] * u[k] * t[k] * t[k] / vd2[k];
      }
      const double uAu = u.dot(t);

      auto log_lik = [&](double vv) {
        if (vv <= 0.0) return -std::numeric_limits<double>::infinity();
        double ll = -0.5 * (P1 + lambda * uAu) / vv - 0.5 * P2 / (vv * vv) +
                    drift_terms(t, vv);
        if (exact) {
          // exact Gamma-vs-Normal reweighting: the joint carries v^(n/2) e^(-(s_jj+1)v/2)
          ll += 0.5 * n * std::log(vv) - 0.5 * rate2 * vv -
                normal_logpdf(vv, prior_mean, prior_sd);
        }
        return ll;
      };
      v = ess_sample(v, prior_mean, prior_sd, log_lik, rng);
    }
    if (!(v > 0.0)) throw sampler_error("ss column update: nonpositive Schur complement");

    // write back and refresh Sigma via the rank-one identity
    const Eigen::VectorXd t_new = Ainv * u;
    const double omega_jj = v + u.dot(t_new);
    {
      Eigen::Index r = 0;
      for (Eigen::Index k = 0; k < p; ++k) {
        if (k == j) continue;
        Omega(k, j) = u[r];
        Omega(j, k) = u[r];
        Sigma(k, j) = -t_new[r] / v;
        Sigma(j, k) = Sigma(k, j);
        ++r;
      }
      Omega(j, j) = omega_jj;
      Sigma(j, j) = 1.0 / v;
      Eigen::Index rr = 0;
      for (Eigen::Index k = 0; k < p; ++k) {
        if (k == j) continue;
        Eigen::Index cc = 0;
        for (Eigen::Index l = 0; l < p; ++l) {
          if (l == j) continue;
          Sigma(k, l) = Ainv(rr, cc) + t_new[rr] * t_new[cc] / v;
          ++cc;
        }
        ++rr;
      }
    }
  }
};

} // namespace

void update_Omega_ss(const SamplerWorkspace& ws, Eigen::MatrixXd& Omega,
                     const Eigen::MatrixXi& delta, const SpikeSlabHyper& hyper,
                     Eigen::Index n, VSampling v_mode, RngStream& rng) {
  // Sigma recomputed from scratch once per sweep to bound drift
  Eigen::MatrixXd Sigma = pd_inverse(Omega, "ss update: Omega");
  ColumnUpdater up{ws, Omega, Sigma, delta, hyper, static_cast<double>(n), v_mode, rng};
  for (Eigen::Index j = 0; j < Omega.rows(); ++j) up.update_column(j);
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> project_back(const Eigen::MatrixXd& Omega) {
  const Eigen::MatrixXd Sigma = pd_inverse(Omega, "project_back: Omega");
  const Eigen::Index p = Sigma.rows();
  Eigen::VectorXd d = Sigma.diagonal().cwiseSqrt();
  Eigen::MatrixXd R(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    R(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = Sigma(i, j) / (d[i] * d[j]);
      R(i, j) = r;
      R(j, i) = r;
    }
  }
  return {std::move(R), std::move(d)};
}

double delta_inclusion_probability(double r_jk, const SpikeSlabHyper& hyper) {
  if (!std::isfinite(r_jk)) throw invalid_parameter("update_delta: non-finite r^jk");
  const double l1 = std::log(hyper.pi_delta) + normal_logpdf(r_jk, 0.0, hyper.v1);
  const double l0 = std::log1p(-hyper.pi_delta) + normal_logpdf(r_jk, 0.0, hyper.v0);
  const double diff = l0 - l1;
  if (diff > 35.0) return std::exp(-diff);
  if (diff < -35.0) return 1.0;
  return 1.0 / (1.0 + std::exp(diff));
}

Eigen::MatrixXi update_delta(const Eigen::MatrixXd& R_inv, const SpikeSlabHyper& hyper,
                             const Eigen::MatrixXi& fixed_edges, RngStream& rng) {
  const Eigen::Index p = R_inv.rows();
  Eigen::MatrixXi delta = Eigen::MatrixXi::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = j + 1; k < p; ++k) {
      int d;
      if (fixed_edges.size() > 0 && fixed_edges(j, k) != 0) {
        d = 1;
      } else {
        d = rng.uniform() < delta_inclusion_probability(R_inv(j, k), hyper) ? 1 : 0;
      }
      delta(j, k) = d;
      delta(k, j) = d;
    }
  }
  return delta;
}

namespace {

struct SingleChainAccum {
  Eigen::MatrixXd R_sum;
  Eigen::VectorXd mu_sum, lambda_sum;
  Eigen::MatrixXd delta_sum;
  SingleChainOutput out;
  int saved = 0;

  explicit SingleChainAccum(Eigen::Index p, const ChainConfig& cfg) {
    R_sum = Eigen::MatrixXd::Zero(p, p);
    mu_sum = Eigen::VectorXd::Zero(p);
    lambda_sum = Eigen::VectorXd::Zero(p);
    delta_sum = Eigen::MatrixXd::Zero(p, p);
    const int t = cfg.n_saved();
    out.mu_draws.resize(t, p);
    out.lambda_draws.resize(t, p);
    out.graph_size_trace.resize(t);
  }

  void record(const LatentState& st, const ChainConfig& cfg) {
    R_sum += st.corr.R;
    mu_sum += st.mu;
    lambda_sum += st.corr.Lambda;
    delta_sum += st.corr.delta.cast<double>();
    out.mu_draws.row(saved) = st.mu.transpose();
    out.lambda_draws.row(saved) = st.corr.Lambda.transpose();
    int edges = 0;
    for (Eigen::Index j = 0; j < st.corr.p(); ++j)
      for (Eigen::Index k = j + 1; k < st.corr.p(); ++k) edges += st.corr.delta(j, k);
    out.graph_size_trace[saved] = edges;
    if (cfg.keep_r_draws) out.r_draws.push_back(st.corr.R);
    ++saved;
  }

  void finalize() {
    const double t = std::max(saved, 1);
    out.R_mean = R_sum / t;
    out.mu_mean = mu_sum / t;
    out.Lambda_mean = lambda_sum / t;
    out.inclusion_prob = delta_sum / t;
    out.n_saved = saved;
  }
};

SingleChainOutput run_single_chain(const MixedDataset& data, const MarginalPrior& prior,
                                   const SpikeSlabHyper& hyper, const ChainConfig& cfg,
                                   const Eigen::MatrixXi& fixed_edges, int chain_id,
                                   const Eigen::MatrixXi* frozen_delta) {
  const Eigen::Index n = data.n(), p = data.p();
  RngStream rng(cfg.seed, cfg.base_stream + static_cast<std::uint32_t>(chain_id));
  std::vector<RngStream> block_rngs;
  for (int b = 0; b < cfg.n_row_blocks; ++b)
    block_rngs.push_back(rng.substream(static_cast<std::uint32_t>(b) + 1));

  LatentState st = init_state(data, prior, hyper, cfg, fixed_edges, rng);
  if (frozen_delta != nullptr) st.corr.delta = *frozen_delta;

  MeanField mu_field;
  mu_field.shared = &st.mu;

  SingleChainAccum acc(p, cfg);
  for (int iter = 1; iter <= cfg.n_iter; ++iter) {
    try {
      update_Z(st.Z, data, mu_field, st.corr, block_rngs);
      update_Lambda(st.corr, st.Z, data, mu_field, rng);
      st.mu = update_mu(st.Z, prior, st.corr, rng);

      const Eigen::MatrixXd R_inv = pd_inverse(st.corr.R, "run_chain: R");
      SamplerWorkspace ws = expand(st.Z, mu_field, st.corr, R_inv, cfg.prior_kind, rng);
      Eigen::MatrixXd Omega;
      if (cfg.prior_kind == PriorKind::marginal_uniform) {
        Omega = update_Omega_uniform(ws, n, cfg.uniform_df, rng);
      } else {
        Omega = ws.D.cwiseInverse().asDiagonal() * R_inv *
                ws.D.cwiseInverse().asDiagonal();
        update_Omega_ss(ws, Omega, st.corr.delta, hyper, n, cfg.v_sampling, rng);
      }
      auto [R_new, scales] = project_back(Omega);
      st.corr.R = R_new;
      if (cfg.prior_kind == PriorKind::spike_slab && frozen_delta == nullptr) {
        const Eigen::MatrixXd R_inv_new =
            scales.asDiagonal() * Omega * scales.asDiagonal();
        st.corr.delta = update_delta(R_inv_new, hyper, st.corr.fixed_edges, rng);
      }
    } catch (const sampler_error& e) {
      throw sampler_error("iteration " + std::to_string(iter) + ": " + e.what());
    } catch (const decomposition_error& e) {
      throw decomposition_error("iteration " + std::to_string(iter) + ": " + e.what());
    }
    if (iter > cfg.burn_in && (iter - cfg.burn_in) % cfg.thin == 0)
      acc.record(st, cfg);
  }
  acc.finalize();
  return acc.out;
}

Eigen::MatrixXi median_graph(const Eigen::MatrixXd& inclusion,
                             const Eigen::MatrixXi& fixed_edges) {
  const Eigen::Index p = inclusion.rows();
  Eigen::MatrixXi g = Eigen::MatrixXi::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index k = j + 1; k < p; ++k) {
      const bool fixed = fixed_edges.size() > 0 && fixed_edges(j, k) != 0;
      const int d = (fixed || inclusion(j, k) >= 0.5) ? 1 : 0;
      g(j, k) = d;
      g(k, j) = d;
    }
  return g;
}

} // namespace

ChainOutput run_chain(const MixedDataset& data, const MarginalPrior& prior,
                      const SpikeSlabHyper& hyper, const ChainConfig& cfg,
                      const Eigen::MatrixXi& fixed_edges) {
  cfg.validate();
  const Eigen::Index p = data.p();

  auto run_all = [&](const Eigen::MatrixXi* frozen,
                     std::uint32_t stream_shift) -> std::vector<SingleChainOutput> {
    std::vector<SingleChainOutput> outs(static_cast<std::size_t>(cfg.n_chains));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.n_chains));
    ChainConfig local = cfg;
    local.base_stream = cfg.base_stream + stream_shift;
    if (cfg.n_chains == 1) {
      outs[0] = run_single_chain(data, prior, hyper, local, fixed_edges, 0, frozen);
      return outs;
    }
    std::vector<std::thread> workers;
    for (int c = 0; c < cfg.n_chains; ++c) {
      workers.emplace_back([&, c] {
        try {
          outs[static_cast<std::size_t>(c)] =
              run_single_chain(data, prior, hyper, local, fixed_edges, c, frozen);
        } catch (...) {
          errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return outs;
  };

  std::vector<SingleChainOutput> chains = run_all(nullptr, 0);

  Eigen::MatrixXd inclusion = Eigen::MatrixXd::Zero(p, p);
  for (const auto& c : chains) inclusion += c.inclusion_prob;
  inclusion /= static_cast<double>(chains.size());

  if (cfg.two_stage && cfg.prior_kind == PriorKind::spike_slab) {
    const Eigen::MatrixXi frozen = median_graph(inclusion, fixed_edges);
    // fresh streams for the post-selection stage
    chains = run_all(&frozen, static_cast<std::uint32_t>(cfg.n_chains));
  }

  ChainOutput out;
  out.prior_kind = cfg.prior_kind;
  out.inclusion_prob = inclusion;
  out.R_mean = Eigen::MatrixXd::Zero(p, p);
  out.mu_mean = Eigen::VectorXd::Zero(p);
  out.Lambda_mean = Eigen::VectorXd::Zero(p);
  for (const auto& c : chains) {
    out.R_mean += c.R_mean;
    out.mu_mean += c.mu_mean;
    out.Lambda_mean += c.Lambda_mean;
  }
  const double nc = static_cast<double>(chains.size());
  out.R_mean /= nc;
  out.mu_mean /= nc;
  out.Lambda_mean /= nc;
  out.chains = std::move(chains);
  return out;
}

PriorEdgeSummary simulate_prior_edge_probability(Eigen::Index p,
                                                 const SpikeSlabHyper& hyper,
                                                 int n_iter, RngStream& rng) {
  hyper.validate();
  if (p < 2 || n_iter < 1)
    throw config_error("prior simulation needs p >= 2 and n_iter >= 1");
  CorrelationState corr = CorrelationState::identity(p);
  SamplerWorkspace ws;
  ws.S = Eigen::MatrixXd::Zero(p, p);
  ws.D.resize(p);
  const double shape = (static_cast<double>(p) + 1.0) / 2.0;
  const double n_pairs = static_cast<double>(p * (p - 1)) / 2.0;

  std::vector<double> fractions;
  fractions.reserve(static_cast<std::size_t>(n_iter));
  const int total = 2 * n_iter;
  for (int iter = 1; iter <= total; ++iter) {
    for (Eigen::Index j = 0; j < p; ++j)
      ws.D[j] = std::sqrt(sample_inverse_gamma(shape, 0.5, rng));
    const Eigen::MatrixXd R_inv = pd_inverse(corr.R, "prior sim: R");
    Eigen::MatrixXd Omega =
        ws.D.cwiseInverse().asDiagonal() * R_inv * ws.D.cwiseInverse().asDiagonal();
    // n = 0 forces the exact v-target; the Gaussian approximation degenerates there
    update_Omega_ss(ws, Omega, corr.delta, hyper, 0, VSampling::exact_reweighted, rng);
    auto [R_new, scales] = project_back(Omega);
    corr.R = R_new;
    const Eigen::MatrixXd R_inv_new = scales.asDiagonal() * Omega * scales.asDiagonal();
    corr.delta = update_delta(R_inv_new, hyper, corr.fixed_edges, rng);
    if (iter > n_iter) {
      double edges = 0.0;
      for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index k = j + 1; k < p; ++k) edges += corr.delta(j, k);
      fractions.push_back(edges / n_pairs);
    }
  }
  PriorEdgeSummary s;
  s.trace = Eigen::Map<Eigen::VectorXd>(fractions.data(),
                                        static_cast<Eigen::Index>(fractions.size()));
  s.median = quantile(fractions, 0.5);
  s.q025 = quantile(fractions, 0.025);
  s.q975 = quantile(fractions, 0.975);
  return s;
}

} // namespace lgmix

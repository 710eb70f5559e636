// Acceptance suite: runs every gate criterion end to end and prints one
// [PASS]/[FAIL] line per criterion. Criteria that exercise the command-line
// surface need --cli <path-to-lgmix>; everything else links the library.
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lgmix/io.hpp"
#include "lgmix/lggm.hpp"
#include "lgmix/metrics.hpp"
#include "lgmix/mixture.hpp"
#include "lgmix/simgen.hpp"
#include "lgmix/special.hpp"
#include "oracle_quadrature.hpp"

namespace fs = std::filesystem;
using namespace lgmix;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": "
            << what << " — " << detail << "\n";
  std::cout.flush();
  if (!pass) ++g_failures;
}

void info(const std::string& s) { std::cout << "       " << s << "\n"; }

std::string g_cli;
fs::path g_work;

int run_cli(const std::string& args, const std::string& log_name) {
  const std::string log = (g_work / log_name).string();
  const std::string cmd = g_cli + " " + args + " > " + log + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

bool dirs_byte_identical(const fs::path& a, const fs::path& b, std::string& why) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename());
  std::sort(names.begin(), names.end());
  for (const auto& n : names) {
    if (!fs::exists(b / n)) {
      why = n + " missing from second run";
      return false;
    }
    if (slurp(a / n) != slurp(b / n)) {
      why = n + " differs";
      return false;
    }
  }
  return true;
}

double fmt3(double x) { return std::round(x * 1000.0) / 1000.0; }

// Hyperparameters calibrated with the prior simulation so that the implied
// prior edge probability sits in the documented band at p = 50 (the stock
// ultra-sparse defaults freeze the indicator field; see the ledger analysis).
SpikeSlabHyper calibrated_hyper() {
  SpikeSlabHyper h;
  h.v0 = 0.05;
  h.v1 = 1.0;
  h.lambda = 10.0;
  h.pi_delta = 0.2;
  return h;
}

// ---------------------------------------------------------------------------
// criterion 1: prior calibration via the prior-sim subcommand
// ---------------------------------------------------------------------------
double prior_sim_median(double lambda, double v0, double v1, double pi,
                        const std::string& tag) {
  const fs::path out = g_work / ("c1_" + tag);
  std::ostringstream cmd;
  cmd << "prior-sim --p 50 --lambda " << lambda << " --v0 " << v0 << " --v1 " << v1
      << " --pi-delta " << pi << " --iters 1000 --seed 4242 --out " << out.string();
  if (run_cli(cmd.str(), "c1_" + tag + ".log") != 0)
    throw std::runtime_error("prior-sim failed for " + tag);
  std::ifstream in(out / "prior_edge_summary.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  return std::stod(row.substr(0, row.find(',')));
}

void criterion1() {
  const double m2 = prior_sim_median(2, 0.01, 1.0, 1e-4, "stated_l2");
  const double m10 = prior_sim_median(10, 0.01, 1.0, 1e-4, "stated_l10");
  const double m40 = prior_sim_median(40, 0.01, 1.0, 1e-4, "stated_l40");
  const bool in_band = m10 >= 0.02 && m10 <= 0.30;
  const bool monotone = m2 >= m10 && m10 >= m40;
  std::ostringstream d;
  d << "stated hypers medians l2=" << m2 << " l10=" << m10 << " l40=" << m40
    << ", band=[0.02,0.30]";
  report(1, in_band && monotone, "prior calibration band and lambda monotonicity",
         d.str());
  if (!in_band)
    info("the stated (v0=0.01, v1=1, pi=1e-4) prior admits essentially no edges; "
         "an exact small-p quadrature of the same prior confirms P(edge) ~ 1e-5, "
         "so the band cannot be met at those constants (see decisions ledger)");

  // the calibration procedure itself does land in the band
  const double c2 = prior_sim_median(2, 0.05, 1.0, 0.2, "cal_l2");
  const double c10 = prior_sim_median(10, 0.05, 1.0, 0.2, "cal_l10");
  const double c40 = prior_sim_median(40, 0.05, 1.0, 0.2, "cal_l40");
  std::ostringstream d2;
  d2 << "calibrated (v0=0.05, v1=1, pi=0.2) medians l2=" << c2 << " l10=" << c10
     << " l40=" << c40 << " -> in band and monotone: "
     << ((c10 >= 0.02 && c10 <= 0.30 && c2 >= c10 && c10 >= c40) ? "yes" : "no");
  info(d2.str());
}

// ---------------------------------------------------------------------------
// criteria 2 and 3: Table-1 style grid at desk scale
// ---------------------------------------------------------------------------
struct GridResult {
  double frob_ss = 0.0, frob_unif = 0.0, auc_ss = 0.0;
};

GridResult run_grid_cell(bool misspecified, double missing, int replicates,
                         std::uint64_t seed_base) {
  const SpikeSlabHyper hyper = calibrated_hyper();
  std::vector<double> f_ss(replicates), f_u(replicates), auc(replicates);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errs(static_cast<std::size_t>(replicates));
  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= replicates) return;
      try {
        SimScenario sc;
        sc.n = 200;
        sc.p = 50;
        sc.missing_fraction = missing;
        sc.misspecified = misspecified;
        sc.seed = seed_base + static_cast<std::uint64_t>(r);
        GroundTruth truth;
        auto [data, prior] = generate_scenario(sc, truth);
        for (PriorKind kind : {PriorKind::spike_slab, PriorKind::marginal_uniform}) {
          ChainConfig cfg;
          cfg.n_iter = 3000;
          cfg.burn_in = 1500;
          cfg.prior_kind = kind;
          cfg.seed = sc.seed;
          cfg.base_stream = kind == PriorKind::spike_slab ? 11 : 22;
          const ChainOutput out = run_chain(data, prior, hyper, cfg);
          const auto norms = matrix_error_norms(out.R_mean, truth.R_true);
          if (kind == PriorKind::spike_slab) {
            f_ss[static_cast<std::size_t>(r)] = norms.frobenius_norm;
            auc[static_cast<std::size_t>(r)] =
                graph_recovery(out.inclusion_prob, truth.edges, sc.p).auc;
          } else {
            f_u[static_cast<std::size_t>(r)] = norms.frobenius_norm;
          }
        }
      } catch (...) {
        errs[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  for (unsigned w = 0; w < std::min<unsigned>(hw, static_cast<unsigned>(replicates));
       ++w)
    pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  GridResult g;
  for (int r = 0; r < replicates; ++r) {
    g.frob_ss += f_ss[static_cast<std::size_t>(r)] / replicates;
    g.frob_unif += f_u[static_cast<std::size_t>(r)] / replicates;
    g.auc_ss += auc[static_cast<std::size_t>(r)] / replicates;
  }
  return g;
}

void criteria2_and_3() {
  const int reps = 10;
  const GridResult i0 = run_grid_cell(false, 0.0, reps, 52000);
  const GridResult i20 = run_grid_cell(false, 0.2, reps, 53000);

  const bool ordering = i0.frob_ss < i0.frob_unif && i20.frob_ss < i20.frob_unif;
  const bool auc_ok = i0.auc_ss >= 0.64;
  std::ostringstream d;
  d << "scenario i: frob ss/unif " << fmt3(i0.frob_ss) << "/" << fmt3(i0.frob_unif)
    << " at m=0, " << fmt3(i20.frob_ss) << "/" << fmt3(i20.frob_unif)
    << " at m=20%; ss AUC " << fmt3(i0.auc_ss) << " (gate 0.64)";
  report(2, ordering && auc_ok,
         "spike-and-slab beats the uniform prior and recovers the graph", d.str());

  // scenario ii pairs seed-for-seed with scenario i: identical graphs and
  // latent draws, only the prior means and continuous storage are distorted
  const GridResult ii0 = run_grid_cell(true, 0.0, reps, 52000);
  const GridResult ii20 = run_grid_cell(true, 0.2, reps, 53000);
  const bool degrade_ok =
      ii0.frob_ss < 1.15 * i0.frob_ss && ii20.frob_ss < 1.15 * i20.frob_ss;
  std::ostringstream d3;
  d3 << "scenario ii frob " << fmt3(ii0.frob_ss) << " vs i " << fmt3(i0.frob_ss)
     << " at m=0 (" << fmt3(100.0 * (ii0.frob_ss / i0.frob_ss - 1.0)) << "%); "
     << fmt3(ii20.frob_ss) << " vs " << fmt3(i20.frob_ss) << " at m=20% ("
     << fmt3(100.0 * (ii20.frob_ss / i20.frob_ss - 1.0)) << "%); limit +15%";
  report(3, degrade_ok, "misspecified priors degrade the fit by less than 15%",
         d3.str());
}

// ---------------------------------------------------------------------------
// criterion 4: Gaussian-approximate vs exact v-sampling
// ---------------------------------------------------------------------------
void criterion4() {
  SimScenario sc;
  sc.n = 200;
  sc.p = 50;
  sc.missing_fraction = 0.2;
  sc.misspecified = true;
  sc.seed = 60601;
  GroundTruth truth;
  auto [data, prior] = generate_scenario(sc, truth);
  const SpikeSlabHyper hyper = calibrated_hyper();

  Eigen::MatrixXd means[2];
  std::thread a([&] {
    ChainConfig cfg;
    cfg.n_iter = 10000;
    cfg.burn_in = 5000;
    cfg.v_sampling = VSampling::gaussian_approx;
    cfg.seed = 7070;
    means[0] = run_chain(data, prior, hyper, cfg).R_mean;
  });
  std::thread b([&] {
    ChainConfig cfg;
    cfg.n_iter = 10000;
    cfg.burn_in = 5000;
    cfg.v_sampling = VSampling::exact_reweighted;
    cfg.seed = 7171;
    means[1] = run_chain(data, prior, hyper, cfg).R_mean;
  });
  a.join();
  b.join();
  const double disc = (means[0] - means[1]).cwiseAbs().maxCoeff();
  std::ostringstream d;
  d << "elementwise max |R_approx - R_exact| = " << fmt3(disc) << " (gate 0.05)";
  report(4, disc < 0.05, "v-sampling approximation audit", d.str());
}

// ---------------------------------------------------------------------------
// criterion 5: small-instance brute-force quadrature gate
// ---------------------------------------------------------------------------
void criterion5() {
  const Eigen::Index n = 50;
  RngStream gen(88001, 0);
  const double rho_true = 0.45, lam_true = 1.2;
  const Eigen::Vector2d mu_true(0.25, -0.4);
  std::vector<int> x1(static_cast<std::size_t>(n));
  std::vector<double> x2(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double z1 = sample_std_normal(gen);
    const double z2 =
        rho_true * z1 + std::sqrt(1.0 - rho_true * rho_true) * sample_std_normal(gen);
    x1[i] = (mu_true[0] + z1 > 0.0) ? 1 : 0;
    x2[i] = mu_true[1] + lam_true * z2;
  }
  x1[5] = -1;
  x2[9] = std::numeric_limits<double>::quiet_NaN();

  MixedDataset data;
  data.schema = {{"b1", VariableKind::binary, {}}, {"x1", VariableKind::continuous, {}}};
  data.cells.resize(n, 2);
  for (std::size_t i = 0; i < x1.size(); ++i) {
    data.cells(static_cast<Eigen::Index>(i), 0) =
        x1[i] < 0 ? std::numeric_limits<double>::quiet_NaN() : double(x1[i]);
    data.cells(static_cast<Eigen::Index>(i), 1) = x2[i];
  }
  MarginalPrior prior;
  prior.mu0 = mu_true;
  prior.sigma2 = 1.0;
  ChainConfig cfg;
  cfg.prior_kind = PriorKind::marginal_uniform;
  cfg.n_iter = 40000;
  cfg.burn_in = 8000;
  cfg.seed = 90901;
  cfg.keep_r_draws = true;
  const ChainOutput out = run_chain(data, prior, SpikeSlabHyper{}, cfg);

  const auto q = oracle::quad_mixed_uniform(x1, x2, mu_true, prior.sigma2);
  Eigen::VectorXd rho_draws(static_cast<Eigen::Index>(out.chains[0].r_draws.size()));
  for (std::size_t t = 0; t < out.chains[0].r_draws.size(); ++t)
    rho_draws[static_cast<Eigen::Index>(t)] = out.chains[0].r_draws[t](0, 1);
  const Eigen::VectorXd mu1 = out.chains[0].mu_draws.col(0);
  const Eigen::VectorXd mu2 = out.chains[0].mu_draws.col(1);

  const double se_rho = oracle::batch_means_se(rho_draws);
  const double se_mu1 = oracle::batch_means_se(mu1);
  const double se_mu2 = oracle::batch_means_se(mu2);
  const double d_rho = std::fabs(rho_draws.mean() - q.rho);
  const double d_mu1 = std::fabs(mu1.mean() - q.mu1);
  const double d_mu2 = std::fabs(mu2.mean() - q.mu2);
  const bool pass = d_rho < 3 * se_rho && d_mu1 < 3 * se_mu1 && d_mu2 < 3 * se_mu2;
  std::ostringstream d;
  d << "chain vs quadrature: |d rho|=" << fmt3(d_rho) << " (3se=" << fmt3(3 * se_rho)
    << "), |d mu1|=" << fmt3(d_mu1) << " (3se=" << fmt3(3 * se_mu1) << "), |d mu2|="
    << fmt3(d_mu2) << " (3se=" << fmt3(3 * se_mu2) << ")";
  report(5, pass, "full chain matches the brute-force posterior", d.str());
}

// ---------------------------------------------------------------------------
// criterion 6: mixture classification at the supplement design, desk scale
// ---------------------------------------------------------------------------
void criterion6() {
  const int reps = 10;
  int both_ok = 0;
  double top1_unlabeled = 0.0, top1_labeled = 0.0;
  std::vector<std::string> lines;
  std::atomic<int> next{0};
  std::mutex mtx;
  auto worker = [&] {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= reps) return;
      SimScenario sc;
      sc.n = 400;
      sc.p = 30;
      sc.n_classes = 5;
      sc.continuous_fraction = 0.1;
      sc.seed = 71000 + static_cast<std::uint64_t>(rep);
      GroundTruth truth;
      RngStream rng(sc.seed, 0);
      truth = gen_precision_graph(sc.p, sc.c_graph, rng);
      MixedDataset data = gen_mixture_data(sc, truth, rng);
      const std::vector<int> true_labels = data.labels;

      std::vector<VariableKind> kinds;
      for (auto& v : data.schema) kinds.push_back(v.kind);
      ConditionalProbabilityPrior prior;
      prior.probs = true_condprobs(truth, kinds);
      prior.continuous_prior_means = truth.mu_true;
      for (int c = 0; c < 5; ++c) prior.cause_names.push_back("c" + std::to_string(c));

      MixtureConfig cfg;
      cfg.chain.n_iter = 2000;
      cfg.chain.burn_in = 1000;
      cfg.chain.seed = sc.seed;

      // run A: every label hidden
      MixedDataset hidden = data;
      for (auto& l : hidden.labels) l = kUnlabeled;
      const auto outA = run_classifier(hidden, prior, calibrated_hyper(), cfg);
      const double acc = csmf_accuracy(outA.csmf_mean, truth.pi_true);
      const Eigen::MatrixXd nb = naive_bayes_classify(
          hidden, prior, Eigen::VectorXd::Constant(5, 0.2));
      Eigen::VectorXd nb_pi = nb.colwise().mean();
      const double nb_acc = csmf_accuracy(nb_pi, truth.pi_true);

      // run B: 25% of labels revealed; top-1 judged on the common hidden rows
      MixedDataset part = data;
      for (std::size_t i = 100; i < part.labels.size(); ++i)
        part.labels[i] = kUnlabeled;
      const auto outB = run_classifier(part, prior, calibrated_hyper(), cfg);

      std::vector<int> eval_labels(true_labels.begin() + 100, true_labels.end());
      const double t1A = top_k_accuracy(
          outA.individual_probs.bottomRows(300), eval_labels, 1);
      const double t1B = top_k_accuracy(
          outB.individual_probs.bottomRows(300), eval_labels, 1);

      std::lock_guard<std::mutex> lock(mtx);
      if (acc > 0.8 && acc > nb_acc) ++both_ok;
      top1_unlabeled += t1A / reps;
      top1_labeled += t1B / reps;
      std::ostringstream line;
      line << "rep " << rep << ": csmf " << fmt3(acc) << " (naive Bayes " << fmt3(nb_acc)
           << "), top-1 " << fmt3(t1A) << " -> " << fmt3(t1B) << " with labels";
      lines.push_back(line.str());
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min(4u, std::thread::hardware_concurrency()); ++w)
    pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const bool pass = both_ok >= 7 && top1_labeled > top1_unlabeled;
  std::ostringstream d;
  d << both_ok << "/10 replicates with CSMF accuracy > 0.8 and > naive Bayes; mean "
       "top-1 "
    << fmt3(top1_unlabeled) << " -> " << fmt3(top1_labeled) << " with 25% labels";
  report(6, pass, "mixture classification on synthetic causes", d.str());
  for (const auto& l : lines) info(l);
}

// ---------------------------------------------------------------------------
// criterion 7: independence-bias tables with exact rational arithmetic
// ---------------------------------------------------------------------------
void criterion7() {
  const auto t = independence_bias_table(Rational::parse("0.8"), Rational::parse("0.2"),
                                         Rational::parse("0.2"), Rational::parse("0.8"));
  const bool theta_ok =
      t.theta11_true == Rational(4, 25) && t.theta11_indep == Rational(1, 4);
  const bool equal_ok = t.posterior_correct[1][1][0] == t.posterior_correct[1][1][1] &&
                        t.posterior_correct[1][1][1] == t.posterior_correct[1][1][2];
  std::ostringstream d;
  d << "true theta11 = " << t.theta11_true.to_string() << " (0.16), independence "
    << "reconstruction = " << t.theta11_indep.to_string() << " (0.25); correct-table "
    << "posteriors all equal " << t.posterior_correct[1][1][0].to_string();
  report(7, theta_ok && equal_ok, "independence-bias demonstration, exact arithmetic",
         d.str());
}

// ---------------------------------------------------------------------------
// criterion 8: Gelman-Rubin on a 4-chain classification run
// ---------------------------------------------------------------------------
void criterion8() {
  SimScenario sc;
  sc.n = 400;
  sc.p = 30;
  sc.n_classes = 5;
  sc.continuous_fraction = 0.1;
  sc.seed = 81001;
  GroundTruth truth;
  RngStream rng(sc.seed, 0);
  truth = gen_precision_graph(sc.p, sc.c_graph, rng);
  MixedDataset data = gen_mixture_data(sc, truth, rng);
  for (auto& l : data.labels) l = kUnlabeled;

  std::vector<VariableKind> kinds;
  for (auto& v : data.schema) kinds.push_back(v.kind);
  ConditionalProbabilityPrior prior;
  prior.probs = true_condprobs(truth, kinds);
  prior.continuous_prior_means = truth.mu_true;
  for (int c = 0; c < 5; ++c) prior.cause_names.push_back("c" + std::to_string(c));

  MixtureConfig cfg;
  cfg.chain.n_iter = 3000;
  cfg.chain.burn_in = 1500;
  cfg.chain.seed = 81002;
  cfg.chain.n_chains = 4;
  const auto out = run_classifier(data, prior, calibrated_hyper(), cfg);

  bool pass = true;
  std::ostringstream d;
  d << "R-hat per dominant cause:";
  for (Eigen::Index c = 0; c < 5; ++c) {
    if (truth.pi_true[c] <= 0.1) continue;
    std::vector<Eigen::VectorXd> chains;
    for (const auto& tr : out.csmf_traces) chains.push_back(tr.col(c));
    const double rhat = gelman_rubin(chains);
    d << " c" << c << "(pi=" << fmt3(truth.pi_true[c]) << ")=" << fmt3(rhat);
    if (rhat >= 1.1) pass = false;
  }
  report(8, pass, "4-chain convergence of the dominant class fractions", d.str());
}

// ---------------------------------------------------------------------------
// criterion 9: byte-identical reruns of every subcommand
// ---------------------------------------------------------------------------
void criterion9() {
  struct Cmd {
    std::string name, args;
  };
  const fs::path w = g_work;
  const std::string fit_input = (w / "c9_fit_input").string();
  const std::string cls_input = (w / "c9_cls_input").string();
  std::vector<std::pair<std::string, std::string>> pairs;

  auto both = [&](const std::string& tag, const std::string& args_tpl) {
    const std::string a = (w / ("c9_" + tag + "_a")).string();
    const std::string b = (w / ("c9_" + tag + "_b")).string();
    std::string args_a = args_tpl + " --out " + a;
    std::string args_b = args_tpl + " --out " + b;
    if (run_cli(args_a, "c9_" + tag + "_a.log") != 0 ||
        run_cli(args_b, "c9_" + tag + "_b.log") != 0)
      throw std::runtime_error("criterion 9: subcommand failed for " + tag);
    pairs.emplace_back(a, b);
  };

  both("sim", "simulate --scenario ii --n 60 --p 12 --missing 0.15 --classes 3 "
              "--labeled-fraction 0.3 --seed 31");
  both("fit", "fit-graph --data " + fit_input + "/data.csv --schema " + fit_input +
                  "/schema.csv --prior " + fit_input + "/prior_mu0.csv --iters 400 "
                  "--chains 2 --row-blocks 2 --seed 17");
  both("cls", "classify --data " + cls_input + "/data.csv --schema " + cls_input +
                  "/schema.csv --condprob " + cls_input + "/condprob.csv --iters 300 "
                  "--seed 23");
  both("ps", "prior-sim --p 15 --iters 150 --seed 29");
  {
    const std::string grid = (w / "c9_grid.csv").string();
    std::ofstream g(grid);
    g << "scenario,missing,n,p,iters\ni,0.1,50,10,300\n";
    g.close();
    both("bench", "benchmark --grid " + grid + " --replicates 2 --threads 3 --seed 37");
  }

  bool pass = true;
  std::string detail = "simulate, fit-graph, classify, prior-sim, benchmark reruns";
  for (const auto& [a, b] : pairs) {
    std::string why;
    if (!dirs_byte_identical(a, b, why)) {
      pass = false;
      detail = fs::path(a).filename().string() + ": " + why;
      break;
    }
  }
  report(9, pass, "identical seed and config give byte-identical outputs", detail);
}

} // namespace

int main(int argc, char** argv) {
  fs::path work = "acceptance_work";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) g_cli = argv[++i];
    if (arg == "--work" && i + 1 < argc) work = argv[++i];
  }
  g_work = work;
  fs::create_directories(g_work);

  // criterion 9's fit/classify inputs come from their own simulate runs
  if (g_cli.empty()) {
    std::cout << "NOTE: --cli not given; criteria 1 and 9 will be skipped and "
                 "reported as failures\n";
  } else {
    run_cli("simulate --scenario i --n 60 --p 12 --seed 31 --out " +
                (g_work / "c9_fit_input").string(),
            "c9_seed_fit.log");
    run_cli("simulate --scenario i --n 80 --p 10 --classes 3 --labeled-fraction 0.25 "
            "--seed 33 --out " +
                (g_work / "c9_cls_input").string(),
            "c9_seed_cls.log");
  }

  try {
    if (!g_cli.empty()) criterion1();
    else report(1, false, "prior calibration", "skipped: no --cli");
    criteria2_and_3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (!g_cli.empty()) criterion9();
    else report(9, false, "determinism", "skipped: no --cli");
  } catch (const std::exception& e) {
    std::cout << "[FAIL] acceptance aborted: " << e.what() << "\n";
    return 1;
  }

  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                : std::to_string(g_failures) + " CRITERIA FAILED")
            << "\n";
  return g_failures == 0 ? 0 : 1;
}

// lgmix command-line tool: graph estimation, classification, synthetic data,
// prior calibration, and the simulation benchmark grid.
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "lgmix/errors.hpp"
#include "lgmix/io.hpp"
#include "lgmix/lggm.hpp"
#include "lgmix/metrics.hpp"
#include "lgmix/mixture.hpp"
#include "lgmix/simgen.hpp"
#include "lgmix/special.hpp"

#ifndef LGMIX_VERSION
#define LGMIX_VERSION "dev"
#endif

namespace {

using namespace lgmix;

struct CommonOpts {
  std::string data_path, schema_path, prior_path, fixed_edges_path, out_dir;
  std::string prior_kind = "spike_slab";
  std::string v_sampling = "gaussian";
  std::string wishart_df = "conjugate";
  SpikeSlabHyper hyper;
  double sigma2 = 1.0;
  int iters = 3000, burn_in = -1, thin = 1, chains = 1, row_blocks = 1;
  std::uint64_t seed = 1;
  bool two_stage = false;
};

void add_chain_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--prior-kind", o.prior_kind, "R prior: spike_slab or uniform")
      ->check(CLI::IsMember({"spike_slab", "uniform"}));
  cmd->add_option("--v0", o.hyper.v0, "spike scale");
  cmd->add_option("--v1", o.hyper.v1, "slab scale");
  cmd->add_option("--lambda", o.hyper.lambda, "exponential rate on diag(R^-1)");
  cmd->add_option("--pi-delta", o.hyper.pi_delta, "prior edge indicator probability");
  cmd->add_option("--sigma2", o.sigma2, "prior variance of the latent means");
  cmd->add_option("--iters", o.iters, "MCMC iterations");
  cmd->add_option("--burn-in", o.burn_in, "burn-in iterations (default: iters/2)");
  cmd->add_option("--thin", o.thin, "thinning interval");
  cmd->add_option("--chains", o.chains, "number of parallel chains");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--row-blocks", o.row_blocks,
                  "parallel row blocks inside the latent update");
  cmd->add_option("--v-sampling", o.v_sampling,
                  "v conditional: gaussian approximation or exact reweighting")
      ->check(CLI::IsMember({"gaussian", "exact"}));
  cmd->add_option("--wishart-df", o.wishart_df,
                  "uniform-prior Wishart df: conjugate (n+p+1) or plus-two (n+p+2)")
      ->check(CLI::IsMember({"conjugate", "plus-two"}));
  cmd->add_flag("--two-stage", o.two_stage,
                "freeze the graph at the stage-one posterior median and resample");
}

ChainConfig make_chain_config(const CommonOpts& o) {
  ChainConfig cfg;
  cfg.n_iter = o.iters;
  cfg.burn_in = o.burn_in >= 0 ? o.burn_in : o.iters / 2;
  cfg.thin = o.thin;
  cfg.prior_kind =
      o.prior_kind == "uniform" ? PriorKind::marginal_uniform : PriorKind::spike_slab;
  cfg.v_sampling = o.v_sampling == "exact" ? VSampling::exact_reweighted
                                           : VSampling::gaussian_approx;
  cfg.uniform_df =
      o.wishart_df == "plus-two" ? UniformDf::plus_two : UniformDf::conjugate;
  cfg.seed = o.seed;
  cfg.n_chains = o.chains;
  cfg.n_row_blocks = o.row_blocks;
  cfg.two_stage = o.two_stage;
  return cfg;
}

Manifest base_manifest(const std::string& subcommand, const CommonOpts& o) {
  Manifest m;
  m["subcommand"] = subcommand;
  m["lgmix_version"] = LGMIX_VERSION;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["prior_kind"] = o.prior_kind;
  m["v_sampling"] = o.v_sampling;
  m["wishart_df"] = o.wishart_df;
  m["v0"] = format_double(o.hyper.v0);
  m["v1"] = format_double(o.hyper.v1);
  m["lambda"] = format_double(o.hyper.lambda);
  m["pi_delta"] = format_double(o.hyper.pi_delta);
  m["sigma2"] = format_double(o.sigma2);
  m["iters"] = std::to_string(o.iters);
  m["burn_in"] = std::to_string(o.burn_in >= 0 ? o.burn_in : o.iters / 2);
  m["thin"] = std::to_string(o.thin);
  m["chains"] = std::to_string(o.chains);
  m["seed"] = std::to_string(o.seed);
  m["row_blocks"] = std::to_string(o.row_blocks);
  m["two_stage"] = o.two_stage ? "true" : "false";
  return m;
}

std::vector<std::string> variable_names(const MixedDataset& data) {
  std::vector<std::string> names;
  names.reserve(data.schema.size());
  for (const auto& v : data.schema) names.push_back(v.name);
  return names;
}

int run_fit_graph(const CommonOpts& o) {
  MixedDataset data = load_dataset(o.data_path, o.schema_path);
  MarginalPrior prior;
  prior.sigma2 = o.sigma2;
  prior.mu0 = o.prior_path.empty()
                  ? Eigen::VectorXd::Zero(data.p())
                  : load_marginal_prior(o.prior_path, data.schema);
  Eigen::MatrixXi fixed;
  if (!o.fixed_edges_path.empty())
    fixed = load_fixed_edges(o.fixed_edges_path, data.schema);

  const ChainConfig cfg = make_chain_config(o);
  const ChainOutput out = run_chain(data, prior, o.hyper, cfg, fixed);

  RunArtifacts art;
  art.var_names = variable_names(data);
  art.fit = &out;
  art.fixed_edges = fixed.size() > 0 ? &fixed : nullptr;
  art.manifest = base_manifest("fit-graph", o);
  art.manifest["data"] = o.data_path;
  art.manifest["schema"] = o.schema_path;
  art.manifest["prior"] = o.prior_path;
  art.manifest["fixed_edges"] = o.fixed_edges_path;
  art.manifest["n"] = std::to_string(data.n());
  art.manifest["p"] = std::to_string(data.p());
  emit_results(art, o.out_dir);
  std::cout << "fit-graph: n=" << data.n() << " p=" << data.p()
            << " chains=" << cfg.n_chains << " saved=" << out.chains.front().n_saved
            << " -> " << o.out_dir << "\n";
  return 0;
}

int run_classify(const CommonOpts& o, const std::string& condprob_path,
                 bool split_populations, const std::string& sigma_c, double clamp_pmin,
                 double clamp_pmax) {
  MixedDataset data = load_dataset(o.data_path, o.schema_path);
  ConditionalProbabilityPrior prior =
      load_condprob_prior(condprob_path, data.schema, clamp_pmin, clamp_pmax);
  remap_labels(data, prior.cause_names);
  Eigen::MatrixXi fixed;
  if (!o.fixed_edges_path.empty())
    fixed = load_fixed_edges(o.fixed_edges_path, data.schema);

  MixtureConfig cfg;
  cfg.chain = make_chain_config(o);
  cfg.split_populations = split_populations;
  if (sigma_c == "hyper") {
    cfg.sigma2_mode = Sigma2Mode::hyperprior;
  } else if (sigma_c.rfind("fixed:", 0) == 0) {
    cfg.sigma2_mode = Sigma2Mode::fixed;
    cfg.sigma2_fixed = std::stod(sigma_c.substr(6));
    if (!(cfg.sigma2_fixed > 0.0))
      throw config_error("--sigma-c fixed:VAL requires VAL > 0");
  } else {
    throw config_error("--sigma-c must be 'hyper' or 'fixed:VAL'");
  }

  const ClassificationOutput out = run_classifier(data, prior, o.hyper, cfg, fixed);

  RunArtifacts art;
  art.var_names = variable_names(data);
  art.cls = &out;
  art.cause_names = prior.cause_names;
  art.fixed_edges = fixed.size() > 0 ? &fixed : nullptr;
  art.manifest = base_manifest("classify", o);
  art.manifest["data"] = o.data_path;
  art.manifest["schema"] = o.schema_path;
  art.manifest["condprob"] = condprob_path;
  art.manifest["fixed_edges"] = o.fixed_edges_path;
  art.manifest["split_populations"] = split_populations ? "true" : "false";
  art.manifest["sigma_c"] = sigma_c;
  emit_results(art, o.out_dir);
  std::cout << "classify: n=" << data.n() << " p=" << data.p()
            << " causes=" << prior.n_classes() << " -> " << o.out_dir << "\n";
  return 0;
}

int run_simulate(const SimScenario& sc, double labeled_fraction,
                 const std::string& out_dir) {
  GroundTruth truth;
  auto [data, prior] = generate_scenario(sc, truth);
  ensure_dir(out_dir);

  std::vector<int> true_labels = data.labels;
  if (sc.n_classes > 1) {
    // reveal labels for the leading fraction of (exchangeable) rows; the rest
    // become the unlabeled test set, with the truth kept in a sidecar
    const auto keep = static_cast<Eigen::Index>(
        std::llround(labeled_fraction * static_cast<double>(sc.n)));
    for (Eigen::Index i = keep; i < sc.n; ++i)
      data.labels[static_cast<std::size_t>(i)] = kUnlabeled;
  }
  save_dataset(data, out_dir + "/data.csv", out_dir + "/schema.csv");
  if (sc.n_classes > 1) {
    std::ofstream out(out_dir + "/truth_labels.csv");
    out << "row,cause\n";
    for (std::size_t i = 0; i < true_labels.size(); ++i)
      out << (i + 1) << ',' << data.class_names[static_cast<std::size_t>(true_labels[i])]
          << '\n';
  }

  const auto names = variable_names(data);
  {
    std::ofstream out(out_dir + "/prior_mu0.csv");
    for (Eigen::Index j = 0; j < data.p(); ++j)
      out << names[static_cast<std::size_t>(j)] << ','
          << format_double(truth.mu0_given(0, j)) << '\n';
  }
  write_matrix_csv(truth.Omega_true, names, names, out_dir + "/truth_omega.csv");
  {
    std::ofstream out(out_dir + "/truth_edges.csv");
    for (auto [a, b] : truth.edges)
      out << names[static_cast<std::size_t>(a)] << ','
          << names[static_cast<std::size_t>(b)] << '\n';
  }
  {
    std::vector<std::string> rows;
    for (Eigen::Index c = 0; c < truth.mu_true.rows(); ++c)
      rows.push_back("cause" + std::to_string(c + 1));
    write_matrix_csv(truth.mu_true, names, rows, out_dir + "/truth_mu.csv");
  }
  {
    std::ofstream out(out_dir + "/truth_pi.csv");
    for (Eigen::Index c = 0; c < truth.pi_true.size(); ++c)
      out << "cause" << (c + 1) << ',' << format_double(truth.pi_true[c]) << '\n';
  }
  if (sc.n_classes > 1) {
    std::vector<VariableKind> kinds;
    for (const auto& v : data.schema) kinds.push_back(v.kind);
    Eigen::MatrixXd cp = true_condprobs(truth, kinds);
    // continuous columns carry the latent prior means directly
    for (Eigen::Index j = 0; j < data.p(); ++j)
      if (kinds[static_cast<std::size_t>(j)] == VariableKind::continuous)
        cp.col(j) = truth.mu0_given.col(j);
    std::ofstream out(out_dir + "/condprob.csv");
    out << "cause";
    for (const auto& nm : names) out << ',' << nm;
    out << '\n';
    for (Eigen::Index c = 0; c < cp.rows(); ++c) {
      out << "cause" << (c + 1);
      for (Eigen::Index j = 0; j < cp.cols(); ++j) out << ',' << format_double(cp(c, j));
      out << '\n';
    }
  }

  Manifest m;
  m["subcommand"] = "simulate";
  m["lgmix_version"] = LGMIX_VERSION;
  m["scenario"] = sc.misspecified ? "ii" : "i";
  m["n"] = std::to_string(sc.n);
  m["p"] = std::to_string(sc.p);
  m["missing"] = format_double(sc.missing_fraction);
  m["classes"] = std::to_string(sc.n_classes);
  m["continuous_fraction"] = format_double(sc.continuous_fraction);
  m["labeled_fraction"] = format_double(labeled_fraction);
  m["c_graph"] = format_double(sc.c_graph);
  m["seed"] = std::to_string(sc.seed);
  write_manifest(m, out_dir + "/run_manifest.json");
  std::cout << "simulate: wrote n=" << sc.n << " p=" << sc.p << " ("
            << truth.edges.size() << " true edges) -> " << out_dir << "\n";
  return 0;
}

int run_prior_sim(Eigen::Index p, const SpikeSlabHyper& hyper, int n_iter,
                  std::uint64_t seed, const std::string& out_dir) {
  RngStream rng(seed, 0);
  const PriorEdgeSummary s = simulate_prior_edge_probability(p, hyper, n_iter, rng);
  ensure_dir(out_dir);
  {
    std::ofstream out(out_dir + "/prior_edge_summary.csv");
    out << "median,q025,q975\n"
        << format_double(s.median) << ',' << format_double(s.q025) << ','
        << format_double(s.q975) << '\n';
  }
  {
    std::ofstream out(out_dir + "/prior_edge_trace.csv");
    out << "draw,edge_fraction\n";
    for (Eigen::Index t = 0; t < s.trace.size(); ++t)
      out << (t + 1) << ',' << format_double(s.trace[t]) << '\n';
  }
  Manifest m;
  m["subcommand"] = "prior-sim";
  m["lgmix_version"] = LGMIX_VERSION;
  m["p"] = std::to_string(p);
  m["v0"] = format_double(hyper.v0);
  m["v1"] = format_double(hyper.v1);
  m["lambda"] = format_double(hyper.lambda);
  m["pi_delta"] = format_double(hyper.pi_delta);
  m["iters"] = std::to_string(n_iter);
  m["seed"] = std::to_string(seed);
  write_manifest(m, out_dir + "/run_manifest.json");
  std::cout << "prior-sim: p=" << p << " median edge probability " << s.median << " ["
            << s.q025 << ", " << s.q975 << "] -> " << out_dir << "\n";
  return 0;
}

struct BenchCell {
  std::string scenario;
  double missing = 0.0;
  Eigen::Index n = 200, p = 50;
  int iters = 3000;
};

std::vector<BenchCell> load_benchmark_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open grid file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw config_error(path + ": empty grid");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::vector<BenchCell> cells;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    BenchCell bc;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= header.size())
        throw config_error(path + ":" + std::to_string(lineno) + ": too many cells");
      const std::string& name = header[col++];
      if (name == "scenario") {
        if (cell != "i" && cell != "ii")
          throw config_error(path + ":" + std::to_string(lineno) +
                             ": scenario must be 'i' or 'ii'");
        bc.scenario = cell;
      } else if (name == "missing") {
        bc.missing = std::stod(cell);
      } else if (name == "n") {
        bc.n = std::stol(cell);
      } else if (name == "p") {
        bc.p = std::stol(cell);
      } else if (name == "iters") {
        bc.iters = std::stoi(cell);
      } else {
        throw config_error(path + ": unknown grid column '" + name + "'");
      }
    }
    if (bc.scenario.empty())
      throw config_error(path + ":" + std::to_string(lineno) + ": missing scenario");
    cells.push_back(bc);
  }
  if (cells.empty()) throw config_error(path + ": no grid rows");
  return cells;
}

struct BenchRow {
  std::string scenario, method;
  double missing = 0.0;
  int replicate = 0;
  MatrixErrorNorms norms;
  double auc = -1.0, max_f1 = -1.0;
};

int run_benchmark(const std::string& grid_path, int replicates, std::uint64_t seed,
                  double sigma2, const SpikeSlabHyper& hyper, int threads,
                  const std::string& out_dir) {
  const auto cells = load_benchmark_grid(grid_path);
  if (replicates < 1) throw config_error("--replicates must be >= 1");
  struct Task {
    std::size_t cell;
    int replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int r = 0; r < replicates; ++r) tasks.push_back({c, r});

  std::vector<std::vector<BenchRow>> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());

  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        const auto& cell = cells[tasks[t].cell];
        const int rep = tasks[t].replicate;
        SimScenario sc;
        sc.n = cell.n;
        sc.p = cell.p;
        sc.missing_fraction = cell.missing;
        sc.misspecified = cell.scenario == "ii";
        sc.sigma2_prior = sigma2;
        sc.seed = seed + 104729 * tasks[t].cell + static_cast<std::uint64_t>(rep);
        GroundTruth truth;
        auto [data, prior] = generate_scenario(sc, truth);

        for (PriorKind kind : {PriorKind::spike_slab, PriorKind::marginal_uniform}) {
          ChainConfig cfg;
          cfg.n_iter = cell.iters;
          cfg.burn_in = cell.iters / 2;
          cfg.prior_kind = kind;
          cfg.seed = sc.seed;
          cfg.base_stream = kind == PriorKind::spike_slab ? 1 : 2;
          const ChainOutput out = run_chain(data, prior, hyper, cfg);
          BenchRow row;
          row.scenario = cell.scenario;
          row.missing = cell.missing;
          row.replicate = rep;
          row.method = kind == PriorKind::spike_slab ? "spike_slab" : "uniform";
          row.norms = matrix_error_norms(out.R_mean, truth.R_true);
          if (kind == PriorKind::spike_slab) {
            const auto rec = graph_recovery(out.inclusion_prob, truth.edges, sc.p);
            row.auc = rec.auc;
            row.max_f1 = rec.max_f1;
          }
          rows[t].push_back(row);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::max(1, threads);
  for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ensure_dir(out_dir);
  {
    std::ofstream out(out_dir + "/benchmark_results.csv");
    out << "scenario,missing,method,replicate,max_norm,spectral_norm,frobenius_norm,"
           "auc,max_f1\n";
    for (const auto& group : rows)
      for (const auto& r : group) {
        out << r.scenario << ',' << format_double(r.missing) << ',' << r.method << ','
            << r.replicate << ',' << format_double(r.norms.max_norm) << ','
            << format_double(r.norms.spectral_norm) << ','
            << format_double(r.norms.frobenius_norm) << ',';
        if (r.auc >= 0.0)
          out << format_double(r.auc) << ',' << format_double(r.max_f1) << '\n';
        else
          out << ",\n";
      }
  }
  {
    std::ofstream out(out_dir + "/benchmark_summary.csv");
    out << "scenario,missing,method,max_norm,spectral_norm,frobenius_norm,auc,max_f1\n";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      for (const char* method : {"spike_slab", "uniform"}) {
        double mn = 0, sn = 0, fn = 0, auc = 0, f1 = 0;
        int count = 0, auc_count = 0;
        for (std::size_t t = 0; t < tasks.size(); ++t) {
          if (tasks[t].cell != c) continue;
          for (const auto& r : rows[t]) {
            if (r.method != method) continue;
            mn += r.norms.max_norm;
            sn += r.norms.spectral_norm;
            fn += r.norms.frobenius_norm;
            ++count;
            if (r.auc >= 0.0) {
              auc += r.auc;
              f1 += r.max_f1;
              ++auc_count;
            }
          }
        }
        if (count == 0) continue;
        out << cells[c].scenario << ',' << format_double(cells[c].missing) << ','
            << method << ',' << format_double(mn / count) << ','
            << format_double(sn / count) << ',' << format_double(fn / count) << ',';
        if (auc_count > 0)
          out << format_double(auc / auc_count) << ',' << format_double(f1 / auc_count)
              << '\n';
        else
          out << ",\n";
      }
    }
  }
  Manifest m;
  m["subcommand"] = "benchmark";
  m["lgmix_version"] = LGMIX_VERSION;
  m["grid"] = grid_path;
  m["replicates"] = std::to_string(replicates);
  m["seed"] = std::to_string(seed);
  m["sigma2"] = format_double(sigma2);
  write_manifest(m, out_dir + "/run_manifest.json");
  std::cout << "benchmark: " << cells.size() << " grid cells x " << replicates
            << " replicates -> " << out_dir << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent Gaussian graphical models for mixed data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LGMIX_VERSION);

  CommonOpts fit;
  auto* fit_cmd =
      app.add_subcommand("fit-graph", "estimate the latent correlation matrix and graph");
  fit_cmd->add_option("--data", fit.data_path, "data CSV")->required();
  fit_cmd->add_option("--schema", fit.schema_path, "schema CSV")->required();
  fit_cmd->add_option("--prior", fit.prior_path, "marginal prior means CSV");
  fit_cmd->add_option("--fixed-edges", fit.fixed_edges_path, "fixed edge pairs CSV");
  fit_cmd->add_option("--out", fit.out_dir, "output directory")->required();
  add_chain_options(fit_cmd, fit);

  CommonOpts cls;
  std::string condprob_path, sigma_c = "hyper";
  bool split_populations = false;
  double clamp_pmin = -1.0, clamp_pmax = -1.0;
  auto* cls_cmd =
      app.add_subcommand("classify", "cause-of-death assignment with the mixture model");
  cls_cmd->add_option("--data", cls.data_path, "data CSV (optional cause column)")
      ->required();
  cls_cmd->add_option("--schema", cls.schema_path, "schema CSV")->required();
  cls_cmd->add_option("--condprob", condprob_path, "P(symptom|cause) CSV")->required();
  cls_cmd->add_option("--fixed-edges", cls.fixed_edges_path, "fixed edge pairs CSV");
  cls_cmd->add_option("--out", cls.out_dir, "output directory")->required();
  cls_cmd->add_flag("--split-populations", split_populations,
                    "labeled rows keep their own class-fraction vector");
  cls_cmd->add_option("--sigma-c", sigma_c, "class-mean variance: hyper or fixed:VAL");
  cls_cmd->add_option("--clamp-pmin", clamp_pmin, "override observed p_min for clamping");
  cls_cmd->add_option("--clamp-pmax", clamp_pmax, "override observed p_max for clamping");
  add_chain_options(cls_cmd, cls);

  SimScenario sim;
  std::string sim_scenario = "i", sim_out;
  auto* sim_cmd = app.add_subcommand("simulate", "generate synthetic benchmark data");
  sim_cmd->add_option("--scenario", sim_scenario, "i (correct) or ii (misspecified)")
      ->check(CLI::IsMember({"i", "ii"}));
  sim_cmd->add_option("--n", sim.n, "rows");
  sim_cmd->add_option("--p", sim.p, "variables");
  sim_cmd->add_option("--missing", sim.missing_fraction, "missing-cell fraction");
  sim_cmd->add_option("--classes", sim.n_classes, "number of causes (1 = estimation)");
  sim_cmd->add_option("--continuous-fraction", sim.continuous_fraction,
                      "fraction of continuous columns");
  sim_cmd->add_option("--c-graph", sim.c_graph, "geometric graph kernel width");
  double sim_labeled_fraction = 0.0;
  sim_cmd->add_option("--labeled-fraction", sim_labeled_fraction,
                      "fraction of rows whose cause label is revealed");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_option("--out", sim_out, "output directory")->required();

  Eigen::Index ps_p = 50;
  SpikeSlabHyper ps_hyper;
  int ps_iters = 1000;
  std::uint64_t ps_seed = 1;
  std::string ps_out;
  auto* ps_cmd =
      app.add_subcommand("prior-sim", "implied prior edge probability by simulation");
  ps_cmd->add_option("--p", ps_p, "graph dimension");
  ps_cmd->add_option("--v0", ps_hyper.v0, "spike scale");
  ps_cmd->add_option("--v1", ps_hyper.v1, "slab scale");
  ps_cmd->add_option("--lambda", ps_hyper.lambda, "exponential rate on diag(R^-1)");
  ps_cmd->add_option("--pi-delta", ps_hyper.pi_delta, "prior edge indicator probability");
  ps_cmd->add_option("--iters", ps_iters, "retained draws (same count burned in)");
  ps_cmd->add_option("--seed", ps_seed, "RNG seed");
  ps_cmd->add_option("--out", ps_out, "output directory")->required();

  std::string bench_grid, bench_out;
  int bench_reps = 10;
  std::uint64_t bench_seed = 1;
  double bench_sigma2 = 1.0;
  int bench_threads = static_cast<int>(std::thread::hardware_concurrency());
  SpikeSlabHyper bench_hyper;
  auto* bench_cmd =
      app.add_subcommand("benchmark", "scenario grid: spike-slab vs uniform prior");
  bench_cmd->add_option("--grid", bench_grid, "grid CSV (scenario,missing[,n,p,iters])")
      ->required();
  bench_cmd->add_option("--replicates", bench_reps, "replicates per grid cell");
  bench_cmd->add_option("--seed", bench_seed, "base RNG seed");
  bench_cmd->add_option("--sigma2", bench_sigma2, "prior variance of latent means");
  bench_cmd->add_option("--threads", bench_threads, "worker threads");
  bench_cmd->add_option("--v0", bench_hyper.v0, "spike scale");
  bench_cmd->add_option("--v1", bench_hyper.v1, "slab scale");
  bench_cmd->add_option("--lambda", bench_hyper.lambda, "exponential rate");
  bench_cmd->add_option("--pi-delta", bench_hyper.pi_delta, "prior edge probability");
  bench_cmd->add_option("--out", bench_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fit_cmd->parsed()) return run_fit_graph(fit);
    if (cls_cmd->parsed())
      return run_classify(cls, condprob_path, split_populations, sigma_c, clamp_pmin,
                          clamp_pmax);
    if (sim_cmd->parsed()) {
      sim.misspecified = sim_scenario == "ii";
      sim.validate();
      if (sim_labeled_fraction < 0.0 || sim_labeled_fraction > 1.0)
        throw config_error("--labeled-fraction must lie in [0,1]");
      return run_simulate(sim, sim_labeled_fraction, sim_out);
    }
    if (ps_cmd->parsed()) return run_prior_sim(ps_p, ps_hyper, ps_iters, ps_seed, ps_out);
    if (bench_cmd->parsed())
      return run_benchmark(bench_grid, bench_reps, bench_seed, bench_sigma2, bench_hyper,
                           bench_threads, bench_out);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const invalid_parameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

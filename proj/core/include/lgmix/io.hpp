#ifndef LGMIX_IO_HPP
#define LGMIX_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "lgmix/dataset.hpp"
#include "lgmix/lggm.hpp"
#include "lgmix/mixture.hpp"

namespace lgmix {

/// CSV dataset + sidecar schema ("name,kind[,transform]").
/// Binary cells are "0"/"1", continuous cells decimal literals, missing cells
/// empty; an optional "cause" column carries class labels. Continuous values
/// pass through the schema's marginal transform at load time.
MixedDataset load_dataset(const std::string& data_path, const std::string& schema_path);

std::vector<VariableSchema> load_schema(const std::string& schema_path);

/// Inverse of load_dataset (modulo the transform, which is emitted as-is in
/// the schema); floats printed with 17 significant digits so a reload is exact.
void save_dataset(const MixedDataset& data, const std::string& data_path,
                  const std::string& schema_path);

/// Conditional-probability prior, rows = causes, header = variable names.
/// Binary columns must lie in [0,1] and get the 0/1 clamping rule; columns
/// that the schema marks continuous are read as latent prior means.
ConditionalProbabilityPrior load_condprob_prior(const std::string& path,
                                                const std::vector<VariableSchema>& schema,
                                                double p_min_override = -1.0,
                                                double p_max_override = -1.0);

/// Variable-name pairs, one per line; both orientations get set.
Eigen::MatrixXi load_fixed_edges(const std::string& path,
                                 const std::vector<VariableSchema>& schema);

/// "name,value" per-variable marginal prior means.
Eigen::VectorXd load_marginal_prior(const std::string& path,
                                    const std::vector<VariableSchema>& schema);

/// Re-index dataset labels to match an externally fixed cause order.
void remap_labels(MixedDataset& data, const std::vector<std::string>& cause_names);

using Manifest = std::map<std::string, std::string>;

struct RunArtifacts {
  std::vector<std::string> var_names;
  const ChainOutput* fit = nullptr;
  const ClassificationOutput* cls = nullptr;
  std::vector<std::string> cause_names;
  const Eigen::MatrixXi* fixed_edges = nullptr;
  Manifest manifest;
};

/// Writes posterior_mean_R.csv, posterior_mean_mu.csv, posterior_mean_lambda.csv,
/// inclusion_prob.csv, pairs_report.csv, csmf_summary.csv, assignments.csv,
/// trace_csmf.csv and run_manifest.json, as applicable to the run kind.
void emit_results(const RunArtifacts& artifacts, const std::string& out_dir);

// low-level helpers shared by the CLI
std::string format_double(double x); // 17 significant digits
void write_matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& col_names,
                      const std::vector<std::string>& row_names, const std::string& path);
Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_manifest(const Manifest& manifest, const std::string& path);
void ensure_dir(const std::string& path);

} // namespace lgmix

#endif

#ifndef LGMIX_DATASET_HPP
#define LGMIX_DATASET_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace lgmix {

enum class VariableKind { binary, continuous };

/// Monotone pre-mapping of raw continuous values onto the probit scale.
/// "power:k" maps x to sign(x)*|x|^k, "affine:m:s" maps x to (x-m)/s.
struct MarginalTransform {
  enum class Kind { none, power, affine } kind = Kind::none;
  double a = 1.0; // exponent, or center
  double b = 1.0; // scale (affine only)

  double apply(double x) const {
    switch (kind) {
      case Kind::none: return x;
      case Kind::power: return std::copysign(std::pow(std::fabs(x), a), x);
      case Kind::affine: return (x - a) / b;
    }
    return x;
  }

  static MarginalTransform parse(const std::string& spec);
  std::string to_string() const;
};

struct VariableSchema {
  std::string name;
  VariableKind kind = VariableKind::binary;
  MarginalTransform transform; // continuous variables only
};

constexpr int kUnlabeled = -1;

/// n x p mixed-type data; missing cells are NaN, binary cells are 0/1.
/// Continuous cells hold the transformed (probit-scale) values.
struct MixedDataset {
  std::vector<VariableSchema> schema;
  Eigen::MatrixXd cells;
  std::vector<int> labels;             // per-row class id, kUnlabeled if none
  std::vector<std::string> class_names;

  Eigen::Index n() const { return cells.rows(); }
  Eigen::Index p() const { return cells.cols(); }
  bool has_labels() const { return !class_names.empty(); }
  bool is_missing(Eigen::Index i, Eigen::Index j) const {
    return std::isnan(cells(i, j));
  }
  bool is_binary(Eigen::Index j) const {
    return schema[static_cast<std::size_t>(j)].kind == VariableKind::binary;
  }

  std::vector<Eigen::Index> continuous_columns() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index j = 0; j < p(); ++j)
      if (!is_binary(j)) out.push_back(j);
    return out;
  }

  /// Throws config_error on shape/type violations (binary cell not in {0,1}, ...).
  void validate() const;
};

/// Informative marginal prior: latent means mu0 (probit-transformed
/// probabilities for binary variables) and the prior variance of mu.
struct MarginalPrior {
  Eigen::VectorXd mu0;
  double sigma2 = 1.0;
};

} // namespace lgmix

#endif

#include "lgmix/dataset.hpp"

#include <set>
#include <sstream>

#include "lgmix/errors.hpp"

namespace lgmix {

MarginalTransform MarginalTransform::parse(const std::string& spec) {
  MarginalTransform t;
  if (spec.empty() || spec == "none") return t;
  std::stringstream ss(spec);
  std::string head;
  std::getline(ss, head, ':');
  if (head == "power") {
    t.kind = Kind::power;
    if (!(ss >> t.a) || t.a <= 0.0)
      throw config_error("transform 'power' needs a positive exponent, got '" + spec + "'");
  } else if (head == "affine") {
    char colon = 0;
    if (!(ss >> t.a >> colon >> t.b) || colon != ':' || t.b <= 0.0)
      throw config_error("transform 'affine' needs 'affine:center:scale' with scale > 0, got '" +
                         spec + "'");
    t.kind = Kind::affine;
  } else {
    throw config_error("unknown marginal transform '" + spec + "'");
  }
  return t;
}

std::string MarginalTransform::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::none: return "none";
    case Kind::power: os << "power:" << a; break;
    case Kind::affine: os << "affine:" << a << ":" << b; break;
  }
  return os.str();
}

void MixedDataset::validate() const {
  if (cells.cols() != static_cast<Eigen::Index>(schema.size()))
    throw config_error("dataset has " + std::to_string(cells.cols()) +
                       " columns but schema describes " + std::to_string(schema.size()));
  if (cells.rows() < 1) throw config_error("dataset must contain at least one row");
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(cells.rows()))
    throw config_error("label vector length does not match row count");

  std::set<std::string> names;
  for (const auto& v : schema) {
    if (!names.insert(v.name).second)
      throw config_error("duplicate variable name '" + v.name + "'");
    if (v.kind == VariableKind::binary && v.transform.kind != MarginalTransform::Kind::none)
      throw config_error("binary variable '" + v.name + "' cannot carry a marginal transform");
  }

  for (Eigen::Index j = 0; j < p(); ++j) {
    for (Eigen::Index i = 0; i < n(); ++i) {
      const double x = cells(i, j);
      if (std::isnan(x)) continue;
      if (is_binary(j)) {
        if (x != 0.0 && x != 1.0)
          throw config_error("binary column '" + schema[static_cast<std::size_t>(j)].name +
                             "' holds non-binary value at row " + std::to_string(i + 1));
      } else if (!std::isfinite(x)) {
        throw config_error("continuous column '" + schema[static_cast<std::size_t>(j)].name +
                           "' holds a non-finite value at row " + std::to_string(i + 1));
      }
    }
  }
}

} // namespace lgmix

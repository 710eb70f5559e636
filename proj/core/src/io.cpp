#include "lgmix/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "lgmix/errors.hpp"

namespace lgmix {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw config_error("malformed number '" + s + "' at " + where);
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  return out;
}

} // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw io_error("cannot create directory '" + path + "': " + ec.message());
}

std::vector<VariableSchema> load_schema(const std::string& schema_path) {
  auto in = open_input(schema_path);
  std::vector<VariableSchema> schema;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (cells.size() < 2 || cells.size() > 3)
      throw config_error(schema_path + ":" + std::to_string(lineno) +
                         ": expected 'name,kind[,transform]'");
    VariableSchema v;
    v.name = cells[0];
    if (cells[1] == "binary")
      v.kind = VariableKind::binary;
    else if (cells[1] == "continuous")
      v.kind = VariableKind::continuous;
    else
      throw config_error(schema_path + ":" + std::to_string(lineno) +
                         ": kind must be 'binary' or 'continuous', got '" + cells[1] + "'");
    if (cells.size() == 3 && !cells[2].empty()) {
      if (v.kind == VariableKind::binary)
        throw config_error(schema_path + ":" + std::to_string(lineno) +
                           ": binary variables cannot carry a transform");
      v.transform = MarginalTransform::parse(cells[2]);
    }
    schema.push_back(std::move(v));
  }
  if (schema.empty()) throw config_error(schema_path + ": empty schema");
  return schema;
}

MixedDataset load_dataset(const std::string& data_path, const std::string& schema_path) {
  auto schema = load_schema(schema_path);
  auto in = open_input(data_path);

  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t j = 0; j < schema.size(); ++j) by_name[schema[j].name] = j;

  std::string line;
  if (!std::getline(in, line)) throw config_error(data_path + ": empty file");
  auto header = split_csv_line(strip_cr(line));
  std::vector<int> schema_of_col(header.size(), -1);
  int cause_col = -1;
  std::vector<bool> seen(schema.size(), false);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "cause") {
      if (cause_col >= 0) throw config_error(data_path + ": duplicate 'cause' column");
      cause_col = static_cast<int>(c);
      continue;
    }
    auto it = by_name.find(header[c]);
    if (it == by_name.end())
      throw config_error(data_path + ": unknown variable '" + header[c] + "' in header");
    if (seen[it->second])
      throw config_error(data_path + ": duplicate column '" + header[c] + "'");
    seen[it->second] = true;
    schema_of_col[c] = static_cast<int>(it->second);
  }
  for (std::size_t j = 0; j < schema.size(); ++j)
    if (!seen[j])
      throw config_error(data_path + ": column '" + schema[j].name + "' missing from header");

  // dataset column order follows the file header
  MixedDataset data;
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (schema_of_col[c] >= 0) {
      data.schema.push_back(schema[static_cast<std::size_t>(schema_of_col[c])]);
      order.push_back(c);
    }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw config_error(data_path + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(header.size()) + " cells, found " +
                         std::to_string(cells.size()));
    std::vector<double> row(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto& cell = cells[order[k]];
      const auto& vs = data.schema[k];
      const std::string where =
          data_path + ":" + std::to_string(lineno) + " column '" + vs.name + "'";
      if (cell.empty()) {
        row[k] = std::numeric_limits<double>::quiet_NaN();
      } else if (vs.kind == VariableKind::binary) {
        if (cell == "0")
          row[k] = 0.0;
        else if (cell == "1")
          row[k] = 1.0;
        else
          throw config_error("non-binary value '" + cell + "' at " + where);
      } else {
        row[k] = vs.transform.apply(parse_double(cell, where));
      }
    }
    rows.push_back(std::move(row));
    raw_labels.push_back(cause_col >= 0 ? cells[static_cast<std::size_t>(cause_col)] : "");
  }
  if (rows.empty()) throw config_error(data_path + ": no data rows");

  data.cells.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(order.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < order.size(); ++k)
      data.cells(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];

  if (cause_col >= 0) {
    data.labels.assign(rows.size(), kUnlabeled);
    std::unordered_map<std::string, int> label_ids;
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
      const auto& lab = raw_labels[i];
      if (lab.empty()) continue;
      auto [it, inserted] = label_ids.try_emplace(
          lab, static_cast<int>(data.class_names.size()));
      if (inserted) data.class_names.push_back(lab);
      data.labels[i] = it->second;
    }
  }
  data.validate();
  return data;
}

void save_dataset(const MixedDataset& data, const std::string& data_path,
                  const std::string& schema_path) {
  {
    auto out = open_output(schema_path);
    for (const auto& v : data.schema) {
      out << v.name << ',' << (v.kind == VariableKind::binary ? "binary" : "continuous");
      if (v.transform.kind != MarginalTransform::Kind::none)
        out << ',' << v.transform.to_string();
      out << '\n';
    }
  }
  auto out = open_output(data_path);
  for (std::size_t j = 0; j < data.schema.size(); ++j) {
    if (j) out << ',';
    out << data.schema[j].name;
  }
  const bool labeled = !data.labels.empty();
  if (labeled) out << ",cause";
  out << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      if (j) out << ',';
      if (data.is_missing(i, j)) continue;
      if (data.is_binary(j))
        out << (data.cells(i, j) == 0.0 ? '0' : '1');
      else
        out << format_double(data.cells(i, j));
    }
    if (labeled) {
      out << ',';
      const int lab = data.labels[static_cast<std::size_t>(i)];
      if (lab != kUnlabeled) out << data.class_names[static_cast<std::size_t>(lab)];
    }
    out << '\n';
  }
}

ConditionalProbabilityPrior load_condprob_prior(const std::string& path,
                                                const std::vector<VariableSchema>& schema,
                                                double p_min_override,
                                                double p_max_override) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw config_error(path + ": empty file");
  auto header = split_csv_line(strip_cr(line));
  if (header.size() != schema.size() + 1)
    throw config_error(path + ": header must be 'cause,<variable names>' covering all " +
                       std::to_string(schema.size()) + " variables");
  std::vector<int> col_of_var(schema.size(), -1);
  for (std::size_t c = 1; c < header.size(); ++c) {
    bool found = false;
    for (std::size_t j = 0; j < schema.size(); ++j)
      if (schema[j].name == header[c]) {
        if (col_of_var[j] >= 0) throw config_error(path + ": duplicate column " + header[c]);
        col_of_var[j] = static_cast<int>(c);
        found = true;
        break;
      }
    if (!found) throw config_error(path + ": unknown variable '" + header[c] + "'");
  }

  ConditionalProbabilityPrior prior;
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw config_error(path + ":" + std::to_string(lineno) + ": wrong cell count");
    prior.cause_names.push_back(cells[0]);
    std::vector<double> row(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const auto& cell = cells[static_cast<std::size_t>(col_of_var[j])];
      row[j] = parse_double(cell, path + ":" + std::to_string(lineno));
      if (schema[j].kind == VariableKind::binary && (row[j] < 0.0 || row[j] > 1.0))
        throw config_error(path + ":" + std::to_string(lineno) + ": probability for '" +
                           schema[j].name + "' outside [0,1]");
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw config_error(path + ": need at least two causes");

  const auto C = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(schema.size());
  prior.probs.resize(C, p);
  prior.continuous_prior_means = Eigen::MatrixXd::Zero(C, p);
  for (Eigen::Index c = 0; c < C; ++c)
    for (Eigen::Index j = 0; j < p; ++j) {
      const double v = rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
      if (schema[static_cast<std::size_t>(j)].kind == VariableKind::binary)
        prior.probs(c, j) = v;
      else
        prior.continuous_prior_means(c, j) = v;
    }

  // clamp only the binary block
  std::vector<Eigen::Index> binary_cols;
  for (Eigen::Index j = 0; j < p; ++j)
    if (schema[static_cast<std::size_t>(j)].kind == VariableKind::binary)
      binary_cols.push_back(j);
  if (!binary_cols.empty()) {
    Eigen::MatrixXd block(C, static_cast<Eigen::Index>(binary_cols.size()));
    for (Eigen::Index k = 0; k < block.cols(); ++k)
      block.col(k) = prior.probs.col(binary_cols[static_cast<std::size_t>(k)]);
    clamp_condprobs(block, p_min_override, p_max_override);
    for (Eigen::Index k = 0; k < block.cols(); ++k)
      prior.probs.col(binary_cols[static_cast<std::size_t>(k)]) = block.col(k);
  }
  return prior;
}

Eigen::MatrixXi load_fixed_edges(const std::string& path,
                                 const std::vector<VariableSchema>& schema) {
  const auto p = static_cast<Eigen::Index>(schema.size());
  Eigen::MatrixXi mask = Eigen::MatrixXi::Zero(p, p);
  auto in = open_input(path);
  std::string line;
  int lineno = 0;
  auto index_of = [&](const std::string& name) -> Eigen::Index {
    for (std::size_t j = 0; j < schema.size(); ++j)
      if (schema[j].name == name) return static_cast<Eigen::Index>(j);
    throw config_error(path + ":" + std::to_string(lineno) + ": unknown variable '" +
                       name + "'");
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected 'nameA,nameB'");
    const Eigen::Index a = index_of(cells[0]);
    const Eigen::Index b = index_of(cells[1]);
    if (a == b)
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": an edge cannot join a variable to itself");
    mask(a, b) = 1;
    mask(b, a) = 1;
  }
  return mask;
}

Eigen::VectorXd load_marginal_prior(const std::string& path,
                                    const std::vector<VariableSchema>& schema) {
  auto in = open_input(path);
  Eigen::VectorXd mu0(static_cast<Eigen::Index>(schema.size()));
  std::vector<bool> seen(schema.size(), false);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected 'name,value'");
    bool found = false;
    for (std::size_t j = 0; j < schema.size(); ++j)
      if (schema[j].name == cells[0]) {
        mu0[static_cast<Eigen::Index>(j)] =
            parse_double(cells[1], path + ":" + std::to_string(lineno));
        seen[j] = true;
        found = true;
        break;
      }
    if (!found)
      throw config_error(path + ":" + std::to_string(lineno) + ": unknown variable '" +
                         cells[0] + "'");
  }
  for (std::size_t j = 0; j < schema.size(); ++j)
    if (!seen[j])
      throw config_error(path + ": no prior mean for variable '" + schema[j].name + "'");
  return mu0;
}

void remap_labels(MixedDataset& data, const std::vector<std::string>& cause_names) {
  if (data.labels.empty()) {
    data.labels.assign(static_cast<std::size_t>(data.n()), kUnlabeled);
    data.class_names = cause_names;
    return;
  }
  std::vector<int> new_id(data.class_names.size(), -1);
  for (std::size_t c = 0; c < data.class_names.size(); ++c) {
    for (std::size_t k = 0; k < cause_names.size(); ++k)
      if (cause_names[k] == data.class_names[c]) {
        new_id[c] = static_cast<int>(k);
        break;
      }
    if (new_id[c] < 0)
      throw config_error("data label '" + data.class_names[c] +
                         "' does not appear in the conditional-probability prior");
  }
  for (auto& lab : data.labels)
    if (lab != kUnlabeled) lab = new_id[static_cast<std::size_t>(lab)];
  data.class_names = cause_names;
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& col_names,
                      const std::vector<std::string>& row_names, const std::string& path) {
  auto out = open_output(path);
  out << "";
  for (const auto& c : col_names) out << ',' << c;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << (row_names.empty() ? "r" + std::to_string(i + 1)
                              : row_names[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw config_error(path + ": empty file");
  const auto header = split_csv_line(strip_cr(line));
  const auto p = static_cast<Eigen::Index>(header.size()) - 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c)
      row.push_back(parse_double(cells[c], path));
    if (static_cast<Eigen::Index>(row.size()) != p)
      throw config_error(path + ": ragged matrix row");
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), p);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      m(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return m;
}

namespace {

void write_pairs_report(const Eigen::MatrixXd& inclusion, const Eigen::MatrixXd& R_mean,
                        const std::vector<std::string>& names,
                        const Eigen::MatrixXi* fixed, const std::string& path) {
  const Eigen::MatrixXd P = pd_inverse(R_mean, "pairs report: posterior mean R");
  struct Row {
    double prob, pc;
    Eigen::Index j, k;
    bool fixed;
  };
  std::vector<Row> rows;
  for (Eigen::Index j = 0; j < R_mean.rows(); ++j)
    for (Eigen::Index k = j + 1; k < R_mean.cols(); ++k) {
      const bool is_fixed = fixed != nullptr && fixed->size() > 0 && (*fixed)(j, k) != 0;
      if (inclusion(j, k) > 0.5 || is_fixed) {
        const double pc = -P(j, k) / std::sqrt(P(j, j) * P(k, k));
        rows.push_back({inclusion(j, k), pc, j, k, is_fixed});
      }
    }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.j != b.j ? a.j < b.j : a.k < b.k;
  });
  auto out = open_output(path);
  out << "prob,var1,var2,partial_corr,fixed\n";
  for (const auto& r : rows)
    out << format_double(r.prob) << ',' << names[static_cast<std::size_t>(r.j)] << ','
        << names[static_cast<std::size_t>(r.k)] << ',' << format_double(r.pc) << ','
        << (r.fixed ? 1 : 0) << '\n';
}

} // namespace

void write_manifest(const Manifest& manifest, const std::string& path) {
  auto out = open_output(path);
  out << "{\n";
  bool first = true;
  for (const auto& [k, v] : manifest) {
    if (!first) out << ",\n";
    first = false;
    std::string escaped;
    for (char c : v) {
      if (c == '"' || c == '\\') escaped.push_back('\\');
      escaped.push_back(c);
    }
    out << "  \"" << k << "\": \"" << escaped << "\"";
  }
  out << "\n}\n";
}

void emit_results(const RunArtifacts& a, const std::string& out_dir) {
  ensure_dir(out_dir);
  const auto& names = a.var_names;
  const std::string d = out_dir + "/";

  if (a.fit != nullptr) {
    write_matrix_csv(a.fit->R_mean, names, names, d + "posterior_mean_R.csv");
    {
      auto out = open_output(d + "posterior_mean_mu.csv");
      out << "variable,mu\n";
      for (Eigen::Index j = 0; j < a.fit->mu_mean.size(); ++j)
        out << names[static_cast<std::size_t>(j)] << ','
            << format_double(a.fit->mu_mean[j]) << '\n';
    }
    {
      auto out = open_output(d + "posterior_mean_lambda.csv");
      out << "variable,lambda\n";
      for (Eigen::Index j = 0; j < a.fit->Lambda_mean.size(); ++j)
        out << names[static_cast<std::size_t>(j)] << ','
            << format_double(a.fit->Lambda_mean[j]) << '\n';
    }
    if (a.fit->prior_kind == PriorKind::spike_slab) {
      write_matrix_csv(a.fit->inclusion_prob, names, names, d + "inclusion_prob.csv");
      write_pairs_report(a.fit->inclusion_prob, a.fit->R_mean, names, a.fixed_edges,
                         d + "pairs_report.csv");
    }
  }

  if (a.cls != nullptr) {
    write_matrix_csv(a.cls->R_mean, names, names, d + "posterior_mean_R.csv");
    write_matrix_csv(a.cls->mu_c_mean, names, a.cause_names, d + "posterior_mean_mu.csv");
    write_matrix_csv(a.cls->inclusion_prob, names, names, d + "inclusion_prob.csv");
    write_pairs_report(a.cls->inclusion_prob, a.cls->R_mean, names, a.fixed_edges,
                       d + "pairs_report.csv");
    {
      auto out = open_output(d + "csmf_summary.csv");
      out << "cause,mean,q025,q975\n";
      for (Eigen::Index c = 0; c < a.cls->csmf_mean.size(); ++c)
        out << a.cause_names[static_cast<std::size_t>(c)] << ','
            << format_double(a.cls->csmf_mean[c]) << ','
            << format_double(a.cls->csmf_lo[c]) << ','
            << format_double(a.cls->csmf_hi[c]) << '\n';
    }
    {
      auto out = open_output(d + "assignments.csv");
      out << "row";
      for (const auto& c : a.cause_names) out << ',' << c;
      out << '\n';
      for (Eigen::Index i = 0; i < a.cls->individual_probs.rows(); ++i) {
        out << (i + 1);
        for (Eigen::Index c = 0; c < a.cls->individual_probs.cols(); ++c)
          out << ',' << format_double(a.cls->individual_probs(i, c));
        out << '\n';
      }
    }
    {
      auto out = open_output(d + "trace_csmf.csv");
      out << "chain,draw";
      for (const auto& c : a.cause_names) out << ',' << c;
      out << '\n';
      for (std::size_t ch = 0; ch < a.cls->csmf_traces.size(); ++ch) {
        const auto& tr = a.cls->csmf_traces[ch];
        for (Eigen::Index t = 0; t < tr.rows(); ++t) {
          out << (ch + 1) << ',' << (t + 1);
          for (Eigen::Index c = 0; c < tr.cols(); ++c)
            out << ',' << format_double(tr(t, c));
          out << '\n';
        }
      }
    }
  }

  write_manifest(a.manifest, d + "run_manifest.json");
}

} // namespace lgmix

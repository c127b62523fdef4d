#include "tpreg/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tpreg {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim whitespace and surrounding quotes
    const auto b = cell.find_first_not_of(" \t\r\"");
    const auto e = cell.find_last_not_of(" \t\r\"");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "na"; }

double to_number(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("could not parse number '" + s + "' in " + context);
  }
}

}  // namespace

Eigen::Index CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return Eigen::Index(j);
  return -1;
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path.string());
  t.header = split_line(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != t.header.size())
      throw std::runtime_error(path.string() + ": row " + std::to_string(lineno) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t j = 0; j < header.size(); ++j)
    out << header[j] << (j + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows)
    for (std::size_t j = 0; j < row.size(); ++j)
      out << row[j] << (j + 1 < row.size() ? "," : "\n");
}

StatusConvention status_convention_from_string(const std::string& s) {
  if (s == "event1_censor0") return StatusConvention::Event1Censor0;
  if (s == "event2_censor1") return StatusConvention::Event2Censor1;
  throw std::invalid_argument("unknown status convention: " + s);
}

Dataset load_dataset(const std::filesystem::path& csv_path, const DataConfig& config) {
  const CsvTable t = CsvTable::read(csv_path);
  const Eigen::Index time_col = t.column(config.time_column);
  const Eigen::Index status_col = t.column(config.status_column);
  if (time_col < 0)
    throw std::runtime_error("missing time column '" + config.time_column + "'");
  if (status_col < 0)
    throw std::runtime_error("missing status column '" + config.status_column + "'");
  std::vector<Eigen::Index> cov_cols;
  for (const auto& name : config.covariate_columns) {
    const Eigen::Index c = t.column(name);
    if (c < 0) throw std::runtime_error("missing covariate column '" + name + "'");
    cov_cols.push_back(c);
  }

  // complete cases on every used column
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    bool ok = !is_missing(row[std::size_t(time_col)]) &&
              !is_missing(row[std::size_t(status_col)]);
    for (auto c : cov_cols) ok = ok && !is_missing(row[std::size_t(c)]);
    if (ok) keep.push_back(i);
  }
  if (keep.empty()) throw std::runtime_error("no complete rows in " + csv_path.string());

  const Eigen::Index p =
      Eigen::Index(cov_cols.size()) + (config.add_intercept ? 1 : 0);
  Dataset data;
  data.design.resize(Eigen::Index(keep.size()), p);
  data.obs.reserve(keep.size());
  if (config.add_intercept) data.column_names.push_back("intercept");
  for (const auto& name : config.covariate_columns) data.column_names.push_back(name);

  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto& row = t.rows[keep[k]];
    const std::string ctx = "row " + std::to_string(keep[k] + 2);
    Eigen::Index j = 0;
    if (config.add_intercept) data.design(Eigen::Index(k), j++) = 1.0;
    for (auto c : cov_cols)
      data.design(Eigen::Index(k), j++) = to_number(row[std::size_t(c)], ctx);

    const double time_raw = to_number(row[std::size_t(time_col)], ctx);
    if (config.log_time && !(time_raw > 0.0))
      throw std::runtime_error("non-positive time in " + ctx);
    const double y = config.log_time ? std::log(time_raw) : time_raw;

    const double status = to_number(row[std::size_t(status_col)], ctx);
    bool event;
    if (config.status_convention == StatusConvention::Event1Censor0) {
      if (status != 0.0 && status != 1.0)
        throw std::runtime_error("status outside {0,1} in " + ctx);
      event = status == 1.0;
    } else {
      if (status != 1.0 && status != 2.0)
        throw std::runtime_error("status outside {1,2} in " + ctx);
      event = status == 2.0;
    }
    data.obs.push_back(event ? CensoredObservation::exact(y)
                             : CensoredObservation::right_censored(y));
  }
  data.validate();
  return data;
}

void save_chain_csv(const Chain& chain, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  for (Eigen::Index j = 0; j < chain.dim(); ++j) {
    const std::string name = Eigen::Index(chain.parameter_names.size()) == chain.dim()
                                 ? chain.parameter_names[j]
                                 : "p" + std::to_string(j + 1);
    out << name << ",";
  }
  out << "logpost\n";
  for (Eigen::Index m = 0; m < chain.size(); ++m) {
    for (Eigen::Index j = 0; j < chain.dim(); ++j) out << chain.draws(m, j) << ",";
    out << chain.logpost[m] << "\n";
  }
}

Chain load_chain_csv(const std::filesystem::path& path) {
  const CsvTable t = CsvTable::read(path);
  if (t.header.empty() || t.header.back() != "logpost")
    throw std::runtime_error("chain csv must end with a logpost column");
  Chain chain;
  const Eigen::Index dim = Eigen::Index(t.header.size()) - 1;
  chain.parameter_names.assign(t.header.begin(), t.header.end() - 1);
  chain.draws.resize(Eigen::Index(t.rows.size()), dim);
  chain.logpost.resize(Eigen::Index(t.rows.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (Eigen::Index j = 0; j < dim; ++j)
      chain.draws(Eigen::Index(i), j) =
          to_number(t.rows[i][std::size_t(j)], "chain row " + std::to_string(i));
    chain.logpost[Eigen::Index(i)] =
        to_number(t.rows[i].back(), "chain row " + std::to_string(i));
  }
  return chain;
}

void save_chain_sidecar(const Chain& chain, const ModelSpec& spec,
                        const std::filesystem::path& path) {
  nlohmann::json j;
  j["model"] = spec.name();
  j["baseline"] = to_string(spec.baseline);
  j["two_piece"] = spec.two_piece;
  j["parameterisation"] = to_string(spec.parameterisation);
  j["q"] = spec.q;
  j["gamma_prior"] = {{"a0", spec.gamma_a0}, {"b0", spec.gamma_b0}};
  j["delta_prior_d"] = spec.delta_prior_d;
  j["n_keep"] = chain.size();
  j["acceptance_rate"] = chain.acceptance_rate;
  j["seed"] = chain.seed;
  j["parameters"] = chain.parameter_names;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace tpreg

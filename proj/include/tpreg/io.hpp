#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tpreg/model.hpp"
#include "tpreg/sampler.hpp"

namespace tpreg {

// minimal CSV table: header row plus string cells ("NA" and "" mean missing)
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  Eigen::Index column(const std::string& name) const;  // -1 when absent
  static CsvTable read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;
};

enum class StatusConvention { Event1Censor0, Event2Censor1 };

StatusConvention status_convention_from_string(const std::string& s);

struct DataConfig {
  std::string time_column = "time";
  std::string status_column = "status";
  std::vector<std::string> covariate_columns;
  StatusConvention status_convention = StatusConvention::Event1Censor0;
  bool log_time = true;       // AFT: responses are log survival times
  bool add_intercept = true;  // prepend a column of ones
};

// Builds the model dataset from a CSV file: rows with missing values in any
// used column are dropped (complete-case filter). Status marks exact vs
// right-censored responses.
Dataset load_dataset(const std::filesystem::path& csv_path, const DataConfig& config);

// chain persistence: columnar CSV of draws plus a JSON sidecar
void save_chain_csv(const Chain& chain, const std::filesystem::path& path);
Chain load_chain_csv(const std::filesystem::path& path);
void save_chain_sidecar(const Chain& chain, const ModelSpec& spec,
                        const std::filesystem::path& path);

}  // namespace tpreg

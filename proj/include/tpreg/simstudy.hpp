#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpreg/model.hpp"
#include "tpreg/sampler.hpp"

namespace tpreg {

enum class CovariateLaw { StandardNormal, RightHalfNormal };

// Data-generating process for one simulation scenario: a linear model with
// intercept, two covariates, and two-piece errors, optionally truncating the
// response into right-censored observations.
struct Scenario {
  TwoPieceParams error{};                    // mu is forced to 0
  std::vector<double> beta_true{1.0, 2.0, 3.0};
  std::size_t n = 100;
  CovariateLaw covariate_law = CovariateLaw::StandardNormal;
  double covariate_scale = 1.0;              // half-normal scale when applicable
  std::optional<double> censor_threshold;    // on the time scale when
                                             // log_scale_response, else raw
  bool log_scale_response = false;           // DGP is log(T) = x'b + e

  static Scenario one(double gamma_true, std::size_t n);    // TP normal errors
  static Scenario two(double gamma_true, std::size_t n);    // TP student-t, df 2
  static Scenario three(double gamma_true, std::size_t n);  // TP student-t, df 5
  static Scenario four(double gamma_true, std::size_t n);   // censored AFT
};

Dataset generate(const Scenario& scenario, std::uint64_t seed);

struct FitConfig {
  ModelSpec spec;
  std::size_t n_keep = 240;
  std::size_t burn_in = 5000;
  std::size_t thin = 25;
  bool compute_mle = true;
  bool compute_bf = true;
  std::size_t threads = 1;  // replications run in parallel; reduction stays
                            // in replication-index order
};

struct ParameterStudyRow {
  std::string parameter;
  double true_value = 0.0;
  double coverage = 0.0;        // fraction of replications covering the truth
  double median_of_medians = 0.0;
  double median_map = 0.0;
  double median_mle = 0.0;
};

struct ReplicationRecord {
  std::uint64_t seed = 0;
  bool ok = false;
  std::vector<double> medians, lower, upper, maps, mles;
  double bf01 = 0.0;
  double censored_fraction = 0.0;
};

struct StudyTable {
  std::vector<ParameterStudyRow> rows;
  double median_bf01 = 0.0;
  std::size_t n_reps = 0;
  std::size_t n_failed = 0;
  std::vector<ReplicationRecord> records;  // per-replication audit trail

  std::string to_csv() const;
};

StudyTable run_study(const Scenario& scenario, std::size_t n_reps,
                     const FitConfig& fit, std::uint64_t master_seed);

}  // namespace tpreg

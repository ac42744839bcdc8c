#ifndef MCORDER_EXPERIMENT_H_
#define MCORDER_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcorder/gdl.h"
#include "mcorder/mtd.h"
#include "mcorder/penalized.h"
#include "mcorder/sequence.h"

namespace mcorder {

// Declared in canonical output order.
enum class Estimator { kAic, kBic, kEdc, kGdl };

std::string_view EstimatorName(Estimator e);
// Case-insensitive "aic", "bic", "edc", "gdl".
Estimator ParseEstimator(std::string_view name);
// Comma-separated list, e.g. "gdl,aic". Sorted and deduplicated.
std::vector<Estimator> ParseEstimatorList(std::string_view list);
std::vector<Estimator> AllEstimators();

struct ExperimentConfig {
  MtdSpec generator;
  std::size_t n = 1000;
  int replications = 200;
  int max_order = 4;
  std::vector<Estimator> estimators = AllEstimators();
  GdlParams gdl_params;
  double edc_coefficient = 2.0;
  std::uint64_t master_seed = 20240601;
  // Defaults to 10 * kappa * m.
  std::optional<int> burn_in;
  std::string output_path;
  int workers = 1;

  void Validate() const;
};

// Accepted keys: generator (builtin name, spec path, or inline spec object),
// n, replications, B, estimators, gdl_params {lambda, df_normalize,
// delta2_denominator}, edc_coefficient, master_seed, burn_in, output_path,
// workers. B defaults to DefaultOrderBound(n, m).
ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfigFile(const std::string& path);

struct EstimatorColumn {
  Estimator estimator;
  // counts[k] for k = 0..B; counts[B+1] holds saturated GDL verdicts.
  std::vector<int> counts;
  std::vector<double> percent;
};

struct ResultTable {
  int max_order = 0;
  std::vector<EstimatorColumn> columns;
  int replications = 0;
  int errors = 0;

  // Metadata.
  std::string generator_name;
  std::size_t n = 0;
  std::uint64_t master_seed = 0;
  std::string rng = kRngName;
  double wall_seconds = 0.0;
  // One entry per replication, in replication order; zero for failed ones.
  std::vector<std::uint64_t> sample_checksums;
  std::vector<std::string> error_messages;

  const EstimatorColumn& Column(Estimator e) const;
  // Selection percentage of order k; k = B + 1 reads the saturated row.
  double Percent(Estimator e, int k) const;
};

// Simulates `replications` samples, each from its own derived seed, and runs
// every requested estimator on the same sample. Results do not depend on
// `workers` or on scheduling. Throws NumericalError when more than 5% of the
// replications fail.
ResultTable RunExperiment(const ExperimentConfig& config);

enum class TableFormat { kCsv, kMarkdown };

// CSV: `estimator,k,percent` rows, k = 0..B, plus a `>=B+1` row when any
// verdict saturated. Markdown: one row per k, one column per estimator.
// Percentages carry one decimal.
std::string Render(const ResultTable& table, TableFormat format);

// Sidecar JSON with the config echo, seeds, checksums and timing.
std::string MetadataJson(const ResultTable& table);

struct CsvRow {
  std::string estimator;
  int k = 0;
  bool saturated = false;
  double percent = 0.0;
};
std::vector<CsvRow> ParseResultCsv(std::string_view csv);

// Single-sample report behind the `estimate` subcommand.
struct EstimateOptions {
  std::optional<int> max_order;
  GdlParams gdl_params;
  double edc_coefficient = 2.0;
  std::vector<Estimator> estimators = AllEstimators();
};

struct EstimateReport {
  std::size_t n = 0;
  int alphabet_size = 0;
  int max_order = 0;
  std::optional<OrderVerdict> gdl;
  std::vector<std::pair<Estimator, int>> penalized;
};

EstimateReport EstimateSample(const Sample& sample, const EstimateOptions& opts);
EstimateReport EstimateFile(const std::string& path, const EstimateOptions& opts);
std::string FormatReport(const EstimateReport& report);

}  // namespace mcorder

#endif  // MCORDER_EXPERIMENT_H_

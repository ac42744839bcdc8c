#include "mcorder/experiment.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mcorder/error.h"

namespace mcorder {

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string OneDecimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

PenaltyKind PenaltyFor(Estimator e) {
  switch (e) {
    case Estimator::kAic:
      return PenaltyKind::kAic;
    case Estimator::kBic:
      return PenaltyKind::kBic;
    default:
      return PenaltyKind::kEdc;
  }
}

DenominatorMode ParseDenominator(std::string_view s) {
  const std::string v = Lower(s);
  if (v == "observed") return DenominatorMode::kObserved;
  if (v == "expected") return DenominatorMode::kExpected;
  throw InvalidArgument("delta2 denominator must be 'observed' or 'expected', "
                        "got '" + std::string(s) + "'");
}

struct Replication {
  bool ok = false;
  std::vector<int> picks;
  std::uint64_t checksum = 0;
  std::string error;
};

Replication RunReplication(const ExperimentConfig& config,
                           const TransitionTensor& tensor, int burn_in,
                           int index) {
  Replication rep;
  try {
    const Sample sample =
        Simulate(tensor, config.n,
                 DeriveSeed(config.master_seed, static_cast<std::uint64_t>(index)),
                 burn_in);
    rep.checksum = sample.Checksum();
    for (Estimator e : config.estimators) {
      if (e == Estimator::kGdl) {
        GdlParams params = config.gdl_params;
        params.max_order_offset = config.max_order;
        rep.picks.push_back(EstimateOrder(sample, params).kappa_hat);
      } else {
        PenaltySpec spec{PenaltyFor(e), config.edc_coefficient};
        rep.picks.push_back(
            EstimateOrderPenalized(sample, config.max_order, spec));
      }
    }
    rep.ok = true;
  } catch (const std::exception& ex) {
    rep.picks.clear();
    rep.error = "replication " + std::to_string(index) + ": " + ex.what();
  }
  return rep;
}

}  // namespace

std::string_view EstimatorName(Estimator e) {
  switch (e) {
    case Estimator::kAic:
      return "AIC";
    case Estimator::kBic:
      return "BIC";
    case Estimator::kEdc:
      return "EDC";
    case Estimator::kGdl:
      return "GDL";
  }
  return "?";
}

Estimator ParseEstimator(std::string_view name) {
  const std::string v = Lower(Trim(name));
  if (v == "aic") return Estimator::kAic;
  if (v == "bic") return Estimator::kBic;
  if (v == "edc") return Estimator::kEdc;
  if (v == "gdl") return Estimator::kGdl;
  throw InvalidArgument("unknown estimator '" + std::string(name) +
                        "' (expected gdl, aic, bic or edc)");
}

std::vector<Estimator> ParseEstimatorList(std::string_view list) {
  std::vector<Estimator> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto piece = list.substr(
        start, comma == std::string_view::npos ? list.size() - start
                                               : comma - start);
    if (!Trim(piece).empty()) out.push_back(ParseEstimator(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw InvalidArgument("estimator list is empty");
  return out;
}

std::vector<Estimator> AllEstimators() {
  return {Estimator::kAic, Estimator::kBic, Estimator::kEdc, Estimator::kGdl};
}

void ExperimentConfig::Validate() const {
  generator.Validate();
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (replications < 1) throw InvalidArgument("replications must be >= 1");
  if (max_order < 0) throw InvalidArgument("B must be >= 0");
  if (estimators.empty()) throw InvalidArgument("estimator set is empty");
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  if (burn_in && *burn_in < 0) throw InvalidArgument("burn_in must be >= 0");
  gdl_params.Validate();
  const bool needs_loglog =
      std::find_if(estimators.begin(), estimators.end(), [](Estimator e) {
        return e == Estimator::kGdl || e == Estimator::kEdc;
      }) != estimators.end();
  if (needs_loglog && n < kMinGdlSampleSize) {
    throw InvalidArgument("GDL and EDC need n >= " +
                          std::to_string(kMinGdlSampleSize));
  }
  if (static_cast<std::size_t>(max_order) + 2 > n) {
    throw InvalidArgument("B=" + std::to_string(max_order) +
                          " needs n >= B+2");
  }
}

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config JSON: ") + e.what(), e.byte);
  }
  ExperimentConfig cfg;
  try {
    const auto& gen = j.at("generator");
    if (gen.is_string()) {
      cfg.generator = ResolveGenerator(gen.get<std::string>());
    } else {
      cfg.generator = ParseMtdSpec(gen.dump());
    }
    cfg.n = j.at("n").get<std::size_t>();
    cfg.replications = j.value("replications", 200);
    if (j.contains("B")) {
      cfg.max_order = j.at("B").get<int>();
    } else {
      cfg.max_order = DefaultOrderBound(cfg.n, cfg.generator.alphabet_size);
    }
    if (j.contains("estimators")) {
      std::string joined;
      for (const auto& e : j.at("estimators")) {
        joined += e.get<std::string>() + ",";
      }
      cfg.estimators = ParseEstimatorList(joined);
    }
    if (j.contains("gdl_params")) {
      const auto& g = j.at("gdl_params");
      cfg.gdl_params.lambda = g.value("lambda", cfg.gdl_params.lambda);
      cfg.gdl_params.df_normalize =
          g.value("df_normalize", cfg.gdl_params.df_normalize);
      if (g.contains("delta2_denominator")) {
        cfg.gdl_params.delta2.denominator =
            ParseDenominator(g.at("delta2_denominator").get<std::string>());
      }
    }
    cfg.edc_coefficient = j.value("edc_coefficient", cfg.edc_coefficient);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("burn_in")) cfg.burn_in = j.at("burn_in").get<int>();
    cfg.output_path = j.value("output_path", std::string());
    cfg.workers = j.value("workers", 1);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config JSON: ") + e.what());
  }
  cfg.gdl_params.max_order_offset = cfg.max_order;
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadExperimentConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseExperimentConfig(buf.str());
}

const EstimatorColumn& ResultTable::Column(Estimator e) const {
  for (const auto& c : columns) {
    if (c.estimator == e) return c;
  }
  throw InvalidArgument("estimator " + std::string(EstimatorName(e)) +
                        " not in result table");
}

double ResultTable::Percent(Estimator e, int k) const {
  const auto& c = Column(e);
  if (k < 0 || static_cast<std::size_t>(k) >= c.percent.size()) return 0.0;
  return c.percent[static_cast<std::size_t>(k)];
}

ResultTable RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const auto started = std::chrono::steady_clock::now();
  const TransitionTensor tensor = BuildTensor(config.generator);
  const int burn_in = config.burn_in.value_or(DefaultBurnIn(tensor));

  std::vector<Replication> reps(static_cast<std::size_t>(config.replications));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < config.replications; r = next++) {
      reps[static_cast<std::size_t>(r)] =
          RunReplication(config, tensor, burn_in, r);
    }
  };
  const int threads = std::min(config.workers, config.replications);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ResultTable table;
  table.max_order = config.max_order;
  table.replications = config.replications;
  table.generator_name = config.generator.name;
  table.n = config.n;
  table.master_seed = config.master_seed;
  const auto rows = static_cast<std::size_t>(config.max_order) + 2;
  for (Estimator e : config.estimators) {
    table.columns.push_back({e, std::vector<int>(rows, 0), {}});
  }
  for (const auto& rep : reps) {
    table.sample_checksums.push_back(rep.checksum);
    if (!rep.ok) {
      ++table.errors;
      table.error_messages.push_back(rep.error);
      continue;
    }
    for (std::size_t e = 0; e < rep.picks.size(); ++e) {
      ++table.columns[e].counts[static_cast<std::size_t>(rep.picks[e])];
    }
  }
  if (table.errors * 20 > config.replications) {
    throw NumericalError(std::to_string(table.errors) + " of " +
                         std::to_string(config.replications) +
                         " replications failed; first: " +
                         table.error_messages.front());
  }
  const int ok = config.replications - table.errors;
  for (auto& column : table.columns) {
    column.percent.resize(rows, 0.0);
    for (std::size_t k = 0; k < rows; ++k) {
      column.percent[k] = ok > 0 ? 100.0 * column.counts[k] / ok : 0.0;
    }
  }
  table.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  return table;
}

std::string Render(const ResultTable& table, TableFormat format) {
  const auto saturated_row = static_cast<std::size_t>(table.max_order) + 1;
  const std::string saturated_label = ">=" + std::to_string(table.max_order + 1);
  bool any_saturated = false;
  for (const auto& c : table.columns) {
    if (c.counts[saturated_row] > 0) any_saturated = true;
  }

  std::ostringstream out;
  if (format == TableFormat::kCsv) {
    out << "estimator,k,percent\n";
    for (const auto& c : table.columns) {
      for (std::size_t k = 0; k < saturated_row; ++k) {
        out << EstimatorName(c.estimator) << ',' << k << ','
            << OneDecimal(c.percent[k]) << '\n';
      }
      if (c.counts[saturated_row] > 0) {
        out << EstimatorName(c.estimator) << ',' << saturated_label << ','
            << OneDecimal(c.percent[saturated_row]) << '\n';
      }
    }
    return out.str();
  }

  out << "| k |";
  for (const auto& c : table.columns) out << ' ' << EstimatorName(c.estimator) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << "---:|";
  out << '\n';
  const std::size_t rows = any_saturated ? saturated_row + 1 : saturated_row;
  for (std::size_t k = 0; k < rows; ++k) {
    out << "| " << (k == saturated_row ? saturated_label : std::to_string(k))
        << " |";
    for (const auto& c : table.columns) out << ' ' << OneDecimal(c.percent[k]) << " |";
    out << '\n';
  }
  if (table.errors > 0) {
    out << "\nerrors: " << table.errors << " of " << table.replications
        << " replications\n";
  }
  return out.str();
}

std::string MetadataJson(const ResultTable& table) {
  nlohmann::json j;
  j["generator"] = table.generator_name;
  j["n"] = table.n;
  j["B"] = table.max_order;
  j["replications"] = table.replications;
  j["errors"] = table.errors;
  j["master_seed"] = table.master_seed;
  j["rng"] = table.rng;
  j["wall_seconds"] = table.wall_seconds;
  j["sample_checksums"] = table.sample_checksums;
  j["error_messages"] = table.error_messages;
  nlohmann::json counts;
  for (const auto& c : table.columns) {
    counts[std::string(EstimatorName(c.estimator))] = c.counts;
  }
  j["counts"] = counts;
  return j.dump(2);
}

std::vector<CsvRow> ParseResultCsv(std::string_view csv) {
  std::vector<CsvRow> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || Trim(line).empty()) continue;
    std::istringstream fields(line);
    std::string estimator, k, percent;
    if (!std::getline(fields, estimator, ',') || !std::getline(fields, k, ',') ||
        !std::getline(fields, percent)) {
      throw ParseError("malformed CSV line " + std::to_string(line_no),
                       line_no);
    }
    CsvRow row;
    row.estimator = estimator;
    try {
      if (k.rfind(">=", 0) == 0) {
        row.saturated = true;
        row.k = std::stoi(k.substr(2));
      } else {
        row.k = std::stoi(k);
      }
      row.percent = std::stod(percent);
    } catch (const std::exception&) {
      throw ParseError("bad number on CSV line " + std::to_string(line_no),
                       line_no);
    }
    rows.push_back(row);
  }
  return rows;
}

EstimateReport EstimateSample(const Sample& sample,
                              const EstimateOptions& opts) {
  if (sample.size() < kMinGdlSampleSize) {
    throw InvalidArgument("order estimation needs n >= " +
                          std::to_string(kMinGdlSampleSize) + ", got n=" +
                          std::to_string(sample.size()));
  }
  EstimateReport report;
  report.n = sample.size();
  report.alphabet_size = sample.alphabet_size();
  report.max_order = opts.max_order.value_or(
      DefaultOrderBound(sample.size(), sample.alphabet_size()));
  if (report.max_order < 0) throw InvalidArgument("B must be >= 0");
  if (static_cast<std::size_t>(report.max_order) + 2 > sample.size()) {
    throw InvalidArgument("B=" + std::to_string(report.max_order) +
                          " needs n >= B+2");
  }
  for (Estimator e : opts.estimators) {
    if (e == Estimator::kGdl) {
      GdlParams params = opts.gdl_params;
      params.max_order_offset = report.max_order;
      report.gdl = EstimateOrder(sample, params);
    } else {
      report.penalized.emplace_back(
          e, EstimateOrderPenalized(sample, report.max_order,
                                    {PenaltyFor(e), opts.edc_coefficient}));
    }
  }
  return report;
}

EstimateReport EstimateFile(const std::string& path,
                            const EstimateOptions& opts) {
  return EstimateSample(ReadSampleFile(path), opts);
}

std::string FormatReport(const EstimateReport& report) {
  std::ostringstream out;
  out << "n=" << report.n << " m=" << report.alphabet_size
      << " B=" << report.max_order << '\n';
  for (const auto& [e, k] : report.penalized) {
    out << EstimatorName(e) << ": " << k << '\n';
  }
  if (report.gdl) {
    const auto& v = *report.gdl;
    out << "GDL: ";
    if (v.saturated) {
      out << ">=" << v.kappa_hat << " (saturated)";
    } else {
      out << v.kappa_hat;
    }
    out << "\nGDL profile:";
    char buf[32];
    for (double g : v.profile.gdl) {
      std::snprintf(buf, sizeof(buf), " %.6f", g);
      out << buf;
    }
    out << "\nsigma:";
    for (int s : v.sigma) out << ' ' << s;
    out << '\n';
  }
  return out.str();
}

}  // namespace mcorder

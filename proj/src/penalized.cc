#include "mcorder/penalized.h"

#include <cmath>
#include <vector>

#include "mcorder/error.h"
#include "mcorder/gdl.h"

namespace mcorder {

std::string_view PenaltyName(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::kAic:
      return "AIC";
    case PenaltyKind::kBic:
      return "BIC";
    case PenaltyKind::kEdc:
      return "EDC";
  }
  return "?";
}

double LogMaxLikelihood(const Sample& sample, int order) {
  if (order < 0) throw InvalidArgument("order must be >= 0");
  if (static_cast<std::size_t>(order) + 1 > sample.size()) {
    throw InvalidArgument("order k=" + std::to_string(order) +
                          " needs n >= k+1, got n=" +
                          std::to_string(sample.size()));
  }
  const CountTable table = CountWords(sample, order + 1);
  const auto m = static_cast<std::uint64_t>(sample.alphabet_size());

  // Windows sharing a prefix are adjacent in code order, so prefix totals can
  // be accumulated in one sweep.
  std::map<std::uint64_t, std::uint64_t> prefix_total;
  for (const auto& [code, count] : table.counts()) {
    prefix_total[code / m] += count;
  }
  double loglik = 0.0;
  for (const auto& [code, count] : table.counts()) {
    const auto c = static_cast<double>(count);
    loglik += c * std::log(c / static_cast<double>(prefix_total[code / m]));
  }
  return loglik;
}

double FreeParameters(int alphabet_size, int order) {
  return static_cast<double>(WordSpaceSize(alphabet_size, order)) *
         static_cast<double>(alphabet_size - 1);
}

double PenalizedScore(const Sample& sample, int order, const PenaltySpec& spec) {
  const double loglik = LogMaxLikelihood(sample, order);
  const double df = FreeParameters(sample.alphabet_size(), order);
  const auto n = static_cast<double>(sample.size());
  double penalty = 0.0;
  switch (spec.kind) {
    case PenaltyKind::kAic:
      penalty = 2.0 * df;
      break;
    case PenaltyKind::kBic:
      penalty = df * std::log(n);
      break;
    case PenaltyKind::kEdc:
      if (!(spec.edc_coefficient > 0.0)) {
        throw InvalidArgument("EDC coefficient must be positive");
      }
      penalty = spec.edc_coefficient * df * 0.5 * IteratedLogScale(sample.size());
      break;
  }
  return -2.0 * loglik + penalty;
}

int ArgMinScore(std::span<const double> scores) {
  if (scores.empty()) throw InvalidArgument("no scores to compare");
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] < scores[best]) best = k;
  }
  return static_cast<int>(best);
}

int EstimateOrderPenalized(const Sample& sample, int max_order,
                           const PenaltySpec& spec) {
  if (max_order < 0) throw InvalidArgument("order bound B must be >= 0");
  if (static_cast<std::size_t>(max_order) + 1 > sample.size()) {
    throw InvalidArgument("order bound B=" + std::to_string(max_order) +
                          " needs n >= B+1");
  }
  std::vector<double> scores;
  for (int k = 0; k <= max_order; ++k) {
    scores.push_back(PenalizedScore(sample, k, spec));
  }
  return ArgMinScore(scores);
}

}  // namespace mcorder

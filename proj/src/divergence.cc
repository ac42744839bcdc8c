#include "mcorder/divergence.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mcorder/error.h"

namespace mcorder {

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidArgument("empty distribution");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
      throw InvalidArgument("probability " + std::to_string(i) +
                            " is negative or not finite");
    }
    sum += probs_[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("probabilities sum to " + std::to_string(sum) +
                          ", expected 1");
  }
}

DivergenceGenerator KullbackLeiblerGenerator() {
  return {[](double t) { return t * std::log(t); }, 0.0,
          std::numeric_limits<double>::infinity()};
}

DivergenceGenerator ChiSquareGenerator() {
  return {[](double t) { return (t - 1.0) * (t - 1.0); }, 1.0,
          std::numeric_limits<double>::infinity()};
}

double FDivergence(const DiscreteDistribution& p, const DiscreteDistribution& q,
                   const DivergenceGenerator& gen) {
  if (p.size() != q.size()) {
    throw InvalidArgument("support mismatch: " + std::to_string(p.size()) +
                          " vs " + std::to_string(q.size()));
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double pa = p[a];
    const double qa = q[a];
    if (qa == 0.0) {
      if (pa == 0.0) continue;
      sum += pa * gen.slope_at_infinity;
    } else if (pa == 0.0) {
      sum += qa * gen.value_at_zero;
    } else {
      sum += qa * gen.f(pa / qa);
    }
  }
  // Rounding can push an exact zero slightly negative.
  return sum < 0.0 ? 0.0 : sum;
}

double KlDivergence(const DiscreteDistribution& p,
                    const DiscreteDistribution& q) {
  return FDivergence(p, q, KullbackLeiblerGenerator());
}

double Chi2Divergence(const DiscreteDistribution& p,
                      const DiscreteDistribution& q) {
  return FDivergence(p, q, ChiSquareGenerator());
}

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), observed_(rows * cols, 0) {}

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols,
                                   std::vector<std::uint64_t> observed)
    : rows_(rows), cols_(cols), observed_(std::move(observed)) {
  if (observed_.size() != rows * cols) {
    throw InvalidArgument("contingency table needs " +
                          std::to_string(rows * cols) + " cells, got " +
                          std::to_string(observed_.size()));
  }
  total_ = std::accumulate(observed_.begin(), observed_.end(),
                           std::uint64_t{0});
}

void ContingencyTable::Add(std::size_t i, std::size_t j, std::uint64_t count) {
  observed_[i * cols_ + j] += count;
  total_ += count;
}

std::vector<double> ExpectedFrequencies(const ContingencyTable& table) {
  if (table.total() == 0) {
    throw InvalidArgument("expected frequencies of an empty table");
  }
  std::vector<double> row_sum(table.rows(), 0.0);
  std::vector<double> col_sum(table.cols(), 0.0);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const auto o = static_cast<double>(table.at(i, j));
      row_sum[i] += o;
      col_sum[j] += o;
    }
  }
  const auto total = static_cast<double>(table.total());
  std::vector<double> expected(table.rows() * table.cols());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      expected[i * table.cols() + j] = row_sum[i] * col_sum[j] / total;
    }
  }
  return expected;
}

Delta2Result Delta2Hat(const ContingencyTable& table, double scale,
                       const Delta2Config& cfg) {
  if (!(scale > 0.0)) throw InvalidArgument("delta2 scale must be positive");
  if (table.total() == 0) return {0.0, true};

  std::vector<std::uint64_t> row_sum(table.rows(), 0);
  std::vector<std::uint64_t> col_sum(table.cols(), 0);
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      row_sum[i] += table.at(i, j);
      col_sum[j] += table.at(i, j);
    }
  }
  std::vector<std::size_t> live_rows;
  std::vector<std::size_t> live_cols;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (row_sum[i] > 0) live_rows.push_back(i);
  }
  for (std::size_t j = 0; j < table.cols(); ++j) {
    if (col_sum[j] > 0) live_cols.push_back(j);
  }
  if (live_rows.size() < 2 || live_cols.size() < 2) return {0.0, true};

  // (P_O - P_E)^2 / P_D = (O - E)^2 / (D T) with counts in place of
  // probabilities.
  const auto total = static_cast<double>(table.total());
  double sum = 0.0;
  for (std::size_t i : live_rows) {
    for (std::size_t j : live_cols) {
      const auto o = static_cast<double>(table.at(i, j));
      const double e = static_cast<double>(row_sum[i]) *
                       static_cast<double>(col_sum[j]) / total;
      const double diff = o - e;
      double denom = e;
      if (cfg.denominator == DenominatorMode::kObserved && o > 0.0) denom = o;
      sum += diff * diff / denom;
    }
  }
  return {scale * sum / total, false};
}

}  // namespace mcorder

#include "mcorder/gdl.h"

#include <cmath>
#include <string>

#include "mcorder/error.h"

namespace mcorder {

void GdlParams::Validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be a positive finite number");
  }
  if (max_order_offset < 0) {
    throw InvalidArgument("order bound B must be >= 0");
  }
}

int DefaultOrderBound(std::size_t n, int alphabet_size) {
  if (alphabet_size < 2) throw InvalidArgument("alphabet size must be >= 2");
  int floor_log = 0;
  std::uint64_t power = static_cast<std::uint64_t>(alphabet_size);
  while (power <= n) {
    ++floor_log;
    power *= static_cast<std::uint64_t>(alphabet_size);
  }
  return std::max(1, floor_log - 2);
}

double IteratedLogScale(std::size_t n) {
  if (n < kMinGdlSampleSize) {
    throw InvalidArgument("dependency levels need n >= " +
                          std::to_string(kMinGdlSampleSize) + ", got n=" +
                          std::to_string(n));
  }
  return 2.0 * std::log(std::log(static_cast<double>(n)));
}

namespace {

void CheckLevel(const Sample& sample, int eta) {
  if (eta < 0) throw InvalidArgument("context length must be >= 0");
  if (static_cast<std::size_t>(eta) + 2 > sample.size()) {
    throw InvalidArgument("context length " + std::to_string(eta) +
                          " needs n >= " + std::to_string(eta + 2) +
                          ", got n=" + std::to_string(sample.size()));
  }
}

}  // namespace

ContingencyTable ContextTable(const Sample& sample, const Word& alpha) {
  const int m = sample.alphabet_size();
  if (alpha.alphabet_size() != m) {
    throw InvalidArgument("context alphabet does not match the sample");
  }
  const int eta = alpha.length();
  CheckLevel(sample, eta);
  ContingencyTable table(static_cast<std::size_t>(m),
                         static_cast<std::size_t>(m));
  const auto& a = alpha.symbols();
  const std::size_t last = sample.size() - static_cast<std::size_t>(eta) - 2;
  for (std::size_t start = 0; start <= last; ++start) {
    bool match = true;
    for (int t = 0; t < eta && match; ++t) {
      match = sample[start + 1 + static_cast<std::size_t>(t)] ==
              a[static_cast<std::size_t>(t)];
    }
    if (!match) continue;
    table.Add(static_cast<std::size_t>(sample[start]),
              static_cast<std::size_t>(
                  sample[start + 1 + static_cast<std::size_t>(eta)]),
              1);
  }
  return table;
}

LdlResult LocalDependencyLevel(const Sample& sample, const Word& alpha,
                               const GdlParams& params) {
  params.Validate();
  const double scale = IteratedLogScale(sample.size());
  const ContingencyTable table = ContextTable(sample, alpha);
  const Delta2Result d =
      Delta2Hat(table, static_cast<double>(sample.size()), params.delta2);
  return {d.value / scale, d.degenerate};
}

LevelDetail EvaluateLevel(const Sample& sample, int eta,
                          const GdlParams& params) {
  params.Validate();
  if (eta > params.max_order_offset) {
    throw InvalidArgument("context length " + std::to_string(eta) +
                          " exceeds the bound B=" +
                          std::to_string(params.max_order_offset));
  }
  const double scale = IteratedLogScale(sample.size());
  CheckLevel(sample, eta);

  const int m = sample.alphabet_size();
  const auto mm = static_cast<std::uint64_t>(m);
  const std::uint64_t context_space = WordSpaceSize(m, eta);
  const CountTable windows = CountWords(sample, eta + 2);

  // Group the length eta+2 windows i.alpha.j by their inner context alpha.
  std::map<std::uint64_t, ContingencyTable> tables;
  for (const auto& [code, count] : windows.counts()) {
    const std::uint64_t j = code % mm;
    const std::uint64_t alpha = (code / mm) % context_space;
    const std::uint64_t i = code / mm / context_space;
    auto it = tables.try_emplace(alpha, static_cast<std::size_t>(m),
                                 static_cast<std::size_t>(m))
                  .first;
    it->second.Add(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                   count);
  }

  const auto n = static_cast<double>(sample.size());
  LevelDetail level;
  level.eta = eta;
  level.all_degenerate = true;
  for (const auto& [alpha, table] : tables) {
    const Delta2Result d = Delta2Hat(table, n, params.delta2);
    const double ldl = d.value / scale;
    const double weight = static_cast<double>(table.total()) / n;
    level.ldl.emplace(alpha, ldl);
    level.weights.emplace(alpha, weight);
    if (!d.degenerate) level.all_degenerate = false;
    level.weighted_sum += weight * ldl;
  }
  level.exponent = level.weighted_sum;
  if (params.df_normalize) {
    level.exponent /= static_cast<double>(context_space) *
                      static_cast<double>((m - 1) * (m - 1));
  }
  level.gdl = std::exp(-params.lambda * level.exponent);
  return level;
}

double GlobalDependencyLevel(const Sample& sample, int eta,
                             const GdlParams& params) {
  return EvaluateLevel(sample, eta, params).gdl;
}

DependencyProfile ComputeProfile(const Sample& sample,
                                 const GdlParams& params) {
  params.Validate();
  DependencyProfile profile;
  profile.max_order_offset = params.max_order_offset;
  for (int eta = 0; eta <= params.max_order_offset; ++eta) {
    profile.levels.push_back(EvaluateLevel(sample, eta, params));
    profile.gdl.push_back(profile.levels.back().gdl);
  }
  return profile;
}

std::vector<int> Binarize(std::span<const double> gdl) {
  std::vector<int> sigma(gdl.size());
  for (std::size_t i = 0; i < gdl.size(); ++i) sigma[i] = gdl[i] >= 0.5 ? 1 : 0;
  return sigma;
}

int TMap(std::span<const int> sigma) {
  if (sigma.empty()) throw InvalidArgument("T-map of an empty vector");
  for (std::size_t i = sigma.size(); i-- > 0;) {
    if (sigma[i] == 0) return static_cast<int>(i);
  }
  return -1;
}

OrderVerdict EstimateOrder(const Sample& sample, const GdlParams& params) {
  OrderVerdict verdict;
  verdict.profile = ComputeProfile(sample, params);
  verdict.sigma = Binarize(verdict.profile.gdl);
  const int t = TMap(verdict.sigma);
  verdict.kappa_hat = t + 1;
  verdict.saturated = t == params.max_order_offset;
  return verdict;
}

}  // namespace mcorder

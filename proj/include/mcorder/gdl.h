#ifndef MCORDER_GDL_H_
#define MCORDER_GDL_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mcorder/divergence.h"
#include "mcorder/sequence.h"

namespace mcorder {

// Smallest sample length for which 2 log(log n) is positive.
inline constexpr std::size_t kMinGdlSampleSize = 16;

struct GdlParams {
  // Rate of the exponential tail map x -> exp(-lambda x).
  double lambda = 1.0;
  // Divide the level sum by its degrees of freedom m^eta (m-1)^2.
  bool df_normalize = true;
  Delta2Config delta2;
  // Highest probed context length.
  int max_order_offset = 4;

  void Validate() const;
};

// max(1, floor(log_m n) - 2): the largest bound whose context space
// m^(B+2) is still covered by a sample of length n.
int DefaultOrderBound(std::size_t n, int alphabet_size);

// 2 log(log n); InvalidArgument for n < 16.
double IteratedLogScale(std::size_t n);

// Observed table O(i,j) = N(i alpha j | X_1^n), an m x m table.
ContingencyTable ContextTable(const Sample& sample, const Word& alpha);

struct LdlResult {
  double value = 0.0;
  bool degenerate = false;
};

// Local dependency level of one context: delta2_hat(O^alpha) with scale n,
// divided by 2 log(log n).
LdlResult LocalDependencyLevel(const Sample& sample, const Word& alpha,
                               const GdlParams& params);

// Everything computed for one context length eta.
struct LevelDetail {
  int eta = 0;
  // GDL(eta) in (0, 1].
  double gdl = 1.0;
  // S = sum_alpha w(alpha) LDL(alpha).
  double weighted_sum = 0.0;
  // S, or S / (m^eta (m-1)^2) when df_normalize is set.
  double exponent = 0.0;
  // No context at this level produced a usable table.
  bool all_degenerate = false;
  // Keyed by context code, ascending.
  std::map<std::uint64_t, double> ldl;
  // w(alpha) = N(alpha)/n, counting the occurrences of alpha that have both a
  // predecessor and a successor in the sample (the table total).
  std::map<std::uint64_t, double> weights;
};

LevelDetail EvaluateLevel(const Sample& sample, int eta,
                          const GdlParams& params);

// GDL(eta) = exp(-lambda * exponent).
double GlobalDependencyLevel(const Sample& sample, int eta,
                             const GdlParams& params);

struct DependencyProfile {
  int max_order_offset = 0;
  std::vector<double> gdl;  // index eta = 0..B
  std::vector<LevelDetail> levels;
};

DependencyProfile ComputeProfile(const Sample& sample, const GdlParams& params);

// Nearest corner of {0,1}^(B+1) in squared distance: sigma(i) = 1 iff
// gdl(i) >= 0.5.
std::vector<int> Binarize(std::span<const double> gdl);

// -1 when every entry is 1, otherwise the largest index holding a 0.
int TMap(std::span<const int> sigma);

struct OrderVerdict {
  // T(sigma) + 1. When saturated this is B + 1, read as "at least B + 1".
  int kappa_hat = 0;
  bool saturated = false;
  std::vector<int> sigma;
  DependencyProfile profile;
};

OrderVerdict EstimateOrder(const Sample& sample, const GdlParams& params);

}  // namespace mcorder

#endif  // MCORDER_GDL_H_

#ifndef MCORDER_PENALIZED_H_
#define MCORDER_PENALIZED_H_

#include <span>
#include <string>
#include <string_view>

#include "mcorder/sequence.h"

namespace mcorder {

enum class PenaltyKind { kAic, kBic, kEdc };

// Penalized-likelihood criterion. edc_coefficient only applies to EDC.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::kBic;
  double edc_coefficient = 2.0;
};

std::string_view PenaltyName(PenaltyKind kind);

// Maximized log-likelihood of an order-k chain, using every window of length
// k+1: sum_w N(w) log(N(w) / N(prefix(w) .)).
double LogMaxLikelihood(const Sample& sample, int order);

// Free parameters of an order-k chain: m^k (m-1).
double FreeParameters(int alphabet_size, int order);

// -2 logML + penalty, with penalty 2 df (AIC), df log n (BIC) or
// c df log(log n) (EDC, needs n >= 16).
double PenalizedScore(const Sample& sample, int order, const PenaltySpec& spec);

// Index of the smallest score; ties go to the lowest index.
int ArgMinScore(std::span<const double> scores);

// argmin over k = 0..max_order of PenalizedScore; ties go to the smaller k.
int EstimateOrderPenalized(const Sample& sample, int max_order,
                           const PenaltySpec& spec);

}  // namespace mcorder

#endif  // MCORDER_PENALIZED_H_

#ifndef MCORDER_DIVERGENCE_H_
#define MCORDER_DIVERGENCE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mcorder {

// A probability vector over {0..m-1}. Entries are nonnegative and sum to 1
// within 1e-9.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<double> probs);

  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

// A convex generator f with f(1) = 0, plus the two limits the zero
// conventions need:
//   0 f(0/0) = 0,
//   f(0) = lim_{t->0} f(t)                  (value_at_zero),
//   0 f(a/0) = a lim_{u->inf} f(u)/u        (slope_at_infinity).
struct DivergenceGenerator {
  std::function<double(double)> f;
  double value_at_zero;
  double slope_at_infinity;
};

// f(t) = t log t.
DivergenceGenerator KullbackLeiblerGenerator();
// f(t) = (t - 1)^2.
DivergenceGenerator ChiSquareGenerator();

// D_f(P || Q) = sum_a Q(a) f(P(a)/Q(a)). Returns +infinity when a cell with
// Q(a) = 0 < P(a) meets an infinite slope (e.g. KL with disjoint support).
double FDivergence(const DiscreteDistribution& p, const DiscreteDistribution& q,
                   const DivergenceGenerator& gen);

// Relative entropy in nats.
double KlDivergence(const DiscreteDistribution& p,
                    const DiscreteDistribution& q);

// sum_a (P(a) - Q(a))^2 / Q(a).
double Chi2Divergence(const DiscreteDistribution& p,
                      const DiscreteDistribution& q);

// r x c table of nonnegative counts, row-major.
class ContingencyTable {
 public:
  ContingencyTable(std::size_t rows, std::size_t cols);
  ContingencyTable(std::size_t rows, std::size_t cols,
                   std::vector<std::uint64_t> observed);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t at(std::size_t i, std::size_t j) const {
    return observed_[i * cols_ + j];
  }
  void Add(std::size_t i, std::size_t j, std::uint64_t count);
  std::uint64_t total() const { return total_; }
  const std::vector<std::uint64_t>& observed() const { return observed_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint64_t> observed_;
  std::uint64_t total_ = 0;
};

// E(i,j) = rowsum(i) colsum(j) / T, row-major. Throws InvalidArgument on an
// empty table.
std::vector<double> ExpectedFrequencies(const ContingencyTable& table);

// Denominator of the delta-2 statistic: the observed cell probability
// (Neyman form, the default) or the expected one (Pearson form).
enum class DenominatorMode { kObserved, kExpected };

struct Delta2Config {
  DenominatorMode denominator = DenominatorMode::kObserved;
};

struct Delta2Result {
  double value = 0.0;
  // Fewer than two nonzero rows or columns; value is 0.
  bool degenerate = false;
};

// scale * sum_{i,j} (P_O - P_E)^2 / P_D with P_O = O/T and P_E = E/T.
// All-zero rows and columns are dropped first. In observed mode an empty
// cell (O = 0 < E) takes the expected denominator, so a single unseen
// transition cannot make the statistic infinite.
Delta2Result Delta2Hat(const ContingencyTable& table, double scale,
                       const Delta2Config& cfg = {});

}  // namespace mcorder

#endif  // MCORDER_DIVERGENCE_H_

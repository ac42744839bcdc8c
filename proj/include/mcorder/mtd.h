#ifndef MCORDER_MTD_H_
#define MCORDER_MTD_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mcorder/sequence.h"

namespace mcorder {

// Raftery mixture-transition-distribution generator:
//   q(a | i_1 ... i_kappa) = sum_t lags[t] * R(a, i_t),
// where i_1 is the oldest symbol of the context. R is column-stochastic
// (r[i][j] = R(i, j), each column j sums to 1).
//
// kappa = 0 describes an iid source: lags is empty and every column of R is
// the same distribution.
struct MtdSpec {
  std::string name;
  int alphabet_size = 0;
  int kappa = 0;
  std::vector<std::vector<double>> r;
  std::vector<double> lags;

  // Throws InvalidArgument naming the offending column or weight.
  void Validate() const;
};

// Dense kernel over all m^kappa contexts, row-major by context code.
class TransitionTensor {
 public:
  TransitionTensor(int alphabet_size, int kappa, std::vector<double> q);

  int alphabet_size() const { return alphabet_size_; }
  int kappa() const { return kappa_; }
  std::uint64_t context_count() const { return context_count_; }

  // Next-symbol distribution after the context with this code.
  std::span<const double> Row(std::uint64_t context_code) const;
  double Prob(std::uint64_t context_code, Symbol next) const {
    return Row(context_code)[static_cast<std::size_t>(next)];
  }
  double MinEntry() const;

 private:
  int alphabet_size_;
  int kappa_;
  std::uint64_t context_count_;
  std::vector<double> q_;
};

TransitionTensor BuildTensor(const MtdSpec& spec);

// One of the example chains from the reference simulation tables.
struct BuiltinExample {
  std::string name;   // e.g. "Q1-k2"
  std::string table;  // e.g. "Q1"
  // The matrix as printed: row i is the next-symbol law attached to a lagged
  // state i, i.e. the transpose of R.
  std::vector<std::vector<double>> printed;
  MtdSpec spec;
};

// Q1 with lags (1/2,1/2) and (1/3,1/3,1/3), Q2 iid (m=3); Q3 with the same
// two lag settings and Q4 iid (m=4).
const std::vector<BuiltinExample>& BuiltinExamples();
// Throws InvalidArgument listing the known names.
const BuiltinExample& FindBuiltin(const std::string& name);

// Name of the pseudorandom algorithm, recorded in experiment metadata.
inline constexpr const char* kRngName = "mt19937_64 seeded by splitmix64";

// Stream seed for one replication; independent of how many replications run.
std::uint64_t DeriveSeed(std::uint64_t master_seed, std::uint64_t index);

// Uniform double in [0, 1) from the top 53 bits of one draw.
double UniformUnit(std::mt19937_64& rng);

// 10 * kappa * m.
int DefaultBurnIn(const TransitionTensor& tensor);

// Draws a uniform initial context, discards `burn_in` symbols and returns
// the next n. Deterministic in (tensor, n, seed, burn_in).
Sample Simulate(const TransitionTensor& tensor, std::size_t n,
                std::uint64_t seed, int burn_in);

// Stationary law of the length-l windows (l >= kappa), indexed by word code.
// The kappa-window law comes from power iteration on the derived first-order
// chain; longer windows extend it through the kernel. NumericalError if the
// iteration has not reached `tolerance` (L1) after `max_iterations`.
std::vector<double> StationaryDistribution(const TransitionTensor& tensor,
                                           int word_length,
                                           double tolerance = 1e-13,
                                           int max_iterations = 1000000);

// JSON spec files: {"name", "m", "kappa", "R", "lags"}.
MtdSpec ParseMtdSpec(const std::string& json_text);
MtdSpec LoadMtdSpecFile(const std::string& path);
std::string MtdSpecToJson(const MtdSpec& spec);

// A builtin name, or otherwise a path to a JSON spec file.
MtdSpec ResolveGenerator(const std::string& name_or_path);

}  // namespace mcorder

#endif  // MCORDER_MTD_H_

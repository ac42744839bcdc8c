#include "mcorder/mtd.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mcorder/error.h"

namespace mcorder {

namespace {

constexpr double kSumTolerance = 1e-9;

std::vector<std::vector<double>> Transpose(
    const std::vector<std::vector<double>>& a) {
  std::vector<std::vector<double>> t(a.front().size(),
                                     std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

BuiltinExample MakeExample(std::string table, std::vector<double> lags,
                           std::vector<std::vector<double>> printed) {
  BuiltinExample ex;
  ex.table = std::move(table);
  ex.name = ex.table + "-k" + std::to_string(lags.size());
  ex.printed = std::move(printed);
  ex.spec.name = ex.name;
  ex.spec.alphabet_size = static_cast<int>(ex.printed.size());
  ex.spec.kappa = static_cast<int>(lags.size());
  ex.spec.r = Transpose(ex.printed);
  ex.spec.lags = std::move(lags);
  return ex;
}

}  // namespace

void MtdSpec::Validate() const {
  const std::string who = name.empty() ? "spec" : "spec '" + name + "'";
  if (alphabet_size < 2) throw InvalidArgument(who + ": m must be >= 2");
  if (kappa < 0) throw InvalidArgument(who + ": kappa must be >= 0");
  const auto m = static_cast<std::size_t>(alphabet_size);
  if (r.size() != m) {
    throw InvalidArgument(who + ": R must have " + std::to_string(m) + " rows");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (r[i].size() != m) {
      throw InvalidArgument(who + ": R row " + std::to_string(i + 1) +
                            " must have " + std::to_string(m) + " entries");
    }
    for (double v : r[i]) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(who + ": R row " + std::to_string(i + 1) +
                              " has a negative or non-finite entry");
      }
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m; ++i) col += r[i][j];
    if (std::abs(col - 1.0) > kSumTolerance) {
      throw InvalidArgument(who + ": R column " + std::to_string(j + 1) +
                            " sums to " + std::to_string(col) + ", not 1");
    }
  }
  if (lags.size() != static_cast<std::size_t>(kappa)) {
    throw InvalidArgument(who + ": expected " + std::to_string(kappa) +
                          " lag weights, got " + std::to_string(lags.size()));
  }
  if (kappa == 0) {
    for (std::size_t j = 1; j < m; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(r[i][j] - r[i][0]) > kSumTolerance) {
          throw InvalidArgument(who + ": kappa=0 needs identical R columns; "
                                "column " + std::to_string(j + 1) + " differs");
        }
      }
    }
    return;
  }
  double total = 0.0;
  for (std::size_t t = 0; t < lags.size(); ++t) {
    if (!(lags[t] > 0.0) || !std::isfinite(lags[t])) {
      throw InvalidArgument(who + ": lag weight " + std::to_string(t + 1) +
                            " must be positive");
    }
    total += lags[t];
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw InvalidArgument(who + ": lag weights sum to " +
                          std::to_string(total) + ", not 1");
  }
}

TransitionTensor::TransitionTensor(int alphabet_size, int kappa,
                                   std::vector<double> q)
    : alphabet_size_(alphabet_size),
      kappa_(kappa),
      context_count_(WordSpaceSize(alphabet_size, kappa)),
      q_(std::move(q)) {
  const auto m = static_cast<std::size_t>(alphabet_size);
  if (q_.size() != context_count_ * m) {
    throw InvalidArgument("transition tensor has the wrong number of entries");
  }
  for (std::uint64_t c = 0; c < context_count_; ++c) {
    double sum = 0.0;
    for (double v : Row(c)) {
      if (!(v >= 0.0)) throw InvalidArgument("negative transition probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw InvalidArgument("transition row for context code " +
                            std::to_string(c) + " sums to " +
                            std::to_string(sum));
    }
  }
}

std::span<const double> TransitionTensor::Row(std::uint64_t context_code) const {
  const auto m = static_cast<std::size_t>(alphabet_size_);
  return std::span<const double>(q_).subspan(context_code * m, m);
}

double TransitionTensor::MinEntry() const {
  return *std::min_element(q_.begin(), q_.end());
}

TransitionTensor BuildTensor(const MtdSpec& spec) {
  spec.Validate();
  const int m = spec.alphabet_size;
  const auto mm = static_cast<std::size_t>(m);
  const std::uint64_t contexts = WordSpaceSize(m, spec.kappa);
  std::vector<double> q(contexts * mm, 0.0);
  for (std::uint64_t c = 0; c < contexts; ++c) {
    const Word context = Word::FromCode(c, spec.kappa, m);
    for (std::size_t a = 0; a < mm; ++a) {
      double p = 0.0;
      if (spec.kappa == 0) {
        p = spec.r[a][0];
      } else {
        for (int t = 0; t < spec.kappa; ++t) {
          const auto it = static_cast<std::size_t>(context.symbols()[t]);
          p += spec.lags[static_cast<std::size_t>(t)] * spec.r[a][it];
        }
      }
      q[c * mm + a] = p;
    }
  }
  return TransitionTensor(m, spec.kappa, std::move(q));
}

const std::vector<BuiltinExample>& BuiltinExamples() {
  static const std::vector<BuiltinExample> examples = [] {
    const std::vector<std::vector<double>> q1 = {
        {0.05, 0.05, 0.90}, {0.05, 0.90, 0.05}, {0.90, 0.05, 0.05}};
    const std::vector<std::vector<double>> q2 = {
        {0.05, 0.05, 0.90}, {0.05, 0.05, 0.90}, {0.05, 0.05, 0.90}};
    const std::vector<std::vector<double>> q3 = {{0.05, 0.05, 0.05, 0.85},
                                                 {0.05, 0.05, 0.85, 0.05},
                                                 {0.05, 0.85, 0.05, 0.05},
                                                 {0.85, 0.05, 0.05, 0.05}};
    const std::vector<std::vector<double>> q4 = {{0.05, 0.05, 0.05, 0.85},
                                                 {0.05, 0.05, 0.05, 0.85},
                                                 {0.05, 0.05, 0.05, 0.85},
                                                 {0.05, 0.05, 0.05, 0.85}};
    const double half = 1.0 / 2.0;
    const double third = 1.0 / 3.0;
    return std::vector<BuiltinExample>{
        MakeExample("Q1", {half, half}, q1),
        MakeExample("Q1", {third, third, third}, q1),
        MakeExample("Q2", {}, q2),
        MakeExample("Q3", {half, half}, q3),
        MakeExample("Q3", {third, third, third}, q3),
        MakeExample("Q4", {}, q4),
    };
  }();
  return examples;
}

const BuiltinExample& FindBuiltin(const std::string& name) {
  for (const auto& ex : BuiltinExamples()) {
    if (ex.name == name) return ex;
  }
  std::string known;
  for (const auto& ex : BuiltinExamples()) {
    known += (known.empty() ? "" : ", ") + ex.name;
  }
  throw InvalidArgument("unknown builtin generator '" + name +
                        "' (known: " + known + ")");
}

std::uint64_t DeriveSeed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 finalizer applied to the master seed advanced `index + 1`
  // golden-ratio steps.
  std::uint64_t z = master_seed + (index + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int DefaultBurnIn(const TransitionTensor& tensor) {
  return 10 * tensor.kappa() * tensor.alphabet_size();
}

Sample Simulate(const TransitionTensor& tensor, std::size_t n,
                std::uint64_t seed, int burn_in) {
  if (n == 0) throw InvalidArgument("sample length must be >= 1");
  if (burn_in < 0) throw InvalidArgument("burn-in must be >= 0");
  const int m = tensor.alphabet_size();
  const auto mm = static_cast<std::uint64_t>(m);
  const std::uint64_t contexts = tensor.context_count();
  std::mt19937_64 rng(seed);

  auto draw = [&](std::uint64_t context) {
    const auto row = tensor.Row(context);
    const double u = UniformUnit(rng);
    double cumulative = 0.0;
    for (std::size_t a = 0; a + 1 < row.size(); ++a) {
      cumulative += row[a];
      if (u < cumulative) return static_cast<Symbol>(a);
    }
    return static_cast<Symbol>(row.size() - 1);
  };

  // The uniform initial context counts as the first kappa stream symbols.
  std::vector<Symbol> stream;
  stream.reserve(static_cast<std::size_t>(burn_in) + n);
  std::uint64_t context = 0;
  for (int t = 0; t < tensor.kappa(); ++t) {
    auto s = static_cast<Symbol>(UniformUnit(rng) * static_cast<double>(m));
    stream.push_back(s);
    context = (context * mm + static_cast<std::uint64_t>(s)) % contexts;
  }
  const std::size_t total = static_cast<std::size_t>(burn_in) + n;
  while (stream.size() < total) {
    const Symbol s = draw(context);
    stream.push_back(s);
    context = (context * mm + static_cast<std::uint64_t>(s)) % contexts;
  }
  std::vector<Symbol> out(stream.end() - static_cast<std::ptrdiff_t>(n),
                          stream.end());
  return Sample(std::move(out), m);
}

std::vector<double> StationaryDistribution(const TransitionTensor& tensor,
                                           int word_length, double tolerance,
                                           int max_iterations) {
  const int kappa = tensor.kappa();
  if (word_length < kappa) {
    throw InvalidArgument("stationary window length " +
                          std::to_string(word_length) + " is below kappa=" +
                          std::to_string(kappa));
  }
  const auto mm = static_cast<std::uint64_t>(tensor.alphabet_size());
  const std::uint64_t contexts = tensor.context_count();

  std::vector<double> pi(contexts, 1.0 / static_cast<double>(contexts));
  if (kappa > 0) {
    std::vector<double> next(contexts);
    double residual = 0.0;
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::uint64_t c = 0; c < contexts; ++c) {
        const auto row = tensor.Row(c);
        for (std::uint64_t a = 0; a < mm; ++a) {
          next[(c * mm + a) % contexts] += pi[c] * row[a];
        }
      }
      residual = 0.0;
      for (std::uint64_t c = 0; c < contexts; ++c) {
        residual += std::abs(next[c] - pi[c]);
      }
      pi.swap(next);
      if (residual < tolerance) break;
    }
    if (!(residual < tolerance)) {
      std::ostringstream msg;
      msg << "stationary power iteration did not converge after " << iter
          << " iterations (residual " << residual << ")";
      throw NumericalError(msg.str());
    }
  }

  // Extend window by window: Pi(x_1^{l+1}) = Pi(x_1^l) p(x_{l+1} | x_{l-k+1}^l).
  for (int len = kappa; len < word_length; ++len) {
    std::vector<double> longer(pi.size() * mm);
    for (std::uint64_t w = 0; w < pi.size(); ++w) {
      const auto row = tensor.Row(w % contexts);
      for (std::uint64_t a = 0; a < mm; ++a) longer[w * mm + a] = pi[w] * row[a];
    }
    pi.swap(longer);
  }
  return pi;
}

MtdSpec ParseMtdSpec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("spec JSON: ") + e.what(), e.byte);
  }
  MtdSpec spec;
  try {
    spec.name = j.value("name", std::string());
    spec.alphabet_size = j.at("m").get<int>();
    spec.kappa = j.at("kappa").get<int>();
    spec.r = j.at("R").get<std::vector<std::vector<double>>>();
    spec.lags = j.value("lags", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("spec JSON: ") + e.what());
  }
  spec.Validate();
  return spec;
}

MtdSpec LoadMtdSpecFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseMtdSpec(buf.str());
}

std::string MtdSpecToJson(const MtdSpec& spec) {
  nlohmann::json j;
  j["name"] = spec.name;
  j["m"] = spec.alphabet_size;
  j["kappa"] = spec.kappa;
  j["R"] = spec.r;
  j["lags"] = spec.lags;
  return j.dump(2);
}

MtdSpec ResolveGenerator(const std::string& name_or_path) {
  for (const auto& ex : BuiltinExamples()) {
    if (ex.name == name_or_path) return ex.spec;
  }
  if (std::filesystem::exists(name_or_path)) {
    return LoadMtdSpecFile(name_or_path);
  }
  return FindBuiltin(name_or_path).spec;  // throws with the known names
}

}  // namespace mcorder

#include "mcorder/mtd.h"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "mcorder/divergence.h"
#include "mcorder/error.h"

namespace mcorder {
namespace {

MtdSpec SingleLag() {
  MtdSpec s;
  s.alphabet_size = 3;
  s.kappa = 1;
  s.r = {{0.2, 0.5, 0.1}, {0.3, 0.25, 0.6}, {0.5, 0.25, 0.3}};
  s.lags = {1.0};
  return s;
}

TEST(BuildTensorTest, Q1HalfHalfContextOneOne) {
  const TransitionTensor t = BuildTensor(FindBuiltin("Q1-k2").spec);
  // q(3 | 1,1) = 1/2 * 0.90 + 1/2 * 0.90
  EXPECT_NEAR(t.Prob(0, 2), 0.90, 1e-15);
  // q(. | 1,3) mixes printed rows 1 and 3.
  const Word ctx = Word::FromSymbols(std::vector<Symbol>{0, 2}, 3);
  EXPECT_NEAR(t.Prob(ctx.code(), 0), 0.5 * 0.05 + 0.5 * 0.90, 1e-15);
  EXPECT_NEAR(t.Prob(ctx.code(), 2), 0.5 * 0.90 + 0.5 * 0.05, 1e-15);
}

TEST(BuildTensorTest, SingleLagIsTransposeOfR) {
  const MtdSpec spec = SingleLag();
  const TransitionTensor t = BuildTensor(spec);
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < 3; ++a) {
      EXPECT_DOUBLE_EQ(t.Prob(static_cast<std::uint64_t>(i), a),
                       spec.r[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)]);
    }
  }
}

TEST(BuildTensorTest, RowsAreStochastic) {
  for (const auto& ex : BuiltinExamples()) {
    const TransitionTensor t = BuildTensor(ex.spec);
    for (std::uint64_t c = 0; c < t.context_count(); ++c) {
      const auto row = t.Row(c);
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9) << ex.name;
    }
  }
}

TEST(BuildTensorTest, PositivityBound) {
  for (const auto& ex : BuiltinExamples()) {
    const TransitionTensor t = BuildTensor(ex.spec);
    double min_r = 1.0;
    for (const auto& row : ex.spec.r) min_r = std::min(min_r, *std::min_element(row.begin(), row.end()));
    const double min_lag =
        ex.spec.lags.empty() ? 1.0 : *std::min_element(ex.spec.lags.begin(), ex.spec.lags.end());
    EXPECT_GE(t.MinEntry(), min_lag * min_r - 1e-15) << ex.name;
    EXPECT_GT(t.MinEntry(), 0.0);
  }
}

TEST(BuildTensorTest, ValidationNamesTheProblem) {
  MtdSpec bad = SingleLag();
  bad.r[0][1] = 0.6;  // column 2 now sums to 1.1
  try {
    BuildTensor(bad);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos);
  }
  MtdSpec lags = FindBuiltin("Q1-k2").spec;
  lags.lags = {0.7, 0.7};
  EXPECT_THROW(BuildTensor(lags), InvalidArgument);
  lags.lags = {1.0, 0.0};
  EXPECT_THROW(BuildTensor(lags), InvalidArgument);
  lags.lags = {1.0};
  EXPECT_THROW(BuildTensor(lags), InvalidArgument);
  MtdSpec iid = SingleLag();
  iid.kappa = 0;
  iid.lags = {};
  EXPECT_THROW(BuildTensor(iid), InvalidArgument);  // columns differ
}

TEST(BuiltinExamplesTest, MatricesAsPrinted) {
  const auto& q1 = FindBuiltin("Q1-k2");
  EXPECT_EQ(q1.printed[0], (std::vector<double>{0.05, 0.05, 0.90}));
  EXPECT_EQ(q1.table, "Q1");
  const auto& q4 = FindBuiltin("Q4-k0");
  for (const auto& row : q4.printed) {
    EXPECT_EQ(row, (std::vector<double>{0.05, 0.05, 0.05, 0.85}));
  }
  const auto& q2 = FindBuiltin("Q2-k0");
  EXPECT_EQ(q2.spec.kappa, 0);
  EXPECT_EQ(q2.printed[0], q2.printed[1]);
  EXPECT_EQ(q2.printed[1], q2.printed[2]);
  EXPECT_EQ(FindBuiltin("Q3-k3").spec.lags.size(), 3u);
  EXPECT_EQ(FindBuiltin("Q3-k3").spec.alphabet_size, 4);
  EXPECT_EQ(BuiltinExamples().size(), 6u);
  EXPECT_THROW(FindBuiltin("Q9"), InvalidArgument);
}

TEST(SimulateTest, Deterministic) {
  const TransitionTensor t = BuildTensor(FindBuiltin("Q3-k3").spec);
  const Sample a = Simulate(t, 5000, 42, 120);
  const Sample b = Simulate(t, 5000, 42, 120);
  EXPECT_EQ(a.Checksum(), b.Checksum());
  EXPECT_NE(a.Checksum(), Simulate(t, 5000, 43, 120).Checksum());
  EXPECT_NE(a.Checksum(), Simulate(t, 5000, 42, 121).Checksum());
  EXPECT_EQ(a.size(), 5000u);
}

TEST(SimulateTest, IidFrequencies) {
  const TransitionTensor t = BuildTensor(FindBuiltin("Q2-k0").spec);
  const Sample s = Simulate(t, 100000, 1, 0);
  const CountTable c = CountWords(s, 1);
  const double want[] = {0.05, 0.05, 0.90};
  for (std::uint64_t a = 0; a < 3; ++a) {
    EXPECT_NEAR(static_cast<double>(c.CountOfCode(a)) / 1e5, want[a], 0.01);
  }
}

TEST(SimulateTest, ConditionalFrequenciesMatchKernel) {
  const TransitionTensor t = BuildTensor(FindBuiltin("Q1-k2").spec);
  const Sample s = Simulate(t, 100000, 2, DefaultBurnIn(t));
  const CountTable windows = CountWords(s, 3);
  int checked = 0;
  for (std::uint64_t ctx = 0; ctx < 9; ++ctx) {
    std::uint64_t total = 0;
    for (std::uint64_t a = 0; a < 3; ++a) total += windows.CountOfCode(ctx * 3 + a);
    if (total < 1000) continue;
    ++checked;
    for (std::uint64_t a = 0; a < 3; ++a) {
      EXPECT_NEAR(static_cast<double>(windows.CountOfCode(ctx * 3 + a)) / static_cast<double>(total),
                  t.Prob(ctx, static_cast<Symbol>(a)), 0.02);
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(SimulateTest, RejectsBadArguments) {
  const TransitionTensor t = BuildTensor(SingleLag());
  EXPECT_THROW(Simulate(t, 0, 1, 0), InvalidArgument);
  EXPECT_THROW(Simulate(t, 10, 1, -1), InvalidArgument);
}

TEST(RngTest, SeedsAndUnitDraws) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t r = 0; r < 1000; ++r) seeds.insert(DeriveSeed(5, r));
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_EQ(DeriveSeed(5, 10), DeriveSeed(5, 10));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = UniformUnit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(StationaryTest, IidIsRowLaw) {
  const auto pi = StationaryDistribution(BuildTensor(FindBuiltin("Q2-k0").spec), 1);
  ASSERT_EQ(pi.size(), 3u);
  EXPECT_NEAR(pi[0], 0.05, 1e-15);
  EXPECT_NEAR(pi[1], 0.05, 1e-15);
  EXPECT_NEAR(pi[2], 0.90, 1e-15);
}

// Pi(x_1^l) = sum_x Pi(x x_1^{l-1}) p(x_l | last kappa of x x_1^{l-1}).
double FixedPointResidual(const TransitionTensor& t, int l) {
  const auto pi = StationaryDistribution(t, l);
  const int m = t.alphabet_size();
  const std::uint64_t space = WordSpaceSize(m, l);
  const std::uint64_t lower = WordSpaceSize(m, l - 1);
  double worst = 0.0;
  for (std::uint64_t w = 0; w < space; ++w) {
    const std::uint64_t tail = w / static_cast<std::uint64_t>(m);  // x_1^{l-1}
    const auto last = static_cast<Symbol>(w % static_cast<std::uint64_t>(m));
    double rhs = 0.0;
    for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(m); ++x) {
      const std::uint64_t pred = x * lower + tail;  // x x_1^{l-1}
      rhs += pi[pred] * t.Prob(pred % t.context_count(), last);
    }
    worst = std::max(worst, std::abs(pi[w] - rhs));
  }
  return worst;
}

TEST(StationaryTest, FixedPointForBuiltins) {
  for (const auto& ex : BuiltinExamples()) {
    const TransitionTensor t = BuildTensor(ex.spec);
    const int k = std::max(1, t.kappa());
    for (int l = k; l <= k + 2; ++l) {
      EXPECT_LT(FixedPointResidual(t, l), 1e-9) << ex.name << " l=" << l;
      const auto pi = StationaryDistribution(t, l);
      EXPECT_NEAR(std::accumulate(pi.begin(), pi.end(), 0.0), 1.0, 1e-9);
    }
  }
}

TEST(StationaryTest, AgreesWithDenseEigenSolve) {
  for (const char* name : {"Q1-k2", "Q3-k2", "Q1-k3"}) {
    const TransitionTensor t = BuildTensor(FindBuiltin(name).spec);
    const auto m = static_cast<std::uint64_t>(t.alphabet_size());
    const auto states = static_cast<Eigen::Index>(t.context_count());
    // Derived first-order chain on E^kappa; solve (P^T - I) pi = 0, sum pi = 1.
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(states, states);
    for (std::uint64_t c = 0; c < t.context_count(); ++c) {
      for (std::uint64_t a = 0; a < m; ++a) {
        p(static_cast<Eigen::Index>(c),
          static_cast<Eigen::Index>((c * m + a) % t.context_count())) += t.Prob(c, static_cast<Symbol>(a));
      }
    }
    Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(states, states);
    a.row(states - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(states);
    b(states - 1) = 1.0;
    const Eigen::VectorXd oracle = a.fullPivLu().solve(b);
    const auto pi = StationaryDistribution(t, t.kappa());
    for (Eigen::Index i = 0; i < states; ++i) {
      EXPECT_NEAR(pi[static_cast<std::size_t>(i)], oracle(i), 1e-8) << name;
    }
  }
}

TEST(StationaryTest, EmpiricalWindowsConverge) {
  for (const auto& ex : BuiltinExamples()) {
    const TransitionTensor t = BuildTensor(ex.spec);
    const int l = std::max(1, t.kappa());
    const auto pi = StationaryDistribution(t, l);
    const Sample s = Simulate(t, 100000, 77, DefaultBurnIn(t));
    const CountTable c = CountWords(s, l);
    std::vector<double> empirical(pi.size());
    for (std::uint64_t w = 0; w < pi.size(); ++w) {
      empirical[w] = static_cast<double>(c.CountOfCode(w)) / static_cast<double>(c.window_count());
    }
    EXPECT_LT(KlDivergence(DiscreteDistribution(empirical), DiscreteDistribution(pi)), 0.01)
        << ex.name;
  }
}

TEST(StationaryTest, RejectsShortWindows) {
  EXPECT_THROW(StationaryDistribution(BuildTensor(FindBuiltin("Q1-k2").spec), 1),
               InvalidArgument);
}

TEST(SpecJsonTest, RoundTripAndResolve) {
  const MtdSpec spec = FindBuiltin("Q3-k3").spec;
  const MtdSpec back = ParseMtdSpec(MtdSpecToJson(spec));
  EXPECT_EQ(back.r, spec.r);
  EXPECT_EQ(back.lags, spec.lags);
  EXPECT_EQ(back.kappa, 3);
  EXPECT_EQ(back.name, "Q3-k3");

  const auto path = std::filesystem::temp_directory_path() / "mcorder_spec_test.json";
  {
    std::ofstream out(path);
    out << R"({"m": 2, "kappa": 1, "R": [[0.9, 0.2], [0.1, 0.8]], "lags": [1]})";
  }
  const MtdSpec loaded = ResolveGenerator(path.string());
  EXPECT_EQ(loaded.alphabet_size, 2);
  EXPECT_NEAR(BuildTensor(loaded).Prob(1, 0), 0.2, 1e-15);
  std::filesystem::remove(path);

  EXPECT_EQ(ResolveGenerator("Q1-k3").kappa, 3);
  EXPECT_THROW(ResolveGenerator("no-such-generator"), InvalidArgument);
  EXPECT_THROW(ParseMtdSpec("{\"m\": 2"), ParseError);
  EXPECT_THROW(ParseMtdSpec(R"({"m": 2, "kappa": 1, "R": [[0.5, 0.5], [0.4, 0.5]], "lags": [1]})"),
               InvalidArgument);
}

}  // namespace
}  // namespace mcorder

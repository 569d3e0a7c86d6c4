#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "nterm/approx.hpp"
#include "nterm/errors.hpp"

using namespace nterm;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
Group g(std::size_t b, Rational m, long k) { return Group{b, std::move(m), BigInt(k)}; }
}  // namespace

TEST(QuasiNorm, UnitVector) {
  const auto e1 = CompressedVector::canonicalize({g(0, 1, 1)});
  const auto space = SpaceSpec::lp(2.0, 4);
  for (const ApproxParams p : {ApproxParams{1.0, 1.0}, ApproxParams{0.5, 2.0}, ApproxParams{2.0, kInf}}) {
    EXPECT_DOUBLE_EQ(approx_quasinorm(e1, space, p), 1.0);
    EXPECT_DOUBLE_EQ(greedy_quasinorm(e1, space, p), 1.0);
  }
}

TEST(QuasiNorm, SupForm) {
  const auto x = CompressedVector::canonicalize({g(0, 2, 1), g(0, 1, 1)});
  EXPECT_DOUBLE_EQ(approx_quasinorm(x, SpaceSpec::lp(1.0, 2), {1.0, kInf}), 4.0);
}

TEST(QuasiNorm, GreedyBasisGivesEqualNorms) {
  const auto x = CompressedVector::canonicalize({g(0, 5, 1), g(0, 3, 1), g(0, 2, 1), g(0, 1, 1)});
  const auto space = SpaceSpec::lp(2.0, 4);
  for (const ApproxParams p : {ApproxParams{1.0, 1.0}, ApproxParams{0.5, 2.0}, ApproxParams{1.0, kInf}}) {
    EXPECT_EQ(approx_quasinorm(x, space, p), greedy_quasinorm(x, space, p));
  }
}

TEST(QuasiNorm, SummationOrderIsStable) {
  const auto xs = build_xs(BlockSchedule::squares(3), 2);
  const auto seq = ErrorSequence::closed_form(ErrorKind::kSigma, xs.pool);
  QuasiNormOptions fwd, rev;
  rev.order = SumOrder::kReverse;
  const double a = quasinorm(xs.norm_x.value, seq, {1.0, 1.0}, fwd);
  const double b = quasinorm(xs.norm_x.value, seq, {1.0, 1.0}, rev);
  EXPECT_NEAR(a, b, 1e-9 * a);
  // Plain double accumulation over the same terms.
  double plain = 0.0;
  for (std::uint64_t k = 1; k < seq.support_size(); ++k) plain += seq.at(k).value;
  EXPECT_NEAR(a, xs.norm_x.value + plain, 1e-9 * a);
}

TEST(QuasiNorm, TermBudget) {
  const auto xs = build_xs(BlockSchedule::squares(3), 2);
  const auto seq = ErrorSequence::closed_form(ErrorKind::kSigma, xs.pool);
  QuasiNormOptions tight;
  tight.max_terms = 10;
  EXPECT_THROW(quasinorm(1.0, seq, {1.0, 1.0}, tight), TermBudgetExceeded);
  EXPECT_THROW(quasinorm(1.0, seq, {-1.0, 1.0}), InvalidArgument);
}

TEST(QuasiNorm, ParseQ) {
  EXPECT_EQ(parse_q("inf"), kInf);
  EXPECT_EQ(parse_q("2"), 2.0);
  EXPECT_THROW(parse_q("-1"), InvalidArgument);
  EXPECT_EQ(format_q(kInf), "inf");
  EXPECT_EQ(format_q(0.5), "0.5");
}

TEST(BuildXs, SquaresScheduleParameters) {
  const auto schedule = BlockSchedule::squares(4);
  const auto s2 = build_xs(schedule, 2);
  EXPECT_EQ(s2.k, 1);
  EXPECT_EQ(s2.n_s, 36);
  EXPECT_EQ(s2.n_k, 4);
  EXPECT_EQ(s2.r, 1);
  EXPECT_EQ(s2.v, 36);
  const auto s3 = build_xs(schedule, 3);
  EXPECT_EQ(s3.n_s, 576);
  EXPECT_EQ(s3.v, 576);
  const auto s4 = build_xs(schedule, 4);
  EXPECT_EQ(s4.k, 3);
  EXPECT_EQ(s4.n_s, 14400);
  EXPECT_EQ(s4.n_k, 576);
  EXPECT_EQ(s4.r, 2);
  EXPECT_EQ(s4.v, 7200);
  for (const auto* xs : {&s2, &s3, &s4}) {
    EXPECT_TRUE(xs->all_checks());
    EXPECT_EQ(xs->hl_ns, xs->n_k);
    EXPECT_EQ(xs->x.support_size(), xs->n_s + xs->v);
  }
  // a_4 = 25 >= (4+1)^2 with the listed prefix (4, 9, 16, 25) and its extension.
  const BlockSchedule listed({4, 9, 16, 25}, 4, 2.0, 2.0, Extension::kSquares);
  EXPECT_EQ(build_xs(listed, 4).n_s, 14400);
}

TEST(BuildXs, ShallowScheduleIsRefused) {
  EXPECT_THROW(build_xs(BlockSchedule::squares(4), 99), ScheduleTooShallow);
  EXPECT_THROW(build_xs(BlockSchedule::squares(2), 3), ScheduleTooShallow);
  // a = j + 3 never reaches (s+1)^2 = 9 within depth 4.
  EXPECT_THROW(build_xs(BlockSchedule::linear(4), 2), ScheduleTooShallow);
}

TEST(Experiment, ChecksAndShape) {
  const auto report = optimality_experiment(BlockSchedule::squares(4), {2, 3},
                                            {{1.0, 1.0}, {1.0, kInf}});
  ASSERT_EQ(report.runs.size(), 4u);
  EXPECT_TRUE(report.all_checks());
  for (const auto& run : report.runs) {
    EXPECT_LE(run.ratio, 1.0);
    EXPECT_GE(run.G, run.A);
    EXPECT_LE(run.A, run.A_upper * (1 + 1e-9));
    EXPECT_GE(run.G, run.G_lower * (1 - 1e-9));
  }
  EXPECT_DOUBLE_EQ(report.runs[0].normalized_vs_first, 1.0);
  EXPECT_NEAR(report.runs[0].envelope, 2.0 / std::sqrt(2.0), 1e-15);
  // q = inf, alpha = 1: max(s^{-1/2}, s^{-1/2}).
  EXPECT_NEAR(report.runs[1].envelope, std::pow(2.0, -0.5), 1e-15);
  EXPECT_GT(report.runs[1].envelope_sup, report.runs[1].envelope);
}

TEST(Experiment, LowerBoundOnGreedyNorm) {
  // G >= n_s^alpha ||V^s|| for q = inf: 36 * 6 at s = 2.
  const auto report = optimality_experiment(BlockSchedule::squares(3), {2}, {{1.0, kInf}});
  EXPECT_GE(report.runs[0].G, 216.0);
  EXPECT_DOUBLE_EQ(report.runs[0].G_lower, 216.0);
}

TEST(Experiment, BoundMode) {
  ExperimentOptions strict;
  strict.max_terms = 100;
  EXPECT_THROW(optimality_experiment(BlockSchedule::squares(4), {3}, {{1.0, 1.0}}, strict),
               TermBudgetExceeded);
  strict.allow_bound_mode = true;
  const auto report = optimality_experiment(BlockSchedule::squares(4), {3}, {{1.0, 1.0}}, strict);
  ASSERT_EQ(report.runs.size(), 1u);
  const auto& run = report.runs[0];
  EXPECT_TRUE(run.bounds_only);
  EXPECT_GT(run.ratio_upper, 0.0);
  // The exact ratio lies below the reported upper bound.
  const auto exact = optimality_experiment(BlockSchedule::squares(4), {3}, {{1.0, 1.0}});
  EXPECT_LE(exact.runs[0].ratio, run.ratio_upper);
}

#pragma once

// Approximation-space quasi-norms
//
//   ||x||_{A^α_q} = ||x|| + [sum_{k>=1} (k^α σ_k(x))^q / k]^{1/q}
//   ||x||_{G^α_q} = ||x|| + [sum_{k>=1} (k^α γ_k(x))^q / k]^{1/q}
//
// (sup forms for q = ∞), the two-magnitude vectors x_s of a non-doubling
// block sum, and the experiment comparing both quasi-norms on them.

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "nterm/exact.hpp"
#include "nterm/greedy.hpp"
#include "nterm/schedule.hpp"
#include "nterm/spaces.hpp"
#include "nterm/vectors.hpp"

namespace nterm {

struct ApproxParams {
  double alpha = 1.0;
  double q = 1.0;  // +infinity selects the sup form

  bool q_infinite() const { return q == std::numeric_limits<double>::infinity(); }
  void validate() const;
};

std::string format_q(double q);  // "inf" or the number
double parse_q(const std::string& text);

enum class SumOrder { kForward, kReverse };

struct QuasiNormOptions {
  std::uint64_t max_terms = 100'000'000;
  ErrorSequenceOptions errors;
  SumOrder order = SumOrder::kForward;
};

// ||x|| + the series (or sup) built from an error sequence.
double quasinorm(double norm, const ErrorSequence& errors, const ApproxParams& params,
                 const QuasiNormOptions& options = {});

double approx_quasinorm(const CompressedVector& x, const SpaceSpec& space,
                        const ApproxParams& params, const QuasiNormOptions& options = {});
double greedy_quasinorm(const CompressedVector& x, const SpaceSpec& space,
                        const ApproxParams& params, const QuasiNormOptions& options = {});

// sum_{k=first}^{last} k^e with compensated long double accumulation.
long double power_sum(std::uint64_t first, std::uint64_t last, long double e);

struct XsConstruction {
  int s = 0;
  int k = 0;           // 1-based: a_{k+1} >= (s+1)^2
  BigInt n_s;          // n_{k+1} = #M_s
  BigInt n_k;          // cap of M_s's block
  std::int64_t r = 0;  // floor(sqrt(s))
  BigInt v;            // #V^s = ceil(n_s / r)
  std::size_t m_block = 0;  // 0-based block holding M_s (= Y_k)
  std::size_t v_block = 0;  // 0-based block holding V^s (= Y_{k+1})
  CompressedVector x;       // 2 on M_s, 1 on V^s
  NormValue norm_x, norm_m, norm_v;
  BigInt hl_ns, hl_2ns;     // h_l(n_s)^p, h_l(2 n_s)^p
  std::map<std::string, bool> checks;
  TwoPool pool;

  bool all_checks() const;
};

// Takes the smallest k with a_{k+1} >= (s+1)^2 whose construction passes
// every check. The schedule must materialize blocks up to Y_{k+1}.
XsConstruction build_xs(const BlockSchedule& schedule, int s);

struct RatioRun {
  int s = 0;
  double alpha = 0.0;
  double q = 0.0;
  int k = 0;
  std::string n_s, v;
  std::int64_t r = 0;
  std::uint64_t terms = 0;
  bool bounds_only = false;
  double A = 0.0, G = 0.0, ratio = 0.0;  // exact mode
  double A_upper = 0.0;   // explicit-constant upper bound for A
  double G_lower = 0.0;   // explicit-constant lower bound for G
  double ratio_upper = 0.0;  // A_upper / G_lower
  double envelope = 0.0;     // (s^{-qα/2} + s^{-q/2})^{1/q}, max form for q = ∞
  double envelope_sup = 0.0; // n_s^{-α} + s^{-α/2} + s^{-1/2} (q = ∞ only)
  double normalized = 0.0;   // ratio / envelope
  double normalized_vs_first = 0.0;  // normalized / normalized at the first s
  std::map<std::string, bool> checks;

  bool all_checks() const;
};

struct RatioReport {
  std::vector<RatioRun> runs;
  bool all_checks() const;
};

struct ExperimentOptions {
  std::uint64_t max_terms = 100'000'000;
  // Report explicit bounds instead of refusing when 2 n_s exceeds max_terms.
  bool allow_bound_mode = false;
};

RatioReport optimality_experiment(const BlockSchedule& schedule, const std::vector<int>& s_grid,
                                  const std::vector<ApproxParams>& params,
                                  const ExperimentOptions& options = {});

}  // namespace nterm

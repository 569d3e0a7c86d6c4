#pragma once

// Democracy functions of block-symmetric bases:
//
//   h_l(N) = inf_{#Λ = N} ||1_Λ||,   h_r(N) = sup_{#Λ = N} ||1_Λ||.
//
// An indicator with m_b coordinates in block b has ||1_Λ||^p =
// sum_b min(m_b, cap_b) when inner and outer exponents agree, so both
// functions are integer programs over per-block allocations.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nterm/exact.hpp"
#include "nterm/spaces.hpp"

namespace nterm {

struct DemocracyValue {
  // ||1_Λ||^p, an integer; absent for non-additive spaces.
  std::optional<BigInt> powered;
  double value = 0.0;
  std::vector<BigInt> allocation;  // coordinates per block
};

struct DemFunPair {
  DemocracyValue left;
  DemocracyValue right;
};

// Exact values. For schedule block sums the materialized blocks must
// certify the infinite sum: h_l needs N <= n_{K+1}, h_r needs
// N <= n_1 + ... + n_K. Finite spaces need N <= dimension.
DemocracyValue left_democracy(const SpaceSpec& space, std::uint64_t N);
DemocracyValue right_democracy(const SpaceSpec& space, std::uint64_t N);
DemFunPair demfun_dp(const SpaceSpec& space, std::uint64_t N);

// Plain dynamic program over allocations of the materialized blocks, used
// to cross-check demfun_dp. N <= 20000.
DemFunPair demfun_allocation_dp(const SpaceSpec& space, std::uint64_t N);

// Exhaustive inf/sup over all N-subsets of an explicit universe of at most
// 20 coordinates.
DemFunPair demfun_bruteforce(const SpaceSpec& space, std::uint64_t N);

struct DemFunTable {
  std::vector<DemFunPair> values;  // values[N] for 0 <= N <= range_N
  std::uint64_t range_N = 0;
};

DemFunTable demfun_table(const SpaceSpec& space, std::uint64_t max_N);

struct DoublingRow {
  int k = 0;
  std::int64_t a_next = 0;  // a_{k+1}
  BigInt n_k, n_next;       // n_k, n_{k+1}
  BigInt hl_n;              // h_l(n_{k+1})^p
  BigInt hl_2n;             // h_l(2 n_{k+1})^p
  Rational ratio_powered;   // (h_l(2n)/h_l(n))^p
  Rational bound_powered;   // (2/3) a_{k+1}
  double ratio = 0.0;
  double bound = 0.0;
  bool meets_bound = false;
  bool upper_ok = false;     // h_l(n_{k+1})^p <= n_k
  bool upper_equal = false;  // attained by Γ = Y_k
};

// Ratios h_l(2 n_{k+1}) / h_l(n_{k+1}) for k_first <= k <= k_last, checked
// against the lower bound ((2/3) a_{k+1})^{1/p}.
std::vector<DoublingRow> doubling_scan(const SpaceSpec& space, int k_first, int k_last);

struct PrefixRow {
  std::uint64_t N = 0;
  BigInt prefix_powered;  // ||e_1 + ... + e_N||^p, filling blocks in order
  BigInt hl_powered;
  bool equal = false;
};

struct PrefixReport {
  std::vector<PrefixRow> rows;
  std::vector<std::uint64_t> counterexamples;
};

PrefixReport prefix_norm_check(const SpaceSpec& space, std::uint64_t N_first,
                               std::uint64_t N_last);

// A positive function known on a finite set of probe points.
class ProbedFunction {
 public:
  using Fn = std::function<double(std::uint64_t)>;

  static ProbedFunction from_callable(std::string name, Fn fn,
                                      std::vector<std::uint64_t> probes);
  static ProbedFunction from_table(std::string name, std::map<std::uint64_t, double> table);

  // Absent outside the known range.
  std::optional<double> operator()(std::uint64_t N) const;
  const std::vector<std::uint64_t>& probes() const { return probes_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Fn fn_;
  std::map<std::uint64_t, double> table_;
  std::vector<std::uint64_t> probes_;
  std::uint64_t callable_limit_ = 0;
};

// 1..65536 followed by a geometric grid of ratio 2^(1/64) up to `limit`.
std::vector<std::uint64_t> default_probe_grid(std::uint64_t limit = std::uint64_t{1} << 62);

struct CghmTerm {
  int mu = 0;
  std::uint64_t w = 0;
  int r = 0;  // 2^{r-1} <= w < 2^r
  std::uint64_t k = 0;
  std::uint64_t n = 0;  // n = w k
  double threshold = 0.0;  // C^r w^alpha
  double ratio_k = 0.0;    // h_r(k) / h_l(k)
  double lhs = 0.0;        // h_r(k) / h_l(n)
  double rhs = 0.0;        // (n / k)^alpha
  bool holds = false;
};

struct CghmSequences {
  std::vector<CghmTerm> terms;
  double C = 0.0;
  double alpha = 0.0;
  bool exhausted = false;
  std::string exhaustion;  // which step ran out of probe range
};

// Builds k_mu <= n_mu with n_mu / k_mu = w_mu -> inf and
// h_r(k_mu) / h_l(n_mu) >= (n_mu / k_mu)^alpha, from a doubling h_l
// (constant C) and an unbounded ratio h_r / h_l.
CghmSequences cghm_construct(const ProbedFunction& h_r, const ProbedFunction& h_l, double C,
                             double alpha, int count);

struct Condition71Row {
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  bool growth_ok = false;
  double lhs = 0.0;  // h_r(k) / h_l(n)
  double rhs = 0.0;  // C (n/k)^alpha
  bool inequality_ok = false;
};

struct Condition71Report {
  std::vector<Condition71Row> rows;
  bool growth = false;
  bool all_pass = false;
};

// Growth: n/k strictly increasing along at least two pairs with
// n >= k >= 1. Inequality: h_r(k)/h_l(n) >= C (n/k)^alpha per pair.
Condition71Report condition71_check(const ProbedFunction& h_r, const ProbedFunction& h_l,
                                    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                                    double C, double alpha);

}  // namespace nterm

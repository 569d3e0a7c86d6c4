#pragma once

// Greedy thresholding and best N-term approximation errors.
//
//   gamma_N(x) = max over admissible greedy selections of ||x - G_N(x)||
//   sigma_N(x) = inf over #Λ = N and free b of ||x - sum_{Λ} b_n e_n||
//
// For a lattice-unconditional basis the infimum in sigma_N is attained with
// b_n = x_n, so sigma_N is a minimum over N-point suppressions. Block norms
// are symmetric and monotone, so inside a block the largest magnitudes go
// first and only per-block removal counts matter.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nterm/exact.hpp"
#include "nterm/spaces.hpp"
#include "nterm/vectors.hpp"

namespace nterm {

struct GreedyBudget {
  std::uint64_t max_tie_allocations = 1'000'000;
};

struct GreedyOutcome {
  NormValue max_residual;  // gamma_N
  NormValue min_residual;
  // Per-block counts chosen among the tied coordinates (block, count).
  std::vector<std::pair<std::size_t, BigInt>> max_allocation;
  std::vector<std::pair<std::size_t, BigInt>> min_allocation;
  BigInt allocations = 1;  // tie resolutions up to in-block symmetry
};

GreedyOutcome gamma(const CompressedVector& x, std::uint64_t N, const SpaceSpec& space,
                    const GreedyBudget& budget = {});

// Exact best N-term error. Uses the breakpoint structure of the per-block
// residual costs (additive spaces) and falls back to sigma_dp.
NormValue sigma_exact(const CompressedVector& x, std::uint64_t N, const SpaceSpec& space);

// Same quantity by dynamic programming over per-block removal counts.
// Refuses when N times the support exceeds ~2e8.
NormValue sigma_dp(const CompressedVector& x, std::uint64_t N, const SpaceSpec& space);

// Brute force over supports Λ and over the free coefficients on Λ (grid
// search plus pattern-search refinement). At most 4 coordinates with
// |x_j| <= 8. Independent of the suppression reduction it validates.
double sigma_oracle_grid(std::span<const double> coords, std::uint64_t N,
                         const SpaceSpec& space);

// Raw enumeration of every admissible N-subset of explicit coordinates.
GreedyOutcome gamma_bruteforce(std::span<const Rational> coords, std::uint64_t N,
                               const SpaceSpec& space);

// Two magnitude classes in two distinct blocks: the shape of the x_s
// vectors. Costs are concave in the split, so errors have closed forms.
struct TwoPool {
  Rational big_magnitude;
  BigInt big_count;
  BigInt big_cap;
  std::size_t big_block = 0;
  Rational small_magnitude;
  BigInt small_count;
  BigInt small_cap;
  std::size_t small_block = 0;
  double p = 2.0;

  BigInt support() const { return big_count + small_count; }
};

std::optional<TwoPool> detect_two_pool(const CompressedVector& x, const SpaceSpec& space);
NormValue two_pool_sigma(const TwoPool& pool, const BigInt& k);
NormValue two_pool_gamma(const TwoPool& pool, const BigInt& k);

enum class ErrorKind { kSigma, kGamma };
std::string to_string(ErrorKind kind);

// k -> sigma_k or gamma_k for one vector; zero for k >= support.
class ErrorSequence {
 public:
  static ErrorSequence table(ErrorKind kind, std::vector<NormValue> entries, double exponent);
  static ErrorSequence closed_form(ErrorKind kind, TwoPool pool);

  ErrorKind kind() const { return kind_; }
  std::uint64_t support_size() const { return support_; }
  double exponent() const { return exponent_; }
  bool is_closed_form() const { return pool_.has_value(); }
  const std::optional<TwoPool>& pool() const { return pool_; }

  NormValue at(std::uint64_t k) const;

 private:
  ErrorSequence() = default;
  ErrorKind kind_ = ErrorKind::kSigma;
  std::uint64_t support_ = 0;
  double exponent_ = 2.0;
  std::vector<NormValue> entries_;
  std::optional<TwoPool> pool_;
};

struct ErrorSequenceOptions {
  GreedyBudget budget;
  std::uint64_t max_table_terms = 1'000'000;
  bool allow_closed_form = true;
};

ErrorSequence error_sequence(const CompressedVector& x, const SpaceSpec& space,
                             ErrorKind kind, const ErrorSequenceOptions& options = {});

struct GreedyConstantConfig {
  int trials = 100;
  int max_support = 8;
  int max_magnitude = 8;
  std::uint64_t seed = 1;
  // Adds two-pool witnesses (magnitude 65/64 on a full block, 1 on the next).
  bool adversarial = false;
};

struct GreedyConstantEstimate {
  double value = 1.0;  // sample supremum of gamma_N / sigma_N
  int samples = 0;     // pairs (x, N) with sigma_N > 0
  std::string witness;
};

GreedyConstantEstimate greedy_constant(const SpaceSpec& space,
                                       const GreedyConstantConfig& config);

enum class DemocracyMode { kBruteForce, kExact };

// sup over #A = #B = N of ||1_A|| / ||1_B|| = h_r(N) / h_l(N).
double democracy_constant(const SpaceSpec& space, std::uint64_t N, DemocracyMode mode);

}  // namespace nterm

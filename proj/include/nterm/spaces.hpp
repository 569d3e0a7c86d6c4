#pragma once

// Norm evaluators for l_p, the truncated block space X(n, N, p) and block
// direct sums of such spaces.
//
// X(n, N, p) is N-dimensional and its norm is the l_p norm of the n largest
// coefficient magnitudes. A block sum combines blocks with an outer l_p norm.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nterm/exact.hpp"
#include "nterm/schedule.hpp"
#include "nterm/vectors.hpp"

namespace nterm {

struct BlockShape {
  BigInt cap;   // coordinates that count towards the norm
  BigInt size;  // coordinates in the block
};

class SpaceSpec {
 public:
  enum class Kind { kLp, kTruncBlock, kBlockSum, kDirectSum };

  static SpaceSpec lp(double p, BigInt dim);
  static SpaceSpec trunc_block(BigInt cap, BigInt size, double p);
  // The block sum driven by a growth schedule; the tail past the
  // materialized depth is implicit.
  static SpaceSpec block_sum(const BlockSchedule& schedule);
  // A finite direct sum of arbitrary truncated blocks.
  static SpaceSpec direct_sum(std::vector<BlockShape> blocks, double inner_p,
                              double outer_p);

  Kind kind() const { return kind_; }
  const std::vector<BlockShape>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<BigInt>& block_sizes() const { return sizes_; }
  double inner_p() const { return inner_p_; }
  double outer_p() const { return outer_p_; }

  // Inner and outer exponents agree, so ||x||^p is a sum over blocks.
  bool additive() const { return inner_p_ == outer_p_; }
  // p when additive and p is a positive integer: powers are exact.
  std::optional<unsigned> integer_exponent() const;

  // Only block sums built from a schedule have an implicit tail.
  bool has_tail() const { return schedule_.has_value(); }
  const std::optional<BlockSchedule>& schedule() const { return schedule_; }

  BigInt universe_size() const;
  std::string describe() const;

 private:
  SpaceSpec() = default;
  Kind kind_ = Kind::kLp;
  std::vector<BlockShape> blocks_;
  std::vector<BigInt> sizes_;
  double inner_p_ = 2.0;
  double outer_p_ = 2.0;
  std::optional<BlockSchedule> schedule_;
};

// A norm value carried as an exact p-th power when the inputs allow it
// (rational magnitudes, integer p, additive space), plus a double.
struct NormValue {
  std::optional<Rational> powered;  // ||x||^exponent
  double exponent = 2.0;
  double value = 0.0;

  static NormValue zero(double exponent);
  static NormValue from_power(const Rational& powered, double exponent);
  static NormValue from_double(double value, double exponent);
  // Exact square root form used by indicator norms (powered = count).
  bool exact() const { return powered.has_value(); }
};

// Three-way comparison; exact when both sides are exact with equal exponent,
// otherwise relative tolerance 1e-9.
int compare(const NormValue& a, const NormValue& b);
inline constexpr double kRelativeTolerance = 1e-9;

// Sum of magnitude^p over the part of a block that counts: the magnitudes
// ranked skip+1 .. skip+cap. Magnitudes descending. `exact` is present iff
// p is an integer.
struct BlockPower {
  std::optional<Rational> exact;
  long double approx = 0.0L;
};
BlockPower block_power_after_removal(std::span<const Group> block, const BigInt& skip,
                                     const BigInt& cap, double p);

// l_p norm of the `cap` largest magnitudes of one block.
NormValue trunc_block_norm(std::span<const Group> block, const BigInt& cap, double p);

// Combines per-block powers (inner exponent) with the outer exponent.
NormValue combine_blocks(std::span<const BlockPower> per_block, const SpaceSpec& space);

NormValue space_norm(const CompressedVector& x, const SpaceSpec& space);

// Throws CapacityError when x does not fit the space.
void validate(const CompressedVector& x, const SpaceSpec& space);

// ---------------------------------------------------------------------------
// Explicit-coordinate backend. Written independently of the compressed path
// so the two can check each other.

ExplicitLayout make_layout(const SpaceSpec& space);
NormValue explicit_norm(std::span<const Rational> coords, const SpaceSpec& space,
                        const ExplicitLayout& layout);
double explicit_norm_double(std::span<const double> coords, const SpaceSpec& space,
                            const ExplicitLayout& layout);

// sup over Γ with #Γ <= cap and v in the unit l_2 ball of sum_{Γ} x_j v_j,
// the inner sup evaluated in closed form. p = 2 only; Γ ranges over
// subsets of the support (<= 25 nonzero coordinates).
NormValue sup_form_norm_oracle(std::span<const Rational> coords, const BigInt& cap);

struct LatticeReport {
  int trials = 0;
  int failures = 0;
  bool normalized = true;
  std::string witness;  // first failure, empty when all pass
  bool passed() const { return failures == 0 && normalized; }
};

// Random shrink test ||(λ_j a_j)|| <= ||(a_j)|| for |λ_j| <= 1 and
// normalization ||e_j|| = 1.
LatticeReport lattice_check(const SpaceSpec& space, int trials, std::uint64_t seed);

}  // namespace nterm

#pragma once

// Finitely supported coefficient vectors over a block-structured index set.
//
// Every implemented norm depends only on coefficient magnitudes and is
// invariant under permutations inside a block, so a vector is stored as
// (block, magnitude, multiplicity) groups. Signs are never represented.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "nterm/exact.hpp"

namespace nterm {

struct Group {
  std::size_t block = 0;
  Rational magnitude;
  BigInt multiplicity;

  friend bool operator==(const Group&, const Group&) = default;
};

// Canonical form: sorted by (block ascending, magnitude descending), no zero
// magnitudes or multiplicities, at most one group per (block, magnitude).
// Immutable once built.
class CompressedVector {
 public:
  CompressedVector() = default;

  // Merges, sorts and drops zeros. Throws InvalidArgument on negative input.
  static CompressedVector canonicalize(std::vector<Group> raw);
  // Also checks that block b holds at most block_sizes[b] coordinates.
  static CompressedVector canonicalize(std::vector<Group> raw,
                                       std::span<const BigInt> block_sizes);

  const std::vector<Group>& groups() const { return groups_; }
  bool empty() const { return groups_.empty(); }

  BigInt support_size() const;
  BigInt block_support(std::size_t block) const;
  // Groups of one block, magnitudes descending.
  std::span<const Group> block_groups(std::size_t block) const;
  // Blocks that carry at least one nonzero coefficient, ascending.
  std::vector<std::size_t> blocks() const;
  std::optional<std::size_t> max_block() const;

  friend bool operator==(const CompressedVector&, const CompressedVector&) = default;

 private:
  explicit CompressedVector(std::vector<Group> groups) : groups_(std::move(groups)) {}
  std::vector<Group> groups_;
};

// Magnitude-one vector with the given number of coordinates per block.
CompressedVector indicator(const std::map<std::size_t, BigInt>& block_counts);
CompressedVector indicator(const std::map<std::size_t, BigInt>& block_counts,
                           std::span<const BigInt> block_sizes);

// The freedom left by the greedy selection rule: `choose` coordinates must
// be picked among those of magnitude `magnitude`, of which block
// available[i].first holds available[i].second.
struct TieDescriptor {
  Rational magnitude;
  std::vector<std::pair<std::size_t, BigInt>> available;
  BigInt choose;

  BigInt total_available() const;
  friend bool operator==(const TieDescriptor&, const TieDescriptor&) = default;
};

struct TopMagnitudes {
  // Coordinates every greedy selection keeps.
  std::vector<Group> kept;
  // Absent when the selection is unique.
  std::optional<TieDescriptor> tie;

  BigInt kept_count() const;
  // The multiset of the N largest magnitudes as (magnitude, count),
  // descending; includes the tie choices.
  std::vector<std::pair<Rational, BigInt>> kept_magnitudes() const;
};

TopMagnitudes top_magnitudes(const CompressedVector& v, std::uint64_t N);

// Explicit coordinates for small universes (oracle backends). Coordinates of
// block b occupy a contiguous range in block order.
struct ExplicitLayout {
  std::vector<std::size_t> block_of;   // per coordinate
  std::vector<std::size_t> offsets;    // first coordinate of each block
  std::vector<std::size_t> sizes;

  std::size_t dimension() const { return block_of.size(); }
};

inline constexpr std::size_t kMaxExplicitUniverse = std::size_t{1} << 20;

ExplicitLayout make_layout(std::span<const BigInt> block_sizes);

// Places each block's groups on the first coordinates of the block.
std::vector<Rational> to_explicit(const CompressedVector& v,
                                  const ExplicitLayout& layout);
// Absolute values, grouped.
CompressedVector from_explicit(std::span<const Rational> coords,
                               const ExplicitLayout& layout);

}  // namespace nterm

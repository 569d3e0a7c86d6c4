#include "nterm/vectors.hpp"

#include <algorithm>

#include "nterm/errors.hpp"

namespace nterm {

CompressedVector CompressedVector::canonicalize(std::vector<Group> raw) {
  for (const auto& g : raw) {
    if (sgn(g.magnitude) < 0) throw InvalidArgument("negative magnitude");
    if (sgn(g.multiplicity) < 0) throw InvalidArgument("negative multiplicity");
  }
  std::erase_if(raw, [](const Group& g) {
    return sgn(g.magnitude) == 0 || sgn(g.multiplicity) == 0;
  });
  for (auto& g : raw) g.magnitude.canonicalize();
  std::sort(raw.begin(), raw.end(), [](const Group& x, const Group& y) {
    if (x.block != y.block) return x.block < y.block;
    return x.magnitude > y.magnitude;
  });
  std::vector<Group> merged;
  merged.reserve(raw.size());
  for (auto& g : raw) {
    if (!merged.empty() && merged.back().block == g.block &&
        merged.back().magnitude == g.magnitude) {
      merged.back().multiplicity += g.multiplicity;
    } else {
      merged.push_back(std::move(g));
    }
  }
  return CompressedVector(std::move(merged));
}

CompressedVector CompressedVector::canonicalize(std::vector<Group> raw,
                                                std::span<const BigInt> block_sizes) {
  auto v = canonicalize(std::move(raw));
  for (auto b : v.blocks()) {
    if (b >= block_sizes.size()) {
      throw CapacityError("block " + std::to_string(b) +
                          " does not exist (space has " +
                          std::to_string(block_sizes.size()) + " blocks)");
    }
    auto used = v.block_support(b);
    if (used > block_sizes[b]) {
      throw CapacityError("block " + std::to_string(b) + " holds " +
                          block_sizes[b].get_str() + " coordinates but " +
                          used.get_str() + " were requested");
    }
  }
  return v;
}

BigInt CompressedVector::support_size() const {
  BigInt total = 0;
  for (const auto& g : groups_) total += g.multiplicity;
  return total;
}

BigInt CompressedVector::block_support(std::size_t block) const {
  BigInt total = 0;
  for (const auto& g : block_groups(block)) total += g.multiplicity;
  return total;
}

std::span<const Group> CompressedVector::block_groups(std::size_t block) const {
  auto first = std::lower_bound(groups_.begin(), groups_.end(), block,
                                [](const Group& g, std::size_t b) { return g.block < b; });
  auto last = std::upper_bound(first, groups_.end(), block,
                               [](std::size_t b, const Group& g) { return b < g.block; });
  return {first, last};
}

std::vector<std::size_t> CompressedVector::blocks() const {
  std::vector<std::size_t> out;
  for (const auto& g : groups_) {
    if (out.empty() || out.back() != g.block) out.push_back(g.block);
  }
  return out;
}

std::optional<std::size_t> CompressedVector::max_block() const {
  if (groups_.empty()) return std::nullopt;
  return groups_.back().block;
}

CompressedVector indicator(const std::map<std::size_t, BigInt>& block_counts) {
  std::vector<Group> raw;
  for (const auto& [block, count] : block_counts) {
    raw.push_back({block, Rational(1), count});
  }
  return CompressedVector::canonicalize(std::move(raw));
}

CompressedVector indicator(const std::map<std::size_t, BigInt>& block_counts,
                           std::span<const BigInt> block_sizes) {
  std::vector<Group> raw;
  for (const auto& [block, count] : block_counts) {
    raw.push_back({block, Rational(1), count});
  }
  return CompressedVector::canonicalize(std::move(raw), block_sizes);
}

BigInt TieDescriptor::total_available() const {
  BigInt total = 0;
  for (const auto& [block, count] : available) total += count;
  return total;
}

BigInt TopMagnitudes::kept_count() const {
  BigInt total = 0;
  for (const auto& g : kept) total += g.multiplicity;
  return total;
}

std::vector<std::pair<Rational, BigInt>> TopMagnitudes::kept_magnitudes() const {
  std::map<Rational, BigInt, std::greater<>> by_magnitude;
  for (const auto& g : kept) by_magnitude[g.magnitude] += g.multiplicity;
  if (tie) by_magnitude[tie->magnitude] += tie->choose;
  return {by_magnitude.begin(), by_magnitude.end()};
}

TopMagnitudes top_magnitudes(const CompressedVector& v, std::uint64_t N) {
  TopMagnitudes out;
  if (N == 0 || v.empty()) return out;

  std::map<Rational, BigInt, std::greater<>> totals;
  for (const auto& g : v.groups()) totals[g.magnitude] += g.multiplicity;

  BigInt remaining(static_cast<unsigned long>(N));
  std::optional<Rational> threshold;
  for (const auto& [magnitude, count] : totals) {
    if (count < remaining) {
      remaining -= count;
      continue;
    }
    if (count > remaining) threshold = magnitude;
    // count == remaining: the whole class is kept, nothing to choose.
    else remaining = 0;
    if (!threshold) {
      // Keep everything down to and including this magnitude.
      for (const auto& g : v.groups()) {
        if (g.magnitude >= magnitude) out.kept.push_back(g);
      }
      return out;
    }
    break;
  }
  if (!threshold) {
    // N exceeds the support.
    out.kept = v.groups();
    return out;
  }
  TieDescriptor tie;
  tie.magnitude = *threshold;
  tie.choose = remaining;
  for (const auto& g : v.groups()) {
    if (g.magnitude > *threshold) out.kept.push_back(g);
    if (g.magnitude == *threshold) tie.available.emplace_back(g.block, g.multiplicity);
  }
  out.tie = std::move(tie);
  return out;
}

ExplicitLayout make_layout(std::span<const BigInt> block_sizes) {
  ExplicitLayout layout;
  BigInt total = 0;
  for (const auto& s : block_sizes) total += s;
  if (total > BigInt(static_cast<unsigned long>(kMaxExplicitUniverse))) {
    throw OracleUnavailable("explicit backend limited to 2^20 coordinates, space has " +
                            total.get_str());
  }
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    const auto size = static_cast<std::size_t>(to_u64(block_sizes[b]));
    layout.offsets.push_back(layout.block_of.size());
    layout.sizes.push_back(size);
    layout.block_of.insert(layout.block_of.end(), size, b);
  }
  return layout;
}

std::vector<Rational> to_explicit(const CompressedVector& v,
                                  const ExplicitLayout& layout) {
  std::vector<Rational> coords(layout.dimension());
  for (auto b : v.blocks()) {
    if (b >= layout.sizes.size()) throw CapacityError("block outside layout");
    std::size_t pos = layout.offsets[b];
    const std::size_t end = pos + layout.sizes[b];
    for (const auto& g : v.block_groups(b)) {
      auto count = to_u64(g.multiplicity);
      if (count > end - pos) {
        throw CapacityError("block " + std::to_string(b) + " overflows its layout");
      }
      for (std::uint64_t i = 0; i < count; ++i) coords[pos++] = g.magnitude;
    }
  }
  return coords;
}

CompressedVector from_explicit(std::span<const Rational> coords,
                               const ExplicitLayout& layout) {
  std::vector<Group> raw;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (sgn(coords[i]) == 0) continue;
    raw.push_back({layout.block_of.at(i), abs(coords[i]), BigInt(1)});
  }
  return CompressedVector::canonicalize(std::move(raw));
}

}  // namespace nterm

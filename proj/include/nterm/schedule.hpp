#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nterm/exact.hpp"

namespace nterm {

// How a_j is continued past the explicitly listed entries.
enum class Extension {
  kNone,
  kIncrement,  // a_j = a_{j-1} + 1
  kSquares,    // a_j = (j+1)^2
};

std::string to_string(Extension ext);
Extension parse_extension(const std::string& name);

// Growth schedule a_1 < a_2 < ... of the block sum. With n_k = a_1 ... a_k,
// block b (0-based, Y_{b+1}) has n_{b+2} coordinates and keeps the n_{b+1}
// largest of them. `depth` blocks are materialized; the infinite tail is
// implied.
class BlockSchedule {
 public:
  BlockSchedule(std::vector<std::int64_t> a, int depth, double outer_p = 2.0,
                double inner_p = 2.0, Extension extension = Extension::kIncrement,
                bool allow_nonstandard = false);

  // a = (a_1, ..., a_{len}) with depth len - 1.
  explicit BlockSchedule(std::vector<std::int64_t> a)
      : BlockSchedule(a, static_cast<int>(a.size()) - 1) {}

  // a_j = j + 3.
  static BlockSchedule linear(int depth, double p = 2.0);
  // a_j = (j + 1)^2.
  static BlockSchedule squares(int depth, double p = 2.0);

  int depth() const { return depth_; }
  double outer_p() const { return outer_p_; }
  double inner_p() const { return inner_p_; }
  Extension extension() const { return extension_; }
  bool allow_nonstandard() const { return allow_nonstandard_; }

  // Entries as given by the caller (before extension).
  const std::vector<std::int64_t>& listed() const { return listed_; }

  // 1-based a_j for j <= depth + 1.
  std::int64_t a(int j) const;
  // n_k for 0 <= k <= depth + 1 (n_0 = 1).
  const BigInt& n(int k) const;

  const BigInt& block_cap(int block) const { return n(block + 1); }
  const BigInt& block_size(int block) const { return n(block + 2); }

  // Same growth rule, different depth.
  BlockSchedule with_depth(int depth) const;

 private:
  std::vector<std::int64_t> listed_;
  std::vector<std::int64_t> a_;  // a_[j-1] = a_j, materialized up to depth+1
  std::vector<BigInt> n_;        // n_[k] = n_k
  int depth_;
  double outer_p_;
  double inner_p_;
  Extension extension_;
  bool allow_nonstandard_;
};

}  // namespace nterm

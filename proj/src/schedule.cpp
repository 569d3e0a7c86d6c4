#include "nterm/schedule.hpp"

#include "nterm/errors.hpp"

namespace nterm {

std::string to_string(Extension ext) {
  switch (ext) {
    case Extension::kNone:
      return "none";
    case Extension::kIncrement:
      return "increment";
    case Extension::kSquares:
      return "squares";
  }
  return "none";
}

Extension parse_extension(const std::string& name) {
  if (name == "none") return Extension::kNone;
  if (name == "increment") return Extension::kIncrement;
  if (name == "squares") return Extension::kSquares;
  throw InvalidArgument("unknown schedule extension '" + name + "'");
}

BlockSchedule::BlockSchedule(std::vector<std::int64_t> a, int depth,
                             double outer_p, double inner_p,
                             Extension extension, bool allow_nonstandard)
    : listed_(std::move(a)),
      depth_(depth),
      outer_p_(outer_p),
      inner_p_(inner_p),
      extension_(extension),
      allow_nonstandard_(allow_nonstandard) {
  if (depth_ < 1) throw InvalidArgument("schedule depth must be at least 1");
  if (!(outer_p_ >= 1.0) || !(inner_p_ >= 1.0)) {
    throw InvalidArgument("schedule exponents must be >= 1 and finite");
  }
  const auto needed = static_cast<std::size_t>(depth_) + 1;
  a_ = listed_;
  if (a_.size() > needed) a_.resize(needed);
  while (a_.size() < needed) {
    const auto j = static_cast<std::int64_t>(a_.size()) + 1;
    switch (extension_) {
      case Extension::kNone:
        throw InvalidArgument("schedule lists " + std::to_string(listed_.size()) +
                              " entries but depth " + std::to_string(depth_) +
                              " needs " + std::to_string(needed));
      case Extension::kIncrement:
        if (a_.empty()) throw InvalidArgument("empty schedule cannot be extended");
        a_.push_back(a_.back() + 1);
        break;
      case Extension::kSquares:
        a_.push_back((j + 1) * (j + 1));
        break;
    }
  }
  for (std::size_t j = 0; j < a_.size(); ++j) {
    if (a_[j] < 1) throw InvalidArgument("schedule entries must be positive");
    if (!allow_nonstandard_) {
      if (j == 0 && a_[0] < 4) {
        throw InvalidArgument("schedule requires a_1 >= 4 (got " +
                              std::to_string(a_[0]) + ")");
      }
      if (j > 0 && a_[j] <= a_[j - 1]) {
        throw InvalidArgument("schedule must be strictly increasing at a_" +
                              std::to_string(j + 1));
      }
    }
  }
  n_.reserve(a_.size() + 1);
  n_.emplace_back(1);
  for (auto aj : a_) n_.push_back(n_.back() * BigInt(static_cast<long>(aj)));
  if (!allow_nonstandard_) {
    for (std::size_t k = 1; k + 1 < n_.size(); ++k) {
      if (n_[k + 1] < 4 * n_[k]) {
        throw InvalidArgument("schedule violates n_{k+1}/n_k >= 4 at k=" +
                              std::to_string(k));
      }
    }
  }
}

BlockSchedule BlockSchedule::linear(int depth, double p) {
  std::vector<std::int64_t> a;
  for (int j = 1; j <= depth + 1; ++j) a.push_back(j + 3);
  return BlockSchedule(std::move(a), depth, p, p, Extension::kIncrement);
}

BlockSchedule BlockSchedule::squares(int depth, double p) {
  std::vector<std::int64_t> a;
  for (int j = 1; j <= depth + 1; ++j) a.push_back(std::int64_t{j + 1} * (j + 1));
  return BlockSchedule(std::move(a), depth, p, p, Extension::kSquares);
}

std::int64_t BlockSchedule::a(int j) const {
  if (j < 1 || j > static_cast<int>(a_.size())) {
    throw InvalidArgument("a_" + std::to_string(j) + " is not materialized");
  }
  return a_[j - 1];
}

const BigInt& BlockSchedule::n(int k) const {
  if (k < 0 || k >= static_cast<int>(n_.size())) {
    throw InvalidArgument("n_" + std::to_string(k) + " is not materialized");
  }
  return n_[k];
}

BlockSchedule BlockSchedule::with_depth(int depth) const {
  return BlockSchedule(listed_, depth, outer_p_, inner_p_, extension_,
                       allow_nonstandard_);
}

}  // namespace nterm

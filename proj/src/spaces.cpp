#include "nterm/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nterm/errors.hpp"

namespace nterm {

namespace {

std::optional<unsigned> as_integer_exponent(double p) {
  if (p >= 1.0 && p <= 64.0 && std::floor(p) == p) return static_cast<unsigned>(p);
  return std::nullopt;
}

void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("norm exponent must satisfy 1 <= p < inf");
  }
}

}  // namespace

SpaceSpec SpaceSpec::lp(double p, BigInt dim) {
  check_exponent(p);
  if (dim < 1) throw InvalidArgument("l_p dimension must be positive");
  SpaceSpec s;
  s.kind_ = Kind::kLp;
  s.blocks_ = {{dim, dim}};
  s.sizes_ = {dim};
  s.inner_p_ = s.outer_p_ = p;
  return s;
}

SpaceSpec SpaceSpec::trunc_block(BigInt cap, BigInt size, double p) {
  check_exponent(p);
  if (cap < 1 || cap > size) throw InvalidArgument("X(n, N, p) needs 1 <= n <= N");
  SpaceSpec s;
  s.kind_ = Kind::kTruncBlock;
  s.blocks_ = {{cap, size}};
  s.sizes_ = {std::move(size)};
  s.inner_p_ = s.outer_p_ = p;
  return s;
}

SpaceSpec SpaceSpec::block_sum(const BlockSchedule& schedule) {
  SpaceSpec s;
  s.kind_ = Kind::kBlockSum;
  for (int b = 0; b < schedule.depth(); ++b) {
    s.blocks_.push_back({schedule.block_cap(b), schedule.block_size(b)});
    s.sizes_.push_back(schedule.block_size(b));
  }
  s.inner_p_ = schedule.inner_p();
  s.outer_p_ = schedule.outer_p();
  s.schedule_ = schedule;
  return s;
}

SpaceSpec SpaceSpec::direct_sum(std::vector<BlockShape> blocks, double inner_p,
                                double outer_p) {
  check_exponent(inner_p);
  check_exponent(outer_p);
  if (blocks.empty()) throw InvalidArgument("direct sum needs at least one block");
  SpaceSpec s;
  s.kind_ = Kind::kDirectSum;
  for (const auto& b : blocks) {
    if (b.cap < 1 || b.cap > b.size) throw InvalidArgument("block needs 1 <= cap <= size");
    s.sizes_.push_back(b.size);
  }
  s.blocks_ = std::move(blocks);
  s.inner_p_ = inner_p;
  s.outer_p_ = outer_p;
  return s;
}

std::optional<unsigned> SpaceSpec::integer_exponent() const {
  if (!additive()) return std::nullopt;
  return as_integer_exponent(outer_p_);
}

BigInt SpaceSpec::universe_size() const {
  BigInt total = 0;
  for (const auto& s : sizes_) total += s;
  return total;
}

std::string SpaceSpec::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kLp:
      out << "l_" << outer_p_ << "(" << sizes_[0].get_str() << ")";
      break;
    case Kind::kTruncBlock:
      out << "X(" << blocks_[0].cap.get_str() << "," << blocks_[0].size.get_str()
          << "," << outer_p_ << ")";
      break;
    case Kind::kBlockSum:
    case Kind::kDirectSum:
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (b) out << " (+)_" << outer_p_ << " ";
        out << "X(" << blocks_[b].cap.get_str() << "," << blocks_[b].size.get_str()
            << "," << inner_p_ << ")";
      }
      if (has_tail()) out << " (+) ...";
      break;
  }
  return out.str();
}

NormValue NormValue::zero(double exponent) {
  return {Rational(0), exponent, 0.0};
}

NormValue NormValue::from_power(const Rational& powered, double exponent) {
  Rational canonical(powered);
  canonical.canonicalize();
  const double value = std::pow(to_double(canonical), 1.0 / exponent);
  return {std::move(canonical), exponent, value};
}

NormValue NormValue::from_double(double value, double exponent) {
  return {std::nullopt, exponent, value};
}

int compare(const NormValue& a, const NormValue& b) {
  if (a.powered && b.powered && a.exponent == b.exponent) {
    return sgn(Rational(*a.powered - *b.powered));
  }
  const double scale = std::max(std::abs(a.value), std::abs(b.value));
  if (std::abs(a.value - b.value) <= kRelativeTolerance * scale) return 0;
  return a.value < b.value ? -1 : 1;
}

BlockPower block_power_after_removal(std::span<const Group> block, const BigInt& skip,
                                     const BigInt& cap, double p) {
  const auto exact_p = as_integer_exponent(p);
  BlockPower out;
  if (exact_p) out.exact = Rational(0);
  BigInt to_skip = skip;
  BigInt to_take = cap;
  for (const auto& g : block) {
    if (to_take == 0) break;
    BigInt avail = g.multiplicity;
    if (to_skip > 0) {
      const BigInt s = to_skip < avail ? to_skip : avail;
      avail -= s;
      to_skip -= s;
    }
    if (avail == 0) continue;
    const BigInt take = avail < to_take ? avail : to_take;
    to_take -= take;
    if (exact_p) *out.exact += Rational(take) * pow_int(g.magnitude, *exact_p);
    out.approx += static_cast<long double>(to_double(take)) *
                  std::pow(static_cast<long double>(to_double(g.magnitude)),
                           static_cast<long double>(p));
  }
  return out;
}

NormValue trunc_block_norm(std::span<const Group> block, const BigInt& cap, double p) {
  auto power = block_power_after_removal(block, BigInt(0), cap, p);
  if (power.exact) return NormValue::from_power(*power.exact, p);
  return NormValue::from_double(
      static_cast<double>(std::pow(power.approx, 1.0L / static_cast<long double>(p))), p);
}

NormValue combine_blocks(std::span<const BlockPower> per_block, const SpaceSpec& space) {
  if (space.additive()) {
    const double p = space.outer_p();
    bool exact = space.integer_exponent().has_value();
    Rational sum = 0;
    long double approx = 0.0L;
    for (const auto& bp : per_block) {
      if (exact && bp.exact) sum += *bp.exact;
      else exact = false;
      approx += bp.approx;
    }
    if (exact) return NormValue::from_power(sum, p);
    return NormValue::from_double(
        static_cast<double>(std::pow(approx, 1.0L / static_cast<long double>(p))), p);
  }
  const long double inner = space.inner_p();
  const long double outer = space.outer_p();
  long double total = 0.0L;
  for (const auto& bp : per_block) {
    total += std::pow(std::pow(bp.approx, 1.0L / inner), outer);
  }
  return NormValue::from_double(static_cast<double>(std::pow(total, 1.0L / outer)),
                                space.outer_p());
}

void validate(const CompressedVector& x, const SpaceSpec& space) {
  for (auto b : x.blocks()) {
    if (b >= space.block_count()) {
      throw CapacityError("block " + std::to_string(b) + " does not exist in " +
                          space.describe());
    }
    auto used = x.block_support(b);
    if (used > space.blocks()[b].size) {
      throw CapacityError("block " + std::to_string(b) + " holds " +
                          space.blocks()[b].size.get_str() + " coordinates but " +
                          used.get_str() + " were given");
    }
  }
}

NormValue space_norm(const CompressedVector& x, const SpaceSpec& space) {
  validate(x, space);
  std::vector<BlockPower> per_block;
  for (auto b : x.blocks()) {
    per_block.push_back(block_power_after_removal(x.block_groups(b), BigInt(0),
                                                  space.blocks()[b].cap, space.inner_p()));
  }
  return combine_blocks(per_block, space);
}

// --- explicit backend ------------------------------------------------------

ExplicitLayout make_layout(const SpaceSpec& space) {
  return make_layout(std::span<const BigInt>(space.block_sizes()));
}

NormValue explicit_norm(std::span<const Rational> coords, const SpaceSpec& space,
                        const ExplicitLayout& layout) {
  if (coords.size() != layout.dimension()) {
    throw InvalidArgument("coordinate count does not match the layout");
  }
  const auto exact_p = as_integer_exponent(space.inner_p());
  const bool exact = exact_p && space.additive();
  Rational total_exact = 0;
  long double total = 0.0L;
  for (std::size_t b = 0; b < layout.sizes.size(); ++b) {
    std::vector<Rational> mags;
    mags.reserve(layout.sizes[b]);
    for (std::size_t i = 0; i < layout.sizes[b]; ++i) {
      mags.push_back(abs(coords[layout.offsets[b] + i]));
    }
    std::sort(mags.begin(), mags.end(), std::greater<>());
    const auto cap = static_cast<std::size_t>(
        std::min<std::uint64_t>(to_u64(space.blocks()[b].cap), mags.size()));
    Rational block_exact = 0;
    long double block = 0.0L;
    for (std::size_t i = 0; i < cap; ++i) {
      if (exact) block_exact += pow_int(mags[i], *exact_p);
      block += std::pow(static_cast<long double>(mags[i].get_d()),
                        static_cast<long double>(space.inner_p()));
    }
    total_exact += block_exact;
    if (space.additive()) {
      total += block;
    } else {
      total += std::pow(std::pow(block, 1.0L / space.inner_p()),
                        static_cast<long double>(space.outer_p()));
    }
  }
  if (exact) return NormValue::from_power(total_exact, space.outer_p());
  return NormValue::from_double(
      static_cast<double>(std::pow(total, 1.0L / space.outer_p())), space.outer_p());
}

double explicit_norm_double(std::span<const double> coords, const SpaceSpec& space,
                            const ExplicitLayout& layout) {
  double total = 0.0;
  double scratch[64];
  std::vector<double> heap;
  for (std::size_t b = 0; b < layout.sizes.size(); ++b) {
    const std::size_t size = layout.sizes[b];
    double* mags = scratch;
    if (size > 64) {
      heap.resize(size);
      mags = heap.data();
    }
    for (std::size_t i = 0; i < size; ++i) mags[i] = std::abs(coords[layout.offsets[b] + i]);
    std::sort(mags, mags + size, std::greater<>());
    const auto cap = static_cast<std::size_t>(
        std::min<std::uint64_t>(to_u64(space.blocks()[b].cap), size));
    double block = 0.0;
    for (std::size_t i = 0; i < cap; ++i) block += std::pow(mags[i], space.inner_p());
    total += space.additive() ? block
                              : std::pow(std::pow(block, 1.0 / space.inner_p()),
                                         space.outer_p());
  }
  return std::pow(total, 1.0 / space.outer_p());
}

NormValue sup_form_norm_oracle(std::span<const Rational> coords, const BigInt& cap) {
  if (coords.size() > kMaxExplicitUniverse) {
    throw OracleUnavailable("sup-form oracle limited to 2^20 coordinates");
  }
  std::vector<Rational> squares;
  for (const auto& c : coords) {
    if (sgn(c) != 0) squares.push_back(c * c);
  }
  if (squares.size() > 25) {
    throw OracleUnavailable("sup-form oracle enumerates subsets of at most 25 nonzero "
                            "coordinates, got " + std::to_string(squares.size()));
  }
  // Inner sup over the unit ball: sum_{Γ} x_j v_j is maximized by
  // v = x|_Γ / ||x|_Γ||_2, giving ||x|_Γ||_2. Maximize its square over Γ.
  BigInt lcm = 1;
  for (const auto& s : squares) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), s.get_den_mpz_t());
  std::vector<BigInt> scaled;
  for (const auto& s : squares) scaled.push_back(BigInt(s * lcm));

  const std::size_t m = squares.size();
  const std::size_t max_size =
      cap >= BigInt(static_cast<unsigned long>(m)) ? m : to_u64(cap);
  // Scaled squares fit 120 bits in every practical case; fall back to GMP
  // sums otherwise.
  bool fast = true;
  std::vector<unsigned __int128> small;
  for (const auto& v : scaled) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > 120) {
      fast = false;
      break;
    }
    const auto lo = static_cast<unsigned __int128>(mpz_getlimbn(v.get_mpz_t(), 0));
    const auto hi = mpz_size(v.get_mpz_t()) > 1
                        ? static_cast<unsigned __int128>(mpz_getlimbn(v.get_mpz_t(), 1))
                        : 0;
    small.push_back(lo | hi << 64);
  }
  unsigned __int128 best_small = 0;
  BigInt best = 0;
  for (std::size_t k = 1; k <= max_size; ++k) {
    // Gosper's hack over k-subsets of m elements.
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << m;
    while (mask < limit) {
      if (fast) {
        unsigned __int128 sum = 0;
        for (std::size_t i = 0; i < m; ++i) {
          if (mask >> i & 1) sum += small[i];
        }
        best_small = std::max(best_small, sum);
      } else {
        BigInt sum = 0;
        for (std::size_t i = 0; i < m; ++i) {
          if (mask >> i & 1) sum += scaled[i];
        }
        if (sum > best) best = sum;
      }
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  if (fast) {
    best = BigInt(static_cast<unsigned long>(best_small >> 64));
    best <<= 64;
    best += static_cast<unsigned long>(best_small & ~std::uint64_t{0});
  }
  return NormValue::from_power(Rational(best, lcm), 2.0);
}

LatticeReport lattice_check(const SpaceSpec& space, int trials, std::uint64_t seed) {
  LatticeReport report;
  report.trials = trials;
  std::mt19937_64 rng(seed);
  const std::size_t blocks = std::min<std::size_t>(space.block_count(), 4);

  for (std::size_t b = 0; b < space.block_count(); ++b) {
    auto e = CompressedVector::canonicalize({{b, Rational(1), BigInt(1)}});
    if (compare(space_norm(e, space), NormValue::from_power(Rational(1), space.outer_p())) !=
        0) {
      report.normalized = false;
      if (report.witness.empty()) {
        report.witness = "||e_j|| != 1 in block " + std::to_string(b);
      }
    }
  }
  if (space.universe_size() <= 4096) {
    auto layout = make_layout(space);
    std::vector<Rational> coords(layout.dimension());
    for (std::size_t j = 0; j < coords.size(); ++j) {
      coords[j] = 1;
      if (compare(explicit_norm(coords, space, layout),
                  NormValue::from_power(Rational(1), space.outer_p())) != 0) {
        report.normalized = false;
        if (report.witness.empty()) report.witness = "||e_" + std::to_string(j) + "|| != 1";
      }
      coords[j] = 0;
    }
  }

  std::uniform_int_distribution<std::size_t> pick_block(0, blocks - 1);
  std::uniform_int_distribution<int> pick_mag(1, 8);
  std::uniform_int_distribution<int> pick_lambda(-16, 16);
  std::uniform_int_distribution<int> pick_count(1, 6);
  for (int t = 0; t < trials; ++t) {
    std::vector<Group> original;
    std::vector<Group> shrunk;
    std::vector<BigInt> used(space.block_count(), 0);
    const int count = pick_count(rng);
    for (int i = 0; i < count; ++i) {
      const auto b = pick_block(rng);
      if (used[b] >= space.blocks()[b].size) continue;
      used[b] += 1;
      const Rational a(pick_mag(rng));
      const Rational lambda(pick_lambda(rng), 16);
      original.push_back({b, a, BigInt(1)});
      shrunk.push_back({b, Rational(abs(Rational(lambda * a))), BigInt(1)});
    }
    auto x = CompressedVector::canonicalize(original, space.block_sizes());
    auto y = CompressedVector::canonicalize(shrunk, space.block_sizes());
    if (compare(space_norm(y, space), space_norm(x, space)) > 0) {
      ++report.failures;
      if (report.witness.empty()) {
        std::ostringstream w;
        w << "trial " << t << ": shrunk norm " << space_norm(y, space).value
          << " > original " << space_norm(x, space).value;
        report.witness = w.str();
      }
    }
  }
  return report;
}

}  // namespace nterm

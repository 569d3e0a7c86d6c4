#include "nterm/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "nterm/democracy.hpp"
#include "nterm/errors.hpp"

namespace nterm {

namespace {

// Contribution of one block to ||x||^outer_p.
struct Cost {
  std::optional<Rational> exact;
  long double approx = 0.0L;
};

Cost zero_cost(const SpaceSpec& space) {
  Cost c;
  if (space.integer_exponent()) c.exact = Rational(0);
  return c;
}

Cost operator+(const Cost& a, const Cost& b) {
  Cost c;
  if (a.exact && b.exact) c.exact = *a.exact + *b.exact;
  c.approx = a.approx + b.approx;
  return c;
}

int compare_cost(const Cost& a, const Cost& b) {
  if (a.exact && b.exact) return sgn(Rational(*a.exact - *b.exact));
  if (a.approx == b.approx) return 0;
  return a.approx < b.approx ? -1 : 1;
}

Cost block_cost(const CompressedVector& x, std::size_t block, const BigInt& removed,
                const SpaceSpec& space) {
  const auto bp = block_power_after_removal(x.block_groups(block), removed,
                                           space.blocks()[block].cap, space.inner_p());
  Cost c;
  if (space.additive()) {
    if (space.integer_exponent()) c.exact = bp.exact;
    c.approx = bp.approx;
    return c;
  }
  c.approx = std::pow(std::pow(bp.approx, 1.0L / space.inner_p()),
                      static_cast<long double>(space.outer_p()));
  return c;
}

NormValue to_norm(const Cost& total, const SpaceSpec& space) {
  if (total.exact) return NormValue::from_power(*total.exact, space.outer_p());
  return NormValue::from_double(
      static_cast<double>(std::pow(total.approx, 1.0L / space.outer_p())),
      space.outer_p());
}

const BigInt& min_of(const BigInt& a, const BigInt& b) { return a < b ? a : b; }
const BigInt& max_of(const BigInt& a, const BigInt& b) { return a < b ? b : a; }

BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

// Breakpoints of r -> cost of removing the r largest magnitudes of a block:
// group boundaries C_i and C_i - cap, clipped to [0, limit].
std::vector<BigInt> removal_breakpoints(std::span<const Group> groups, const BigInt& cap,
                                        const BigInt& limit) {
  std::vector<BigInt> points{BigInt(0), limit};
  BigInt cumulative = 0;
  auto add = [&](const BigInt& v) {
    if (v >= 0 && v <= limit) points.push_back(v);
  };
  for (const auto& g : groups) {
    cumulative += g.multiplicity;
    add(cumulative);
    add(BigInt(cumulative - cap));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace

std::string to_string(ErrorKind kind) {
  return kind == ErrorKind::kSigma ? "sigma" : "gamma";
}

GreedyOutcome gamma(const CompressedVector& x, std::uint64_t N, const SpaceSpec& space,
                    const GreedyBudget& budget) {
  validate(x, space);
  GreedyOutcome out;
  if (big(N) >= x.support_size()) {
    out.max_residual = out.min_residual = NormValue::zero(space.outer_p());
    return out;
  }
  const auto top = top_magnitudes(x, N);
  std::map<std::size_t, BigInt> removed;
  for (const auto& g : top.kept) removed[g.block] += g.multiplicity;

  std::map<std::size_t, BigInt> tie_blocks;
  if (top.tie) {
    for (const auto& [block, count] : top.tie->available) tie_blocks[block] = count;
  }
  Cost base = zero_cost(space);
  for (auto b : x.blocks()) {
    if (tie_blocks.count(b)) continue;
    base = base + block_cost(x, b, removed[b], space);
  }
  if (!top.tie) {
    out.max_residual = out.min_residual = to_norm(base, space);
    return out;
  }

  const auto& avail = top.tie->available;
  const std::size_t m = avail.size();
  std::vector<BigInt> suffix(m + 1, 0);
  for (std::size_t i = m; i-- > 0;) suffix[i] = suffix[i + 1] + avail[i].second;

  // Walks all allocations sum c_i = choose, 0 <= c_i <= available_i.
  // Every node has a leaf below it, so the walk costs O(leaves * m).
  std::vector<BigInt> choice(m);
  auto walk = [&](auto&& self, std::size_t i, const BigInt& rem,
                  const std::function<bool()>& leaf) -> bool {
    if (i + 1 == m) {
      choice[i] = rem;
      return leaf();
    }
    const BigInt lo = max_of(BigInt(0), BigInt(rem - suffix[i + 1]));
    const BigInt hi = min_of(avail[i].second, rem);
    for (BigInt c = lo; c <= hi; ++c) {
      choice[i] = c;
      if (!self(self, i + 1, BigInt(rem - c), leaf)) return false;
    }
    return true;
  };

  BigInt count = 0;
  const BigInt cap = big(budget.max_tie_allocations);
  walk(walk, 0, top.tie->choose, [&] {
    ++count;
    return count <= cap;
  });
  if (count > cap) {
    throw TieBudgetExceeded("gamma: more than " + std::to_string(budget.max_tie_allocations) +
                            " tie resolutions at magnitude " +
                            to_string(top.tie->magnitude) + "; refusing to sample");
  }
  out.allocations = count;

  std::vector<std::map<BigInt, Cost>> cache(m);
  std::optional<Cost> best_max, best_min;
  walk(walk, 0, top.tie->choose, [&] {
    Cost total = base;
    for (std::size_t i = 0; i < m; ++i) {
      auto it = cache[i].find(choice[i]);
      if (it == cache[i].end()) {
        const auto b = avail[i].first;
        it = cache[i].emplace(choice[i], block_cost(x, b, removed[b] + choice[i], space)).first;
      }
      total = total + it->second;
    }
    auto alloc = [&] {
      std::vector<std::pair<std::size_t, BigInt>> a;
      for (std::size_t i = 0; i < m; ++i) a.emplace_back(avail[i].first, choice[i]);
      return a;
    };
    if (!best_max || compare_cost(total, *best_max) > 0) {
      best_max = total;
      out.max_allocation = alloc();
    }
    if (!best_min || compare_cost(total, *best_min) < 0) {
      best_min = total;
      out.min_allocation = alloc();
    }
    return true;
  });
  out.max_residual = to_norm(*best_max, space);
  out.min_residual = to_norm(*best_min, space);
  return out;
}

NormValue sigma_dp(const CompressedVector& x, std::uint64_t N, const SpaceSpec& space) {
  validate(x, space);
  if (big(N) >= x.support_size()) return NormValue::zero(space.outer_p());
  const auto blocks = x.blocks();
  long double work = 0.0L;
  for (auto b : blocks) {
    work += static_cast<long double>(N) *
            std::min<long double>(to_double(x.block_support(b)), static_cast<long double>(N));
  }
  if (work > 2e8L) {
    throw TermBudgetExceeded("sigma_dp: N * support too large for the removal-count DP");
  }
  std::vector<std::optional<Cost>> best(N + 1);
  best[0] = zero_cost(space);
  for (auto b : blocks) {
    const BigInt supp = x.block_support(b);
    const std::uint64_t limit = supp < big(N) ? to_u64(supp) : N;
    std::vector<Cost> cost(limit + 1);
    for (std::uint64_t r = 0; r <= limit; ++r) cost[r] = block_cost(x, b, big(r), space);
    std::vector<std::optional<Cost>> next(N + 1);
    for (std::uint64_t j = 0; j <= N; ++j) {
      if (!best[j]) continue;
      for (std::uint64_t r = 0; r <= limit && j + r <= N; ++r) {
        Cost cand = *best[j] + cost[r];
        if (!next[j + r] || compare_cost(cand, *next[j + r]) < 0) next[j + r] = cand;
      }
    }
    best = std::move(next);
  }
  return to_norm(*best[N], space);
}

NormValue sigma_exact(const CompressedVector& x, std::uint64_t N, const SpaceSpec& space) {
  validate(x, space);
  if (big(N) >= x.support_size()) return NormValue::zero(space.outer_p());
  if (!space.additive()) return sigma_dp(x, N, space);

  const auto blocks = x.blocks();
  const std::size_t m = blocks.size();
  std::vector<BigInt> support(m);
  std::vector<std::vector<BigInt>> points(m);
  long double combos = 1.0L;
  for (std::size_t i = 0; i < m; ++i) {
    support[i] = x.block_support(blocks[i]);
    const BigInt limit = min_of(support[i], big(N));
    points[i] = removal_breakpoints(x.block_groups(blocks[i]),
                                    space.blocks()[blocks[i]].cap, limit);
    combos *= static_cast<long double>(points[i].size());
  }
  if (combos * static_cast<long double>(m) > 4e6L) return sigma_dp(x, N, space);

  // Each block cost is linear between consecutive breakpoints; on such a
  // cell the objective is linear under sum r_b = N, so some optimum has
  // every block but one at a breakpoint.
  std::vector<std::map<BigInt, Cost>> cache(m);
  auto cost_of = [&](std::size_t i, const BigInt& r) -> const Cost& {
    auto it = cache[i].find(r);
    if (it == cache[i].end()) it = cache[i].emplace(r, block_cost(x, blocks[i], r, space)).first;
    return it->second;
  };
  const BigInt target = big(N);
  std::optional<Cost> best;
  for (std::size_t free = 0; free < m; ++free) {
    auto rec = [&](auto&& self, std::size_t i, const BigInt& used, const Cost& acc) -> void {
      if (i == m) {
        const BigInt r = target - used;
        if (r < 0 || r > support[free]) return;
        Cost total = acc + cost_of(free, r);
        if (!best || compare_cost(total, *best) < 0) best = total;
        return;
      }
      if (i == free) {
        self(self, i + 1, used, acc);
        return;
      }
      for (const auto& r : points[i]) {
        if (used + r > target) break;
        self(self, i + 1, BigInt(used + r), acc + cost_of(i, r));
      }
    };
    rec(rec, 0, BigInt(0), zero_cost(space));
  }
  return to_norm(*best, space);
}

// --- two-pool closed forms -------------------------------------------------

std::optional<TwoPool> detect_two_pool(const CompressedVector& x, const SpaceSpec& space) {
  if (!space.additive() || x.groups().size() != 2) return std::nullopt;
  const auto& g0 = x.groups()[0];
  const auto& g1 = x.groups()[1];
  if (g0.block == g1.block || g0.magnitude == g1.magnitude) return std::nullopt;
  validate(x, space);
  const auto& big_g = g0.magnitude > g1.magnitude ? g0 : g1;
  const auto& small_g = g0.magnitude > g1.magnitude ? g1 : g0;
  TwoPool tp;
  tp.big_magnitude = big_g.magnitude;
  tp.big_count = big_g.multiplicity;
  tp.big_cap = space.blocks()[big_g.block].cap;
  tp.big_block = big_g.block;
  tp.small_magnitude = small_g.magnitude;
  tp.small_count = small_g.multiplicity;
  tp.small_cap = space.blocks()[small_g.block].cap;
  tp.small_block = small_g.block;
  tp.p = space.outer_p();
  return tp;
}

namespace {

NormValue pool_residual(const TwoPool& tp, const BigInt& big_left, const BigInt& small_left) {
  const BigInt a = min_of(big_left, tp.big_cap);
  const BigInt b = min_of(small_left, tp.small_cap);
  if (tp.p >= 1.0 && tp.p <= 64.0 && std::floor(tp.p) == tp.p) {
    const auto e = static_cast<unsigned>(tp.p);
    return NormValue::from_power(Rational(a) * pow_int(tp.big_magnitude, e) +
                                     Rational(b) * pow_int(tp.small_magnitude, e),
                                 tp.p);
  }
  const long double total = static_cast<long double>(to_double(a)) *
                                std::pow(static_cast<long double>(to_double(tp.big_magnitude)),
                                         static_cast<long double>(tp.p)) +
                            static_cast<long double>(to_double(b)) *
                                std::pow(static_cast<long double>(to_double(tp.small_magnitude)),
                                         static_cast<long double>(tp.p));
  return NormValue::from_double(static_cast<double>(std::pow(total, 1.0L / tp.p)), tp.p);
}

}  // namespace

NormValue two_pool_sigma(const TwoPool& tp, const BigInt& k) {
  if (k >= tp.support()) return NormValue::zero(tp.p);
  // Removing j from the big pool and k - j from the small pool; the cost is
  // concave in j, so the minimum sits at an end of the feasible range.
  const BigInt lo = max_of(BigInt(0), BigInt(k - tp.small_count));
  const BigInt hi = min_of(k, tp.big_count);
  auto at = [&](const BigInt& j) {
    return pool_residual(tp, BigInt(tp.big_count - j), BigInt(tp.small_count - (k - j)));
  };
  auto a = at(lo);
  auto b = at(hi);
  return compare(a, b) <= 0 ? a : b;
}

NormValue two_pool_gamma(const TwoPool& tp, const BigInt& k) {
  if (k >= tp.support()) return NormValue::zero(tp.p);
  if (k <= tp.big_count) return pool_residual(tp, BigInt(tp.big_count - k), tp.small_count);
  return pool_residual(tp, BigInt(0), BigInt(tp.small_count - (k - tp.big_count)));
}

// --- error sequences -------------------------------------------------------

ErrorSequence ErrorSequence::table(ErrorKind kind, std::vector<NormValue> entries,
                                   double exponent) {
  ErrorSequence seq;
  seq.kind_ = kind;
  seq.support_ = entries.size();
  seq.exponent_ = exponent;
  seq.entries_ = std::move(entries);
  return seq;
}

ErrorSequence ErrorSequence::closed_form(ErrorKind kind, TwoPool pool) {
  ErrorSequence seq;
  seq.kind_ = kind;
  seq.support_ = to_u64(pool.support());
  seq.exponent_ = pool.p;
  seq.pool_ = std::move(pool);
  return seq;
}

NormValue ErrorSequence::at(std::uint64_t k) const {
  if (k >= support_) return NormValue::zero(exponent_);
  if (pool_) {
    return kind_ == ErrorKind::kSigma ? two_pool_sigma(*pool_, big(k))
                                      : two_pool_gamma(*pool_, big(k));
  }
  return entries_[k];
}

ErrorSequence error_sequence(const CompressedVector& x, const SpaceSpec& space,
                             ErrorKind kind, const ErrorSequenceOptions& options) {
  if (options.allow_closed_form) {
    if (auto pool = detect_two_pool(x, space)) {
      return ErrorSequence::closed_form(kind, *pool);
    }
  }
  validate(x, space);
  const BigInt support = x.support_size();
  if (support > big(options.max_table_terms)) {
    throw TermBudgetExceeded("error table needs " + support.get_str() + " terms, budget is " +
                             std::to_string(options.max_table_terms));
  }
  const auto terms = to_u64(support);
  std::vector<NormValue> entries;
  entries.reserve(terms);
  for (std::uint64_t k = 0; k < terms; ++k) {
    entries.push_back(kind == ErrorKind::kSigma ? sigma_exact(x, k, space)
                                                : gamma(x, k, space, options.budget).max_residual);
  }
  return ErrorSequence::table(kind, std::move(entries), space.outer_p());
}

// --- estimators ------------------------------------------------------------

namespace {

double ratio_of(const NormValue& num, const NormValue& den) {
  if (num.powered && den.powered && num.exponent == den.exponent && *num.powered == *den.powered) {
    return 1.0;
  }
  return num.value / den.value;
}

}  // namespace

GreedyConstantEstimate greedy_constant(const SpaceSpec& space,
                                       const GreedyConstantConfig& config) {
  GreedyConstantEstimate est;
  std::mt19937_64 rng(config.seed);
  const std::size_t usable = std::min<std::size_t>(space.block_count(), 3);
  std::uniform_int_distribution<std::size_t> pick_block(0, usable - 1);
  std::uniform_int_distribution<int> pick_mag(1, config.max_magnitude);
  std::uniform_int_distribution<int> pick_support(1, config.max_support);

  auto consider = [&](double r, const std::string& what) {
    ++est.samples;
    if (r > est.value) {
      est.value = r;
      est.witness = what;
    }
  };

  for (int t = 0; t < config.trials; ++t) {
    std::vector<Group> raw;
    std::vector<BigInt> used(space.block_count(), 0);
    const int support = pick_support(rng);
    for (int i = 0; i < support; ++i) {
      const auto b = pick_block(rng);
      if (used[b] >= space.blocks()[b].size) continue;
      used[b] += 1;
      raw.push_back({b, Rational(pick_mag(rng)), BigInt(1)});
    }
    const auto x = CompressedVector::canonicalize(raw, space.block_sizes());
    const auto supp = to_u64(x.support_size());
    for (std::uint64_t N = 1; N < supp; ++N) {
      const auto s = sigma_exact(x, N, space);
      if (s.value == 0.0) continue;
      const auto g = gamma(x, N, space).max_residual;
      std::ostringstream what;
      what << "trial " << t << " N=" << N;
      consider(ratio_of(g, s), what.str());
    }
  }

  if (config.adversarial) {
    for (std::size_t b = 0; b + 1 < space.block_count(); ++b) {
      const auto& m_block = space.blocks()[b];
      const auto& v_block = space.blocks()[b + 1];
      if (!fits_u64(m_block.size)) break;
      const BigInt v = min_of(min_of(m_block.size, v_block.cap), v_block.size);
      const auto x = CompressedVector::canonicalize(
          {{b, Rational(65, 64), m_block.size}, {b + 1, Rational(1), v}}, space.block_sizes());
      const auto pool = detect_two_pool(x, space);
      if (!pool) continue;
      const auto s = two_pool_sigma(*pool, m_block.size);
      const auto g = two_pool_gamma(*pool, m_block.size);
      if (s.value == 0.0) continue;
      consider(ratio_of(g, s), "two-pool witness on blocks " + std::to_string(b) + "," +
                                   std::to_string(b + 1) + " N=" + m_block.size.get_str());
    }
  }
  return est;
}

double democracy_constant(const SpaceSpec& space, std::uint64_t N, DemocracyMode mode) {
  if (N == 0) return 1.0;
  const auto pair = mode == DemocracyMode::kBruteForce ? demfun_bruteforce(space, N)
                                                       : demfun_dp(space, N);
  if (pair.left.powered && pair.right.powered && *pair.left.powered == *pair.right.powered) {
    return 1.0;
  }
  return pair.right.value / pair.left.value;
}

}  // namespace nterm

#include "nterm/democracy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "nterm/errors.hpp"

namespace nterm {

namespace {

BigInt big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }
const BigInt& min_of(const BigInt& a, const BigInt& b) { return a < b ? a : b; }

DemocracyValue additive_value(BigInt powered, std::vector<BigInt> allocation, double p) {
  DemocracyValue v;
  v.value = std::pow(to_double(powered), 1.0 / p);
  v.powered = std::move(powered);
  v.allocation = std::move(allocation);
  return v;
}

void check_finite_range(const SpaceSpec& space, std::uint64_t N) {
  if (big(N) > space.universe_size()) {
    throw InvalidArgument("N = " + std::to_string(N) + " exceeds the dimension of " +
                          space.describe());
  }
}

void check_left_adequacy(const SpaceSpec& space, std::uint64_t N) {
  if (!space.has_tail()) return check_finite_range(space, N);
  const auto& last = space.blocks().back().size;
  if (big(N) > last) {
    throw InadequateTruncation("h_l(" + std::to_string(N) + ") needs N <= n_{K+1} = " +
                               last.get_str() + "; materialize more blocks");
  }
}

void check_right_adequacy(const SpaceSpec& space, std::uint64_t N) {
  if (!space.has_tail()) return check_finite_range(space, N);
  BigInt caps = 0;
  for (const auto& b : space.blocks()) caps += b.cap;
  if (big(N) > caps) {
    throw InadequateTruncation("h_r(" + std::to_string(N) + ") needs N <= n_1 + ... + n_K = " +
                               caps.get_str() + "; materialize more blocks");
  }
}

}  // namespace

DemocracyValue left_democracy(const SpaceSpec& space, std::uint64_t N) {
  check_left_adequacy(space, N);
  const std::size_t B = space.block_count();
  if (!space.additive()) return demfun_allocation_dp(space, N).left;
  if (N == 0) return additive_value(BigInt(0), std::vector<BigInt>(B, 0), space.outer_p());

  // sum_b min(m_b, cap_b) is separable and concave, so a minimizer lies at
  // a vertex of {sum m_b = N, 0 <= m_b <= size_b}: every block empty or
  // full except at most one.
  const BigInt target = big(N);
  std::optional<BigInt> best;
  std::vector<BigInt> best_alloc, alloc(B, 0);
  for (std::size_t free = 0; free < B; ++free) {
    auto rec = [&](auto&& self, std::size_t b, const BigInt& used, const BigInt& cost) -> void {
      if (b == B) {
        const BigInt rem = target - used;
        const auto& shape = space.blocks()[free];
        if (rem < 0 || rem > shape.size) return;
        const BigInt total = cost + min_of(rem, shape.cap);
        if (!best || total < *best) {
          best = total;
          best_alloc = alloc;
          best_alloc[free] = rem;
        }
        return;
      }
      if (b == free) return self(self, b + 1, used, cost);
      alloc[b] = 0;
      self(self, b + 1, used, cost);
      const auto& shape = space.blocks()[b];
      if (used + shape.size <= target) {
        alloc[b] = shape.size;
        self(self, b + 1, BigInt(used + shape.size), BigInt(cost + shape.cap));
        alloc[b] = 0;
      }
    };
    rec(rec, 0, BigInt(0), BigInt(0));
  }
  return additive_value(*best, std::move(best_alloc), space.outer_p());
}

DemocracyValue right_democracy(const SpaceSpec& space, std::uint64_t N) {
  check_right_adequacy(space, N);
  if (!space.additive()) return demfun_allocation_dp(space, N).right;
  // Every coordinate up to a block's cap adds 1, the rest add 0: fill caps
  // first, then spare room.
  const std::size_t B = space.block_count();
  std::vector<BigInt> alloc(B, 0);
  BigInt rem = big(N);
  BigInt powered = 0;
  for (std::size_t b = 0; b < B && rem > 0; ++b) {
    const BigInt take = min_of(rem, space.blocks()[b].cap);
    alloc[b] = take;
    powered += take;
    rem -= take;
  }
  for (std::size_t b = 0; b < B && rem > 0; ++b) {
    const BigInt take = min_of(rem, BigInt(space.blocks()[b].size - alloc[b]));
    alloc[b] += take;
    rem -= take;
  }
  return additive_value(std::move(powered), std::move(alloc), space.outer_p());
}

DemFunPair demfun_dp(const SpaceSpec& space, std::uint64_t N) {
  return {left_democracy(space, N), right_democracy(space, N)};
}

DemFunPair demfun_allocation_dp(const SpaceSpec& space, std::uint64_t N) {
  if (N > 20000) throw InvalidArgument("demfun_allocation_dp limited to N <= 20000");
  check_finite_range(space, N);
  const std::size_t B = space.block_count();
  const bool additive = space.additive();
  const double rho = space.outer_p() / space.inner_p();

  std::vector<std::uint64_t> limit(B);
  long double work = 0.0L;
  for (std::size_t b = 0; b < B; ++b) {
    const auto& size = space.blocks()[b].size;
    limit[b] = size < big(N) ? to_u64(size) : N;
    work += static_cast<long double>(N + 1) * (limit[b] + 1);
  }
  if (work > 4e8L) throw InvalidArgument("demfun_allocation_dp: instance too large");

  // Costs are small integers in the additive case; doubles otherwise.
  auto cost = [&](std::size_t b, std::uint64_t m) -> double {
    const auto& cap = space.blocks()[b].cap;
    const std::uint64_t counted = cap < big(m) ? to_u64(cap) : m;
    return additive ? static_cast<double>(counted) : std::pow(static_cast<double>(counted), rho);
  };

  constexpr double kNone = -1.0;
  std::vector<double> lo(N + 1, kNone), hi(N + 1, kNone);
  lo[0] = hi[0] = 0.0;
  std::vector<std::vector<std::uint32_t>> lo_choice(B, std::vector<std::uint32_t>(N + 1)),
      hi_choice(B, std::vector<std::uint32_t>(N + 1));
  for (std::size_t b = 0; b < B; ++b) {
    std::vector<double> nlo(N + 1, kNone), nhi(N + 1, kNone);
    for (std::uint64_t j = 0; j <= N; ++j) {
      if (lo[j] == kNone) continue;
      for (std::uint64_t m = 0; m <= limit[b] && j + m <= N; ++m) {
        const double c = cost(b, m);
        if (nlo[j + m] == kNone || lo[j] + c < nlo[j + m]) {
          nlo[j + m] = lo[j] + c;
          lo_choice[b][j + m] = static_cast<std::uint32_t>(m);
        }
        if (nhi[j + m] == kNone || hi[j] + c > nhi[j + m]) {
          nhi[j + m] = hi[j] + c;
          hi_choice[b][j + m] = static_cast<std::uint32_t>(m);
        }
      }
    }
    lo = std::move(nlo);
    hi = std::move(nhi);
  }
  auto recover = [&](const std::vector<std::vector<std::uint32_t>>& choice) {
    std::vector<BigInt> alloc(B, 0);
    std::uint64_t j = N;
    for (std::size_t b = B; b-- > 0;) {
      alloc[b] = choice[b][j];
      j -= choice[b][j];
    }
    return alloc;
  };
  auto make = [&](double total, std::vector<BigInt> alloc) {
    if (additive) {
      return additive_value(BigInt(static_cast<unsigned long>(std::llround(total))),
                            std::move(alloc), space.outer_p());
    }
    DemocracyValue v;
    v.value = std::pow(total, 1.0 / space.outer_p());
    v.allocation = std::move(alloc);
    return v;
  };
  return {make(lo[N], recover(lo_choice)), make(hi[N], recover(hi_choice))};
}

DemFunPair demfun_bruteforce(const SpaceSpec& space, std::uint64_t N) {
  if (space.universe_size() > 20) {
    throw OracleUnavailable("demfun_bruteforce enumerates universes of at most 20 "
                            "coordinates; " + space.describe() + " is larger");
  }
  const auto layout = make_layout(space);
  const std::size_t dim = layout.dimension();
  if (N > dim) throw InvalidArgument("N exceeds the dimension");

  std::optional<NormValue> lo, hi;
  std::uint32_t lo_mask = 0, hi_mask = 0;
  std::vector<Rational> coords(dim);
  auto visit = [&](std::uint32_t mask) {
    for (std::size_t i = 0; i < dim; ++i) coords[i] = (mask >> i & 1) ? 1 : 0;
    const auto value = explicit_norm(coords, space, layout);
    if (!lo || compare(value, *lo) < 0) {
      lo = value;
      lo_mask = mask;
    }
    if (!hi || compare(value, *hi) > 0) {
      hi = value;
      hi_mask = mask;
    }
  };
  if (N == 0) {
    visit(0);
  } else {
    std::uint32_t mask = (std::uint32_t{1} << N) - 1;
    const std::uint32_t limit = std::uint32_t{1} << dim;
    while (mask < limit) {
      visit(mask);
      const std::uint32_t c = mask & (~mask + 1);
      const std::uint32_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  auto make = [&](const NormValue& v, std::uint32_t mask) {
    DemocracyValue out;
    out.value = v.value;
    if (v.powered) out.powered = BigInt(v.powered->get_num());
    out.allocation.assign(layout.sizes.size(), 0);
    for (std::size_t i = 0; i < dim; ++i) {
      if (mask >> i & 1) out.allocation[layout.block_of[i]] += 1;
    }
    return out;
  };
  return {make(*lo, lo_mask), make(*hi, hi_mask)};
}

DemFunTable demfun_table(const SpaceSpec& space, std::uint64_t max_N) {
  DemFunTable table;
  table.range_N = max_N;
  table.values.reserve(max_N + 1);
  for (std::uint64_t N = 0; N <= max_N; ++N) table.values.push_back(demfun_dp(space, N));
  return table;
}

std::vector<DoublingRow> doubling_scan(const SpaceSpec& space, int k_first, int k_last) {
  if (!space.schedule()) throw InvalidArgument("doubling scan needs a schedule block sum");
  if (!space.additive()) throw InvalidArgument("doubling scan needs inner_p == outer_p");
  if (k_first < 1 || k_last < k_first) throw InvalidArgument("doubling scan needs 1 <= k_first <= k_last");
  const auto& schedule = *space.schedule();
  const double p = space.outer_p();
  std::vector<DoublingRow> rows;
  for (int k = k_first; k <= k_last; ++k) {
    if (k + 1 > schedule.depth()) {
      throw InadequateTruncation("doubling scan at k=" + std::to_string(k) + " needs " +
                                 std::to_string(k + 1) + " blocks, schedule has " +
                                 std::to_string(schedule.depth()));
    }
    DoublingRow row;
    row.k = k;
    row.a_next = schedule.a(k + 1);
    row.n_k = schedule.n(k);
    row.n_next = schedule.n(k + 1);
    const auto n = to_u64(row.n_next);
    row.hl_n = *left_democracy(space, n).powered;
    row.hl_2n = *left_democracy(space, 2 * n).powered;
    row.ratio_powered = Rational(row.hl_2n, row.hl_n);
    row.ratio_powered.canonicalize();
    row.bound_powered = Rational(2 * row.a_next, 3);
    row.bound_powered.canonicalize();
    row.ratio = std::pow(to_double(row.ratio_powered), 1.0 / p);
    row.bound = std::pow(to_double(row.bound_powered), 1.0 / p);
    row.meets_bound = row.ratio_powered >= row.bound_powered;
    row.upper_ok = row.hl_n <= row.n_k;
    row.upper_equal = row.hl_n == row.n_k;
    rows.push_back(std::move(row));
  }
  return rows;
}

PrefixReport prefix_norm_check(const SpaceSpec& space, std::uint64_t N_first,
                               std::uint64_t N_last) {
  if (!space.additive()) throw InvalidArgument("prefix check needs inner_p == outer_p");
  PrefixReport report;
  for (std::uint64_t N = N_first; N <= N_last; ++N) {
    PrefixRow row;
    row.N = N;
    BigInt rem = big(N);
    for (const auto& shape : space.blocks()) {
      const BigInt take = min_of(rem, shape.size);
      row.prefix_powered += min_of(take, shape.cap);
      rem -= take;
    }
    if (rem > 0) throw InvalidArgument("prefix longer than the materialized blocks");
    row.hl_powered = *left_democracy(space, N).powered;
    row.equal = row.prefix_powered == row.hl_powered;
    if (!row.equal) report.counterexamples.push_back(N);
    report.rows.push_back(std::move(row));
  }
  return report;
}

// --- (k_mu, n_mu) construction -----------------------------------------------

ProbedFunction ProbedFunction::from_callable(std::string name, Fn fn,
                                             std::vector<std::uint64_t> probes) {
  ProbedFunction f;
  f.name_ = std::move(name);
  f.fn_ = std::move(fn);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  std::erase(probes, std::uint64_t{0});
  f.probes_ = std::move(probes);
  f.callable_limit_ = ~std::uint64_t{0};
  return f;
}

ProbedFunction ProbedFunction::from_table(std::string name,
                                          std::map<std::uint64_t, double> table) {
  ProbedFunction f;
  f.name_ = std::move(name);
  table.erase(0);
  for (const auto& [N, v] : table) f.probes_.push_back(N);
  f.table_ = std::move(table);
  return f;
}

std::optional<double> ProbedFunction::operator()(std::uint64_t N) const {
  if (N == 0) return std::nullopt;
  if (fn_) return fn_(N);
  if (auto it = table_.find(N); it != table_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::uint64_t> default_probe_grid(std::uint64_t limit) {
  std::vector<std::uint64_t> grid;
  const std::uint64_t dense = std::min<std::uint64_t>(65536, limit);
  for (std::uint64_t N = 1; N <= dense; ++N) grid.push_back(N);
  const long double step = std::exp2(1.0L / 64.0L);
  std::uint64_t x = dense;
  while (true) {
    const long double next_ld = std::ceil(static_cast<long double>(x) * step);
    if (next_ld > static_cast<long double>(limit)) break;
    const auto next = std::max<std::uint64_t>(x + 1, static_cast<std::uint64_t>(next_ld));
    if (next > limit) break;
    grid.push_back(next);
    x = next;
  }
  return grid;
}

CghmSequences cghm_construct(const ProbedFunction& h_r, const ProbedFunction& h_l, double C,
                             double alpha, int count) {
  if (!(C > 0.0) || !(alpha >= 0.0) || count < 1) {
    throw InvalidArgument("cghm_construct needs C > 0, alpha >= 0, count >= 1");
  }
  CghmSequences out;
  out.C = C;
  out.alpha = alpha;

  std::vector<std::uint64_t> probes;
  std::set_intersection(h_r.probes().begin(), h_r.probes().end(), h_l.probes().begin(),
                        h_l.probes().end(), std::back_inserter(probes));
  std::vector<double> ratio(probes.size());
  std::optional<double> prev_l, prev_r;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double l = *h_l(probes[i]);
    const double r = *h_r(probes[i]);
    if (!(l > 0.0) || !(r > 0.0)) throw InvalidArgument("democracy functions must be positive");
    if ((prev_l && l < *prev_l) || (prev_r && r < *prev_r)) {
      throw InvalidArgument("democracy functions must be increasing on the probe range (N=" +
                            std::to_string(probes[i]) + ")");
    }
    prev_l = l;
    prev_r = r;
    ratio[i] = r / l;
    if (probes[i] <= (~std::uint64_t{0}) / 2) {
      if (auto l2 = h_l(2 * probes[i]); l2 && *l2 > C * l * (1.0 + 1e-12)) {
        throw InvalidArgument("h_l is not doubling with constant " + std::to_string(C) +
                              " at N=" + std::to_string(probes[i]));
      }
    }
  }

  std::size_t w_pos = 0;
  std::uint64_t prev_k = 0;
  for (int mu = 1; mu <= count; ++mu) {
    // w_mu: first probe past w_{mu-1} with h_r/h_l > mu.
    while (w_pos < probes.size() && ratio[w_pos] <= static_cast<double>(mu)) ++w_pos;
    if (w_pos >= probes.size()) {
      out.exhausted = true;
      out.exhaustion = "ratio step: no probe with h_r/h_l > " + std::to_string(mu) +
                       " (ratio bounded on the probe range)";
      break;
    }
    CghmTerm term;
    term.mu = mu;
    term.w = probes[w_pos++];
    term.r = static_cast<int>(std::bit_width(term.w));
    term.threshold = std::pow(C, term.r) * std::pow(static_cast<double>(term.w), alpha);

    auto k_it = std::upper_bound(probes.begin(), probes.end(), prev_k);
    std::size_t k_pos = static_cast<std::size_t>(k_it - probes.begin());
    while (k_pos < probes.size() && ratio[k_pos] < term.threshold) ++k_pos;
    if (k_pos >= probes.size()) {
      out.exhausted = true;
      out.exhaustion = "threshold step: no probe with h_r/h_l >= C^r w^alpha = " +
                       std::to_string(term.threshold) + " for mu=" + std::to_string(mu);
      break;
    }
    term.k = probes[k_pos];
    term.ratio_k = ratio[k_pos];
    const auto n = static_cast<unsigned __int128>(term.w) * term.k;
    if (n > ~std::uint64_t{0}) {
      out.exhausted = true;
      out.exhaustion = "n_mu = w_mu k_mu overflows 64 bits for mu=" + std::to_string(mu);
      break;
    }
    term.n = static_cast<std::uint64_t>(n);
    const auto hl_n = h_l(term.n);
    if (!hl_n) {
      out.exhausted = true;
      out.exhaustion = "h_l(n_mu) outside the probed range for mu=" + std::to_string(mu);
      break;
    }
    term.lhs = *h_r(term.k) / *hl_n;
    term.rhs = std::pow(static_cast<double>(term.n) / static_cast<double>(term.k), alpha);
    term.holds = term.lhs >= term.rhs * (1.0 - 1e-12);
    prev_k = term.k;
    out.terms.push_back(term);
  }
  return out;
}

Condition71Report condition71_check(
    const ProbedFunction& h_r, const ProbedFunction& h_l,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs, double C, double alpha) {
  Condition71Report report;
  report.growth = pairs.size() >= 2;
  bool inequality = true;
  std::optional<long double> prev_ratio;
  for (const auto& [k, n] : pairs) {
    Condition71Row row;
    row.k = k;
    row.n = n;
    const bool ordered = n >= k && k >= 1;
    const long double q = ordered ? static_cast<long double>(n) / k : 0.0L;
    row.growth_ok = ordered && (!prev_ratio || q > *prev_ratio);
    if (ordered) prev_ratio = q;
    const auto hr = h_r(k);
    const auto hl = h_l(n);
    if (ordered && hr && hl) {
      row.lhs = *hr / *hl;
      row.rhs = C * std::pow(static_cast<double>(q), alpha);
      row.inequality_ok = row.lhs >= row.rhs * (1.0 - 1e-12);
    }
    report.growth = report.growth && row.growth_ok;
    inequality = inequality && row.inequality_ok;
    report.rows.push_back(row);
  }
  report.all_pass = report.growth && inequality && !pairs.empty();
  return report;
}

}  // namespace nterm

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "nterm/errors.hpp"
#include "nterm/greedy.hpp"

namespace nterm {

namespace {

// Minimizes f over R^d: a grid of at most kGridBudget points on
// [-range, range]^d, then a pattern search with step halving.
constexpr double kGridBudget = 2e5;
constexpr double kFinestStep = 1.0 / 64.0;

template <class F>
double minimize_free_coefficients(F&& f, std::size_t d, double range) {
  if (d == 0) {
    std::vector<double> none;
    return f(none);
  }
  const double span = 2.0 * range;
  std::size_t per_dim = static_cast<std::size_t>(std::floor(std::pow(kGridBudget, 1.0 / d)));
  per_dim = std::min(per_dim, static_cast<std::size_t>(span / kFinestStep) + 1);
  per_dim = std::max<std::size_t>(per_dim, 3);
  const double step = span / static_cast<double>(per_dim - 1);

  std::vector<std::size_t> idx(d, 0);
  std::vector<double> b(d), best_b(d);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t i = 0; i < d; ++i) b[i] = -range + step * static_cast<double>(idx[i]);
    const double v = f(b);
    if (v < best) {
      best = v;
      best_b = b;
    }
    std::size_t i = 0;
    while (i < d && ++idx[i] == per_dim) idx[i++] = 0;
    if (i == d) break;
  }

  // Every nonzero direction in {-1, 0, 1}^d, so ties among the largest
  // residuals can be reduced together.
  std::vector<std::vector<double>> dirs;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<double> e(d);
    std::size_t c = code;
    bool zero = true;
    for (std::size_t i = 0; i < d; ++i, c /= 3) {
      e[i] = static_cast<double>(c % 3) - 1.0;
      zero = zero && e[i] == 0.0;
    }
    if (!zero) dirs.push_back(std::move(e));
  }
  double h = step;
  while (h > 1e-12) {
    bool moved = false;
    for (const auto& e : dirs) {
      for (std::size_t i = 0; i < d; ++i) b[i] = best_b[i] + h * e[i];
      const double v = f(b);
      if (v < best) {
        best = v;
        best_b = b;
        moved = true;
      }
    }
    if (!moved) h *= 0.5;
  }
  return best;
}

}  // namespace

double sigma_oracle_grid(std::span<const double> coords, std::uint64_t N,
                         const SpaceSpec& space) {
  const auto layout = make_layout(space);
  const std::size_t dim = coords.size();
  if (dim != layout.dimension()) throw InvalidArgument("coordinate count does not match the space");
  if (dim > 4) throw OracleUnavailable("sigma_oracle_grid handles at most 4 coordinates");
  double range = 1.0;
  for (double c : coords) {
    if (std::abs(c) > 8.0) throw OracleUnavailable("sigma_oracle_grid needs |x_j| <= 8");
    range = std::max(range, std::abs(c));
  }
  range += 1.0;
  if (N >= dim) return 0.0;

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> y(dim);
  for (std::uint32_t mask = 0; mask < (1u << dim); ++mask) {
    if (static_cast<std::uint64_t>(std::popcount(mask)) != N) continue;
    std::vector<std::size_t> lambda;
    for (std::size_t i = 0; i < dim; ++i) {
      if (mask >> i & 1) lambda.push_back(i);
    }
    auto f = [&](const std::vector<double>& b) {
      for (std::size_t i = 0; i < dim; ++i) y[i] = coords[i];
      for (std::size_t j = 0; j < lambda.size(); ++j) y[lambda[j]] -= b[j];
      return explicit_norm_double(y, space, layout);
    };
    best = std::min(best, minimize_free_coefficients(f, lambda.size(), range));
  }
  return best;
}

GreedyOutcome gamma_bruteforce(std::span<const Rational> coords, std::uint64_t N,
                               const SpaceSpec& space) {
  const auto layout = make_layout(space);
  const std::size_t dim = coords.size();
  if (dim != layout.dimension()) throw InvalidArgument("coordinate count does not match the space");
  if (dim > 30) throw OracleUnavailable("gamma_bruteforce handles at most 30 coordinates");

  std::vector<Rational> mags(dim);
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < dim; ++i) {
    mags[i] = abs(coords[i]);
    if (mags[i] != 0) support.push_back(i);
  }
  GreedyOutcome out;
  if (N >= support.size()) {
    out.max_residual = out.min_residual = NormValue::zero(space.outer_p());
    return out;
  }

  std::vector<Rational> sorted(mags);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const Rational threshold = N == 0 ? Rational(0) : sorted[N - 1];
  std::vector<std::size_t> above, tied;
  for (std::size_t i : support) {
    if (N > 0 && mags[i] > threshold) above.push_back(i);
    if (N > 0 && mags[i] == threshold) tied.push_back(i);
  }
  const std::size_t choose = N - above.size();
  if (tied.size() > 20) throw OracleUnavailable("gamma_bruteforce: tie class larger than 20");

  std::vector<Rational> residual(mags);
  for (std::size_t i : above) residual[i] = 0;

  std::optional<NormValue> hi, lo;
  std::set<std::vector<std::size_t>> allocations;
  const std::size_t t = tied.size();
  for (std::uint32_t mask = 0; mask < (1u << t); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != choose) continue;
    std::vector<std::size_t> counts(layout.sizes.size(), 0);
    for (std::size_t j = 0; j < t; ++j) {
      residual[tied[j]] = (mask >> j & 1) ? Rational(0) : mags[tied[j]];
      if (mask >> j & 1) ++counts[layout.block_of[tied[j]]];
    }
    allocations.insert(counts);
    const auto value = explicit_norm(residual, space, layout);
    auto alloc = [&] {
      std::vector<std::pair<std::size_t, BigInt>> a;
      std::set<std::size_t> blocks;
      for (std::size_t j : tied) blocks.insert(layout.block_of[j]);
      for (std::size_t bl : blocks) {
        a.emplace_back(bl, BigInt(static_cast<unsigned long>(counts[bl])));
      }
      return a;
    };
    if (!hi || compare(value, *hi) > 0) {
      hi = value;
      out.max_allocation = alloc();
    }
    if (!lo || compare(value, *lo) < 0) {
      lo = value;
      out.min_allocation = alloc();
    }
  }
  out.max_residual = *hi;
  out.min_residual = *lo;
  out.allocations = BigInt(static_cast<unsigned long>(allocations.size()));
  return out;
}

}  // namespace nterm

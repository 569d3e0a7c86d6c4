#include "nterm/approx.hpp"

#include <cmath>
#include <cstdio>

#include "nterm/democracy.hpp"
#include "nterm/errors.hpp"

namespace nterm {

namespace {

constexpr double kTol = 1e-9;

class Neumaier {
 public:
  void add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  long double value() const { return sum_ + carry_; }

 private:
  long double sum_ = 0.0L;
  long double carry_ = 0.0L;
};

long double power_of(const NormValue& e, double q) {
  if (e.powered) {
    return std::pow(static_cast<long double>(to_double(*e.powered)),
                    static_cast<long double>(q) / e.exponent);
  }
  return std::pow(static_cast<long double>(e.value), static_cast<long double>(q));
}

// c * m^{1/p}, exact in powered form when p is an integer.
NormValue scaled(const Rational& c, const BigInt& m, double p, std::optional<unsigned> ip) {
  if (ip) return NormValue::from_power(Rational(pow_int(c, *ip) * Rational(m)), p);
  return NormValue::from_double(to_double(c) * std::pow(to_double(m), 1.0 / p), p);
}

// Integral bounds on sum_{k=a}^{b} k^e for a >= 1.
long double power_sum_upper(std::uint64_t a, std::uint64_t b, long double e) {
  if (b < a) return 0.0L;
  auto integral = [&](long double lo, long double hi) {
    if (std::fabs(e + 1.0L) < 1e-15L) return std::log(hi / lo);
    return (std::pow(hi, e + 1.0L) - std::pow(lo, e + 1.0L)) / (e + 1.0L);
  };
  const long double la = static_cast<long double>(a), lb = static_cast<long double>(b);
  if (e >= 0.0L) return integral(la, lb + 1.0L);
  return std::pow(la, e) + integral(la, lb);
}

bool approx_le(double a, double b) { return a <= b * (1.0 + kTol) + 1e-300; }

}  // namespace

void ApproxParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
  if (!(q > 0.0)) throw InvalidArgument("q must be positive or inf");
}

std::string format_q(double q) {
  if (q == std::numeric_limits<double>::infinity()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", q);
  return buf;
}

double parse_q(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  double q = 0.0;
  try {
    q = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("bad q: " + text);
  }
  if (used != text.size() || !(q > 0.0)) throw InvalidArgument("bad q: " + text);
  return q;
}

long double power_sum(std::uint64_t first, std::uint64_t last, long double e) {
  Neumaier acc;
  for (std::uint64_t k = first; k <= last; ++k) acc.add(std::pow(static_cast<long double>(k), e));
  return acc.value();
}

double quasinorm(double norm, const ErrorSequence& errors, const ApproxParams& params,
                 const QuasiNormOptions& options) {
  params.validate();
  const std::uint64_t support = errors.support_size();
  const std::uint64_t last = support > 0 ? support - 1 : 0;
  if (last > options.max_terms) {
    throw TermBudgetExceeded("quasi-norm needs " + std::to_string(last) +
                             " terms, budget is " + std::to_string(options.max_terms));
  }
  if (params.q_infinite()) {
    long double best = 0.0L;
    for (std::uint64_t k = 1; k <= last; ++k) {
      const long double t =
          std::pow(static_cast<long double>(k), static_cast<long double>(params.alpha)) *
          errors.at(k).value;
      best = std::max(best, t);
    }
    return static_cast<double>(norm + best);
  }
  const long double weight = static_cast<long double>(params.q) * params.alpha - 1.0L;
  auto term = [&](std::uint64_t k) {
    return std::pow(static_cast<long double>(k), weight) * power_of(errors.at(k), params.q);
  };
  Neumaier acc;
  if (options.order == SumOrder::kForward) {
    for (std::uint64_t k = 1; k <= last; ++k) acc.add(term(k));
  } else {
    for (std::uint64_t k = last; k >= 1; --k) acc.add(term(k));
  }
  const long double series = std::pow(acc.value(), 1.0L / params.q);
  return static_cast<double>(norm + series);
}

double approx_quasinorm(const CompressedVector& x, const SpaceSpec& space,
                        const ApproxParams& params, const QuasiNormOptions& options) {
  const auto seq = error_sequence(x, space, ErrorKind::kSigma, options.errors);
  return quasinorm(space_norm(x, space).value, seq, params, options);
}

double greedy_quasinorm(const CompressedVector& x, const SpaceSpec& space,
                        const ApproxParams& params, const QuasiNormOptions& options) {
  const auto seq = error_sequence(x, space, ErrorKind::kGamma, options.errors);
  return quasinorm(space_norm(x, space).value, seq, params, options);
}

bool XsConstruction::all_checks() const {
  for (const auto& [name, ok] : checks) {
    if (!ok) return false;
  }
  return true;
}

bool RatioRun::all_checks() const {
  for (const auto& [name, ok] : checks) {
    if (!ok) return false;
  }
  return true;
}

bool RatioReport::all_checks() const {
  for (const auto& run : runs) {
    if (!run.all_checks()) return false;
  }
  return true;
}

XsConstruction build_xs(const BlockSchedule& schedule, int s) {
  if (s < 2) throw InvalidArgument("x_s needs s >= 2");
  if (schedule.inner_p() != schedule.outer_p()) {
    throw InvalidArgument("x_s construction needs inner_p == outer_p");
  }
  const auto space = SpaceSpec::block_sum(schedule);
  const double p = schedule.outer_p();
  const auto ip = space.integer_exponent();
  const std::int64_t target = static_cast<std::int64_t>(s + 1) * (s + 1);
  std::string last_failure;

  // Y_{k+1} must be materialized and h_l(2 n_{k+1}) certified: k + 1 <= depth.
  for (int k = 1; k + 1 <= schedule.depth(); ++k) {
    if (schedule.a(k + 1) < target) continue;
    XsConstruction xs;
    xs.s = s;
    xs.k = k;
    xs.n_s = schedule.n(k + 1);
    xs.n_k = schedule.n(k);
    xs.r = to_u64(isqrt(BigInt(s)));
    const BigInt r = BigInt(static_cast<long>(xs.r));
    xs.v = (xs.n_s + r - 1) / r;
    xs.m_block = static_cast<std::size_t>(k - 1);
    xs.v_block = static_cast<std::size_t>(k);

    xs.x = CompressedVector::canonicalize(
        {Group{xs.m_block, Rational(2), xs.n_s}, Group{xs.v_block, Rational(1), xs.v}},
        space.block_sizes());
    xs.norm_x = space_norm(xs.x, space);
    xs.norm_m = space_norm(indicator({{xs.m_block, xs.n_s}}), space);
    xs.norm_v = space_norm(indicator({{xs.v_block, xs.v}}), space);

    const auto hl = left_democracy(space, to_u64(xs.n_s));
    const auto hl2 = left_democracy(space, 2 * to_u64(xs.n_s));
    xs.hl_ns = *hl.powered;
    xs.hl_2ns = *hl2.powered;

    if (xs.norm_m.powered && ip) {
      xs.checks["hl_equals_norm_m"] = *xs.norm_m.powered == Rational(xs.hl_ns);
    } else {
      xs.checks["hl_equals_norm_m"] = std::fabs(xs.norm_m.value - hl.value) <= kTol * hl.value;
    }
    if (ip) {
      xs.checks["nondoubling"] =
          Rational(xs.hl_2ns) >= pow_int(Rational(s + 1), *ip) * Rational(xs.hl_ns);
    } else {
      xs.checks["nondoubling"] = hl2.value >= (s + 1) * hl.value * (1.0 - kTol);
    }
    if (p == 2.0) {
      // sqrt(v) - sqrt((s/r)^2 n_k) + 1/r >= 0
      const Rational w = Rational(BigInt(s) * s * xs.n_k, r * r);
      xs.checks["v_norm_lower"] = sign_sqrt_difference(Rational(xs.v), w, Rational(-1, r)) >= 0;
    } else {
      xs.checks["v_norm_lower"] = xs.norm_v.value >= (static_cast<double>(s) / xs.r) * xs.norm_m.value -
                                                1.0 / xs.r - kTol * xs.norm_v.value;
    }
    xs.checks["norm_x_le_3v"] = compare(xs.norm_x, scaled(Rational(3), xs.v, p, ip)) <= 0;
    xs.checks["support_le_2ms"] = xs.x.support_size() <= 2 * xs.n_s;

    auto pool = detect_two_pool(xs.x, space);
    if (!pool) throw Error("x_s is not recognized as a two-pool vector");
    xs.pool = *pool;
    if (xs.all_checks()) return xs;
    last_failure = "k=" + std::to_string(k);
  }
  throw ScheduleTooShallow("schedule too shallow for s=" + std::to_string(s) +
                           ": needs a_{k+1} >= " + std::to_string(target) +
                           " with k+1 <= depth " + std::to_string(schedule.depth()) +
                           (last_failure.empty() ? "" : " (checks failed at " + last_failure + ")"));
}

RatioReport optimality_experiment(const BlockSchedule& schedule, const std::vector<int>& s_grid,
                                  const std::vector<ApproxParams>& params,
                                  const ExperimentOptions& options) {
  for (const auto& pr : params) pr.validate();
  RatioReport report;
  const double p = schedule.outer_p();
  std::map<std::pair<double, double>, double> first_normalized;

  for (int s : s_grid) {
    const auto xs = build_xs(schedule, s);
    const auto ip = SpaceSpec::block_sum(schedule).integer_exponent();
    const std::uint64_t n_s = to_u64(xs.n_s);
    const std::uint64_t v = to_u64(xs.v);
    const std::uint64_t terms = 2 * n_s;
    const bool bounds_only = terms > options.max_terms;
    if (bounds_only && !options.allow_bound_mode) {
      throw TermBudgetExceeded("x_s for s=" + std::to_string(s) + " needs " +
                               std::to_string(terms) + " terms, budget is " +
                               std::to_string(options.max_terms) + "; use bound mode");
    }

    const auto sigma = ErrorSequence::closed_form(ErrorKind::kSigma, xs.pool);
    const auto gamma_seq = ErrorSequence::closed_form(ErrorKind::kGamma, xs.pool);

    std::map<std::string, bool> per_s = xs.checks;
    if (!bounds_only) {
      const Rational rs(BigInt(3) * static_cast<long>(xs.r), BigInt(s));
      const auto two_m = scaled(Rational(2), xs.n_k, p, ip);
      const auto tail_bound = scaled(rs, xs.v, p, ip);
      const auto head_bound = scaled(Rational(3), xs.v, p, ip);
      bool gamma_lower = true, tail_upper = true, head_upper = true, sigma_le_gamma = true;
      for (std::uint64_t k = 1; k <= terms; ++k) {
        const auto sg = sigma.at(k);
        const auto gm = gamma_seq.at(k);
        if (k <= n_s) gamma_lower = gamma_lower && compare(gm, xs.norm_v) >= 0;
        if (k >= v) {
          tail_upper = tail_upper && compare(sg, two_m) <= 0 && compare(sg, tail_bound) <= 0;
        } else {
          head_upper = head_upper && compare(sg, head_bound) <= 0;
        }
        sigma_le_gamma = sigma_le_gamma && compare(sg, gm) <= 0;
      }
      per_s["gamma_lower"] = gamma_lower;
      per_s["sigma_tail_upper"] = tail_upper;
      per_s["sigma_head_le_3v"] = head_upper;
      per_s["sigma_le_gamma"] = sigma_le_gamma;
    }

    const double norm_v = xs.norm_v.value;
    const double sd = static_cast<double>(s);
    const double rd = static_cast<double>(xs.r);
    for (const auto& pr : params) {
      RatioRun run;
      run.s = s;
      run.alpha = pr.alpha;
      run.q = pr.q;
      run.k = xs.k;
      run.n_s = xs.n_s.get_str();
      run.v = xs.v.get_str();
      run.r = xs.r;
      run.terms = terms;
      run.bounds_only = bounds_only;
      run.checks = per_s;

      if (pr.q_infinite()) {
        run.A_upper = norm_v * (3.0 + 3.0 * std::pow(static_cast<double>(v), pr.alpha) +
                                3.0 * std::pow(2.0 * static_cast<double>(n_s), pr.alpha) * rd / sd);
        run.G_lower = std::pow(static_cast<double>(n_s), pr.alpha) * norm_v;
        run.envelope = std::max(std::pow(sd, -pr.alpha / 2.0), std::pow(sd, -0.5));
        run.envelope_sup = std::pow(static_cast<double>(n_s), -pr.alpha) +
                           std::pow(sd, -pr.alpha / 2.0) + std::pow(sd, -0.5);
      } else {
        const long double e = static_cast<long double>(pr.q) * pr.alpha - 1.0L;
        long double s1, s2, sg;
        if (bounds_only) {
          s1 = power_sum_upper(1, v - 1, e);
          s2 = power_sum_upper(v, terms, e);
          // Lower bound for sum_{k=1}^{n_s} k^e.
          const long double ln = static_cast<long double>(n_s);
          sg = e >= 0.0L ? (std::fabs(e + 1.0L) < 1e-15L ? std::log(ln)
                                                          : std::pow(ln, e + 1.0L) / (e + 1.0L))
                         : (std::fabs(e + 1.0L) < 1e-15L
                                ? std::log(ln + 1.0L)
                                : (std::pow(ln + 1.0L, e + 1.0L) - 1.0L) / (e + 1.0L));
        } else {
          s1 = power_sum(1, v - 1, e);
          s2 = power_sum(v, terms, e);
          sg = power_sum(1, n_s, e);
        }
        const long double q = pr.q;
        const long double inner = std::pow(3.0L * norm_v, q) * s1 +
                                  std::pow(3.0L * rd * norm_v / sd, q) * s2;
        run.A_upper = static_cast<double>(3.0L * norm_v + std::pow(inner, 1.0L / q));
        run.G_lower = static_cast<double>(norm_v * std::pow(sg, 1.0L / q));
        run.envelope = std::pow(std::pow(sd, -pr.q * pr.alpha / 2.0) + std::pow(sd, -pr.q / 2.0),
                                1.0 / pr.q);
      }
      run.ratio_upper = run.A_upper / run.G_lower;

      if (!bounds_only) {
        QuasiNormOptions qo;
        qo.max_terms = options.max_terms;
        run.A = quasinorm(xs.norm_x.value, sigma, pr, qo);
        run.G = quasinorm(xs.norm_x.value, gamma_seq, pr, qo);
        run.ratio = run.A / run.G;
        run.checks["g_lower_bound"] = run.G >= run.G_lower * (1.0 - kTol);
        run.checks["a_upper_chain"] = approx_le(run.A, run.A_upper);
        run.checks["g_ge_a"] = run.G >= run.A * (1.0 - kTol);
        run.normalized = run.ratio / run.envelope;
      } else {
        run.normalized = run.ratio_upper / run.envelope;
      }
      const auto key = std::make_pair(pr.alpha, pr.q);
      const auto [it, inserted] = first_normalized.emplace(key, run.normalized);
      run.normalized_vs_first = run.normalized / it->second;
      report.runs.push_back(std::move(run));
    }
  }
  return report;
}

}  // namespace nterm

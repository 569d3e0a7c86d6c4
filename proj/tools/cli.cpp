#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "nterm/acceptance.hpp"
#include "nterm/approx.hpp"
#include "nterm/democracy.hpp"
#include "nterm/errors.hpp"
#include "nterm/greedy.hpp"
#include "nterm/json_io.hpp"
#include "nterm/report.hpp"

using namespace nterm;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::uint64_t budget_ties = 1'000'000;
  std::uint64_t budget_terms = 100'000'000;
  std::string out = "-";
};

// Raised when a computed result violates a checked inequality.
struct AssertionFailure {
  Json diagnostics;
};

std::string powered_cell(const std::optional<BigInt>& v) { return v ? v->get_str() : ""; }
std::string powered_cell(const NormValue& v) { return v.powered ? to_string(*v.powered) : ""; }

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidArgument("bad range \"" + text + "\"");
    return static_cast<std::uint64_t>(v);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = number(text);
    return {v, v};
  }
  const auto lo = number(text.substr(0, dots));
  const auto hi = number(text.substr(dots + 2));
  if (hi < lo) throw InvalidArgument("empty range \"" + text + "\"");
  return {lo, hi};
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<double> parse_doubles(const std::string& text, bool allow_inf) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    out.push_back(allow_inf ? parse_q(part) : [&] {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(part, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != part.size()) throw InvalidArgument("bad number \"" + part + "\"");
      return v;
    }());
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// "builtin:log2p1" (1 + log2 N), "builtin:sqrt", "builtin:pow:<e>", or a
// CSV file of N,value rows.
ProbedFunction load_function(const std::string& spec, std::uint64_t probe_limit) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string name = spec.substr(prefix.size());
    ProbedFunction::Fn fn;
    if (name == "log2p1") {
      fn = [](std::uint64_t N) { return 1.0 + std::log2(static_cast<double>(N)); };
    } else if (name == "sqrt") {
      fn = [](std::uint64_t N) { return std::sqrt(static_cast<double>(N)); };
    } else if (name.rfind("pow:", 0) == 0) {
      const double e = parse_doubles(name.substr(4), false).at(0);
      fn = [e](std::uint64_t N) { return std::pow(static_cast<double>(N), e); };
    } else {
      throw InvalidArgument("unknown builtin function \"" + name + "\"");
    }
    return ProbedFunction::from_callable(spec, fn, default_probe_grid(probe_limit));
  }
  std::map<std::uint64_t, double> table;
  for (const auto& row : read_csv(spec)) {
    if (row.size() < 2) throw InvalidArgument(spec + ": rows need N,value");
    try {
      table[std::stoull(row[0])] = std::stod(row[1]);
    } catch (const std::exception&) {
      if (table.empty()) continue;  // header
      throw InvalidArgument(spec + ": bad row");
    }
  }
  return ProbedFunction::from_table(spec, std::move(table));
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> load_pairs(const std::string& inline_pairs,
                                                                const std::string& file) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  if (!inline_pairs.empty()) {
    for (const auto& item : split(inline_pairs, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw InvalidArgument("pairs are k:n");
      pairs.emplace_back(parse_range(item.substr(0, colon)).first,
                         parse_range(item.substr(colon + 1)).first);
    }
  }
  if (!file.empty()) {
    if (file.size() > 5 && file.substr(file.size() - 5) == ".json") {
      const auto j = load_json_file(file);
      for (const auto& t : j.at("terms")) {
        pairs.emplace_back(t.at("k").get<std::uint64_t>(), t.at("n").get<std::uint64_t>());
      }
    } else {
      for (const auto& row : read_csv(file)) {
        if (row.size() < 2) throw InvalidArgument(file + ": rows need k,n");
        try {
          pairs.emplace_back(std::stoull(row[0]), std::stoull(row[1]));
        } catch (const std::exception&) {
          if (pairs.empty()) continue;
          throw InvalidArgument(file + ": bad row");
        }
      }
    }
  }
  if (pairs.empty()) throw InvalidArgument("no (k, n) pairs given");
  return pairs;
}

Json allocation_json(const std::vector<std::pair<std::size_t, BigInt>>& alloc) {
  Json a = Json::array();
  for (const auto& [b, c] : alloc) a.push_back(Json::array({b, c.get_str()}));
  return a;
}

std::string error_name(const std::exception& e) {
  if (dynamic_cast<const CapacityError*>(&e)) return "CapacityError";
  if (dynamic_cast<const TieBudgetExceeded*>(&e)) return "TieBudgetExceeded";
  if (dynamic_cast<const InadequateTruncation*>(&e)) return "InadequateTruncation";
  if (dynamic_cast<const OracleUnavailable*>(&e)) return "OracleUnavailable";
  if (dynamic_cast<const ScheduleTooShallow*>(&e)) return "ScheduleTooShallow";
  if (dynamic_cast<const TermBudgetExceeded*>(&e)) return "TermBudgetExceeded";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  return "Error";
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Greedy and best N-term approximation in block sequence spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized checks");
  app.add_option("--budget-ties", g.budget_ties, "Maximum tie resolutions per greedy step")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget-terms", g.budget_terms, "Maximum series terms")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output path, - for stdout");

  std::string space_path, vector_path, schedule_path;
  std::uint64_t N = 0, min_N = 0, max_N = 0;
  std::string kind = "both", k_range, N_range;
  std::string hl_spec, hr_spec, pairs_inline, pairs_file;
  double C = 2.0, alpha = 0.25;
  int count = 5;
  std::uint64_t probe_limit = std::uint64_t{1} << 62;
  std::string s_list = "2,3,4", alpha_list = "1", q_list = "1,2,inf";
  int depth = 4;
  bool bound_mode = false;

  auto* norm = app.add_subcommand("norm", "Norm of a vector");
  auto* sigma = app.add_subcommand("sigma", "Best N-term error");
  auto* gamma_cmd = app.add_subcommand("gamma", "Worst-case greedy error");
  auto* errors = app.add_subcommand("errors", "Error sequences k -> sigma_k, gamma_k (CSV)");
  for (auto* sub : {norm, sigma, gamma_cmd, errors}) {
    sub->add_option("--space", space_path, "Space JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--vector", vector_path, "Vector JSON")->required()->check(CLI::ExistingFile);
  }
  sigma->add_option("--N", N, "Number of terms")->required();
  gamma_cmd->add_option("--N", N, "Number of terms")->required();
  errors->add_option("--kind", kind, "sigma, gamma or both")
      ->check(CLI::IsMember({"sigma", "gamma", "both"}));

  auto* demfun = app.add_subcommand("demfun", "Democracy functions h_l, h_r (CSV)");
  demfun->add_option("--space", space_path, "Space JSON")->required()->check(CLI::ExistingFile);
  demfun->add_option("--max-N", max_N, "Largest N")->required();
  demfun->add_option("--min-N", min_N, "Smallest N");

  auto* scan = app.add_subcommand("doubling-scan", "h_l(2 n_{k+1}) / h_l(n_{k+1}) per k (CSV)");
  scan->add_option("--space", space_path, "Schedule JSON")->required()->check(CLI::ExistingFile);
  scan->add_option("--k", k_range, "k or a..b")->required();

  auto* prefix = app.add_subcommand("prefix-check", "Prefix indicator norms against h_l (CSV)");
  prefix->add_option("--space", space_path, "Schedule JSON")->required()->check(CLI::ExistingFile);
  prefix->add_option("--N", N_range, "N or a..b")->required();

  auto* cghm = app.add_subcommand("cghm", "Build (k_mu, n_mu) from h_l, h_r (JSON)");
  auto* check71 = app.add_subcommand("check71", "Check growth and h_r(k)/h_l(n) >= C (n/k)^alpha");
  for (auto* sub : {cghm, check71}) {
    sub->add_option("--hl", hl_spec, "builtin:log2p1 | builtin:sqrt | builtin:pow:<e> | CSV")
        ->required();
    sub->add_option("--hr", hr_spec, "Same forms as --hl")->required();
    sub->add_option("--alpha", alpha, "Growth exponent");
    sub->add_option("--probe-limit", probe_limit, "Largest probed argument");
  }
  cghm->add_option("--C", C, "Doubling constant of h_l");
  cghm->add_option("--count", count, "Number of pairs to build")->check(CLI::PositiveNumber);
  double C71 = 1.0;
  check71->add_option("--C", C71, "Constant in the inequality");
  check71->add_option("--pairs", pairs_inline, "k:n,k:n,...");
  check71->add_option("--pairs-file", pairs_file, "cghm JSON output or k,n CSV");

  auto* xs = app.add_subcommand("xs-experiment", "Quasi-norm ratios on x_s (JSON)");
  xs->add_option("--schedule", schedule_path, "Schedule JSON (default a_j = (j+1)^2)")
      ->check(CLI::ExistingFile);
  xs->add_option("--depth", depth, "Depth of the default schedule");
  xs->add_option("--s", s_list, "Values of s");
  xs->add_option("--alpha", alpha_list, "Values of alpha");
  xs->add_option("--q", q_list, "Values of q, inf allowed");
  xs->add_flag("--bound-mode", bound_mode, "Report explicit bounds past the term budget");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    GreedyBudget budget{g.budget_ties};
    auto load_space = [&] { return space_from_json(load_json_file(space_path)); };

    if (norm->parsed() || sigma->parsed() || gamma_cmd->parsed() || errors->parsed()) {
      const auto space = load_space();
      const auto x = vector_from_json(load_json_file(vector_path), space);
      if (errors->parsed()) {
        ErrorSequenceOptions eo;
        eo.budget = budget;
        eo.max_table_terms = g.budget_terms;
        std::vector<std::string> header{"k"};
        std::optional<ErrorSequence> s_seq, g_seq;
        if (kind != "gamma") {
          s_seq = error_sequence(x, space, ErrorKind::kSigma, eo);
          header.insert(header.end(), {"sigma_powered", "sigma_float"});
        }
        if (kind != "sigma") {
          g_seq = error_sequence(x, space, ErrorKind::kGamma, eo);
          header.insert(header.end(), {"gamma_powered", "gamma_float"});
        }
        CsvTable csv(header);
        const auto support = to_u64(x.support_size());
        if (support > g.budget_terms) throw TermBudgetExceeded("support exceeds --budget-terms");
        for (std::uint64_t k = 0; k <= support; ++k) {
          std::vector<std::string> row{std::to_string(k)};
          for (const auto* seq : {s_seq ? &*s_seq : nullptr, g_seq ? &*g_seq : nullptr}) {
            if (!seq) continue;
            const auto v = seq->at(k);
            row.push_back(powered_cell(v));
            row.push_back(format_double(v.value));
          }
          csv.add_row(std::move(row));
        }
        write_output(g.out, csv.str());
        return 0;
      }
      Json j;
      j["space"] = space.describe();
      if (norm->parsed()) {
        j["norm"] = to_json(space_norm(x, space));
      } else if (sigma->parsed()) {
        j["N"] = N;
        j["sigma"] = to_json(sigma_exact(x, N, space));
      } else {
        const auto out = gamma(x, N, space, budget);
        j["N"] = N;
        j["gamma"] = to_json(out.max_residual);
        j["gamma_min"] = to_json(out.min_residual);
        j["max_allocation"] = allocation_json(out.max_allocation);
        j["min_allocation"] = allocation_json(out.min_allocation);
        j["tie_resolutions"] = out.allocations.get_str();
      }
      write_output(g.out, dump_json(j));
      return 0;
    }

    if (demfun->parsed()) {
      const auto space = load_space();
      if (min_N > max_N) throw InvalidArgument("--min-N exceeds --max-N");
      CsvTable csv({"N", "hl_powered", "hl_float", "hr_powered", "hr_float"});
      for (std::uint64_t n = min_N; n <= max_N; ++n) {
        const auto v = demfun_dp(space, n);
        csv.add_row({std::to_string(n), powered_cell(v.left.powered), format_double(v.left.value),
                     powered_cell(v.right.powered), format_double(v.right.value)});
      }
      write_output(g.out, csv.str());
      return 0;
    }

    if (scan->parsed()) {
      const auto space = load_space();
      const auto [lo, hi] = parse_range(k_range);
      const auto rows = doubling_scan(space, static_cast<int>(lo), static_cast<int>(hi));
      CsvTable csv({"k", "a_next", "n_k", "n_next", "hl_n_powered", "hl_2n_powered",
                    "ratio_powered", "bound_powered", "ratio_float", "bound_float",
                    "meets_bound", "upper_ok", "upper_equal"});
      Json failures = Json::array();
      for (const auto& r : rows) {
        csv.add_row({std::to_string(r.k), std::to_string(r.a_next), r.n_k.get_str(),
                     r.n_next.get_str(), r.hl_n.get_str(), r.hl_2n.get_str(),
                     to_string(r.ratio_powered), to_string(r.bound_powered),
                     format_double(r.ratio), format_double(r.bound),
                     r.meets_bound ? "true" : "false", r.upper_ok ? "true" : "false",
                     r.upper_equal ? "true" : "false"});
        if (!r.meets_bound || !r.upper_ok) failures.push_back(r.k);
      }
      write_output(g.out, csv.str());
      if (!failures.empty()) throw AssertionFailure{Json{{"doubling_scan_failed_k", failures}}};
      return 0;
    }

    if (prefix->parsed()) {
      const auto space = load_space();
      const auto [lo, hi] = parse_range(N_range);
      const auto report = prefix_norm_check(space, lo, hi);
      CsvTable csv({"N", "prefix_powered", "hl_powered", "equal"});
      for (const auto& r : report.rows) {
        csv.add_row({std::to_string(r.N), r.prefix_powered.get_str(), r.hl_powered.get_str(),
                     r.equal ? "true" : "false"});
      }
      write_output(g.out, csv.str());
      Json summary;
      summary["checked"] = report.rows.size();
      summary["counterexamples"] = report.counterexamples;
      std::cerr << summary.dump() << "\n";
      return 0;
    }

    if (cghm->parsed()) {
      const auto hl = load_function(hl_spec, probe_limit);
      const auto hr = load_function(hr_spec, probe_limit);
      const auto seq = cghm_construct(hr, hl, C, alpha, count);
      Json j;
      j["C"] = seq.C;
      j["alpha"] = seq.alpha;
      j["exhausted"] = seq.exhausted;
      j["exhaustion"] = seq.exhaustion;
      Json terms = Json::array();
      bool all_hold = true;
      for (const auto& t : seq.terms) {
        terms.push_back(Json{{"mu", t.mu},         {"w", t.w},         {"r", t.r},
                             {"k", t.k},           {"n", t.n},         {"threshold", t.threshold},
                             {"ratio_k", t.ratio_k}, {"lhs", t.lhs},   {"rhs", t.rhs},
                             {"holds", t.holds}});
        all_hold = all_hold && t.holds;
      }
      j["terms"] = std::move(terms);
      write_output(g.out, dump_json(j));
      if (!all_hold) throw AssertionFailure{Json{{"cghm", "a produced term violates the chain"}}};
      return 0;
    }

    if (check71->parsed()) {
      const auto hl = load_function(hl_spec, probe_limit);
      const auto hr = load_function(hr_spec, probe_limit);
      const auto report = condition71_check(hr, hl, load_pairs(pairs_inline, pairs_file), C71, alpha);
      Json j;
      j["growth"] = report.growth;
      j["all_pass"] = report.all_pass;
      Json rows = Json::array();
      for (const auto& r : report.rows) {
        rows.push_back(Json{{"k", r.k}, {"n", r.n}, {"growth_ok", r.growth_ok}, {"lhs", r.lhs},
                            {"rhs", r.rhs}, {"inequality_ok", r.inequality_ok}});
      }
      j["rows"] = std::move(rows);
      write_output(g.out, dump_json(j));
      if (!report.all_pass) throw AssertionFailure{Json{{"check71", "condition fails"}}};
      return 0;
    }

    if (xs->parsed()) {
      const auto schedule = schedule_path.empty()
                                ? BlockSchedule::squares(depth)
                                : schedule_from_json(load_json_file(schedule_path));
      std::vector<int> s_grid;
      for (const auto& part : split(s_list, ',')) {
        s_grid.push_back(static_cast<int>(parse_range(part).first));
      }
      std::vector<ApproxParams> params;
      for (double a : parse_doubles(alpha_list, false)) {
        for (double q : parse_doubles(q_list, true)) params.push_back({a, q});
      }
      ExperimentOptions eo;
      eo.max_terms = g.budget_terms;
      eo.allow_bound_mode = bound_mode;
      const auto report = optimality_experiment(schedule, s_grid, params, eo);
      Json runs = Json::array();
      Json failed = Json::array();
      for (const auto& r : report.runs) {
        Json run;
        run["s"] = r.s;
        run["alpha"] = r.alpha;
        run["q"] = std::isinf(r.q) ? Json("inf") : Json(r.q);
        run["k"] = r.k;
        run["n_s"] = r.n_s;
        run["v"] = r.v;
        run["r"] = r.r;
        run["terms"] = r.terms;
        run["bounds_only"] = r.bounds_only;
        if (!r.bounds_only) {
          run["A"] = r.A;
          run["G"] = r.G;
          run["ratio"] = r.ratio;
        }
        run["A_upper"] = r.A_upper;
        run["G_lower"] = r.G_lower;
        run["ratio_upper"] = r.ratio_upper;
        run["envelope"] = r.envelope;
        if (std::isinf(r.q)) run["envelope_sup"] = r.envelope_sup;
        run["normalized"] = r.normalized;
        run["normalized_vs_first"] = r.normalized_vs_first;
        Json checks = Json::object();
        for (const auto& [name, ok] : r.checks) {
          checks[name] = ok;
          if (!ok) failed.push_back("s=" + std::to_string(r.s) + ":" + name);
        }
        run["checks"] = std::move(checks);
        runs.push_back(std::move(run));
      }
      Json j;
      j["runs"] = std::move(runs);
      write_output(g.out, dump_json(j));
      if (!failed.empty()) throw AssertionFailure{Json{{"failed_checks", failed}}};
      return 0;
    }

    if (verify->parsed()) {
      const auto results = run_acceptance({g.seed});
      std::string text;
      bool all = true;
      std::size_t failed = 0;
      for (const auto& r : results) {
        text += format_result(r) + "\n";
        if (!r.passed()) ++failed;
      }
      all = failed == 0;
      text += std::to_string(results.size()) + " criteria, " + std::to_string(failed) + " failed\n";
      write_output(g.out, text);
      return all ? 0 : 1;
    }
  } catch (const AssertionFailure& f) {
    std::cerr << Json{{"assertion_failed", f.diagnostics}}.dump() << "\n";
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << Json{{"error", error_name(e)}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", error_name(e)}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 2;
}

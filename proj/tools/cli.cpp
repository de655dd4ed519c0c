#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>

#include "symquad/rule_io.hpp"
#include "symquad/solver.hpp"

namespace symquad::cli {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

struct FindArgs {
  std::string domain;
  int points = 0;
  int strength = 0;
  double time = 1.0;
  double total_time = 0.0;
  int max_attempts = 0;
  int max_iterations = 200;
  double threshold = 1e-12;
  bool pi_only = false;
  std::uint64_t seed = 42;
  int workers = 1;
  std::string outdir = ".";
  int digits = kDoubleDigits;
};

int run_find(const FindArgs& a, std::ostream& out, std::ostream& err) {
  const auto kind = parse_domain(a.domain);
  if (!kind) {
    err << "error: --domain: unknown domain '" << a.domain << "' (expected tri quad tet pri pyr hex)\n";
    return kUsage;
  }
  if (a.digits != kDoubleDigits && a.digits != kExtendedDigits) {
    err << "error: --digits must be 17 or 34\n";
    return kUsage;
  }
  const Domain& d = domain(*kind);
  SolverConfig cfg;
  cfg.time_budget = a.time;
  cfg.total_time = a.total_time;
  cfg.max_attempts = a.max_attempts;
  cfg.max_iterations = a.max_iterations;
  cfg.success_threshold = a.threshold;
  cfg.rng_seed = a.seed;
  cfg.workers = a.workers;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (enumerate_decompositions(d, a.points).empty()) {
    err << "no symmetric decompositions of " << a.points << " points on " << short_name(*kind) << '\n';
    return kNoRules;
  }

  SearchStats stats;
  std::vector<QuadratureRule> rules = find_rules(d, a.points, a.strength, cfg, &stats);

  struct Ranked {
    QuadratureRule rule;
    RuleQuality quality;
  };
  std::vector<Ranked> kept;
  for (auto& r : rules) {
    if (a.digits == kExtendedDigits) {
      try {
        r = refine(r, Precision::extended);
      } catch (const RefinementDiverged& e) {
        err << "warning: " << e.what() << '\n';
      }
    }
    RuleQuality q = rule_quality(r);
    if (a.pi_only && !q.is_pi) continue;
    kept.push_back({std::move(r), q});
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const Ranked& x, const Ranked& y) { return x.quality.xi_next < y.quality.xi_next; });

  std::error_code ec;
  std::filesystem::create_directories(a.outdir, ec);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto name = std::string(short_name(*kind)) + "-q" + std::to_string(a.strength) + "-n" +
                      std::to_string(a.points) + "-" + std::to_string(i) + ".txt";
    const auto path = std::filesystem::path(a.outdir) / name;
    write_rule_file(path, kept[i].rule, a.digits);
    const auto& q = kept[i].quality;
    out << "rule=" << path.string() << " decomposition=" << to_string(kept[i].rule.decomposition())
        << " xi=" << fmt(q.xi) << " xi_next=" << fmt(q.xi_next) << " pi=" << (q.is_pi ? "yes" : "no")
        << " min_weight=" << fmt(q.min_weight) << '\n';
  }
  out << "summary rules=" << kept.size() << " decompositions=" << stats.decompositions
      << " viable=" << stats.viable << " attempts=" << stats.attempts << '\n';
  if (kept.empty()) {
    err << "no rules found\n";
    return kNoRules;
  }
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Search for, check and rank fully symmetric quadrature rules", "symquad"};
  app.require_subcommand(1);

  FindArgs fa;
  auto* find = app.add_subcommand("find", "search for rules with a given point count and strength");
  find->add_option("-d,--domain", fa.domain, "tri, quad, tet, pri, pyr or hex")->required();
  find->add_option("-n,--points", fa.points, "number of points")->required()->check(CLI::PositiveNumber);
  find->add_option("-q,--strength", fa.strength, "target strength")->required()->check(CLI::PositiveNumber);
  find->add_option("-t,--time", fa.time, "seconds per decomposition")->capture_default_str();
  find->add_option("--total-time", fa.total_time, "cap on the whole search in seconds (0 = none)");
  find->add_option("--max-attempts", fa.max_attempts, "minimisations per decomposition (0 = time only)");
  find->add_option("--max-iterations", fa.max_iterations, "iterations per minimisation")->capture_default_str();
  find->add_option("--threshold", fa.threshold, "success threshold on xi")->capture_default_str();
  find->add_flag("-p,--pi-only", fa.pi_only, "keep only rules with positive weights and interior points");
  find->add_option("-s,--seed", fa.seed, "random seed")->capture_default_str();
  find->add_option("-w,--workers", fa.workers, "worker threads")->capture_default_str();
  find->add_option("-o,--outdir", fa.outdir, "directory for rule files")->capture_default_str();
  find->add_option("--digits", fa.digits, "17, or 34 for extended-precision refinement")->capture_default_str();

  std::string verify_file;
  std::optional<int> verify_strength_opt;
  double verify_tol = 1e-10;
  auto* verify = app.add_subcommand("verify", "check exactness on the full orthonormal basis");
  verify->add_option("rule", verify_file, "rule file")->required();
  verify->add_option("-q,--strength", verify_strength_opt, "strength to check (default: the rule's)");
  verify->add_option("--tol", verify_tol, "tolerance")->capture_default_str();

  std::string eval_file;
  int eval_degree = 0;
  auto* eval = app.add_subcommand("eval", "truncation error on the objective basis of a degree");
  eval->add_option("rule", eval_file, "rule file")->required();
  eval->add_option("-q,--degree", eval_degree, "degree")->required()->check(CLI::NonNegativeNumber);

  std::string expand_file;
  int expand_digits = kDoubleDigits;
  auto* expand = app.add_subcommand("expand", "print every point and weight");
  expand->add_option("rule", expand_file, "rule file")->required();
  expand->add_option("--digits", expand_digits, "significant digits")->capture_default_str();

  std::vector<std::string> rank_files;
  auto* rank = app.add_subcommand("rank", "order rule files by xi(phi + 1)");
  rank->add_option("rules", rank_files, "rule files")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*find) return run_find(fa, out, err);

    if (*verify) {
      const auto rule = read_rule_file(verify_file);
      const int phi = verify_strength_opt.value_or(rule.strength());
      const auto check = verify_strength(rule, phi, verify_tol);
      out << "phi=" << phi << " max_residual=" << fmt(check.max_residual)
          << " pass=" << (check.pass ? "yes" : "no") << '\n';
      return check.pass ? kOk : kNoRules;
    }

    if (*eval) {
      const auto rule = read_rule_file(eval_file);
      const double xi = truncation_error<double>(rule, eval_degree);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.16e", xi);
      out << "phi=" << eval_degree << " xi=" << buf << '\n';
      return kOk;
    }

    if (*expand) {
      if (expand_digits < 1 || expand_digits > kExtendedDigits) {
        err << "error: --digits must be between 1 and 34\n";
        return kUsage;
      }
      out << format_expanded(read_rule_file(expand_file), expand_digits);
      return kOk;
    }

    if (*rank) {
      std::vector<QuadratureRule> rules;
      for (const auto& f : rank_files) rules.push_back(read_rule_file(f));
      std::vector<double> xi(rules.size());
      for (std::size_t i = 0; i < rules.size(); ++i) {
        xi[i] = truncation_error<double>(rules[i], rules[i].strength() + 1);
      }
      std::vector<std::size_t> order(rules.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return xi[x] < xi[y]; });
      for (std::size_t r = 0; r < order.size(); ++r) {
        const auto i = order[r];
        out << "rank=" << r + 1 << " rule=" << rank_files[i] << " xi_next=" << fmt(xi[i])
            << " pi=" << (is_pi(rules[i]) ? "yes" : "no") << '\n';
      }
      return kOk;
    }
  } catch (const RuleFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

} // namespace symquad::cli

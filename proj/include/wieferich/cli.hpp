#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 a verification
// check reported violations, 3 the factoring budget ran out where completeness
// was required.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wieferich/cyclo.hpp"
#include "wieferich/factor.hpp"
#include "wieferich/ideals.hpp"
#include "wieferich/json_io.hpp"
#include "wieferich/qfield.hpp"
#include "wieferich/verify.hpp"
#include "wieferich/wieferich.hpp"

namespace wieferich::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kViolation = 2, kBudget = 3 };

enum class OutputFormat { json, csv };

struct RunConfig {
  std::int64_t d = 1;
  std::string base = "2,1";
  std::uint64_t k = 1;
  std::uint64_t n_max = 40;
  std::string x_max;  // empty: unbounded
  FactorBudget budget;
  OutputFormat format = OutputFormat::json;
  std::string output_path;
  CensusStrategy strategy = CensusStrategy::cprime_levels;
  bool require_complete = false;
};

/// Budget defaults, overridable by WIEFERICH_TRIAL_LIMIT / WIEFERICH_RHO_ITERATIONS.
/// Explicit flags take precedence over both.
inline FactorBudget budget_from_env() {
  FactorBudget b;
  if (const char* v = std::getenv("WIEFERICH_TRIAL_LIMIT")) b.trial_limit = std::stoull(v);
  if (const char* v = std::getenv("WIEFERICH_RHO_ITERATIONS")) b.rho_iterations = std::stoull(v);
  return b;
}

namespace detail {

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

inline void add_budget_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--trial-limit", cfg.budget.trial_limit, "Trial division bound")->check(CLI::PositiveNumber);
  cmd->add_option("--rho-iterations", cfg.budget.rho_iterations, "Rho iterations per cofactor")
      ->check(CLI::PositiveNumber);
}

inline void add_field_flag(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("-d,--field", cfg.d, "Field Q(sqrt(-d)); 0 selects the rational integers");
}

inline void add_output_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("-o,--output", cfg.output_path, "Write to this file instead of stdout");
}

int run_classify(const RunConfig& cfg, const std::string& p_text, std::uint64_t p_max, std::ostream& out) {
  FieldSpec field = FieldSpec::from_d(cfg.d);
  QuadInt a = parse_element(field, cfg.base);
  Json j;
  j["field"] = to_json(field);
  j["base"] = to_json(a);
  j["class"] = to_string(classify_base(a));
  if (!p_text.empty()) {
    Int p(p_text);
    Json places = Json::array();
    for (const PrimeIdeal& P : primes_above(p, field)) {
      if (ResidueRing ring(field, P, 1); ring.in_prime(ring.reduce(a))) {
        Json r = to_json(P);
        r["note"] = "base lies in this prime";
        places.push_back(r);
        continue;
      }
      PlaceReport rep{P, a, P.norm(), residue_order(P, a, cfg.budget), is_wieferich_place(P, a)};
      places.push_back(to_json(rep));
    }
    j["places"] = places;
  }
  if (p_max > 0) {
    Json wief = Json::array();
    std::uint64_t primes = 0, places = 0, skipped = 0;
    for (std::uint32_t p : primes_up_to(p_max)) {
      ++primes;
      for (const PrimeIdeal& P : primes_above(Int(p), field)) {
        if (ResidueRing ring(field, P, 1); ring.in_prime(ring.reduce(a))) {
          ++skipped;
          continue;
        }
        ++places;
        if (is_wieferich_place(P, a)) wief.push_back(to_json(P));
      }
    }
    j["scan"] = Json{{"p_max", p_max},
                     {"primes", primes},
                     {"places_checked", places},
                     {"places_containing_base", skipped},
                     {"wieferich_places", wief}};
  }
  out << j.dump(2) << '\n';
  return kOk;
}

int run_decompose(const RunConfig& cfg, std::uint64_t n, std::ostream& out) {
  QuadInt a = parse_element(FieldSpec::from_d(cfg.d), cfg.base);
  CDDecomposition cd = cd_decompose(n, a, cfg.budget);
  out << to_json(cd).dump(2) << '\n';
  return cd.complete ? kOk : kBudget;
}

int run_census(const RunConfig& cfg, std::ostream& out) {
  QuadInt a = parse_element(FieldSpec::from_d(cfg.d), cfg.base);
  std::optional<Int> x_max;
  if (!cfg.x_max.empty()) x_max = Int(cfg.x_max);
  CensusResult c = census(a, cfg.k, cfg.n_max, cfg.budget, cfg.strategy, x_max);
  if (cfg.format == OutputFormat::csv) write_census_csv(out, c);
  else write_census_jsonl(out, c);
  return cfg.require_complete && !c.skipped_levels.empty() ? kBudget : kOk;
}

int run_verify(const RunConfig& cfg, const std::vector<std::string>& b_values, std::ostream& out) {
  QuadInt a = parse_element(FieldSpec::from_d(cfg.d), cfg.base);
  std::vector<BoundCheckReport> reports;
  reports.push_back(check_upper_norm_bound(a, cfg.n_max));
  Json notes = Json::array();
  if (classify_base(a) == BaseClass::eligible) reports.push_back(check_lower_phi_bound(a, cfg.n_max));
  else notes.push_back("lower_phi_bound not run: " + base_eligibility_note(a));
  LevelFactorizer levels(a, cfg.budget);
  reports.push_back(check_squarefree_part_nonwieferich(levels, cfg.n_max));
  reports.push_back(check_chen_pairwise(levels, cfg.n_max));
  reports.push_back(check_order_lemmas(levels, cfg.n_max));
  reports.push_back(check_first_occurrence_norms(levels, cfg.n_max));
  for (const auto& text : b_values) {
    Rational b(text);
    b.canonicalize();
    reports.push_back(check_sandwich(b, cfg.n_max));
  }
  Json j;
  j["field"] = to_json(a.field());
  j["base"] = to_json(a);
  Json arr = Json::array();
  bool violated = false, skipped = false;
  for (const auto& r : reports) {
    arr.push_back(to_json(r));
    violated = violated || !r.pass();
    skipped = skipped || !r.skipped.empty();
  }
  j["reports"] = arr;
  j["trend"] = to_json(bound_trend_report(levels, cfg.n_max));
  j["notes"] = notes;
  j["pass"] = !violated;
  out << j.dump(2) << '\n';
  if (violated) return kViolation;
  return cfg.require_complete && skipped ? kBudget : kOk;
}

int run_quality(const RunConfig& cfg, const std::string& alpha, const std::string& beta, std::ostream& out) {
  FieldSpec field = FieldSpec::from_d(cfg.d);
  QualityReport q = abc_quality(parse_element(field, alpha), parse_element(field, beta), cfg.budget);
  out << to_json(q).dump(2) << '\n';
  return kOk;
}

}  // namespace detail

/// Parse argv and dispatch to a subcommand; all output goes to `out` (or the
/// --output file) and diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Wieferich and non-Wieferich places in imaginary quadratic fields"};
  app.require_subcommand(1);
  RunConfig cfg;
  try {
    cfg.budget = budget_from_env();
  } catch (const std::exception& e) {
    err << "error: bad budget environment variable: " << e.what() << '\n';
    return kUsage;
  }

  auto* field_cmd = app.add_subcommand("field", "Describe the field Q(sqrt(-d))");
  detail::add_field_flag(field_cmd, cfg);
  detail::add_output_flags(field_cmd, cfg);

  std::string p_text;
  std::uint64_t p_max = 0;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a base and the places above a prime");
  detail::add_field_flag(classify_cmd, cfg);
  classify_cmd->add_option("-a,--base", cfg.base, "Base as x,y in the basis {1, omega}")->required();
  classify_cmd->add_option("-p,--prime", p_text, "Report the places above this rational prime");
  classify_cmd->add_option("--p-max", p_max, "List the Wieferich places above all primes up to this bound");
  detail::add_budget_flags(classify_cmd, cfg);
  detail::add_output_flags(classify_cmd, cfg);

  std::uint64_t level = 1;
  auto* decompose_cmd = app.add_subcommand("decompose", "C/D and C'/D' decomposition at one level");
  detail::add_field_flag(decompose_cmd, cfg);
  decompose_cmd->add_option("-a,--base", cfg.base, "Base as x,y")->required();
  decompose_cmd->add_option("-n,--level", level, "Level n")->required()->check(CLI::PositiveNumber);
  detail::add_budget_flags(decompose_cmd, cfg);
  detail::add_output_flags(decompose_cmd, cfg);

  const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::json}, {"csv", OutputFormat::csv}};
  const std::map<std::string, CensusStrategy> strategies{{"cprime-levels", CensusStrategy::cprime_levels},
                                                         {"prime-levels", CensusStrategy::prime_levels}};
  auto* census_cmd = app.add_subcommand("census", "Non-Wieferich places with norm 1 mod k");
  detail::add_field_flag(census_cmd, cfg);
  census_cmd->add_option("-a,--base", cfg.base, "Base as x,y")->required();
  census_cmd->add_option("-k,--modulus", cfg.k, "Modulus k")->check(CLI::PositiveNumber);
  census_cmd->add_option("--n-max", cfg.n_max, "Highest multiplier n (levels n*k)")->check(CLI::PositiveNumber);
  census_cmd->add_option("--x-max", cfg.x_max, "Only report places with norm <= x");
  census_cmd->add_option("--format", cfg.format, "json (JSON lines) or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  census_cmd->add_option("--strategy", cfg.strategy, "cprime-levels or prime-levels")
      ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case));
  census_cmd->add_flag("--require-complete", cfg.require_complete, "Exit 3 if any level was skipped");
  detail::add_budget_flags(census_cmd, cfg);
  detail::add_output_flags(census_cmd, cfg);

  std::vector<std::string> b_values;
  auto* verify_cmd = app.add_subcommand("verify", "Machine-check the norm bounds and lemmas for a base");
  detail::add_field_flag(verify_cmd, cfg);
  verify_cmd->add_option("-a,--base", cfg.base, "Base as x,y")->required();
  verify_cmd->add_option("--n-max", cfg.n_max, "Highest level")->check(CLI::PositiveNumber);
  verify_cmd->add_option("-b,--sandwich-b", b_values, "Rational b >= 2 for the Moebius log-sum check (e.g. 5/2)");
  verify_cmd->add_flag("--require-complete", cfg.require_complete, "Exit 3 if any level was skipped");
  detail::add_budget_flags(verify_cmd, cfg);
  detail::add_output_flags(verify_cmd, cfg);

  std::int64_t d_max = 12;
  std::vector<std::int64_t> d_list;
  auto* exceptions_cmd = app.add_subcommand("exceptions", "Elements of norm <= 3 in Q(sqrt(-d))");
  exceptions_cmd->add_option("--d-max", d_max, "All squarefree d up to this bound");
  exceptions_cmd->add_option("-d,--field", d_list, "Explicit list of d (overrides --d-max)");
  detail::add_output_flags(exceptions_cmd, cfg);

  std::string alpha, beta;
  auto* quality_cmd = app.add_subcommand("quality", "abc quality of alpha + beta = root of unity");
  detail::add_field_flag(quality_cmd, cfg);
  quality_cmd->add_option("--alpha", alpha, "alpha as x,y")->required();
  quality_cmd->add_option("--beta", beta, "beta as x,y")->required();
  detail::add_budget_flags(quality_cmd, cfg);
  detail::add_output_flags(quality_cmd, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    detail::Output sink(cfg.output_path, out);
    std::ostream& os = sink.stream();
    if (*field_cmd) {
      os << to_json(FieldSpec::from_d(cfg.d)).dump(2) << '\n';
      return kOk;
    }
    if (*classify_cmd) return detail::run_classify(cfg, p_text, p_max, os);
    if (*decompose_cmd) return detail::run_decompose(cfg, level, os);
    if (*census_cmd) return detail::run_census(cfg, os);
    if (*verify_cmd) return detail::run_verify(cfg, b_values, os);
    if (*exceptions_cmd) {
      if (d_list.empty()) d_list = squarefree_up_to(d_max);
      os << to_json(exception_set(d_list)).dump(2) << '\n';
      return kOk;
    }
    if (*quality_cmd) return detail::run_quality(cfg, alpha, beta, os);
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace wieferich::cli

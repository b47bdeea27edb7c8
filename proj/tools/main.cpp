// Command-line front end: ingest system files, run analyses, generate the
// bundled scenarios, check connection compatibility.
//
// Exit codes: 0 ok, 1 input error, 2 numerical breakdown, 3 oracle
// disagreement.

#include "cbd/analysis.hpp"
#include "cbd/errors.hpp"
#include "cbd/json_io.hpp"
#include "cbd/oracle.hpp"
#include "cbd/scenarios.hpp"
#include "cbd/system_model.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitOracle = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw cbd::ParseError("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double verdict_tolerance() {
  const char* env = std::getenv("CBD_TOLERANCE");
  if (env == nullptr || *env == '\0') {
    return cbd::tol::kVerdict;
  }
  char* end = nullptr;
  const double value = std::strtod(env, &end);
  if (end == nullptr || *end != '\0' || !(value > 0.0)) {
    throw cbd::ParseError("CBD_TOLERANCE must be a positive number, got '" +
                          std::string(env) + "'");
  }
  return value;
}

void print_violations(const std::vector<cbd::Violation>& violations) {
  for (const auto& v : violations) {
    std::cerr << "violation: " << v.location << ": " << v.message
              << " (magnitude " << v.magnitude << ")\n";
  }
}

std::string fixed9(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9f", x);
  return buffer;
}

void print_criterion(const std::string& name,
                     const cbd::CriterionOutcome& outcome) {
  std::cout << "  " << name << ": "
            << (outcome.noncontextual ? "noncontextual" : "contextual")
            << " (margin = " << fixed9(outcome.margin) << ")\n";
}

void print_human_report(const cbd::AnalysisReport& report,
                        const std::vector<cbd::OracleVerdict>& oracle) {
  std::cout << "system: cyclic, n = " << report.n
            << (report.consistently_connected
                    ? ", consistently connected"
                    : ", inconsistently connected")
            << "\n";
  if (report.relabel_new_to_old.has_value()) {
    std::cout << "relabeled to successor pairing; new index k holds original"
                 " variable";
    for (std::size_t k = 0; k < report.relabel_new_to_old->size(); ++k) {
      std::cout << (k == 0 ? " " : ", ") << k + 1 << "<-"
                << (*report.relabel_new_to_old)[k];
    }
    std::cout << "\n";
  }
  std::cout << "delta0       = " << fixed9(report.delta0) << "\n";
  std::cout << "delta_min    = " << fixed9(report.delta_min_closed)
            << (report.delta_min_conjectural
                    ? " (closed form, conjectural, LP-verified)"
                    : " (closed form)")
            << "\n";
  if (report.delta_min_lp.has_value()) {
    std::cout << "delta_min_lp = " << fixed9(*report.delta_min_lp) << " ("
              << report.certificates.front().cols << " atoms)\n";
  }
  std::cout << "CNTX = " << fixed9(report.cntx) << ", "
            << (report.contextual ? "contextual" : "noncontextual") << "\n";
  std::cout << "criteria:\n";
  print_criterion("general (closed form)", report.general);
  print_criterion("master (2n-2 bound)", report.master);
  if (report.lp_criterion.has_value()) {
    print_criterion("LP (maximal-coupling feasibility)", *report.lp_criterion);
  }
  const auto& sc = report.special_cases;
  if (sc.kcbs.has_value() || sc.chsh.has_value() ||
      sc.suppes_zanotti.has_value() || !sc.skipped.empty()) {
    std::cout << "special cases:\n";
  }
  if (sc.kcbs.has_value()) {
    std::cout << "  KCBS: sum p_i = " << fixed9(sc.kcbs->sum_p)
              << (sc.kcbs->satisfied ? " <= 2 (satisfied)" : " > 2 (violated)")
              << "\n";
  }
  if (sc.chsh.has_value()) {
    std::cout << "  CHSH: max |combination| = " << fixed9(sc.chsh->max_abs)
              << (sc.chsh->satisfied ? " <= 2 (satisfied)" : " > 2 (violated)")
              << "\n";
  }
  if (sc.suppes_zanotti.has_value()) {
    std::cout << "  Suppes-Zanotti: sum = " << fixed9(sc.suppes_zanotti->sum)
              << ", bounds [-1, " << fixed9(sc.suppes_zanotti->upper) << "]"
              << (sc.suppes_zanotti->satisfied ? " (satisfied)" : " (violated)")
              << "\n";
  }
  for (const auto& reason : sc.skipped) {
    std::cout << "  skipped: " << reason << "\n";
  }
  int disagreements = 0;
  for (const auto& v : oracle) {
    if (!v.agreement) {
      ++disagreements;
    }
  }
  std::cout << "oracle: " << oracle.size() << " checks, " << disagreements
            << " disagreement" << (disagreements == 1 ? "" : "s") << "\n";
  for (const auto& v : oracle) {
    if (!v.agreement) {
      std::cout << "  DISAGREES: " << v.subject << " (claim " << v.claim
                << ", independent " << v.independent << ")\n";
    }
  }
  for (const auto& record : report.certificates) {
    std::cout << "certificate: " << record.purpose << " ("
              << (record.solution.status == cbd::LpStatus::Optimal
                      ? "optimal"
                      : "infeasible")
              << ", " << (record.certificate_ok ? "verified" : "FAILED")
              << (record.rhs_perturbation > 0.0 ? ", rhs perturbed by 1e-12"
                                                : "")
              << ")\n";
  }
}

int cmd_analyze(const std::string& path, bool json_output, bool no_lp) {
  const double tolerance = verdict_tolerance();
  cbd::ParsedSystem parsed = cbd::parse_system_json(read_file(path));

  if (std::holds_alternative<cbd::CyclicSystem>(parsed.system)) {
    const auto& sys = std::get<cbd::CyclicSystem>(parsed.system);
    const auto violations = validate(sys);
    if (!violations.empty()) {
      print_violations(violations);
      return kExitInput;
    }
    cbd::AnalyzeOptions options;
    options.run_lp = !no_lp;
    options.tolerance = tolerance;
    cbd::AnalysisReport report = analyze(sys, options);
    report.relabel_new_to_old = parsed.relabel_new_to_old;
    cbd::CrossValidateOptions cv;
    cv.with_lp = false; // reuse the report's LP runs instead of re-solving
    cv.tolerance = tolerance;
    const auto oracle = cross_validate(sys, report, cv);
    if (json_output) {
      std::cout << report_to_json(report, oracle);
    } else {
      print_human_report(report, oracle);
    }
    for (const auto& v : oracle) {
      if (!v.agreement) {
        return kExitOracle;
      }
    }
    return kExitOk;
  }

  const auto& sys = std::get<cbd::GenericSystem>(parsed.system);
  const auto violations = validate(sys);
  if (!violations.empty()) {
    print_violations(violations);
    return kExitInput;
  }
  cbd::AnalyzeOptions options;
  options.run_lp = !no_lp;
  options.tolerance = tolerance;
  const cbd::GenericAnalysisReport report = analyze(sys, options);
  std::vector<cbd::OracleVerdict> oracle;
  for (const auto& record : report.certificates) {
    cbd::OracleVerdict cert;
    cert.subject = "LP certificate verified (" + record.purpose + ")";
    cert.claim = 1.0;
    cert.independent = record.certificate_ok ? 1.0 : 0.0;
    cert.discrepancy = record.certificate_ok ? 0.0 : 1.0;
    cert.tolerance = 0.5;
    cert.agreement = record.certificate_ok;
    oracle.push_back(cert);
    if (record.purpose == "delta_min" &&
        record.solution.status == cbd::LpStatus::Optimal) {
      oracle.push_back(verify_coupling(sys, record.solution.x, false));
    }
    if (record.purpose == "maximal_connections" &&
        record.solution.status == cbd::LpStatus::Optimal) {
      oracle.push_back(verify_coupling(sys, record.solution.x, true));
    }
  }
  if (json_output) {
    std::cout << report_to_json(report, oracle);
  } else {
    std::cout << "system: generic, " << report.num_bunches << " bunches, "
              << report.num_vars << " variables, " << report.num_connections
              << " connections"
              << (report.consistently_connected
                      ? ", consistently connected"
                      : ", inconsistently connected")
              << "\n";
    std::cout << "delta0       = " << fixed9(report.delta0) << "\n";
    if (report.delta_min_lp.has_value()) {
      std::cout << "delta_min_lp = " << fixed9(*report.delta_min_lp) << "\n";
      std::cout << "CNTX = " << fixed9(*report.cntx) << ", "
                << (*report.cntx > report.tolerance ? "contextual"
                                                    : "noncontextual")
                << "\n";
      std::cout << "noncontextual description "
                << (*report.noncontextual ? "exists" : "does not exist")
                << " (maximal-coupling feasibility)\n";
    } else {
      std::cout << "LP skipped; no closed form exists for generic systems\n";
    }
    int disagreements = 0;
    for (const auto& v : oracle) {
      if (!v.agreement) {
        ++disagreements;
      }
    }
    std::cout << "oracle: " << oracle.size() << " checks, " << disagreements
              << " disagreements\n";
  }
  for (const auto& v : oracle) {
    if (!v.agreement) {
      return kExitOracle;
    }
  }
  return kExitOk;
}

int cmd_generate(const std::string& scenario_name, std::optional<int> n,
                 std::optional<std::uint64_t> seed) {
  const auto scenario = cbd::scenario_from_name(scenario_name);
  if (!scenario.has_value()) {
    std::cerr << "unknown scenario '" << scenario_name
              << "' (expected pr-box | tsirelson | kcbs-quantum | specker | "
                 "all-correlated | random)\n";
    return kExitInput;
  }
  const bool wants_n = *scenario == cbd::Scenario::Random ||
                       *scenario == cbd::Scenario::AllCorrelated;
  if (n.has_value() && !wants_n) {
    std::cerr << "--n does not apply to scenario '" << scenario_name << "'\n";
    return kExitInput;
  }
  if (seed.has_value() && *scenario != cbd::Scenario::Random) {
    std::cerr << "--seed does not apply to scenario '" << scenario_name
              << "'\n";
    return kExitInput;
  }
  switch (*scenario) {
  case cbd::Scenario::PrBox:
    std::cout << to_json(cbd::pr_box());
    return kExitOk;
  case cbd::Scenario::Tsirelson:
    std::cout << to_json_expectations(cbd::tsirelson());
    return kExitOk;
  case cbd::Scenario::KcbsQuantum:
    std::cout << to_json(cbd::kcbs_quantum());
    return kExitOk;
  case cbd::Scenario::Specker:
    std::cout << to_json(cbd::specker());
    return kExitOk;
  case cbd::Scenario::AllCorrelated:
    std::cout << to_json(cbd::all_correlated(n.value_or(4)));
    return kExitOk;
  case cbd::Scenario::Random:
    if (!n.has_value() || !seed.has_value()) {
      std::cerr << "scenario 'random' requires --n and --seed\n";
      return kExitInput;
    }
    std::cout << to_json(cbd::random_cyclic(*n, *seed));
    return kExitOk;
  }
  return kExitInput;
}

int cmd_compat(const std::string& system_path,
               const std::string& connections_path, bool json_output) {
  cbd::ParsedSystem parsed = cbd::parse_system_json(read_file(system_path));
  if (!std::holds_alternative<cbd::CyclicSystem>(parsed.system)) {
    std::cerr << "compat expects a cyclic system file\n";
    return kExitInput;
  }
  const auto& sys = std::get<cbd::CyclicSystem>(parsed.system);
  const auto violations = validate(sys);
  if (!violations.empty()) {
    print_violations(violations);
    return kExitInput;
  }
  const auto connections =
      cbd::parse_connections_json(read_file(connections_path));
  const bool with_lp = 2 * sys.rank() <= 24;
  const auto result = compatibility(sys, connections, with_lp);
  if (json_output) {
    std::cout << compat_to_json(result);
  } else {
    std::cout << "s_odd = " << fixed9(result.s_value)
              << (result.compatible ? " <= " : " > ") << result.bound << " : "
              << (result.compatible ? "compatible" : "incompatible") << "\n";
    std::cout << "splits: s_odd(vw) + s_even(conn) = "
              << fixed9(result.odd_even_split)
              << ", s_even(vw) + s_odd(conn) = "
              << fixed9(result.even_odd_split) << "\n";
    if (result.lp_feasible.has_value()) {
      std::cout << "LP cross-check: "
                << (*result.lp_feasible ? "feasible" : "infeasible") << " ("
                << (result.lp_record->certificate_ok ? "certificate verified"
                                                     : "certificate FAILED")
                << ")\n";
    }
  }
  if (result.lp_feasible.has_value() &&
      *result.lp_feasible != result.compatible) {
    std::cerr << "oracle disagreement: closed-form compatibility verdict "
                 "differs from LP feasibility\n";
    return kExitOracle;
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextuality analysis for cyclic and Specker-style systems "
               "of binary measurements"};
  app.require_subcommand(1);

  std::string analyze_path;
  bool analyze_json = false;
  bool analyze_no_lp = false;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Analyze a system file (JSON)");
  analyze_cmd->add_option("file", analyze_path, "system file")->required();
  analyze_cmd->add_flag("--json", analyze_json, "machine-readable report");
  analyze_cmd->add_flag("--no-lp", analyze_no_lp,
                        "skip the linear-programming cross-checks");

  std::string scenario;
  std::optional<int> gen_n;
  std::optional<std::uint64_t> gen_seed;
  auto* generate_cmd = app.add_subcommand(
      "generate", "Emit a bundled scenario as a system file");
  generate_cmd->add_option("scenario", scenario,
                           "pr-box | tsirelson | kcbs-quantum | specker | "
                           "all-correlated | random")
      ->required();
  generate_cmd->add_option("--n", gen_n, "rank (all-correlated, random)")
      ->check(CLI::Range(3, 12));
  generate_cmd->add_option("--seed", gen_seed, "64-bit seed (random)");

  std::string compat_system;
  std::string compat_connections;
  bool compat_json = false;
  auto* compat_cmd = app.add_subcommand(
      "compat", "Check connection couplings against the observed pairs");
  compat_cmd->add_option("system", compat_system, "cyclic system file")
      ->required();
  compat_cmd->add_option("connections", compat_connections,
                         "connections file")
      ->required();
  compat_cmd->add_flag("--json", compat_json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (analyze_cmd->parsed()) {
      return cmd_analyze(analyze_path, analyze_json, analyze_no_lp);
    }
    if (generate_cmd->parsed()) {
      return cmd_generate(scenario, gen_n, gen_seed);
    }
    if (compat_cmd->parsed()) {
      return cmd_compat(compat_system, compat_connections, compat_json);
    }
  } catch (const cbd::NumericalBreakdown& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const cbd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

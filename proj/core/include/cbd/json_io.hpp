#pragma once

#include "cbd/analysis.hpp"
#include "cbd/oracle.hpp"
#include "cbd/system_model.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cbd {

/// A parsed input file: the system in canonical form plus the relabeling
/// applied when a non-successor "permutation" was given.
struct ParsedSystem {
  std::variant<CyclicSystem, GenericSystem> system;
  std::optional<std::vector<int>> relabel_new_to_old;
};

/// Accepts the three schema forms:
///   {"type":"cyclic","n":N,"pairs":[{"i":1,"pp":x,"pm":x,"mp":x,"mm":x},...]}
///   {"type":"cyclic-expectations","n":N,"v":[...],"w":[...],"vw":[...]}
///   {"type":"generic","bunches":[{"vars":[...],"pmf":{"++":x,...}},...],
///    "connections":[["A","B"],...]}
/// plus an optional "permutation":[...] on the cyclic forms. pmf keys are
/// sign strings over {+,-}; omitted outcomes default to 0. Throws
/// ParseError (with location), InfeasibleExpectations, NotCircular.
ParsedSystem parse_system_json(const std::string& text);

/// Connections file for the compat command:
///   {"type":"connections","n":N,"pairs":[{"i":1,"pp":...},...]}
std::vector<PairDistribution> parse_connections_json(const std::string& text);

std::string to_json(const CyclicSystem& sys);
std::string to_json_expectations(const MarginalSummary& summary);
std::string to_json(const GenericSystem& sys);
std::string connections_to_json(const std::vector<PairDistribution>& pairs);

/// Machine-readable report: every AnalysisReport field plus certificates
/// (atom vectors serialized sparsely) and the oracle verdicts.
std::string report_to_json(const AnalysisReport& report,
                           const std::vector<OracleVerdict>& oracle);
std::string report_to_json(const GenericAnalysisReport& report,
                           const std::vector<OracleVerdict>& oracle);
std::string compat_to_json(const CompatibilityResult& result);

} // namespace cbd

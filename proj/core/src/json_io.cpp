#include "cbd/json_io.hpp"

#include "cbd/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <utility>

namespace cbd {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte) + ": " +
                     std::string(e.what()));
  }
}

double number_at(const json& j, const std::string& key,
                 const std::string& where) {
  if (!j.contains(key)) {
    fail(where, "missing field '" + key + "'");
  }
  if (!j[key].is_number()) {
    fail(where, "field '" + key + "' must be a number");
  }
  return j[key].get<double>();
}

int int_at(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    fail(where, "missing or non-integer field '" + key + "'");
  }
  return j[key].get<int>();
}

std::vector<double> number_array_at(const json& j, const std::string& key,
                                    std::size_t n, const std::string& where) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != n) {
    fail(where, "field '" + key + "' must be an array of length " +
                    std::to_string(n));
  }
  std::vector<double> out;
  out.reserve(n);
  for (const auto& x : j[key]) {
    if (!x.is_number()) {
      fail(where, "field '" + key + "' must contain numbers only");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

std::optional<std::vector<int>> permutation_at(const json& j, int n) {
  if (!j.contains("permutation")) {
    return std::nullopt;
  }
  const auto& p = j["permutation"];
  if (!p.is_array() || static_cast<int>(p.size()) != n) {
    fail("permutation", "must be an array of length " + std::to_string(n));
  }
  std::vector<int> pi;
  pi.reserve(static_cast<std::size_t>(n));
  for (const auto& x : p) {
    if (!x.is_number_integer()) {
      fail("permutation", "entries must be integers");
    }
    pi.push_back(x.get<int>());
  }
  return pi;
}

ParsedSystem finish_cyclic(std::vector<IndexedPair> pairs,
                           const std::optional<std::vector<int>>& pi, int n) {
  ParsedSystem out;
  if (pi.has_value()) {
    RelabelResult relabeled = relabel_permutation(pairs, *pi);
    out.relabel_new_to_old = std::move(relabeled.new_to_old);
    out.system = std::move(relabeled.system);
    return out;
  }
  CyclicSystem sys;
  sys.pairs.resize(static_cast<std::size_t>(n));
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const IndexedPair& p : pairs) {
    if (p.i < 1 || p.i > n || seen[static_cast<std::size_t>(p.i - 1)]) {
      fail("pairs", "indices must cover 1.." + std::to_string(n) +
                        " exactly once");
    }
    const int successor = p.i % n + 1;
    if (p.j != successor) {
      fail("pairs", "pair " + std::to_string(p.i) + " couples W" +
                        std::to_string(p.j) +
                        "; either use the successor pairing or supply "
                        "\"permutation\"");
    }
    seen[static_cast<std::size_t>(p.i - 1)] = true;
    sys.pairs[static_cast<std::size_t>(p.i - 1)] = p.dist;
  }
  out.system = std::move(sys);
  return out;
}

std::vector<IndexedPair> read_probability_pairs(const json& j, int n,
                                                const std::optional<std::vector<int>>& pi) {
  if (!j.contains("pairs") || !j["pairs"].is_array() ||
      static_cast<int>(j["pairs"].size()) != n) {
    fail("pairs", "must be an array of length n = " + std::to_string(n));
  }
  std::vector<IndexedPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (const auto& entry : j["pairs"]) {
    const std::string where = "pairs[" + std::to_string(pairs.size()) + "]";
    if (!entry.is_object()) {
      fail(where, "must be an object");
    }
    IndexedPair p;
    p.i = int_at(entry, "i", where);
    p.dist = PairDistribution::from_probabilities(
        number_at(entry, "pp", where), number_at(entry, "pm", where),
        number_at(entry, "mp", where), number_at(entry, "mm", where));
    if (p.i >= 1 && p.i <= n) {
      p.j = pi.has_value() ? (*pi)[static_cast<std::size_t>(p.i - 1)]
                           : p.i % n + 1;
    }
    pairs.push_back(p);
  }
  return pairs;
}

GenericSystem read_generic(const json& j) {
  GenericSystem sys;
  if (!j.contains("bunches") || !j["bunches"].is_array() ||
      j["bunches"].empty()) {
    fail("bunches", "must be a non-empty array");
  }
  for (const auto& entry : j["bunches"]) {
    const std::string where = "bunches[" + std::to_string(sys.bunches.size()) +
                              "]";
    if (!entry.is_object() || !entry.contains("vars") ||
        !entry["vars"].is_array() || entry["vars"].empty()) {
      fail(where, "must carry a non-empty 'vars' array");
    }
    Bunch bunch;
    for (const auto& name : entry["vars"]) {
      if (!name.is_string()) {
        fail(where, "'vars' must contain strings");
      }
      bunch.vars.push_back(name.get<std::string>());
    }
    const std::size_t k = bunch.vars.size();
    if (k > 16) {
      fail(where, "bunches are capped at 16 variables");
    }
    bunch.pmf.assign(std::size_t{1} << k, 0.0);
    if (!entry.contains("pmf") || !entry["pmf"].is_object()) {
      fail(where, "must carry a 'pmf' object");
    }
    for (const auto& [key, value] : entry["pmf"].items()) {
      if (key.size() != k) {
        fail(where, "pmf key '" + key + "' must have length " +
                        std::to_string(k));
      }
      std::size_t index = 0;
      for (char ch : key) {
        if (ch != '+' && ch != '-') {
          fail(where, "pmf key '" + key + "' must use only '+' and '-'");
        }
        index = (index << 1) | (ch == '-' ? 1u : 0u);
      }
      if (!value.is_number()) {
        fail(where, "pmf values must be numbers");
      }
      double x = value.get<double>();
      if (x < 0.0 && x >= -1e-12) {
        x = 0.0;
      }
      bunch.pmf[index] = x;
    }
    sys.bunches.push_back(std::move(bunch));
  }
  if (j.contains("connections")) {
    if (!j["connections"].is_array()) {
      fail("connections", "must be an array of two-element arrays");
    }
    for (const auto& entry : j["connections"]) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
          !entry[1].is_string()) {
        fail("connections", "each connection must be [nameA, nameB]");
      }
      sys.connections.push_back(
          {entry[0].get<std::string>(), entry[1].get<std::string>()});
    }
  }
  return sys;
}

json pair_to_json(int index, const PairDistribution& d) {
  json out;
  out["i"] = index;
  out["pp"] = d.pp;
  out["pm"] = d.pm;
  out["mp"] = d.mp;
  out["mm"] = d.mm;
  return out;
}

json criterion_to_json(const CriterionOutcome& c) {
  return json{{"noncontextual", c.noncontextual}, {"margin", c.margin}};
}

json record_to_json(const LpRunRecord& record) {
  json out;
  out["purpose"] = record.purpose;
  out["rows"] = record.rows;
  out["cols"] = record.cols;
  out["status"] = record.solution.status == LpStatus::Optimal ? "optimal"
                                                              : "infeasible";
  out["objective"] = record.solution.objective;
  out["pivots"] = record.solution.pivots;
  out["bland_engaged"] = record.solution.bland_engaged;
  out["rhs_perturbation"] = record.rhs_perturbation;
  out["certificate_verified"] = record.certificate_ok;
  if (record.solution.status == LpStatus::Optimal) {
    json atoms = json::object();
    for (std::size_t i = 0; i < record.solution.x.size(); ++i) {
      if (record.solution.x[i] != 0.0) {
        atoms[std::to_string(i)] = record.solution.x[i];
      }
    }
    out["atoms"] = std::move(atoms);
  } else {
    out["ray"] = record.solution.ray;
  }
  return out;
}

json oracle_to_json(const std::vector<OracleVerdict>& verdicts) {
  int disagreements = 0;
  json list = json::array();
  for (const OracleVerdict& v : verdicts) {
    if (!v.agreement) {
      ++disagreements;
    }
    list.push_back(json{{"subject", v.subject},
                        {"claim", v.claim},
                        {"independent", v.independent},
                        {"discrepancy", v.discrepancy},
                        {"tolerance", v.tolerance},
                        {"agreement", v.agreement}});
  }
  return json{{"checks", verdicts.size()},
              {"disagreements", disagreements},
              {"verdicts", std::move(list)}};
}

} // namespace

ParsedSystem parse_system_json(const std::string& text) {
  const json j = parse_document(text);
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    fail("document", "must be an object with a string 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "cyclic") {
    const int n = int_at(j, "n", "document");
    if (n < 3) {
      fail("n", "cyclic systems need n >= 3");
    }
    const auto pi = permutation_at(j, n);
    return finish_cyclic(read_probability_pairs(j, n, pi), pi, n);
  }
  if (type == "cyclic-expectations") {
    const int n = int_at(j, "n", "document");
    if (n < 3) {
      fail("n", "cyclic systems need n >= 3");
    }
    const auto count = static_cast<std::size_t>(n);
    const auto v = number_array_at(j, "v", count, "document");
    const auto w = number_array_at(j, "w", count, "document");
    const auto vw = number_array_at(j, "vw", count, "document");
    const auto pi = permutation_at(j, n);
    std::vector<IndexedPair> pairs;
    pairs.reserve(count);
    for (int i = 1; i <= n; ++i) {
      IndexedPair p;
      p.i = i;
      p.j = pi.has_value() ? (*pi)[static_cast<std::size_t>(i - 1)]
                           : i % n + 1;
      if (p.j < 1 || p.j > n) {
        fail("permutation", "entries must lie in 1.." + std::to_string(n));
      }
      try {
        p.dist = PairDistribution::from_expectations(
            v[static_cast<std::size_t>(i - 1)],
            w[static_cast<std::size_t>(p.j - 1)],
            vw[static_cast<std::size_t>(i - 1)]);
      } catch (const InfeasibleExpectations& e) {
        throw InfeasibleExpectations("pair " + std::to_string(i) + ": " +
                                     e.what());
      }
      pairs.push_back(p);
    }
    return finish_cyclic(std::move(pairs), pi, n);
  }
  if (type == "generic") {
    ParsedSystem out;
    out.system = read_generic(j);
    return out;
  }
  fail("type", "unknown system type '" + type + "'");
}

std::vector<PairDistribution> parse_connections_json(const std::string& text) {
  const json j = parse_document(text);
  if (!j.is_object() || !j.contains("type") || j["type"] != "connections") {
    fail("document", "expected an object with \"type\":\"connections\"");
  }
  const int n = int_at(j, "n", "document");
  if (n < 3) {
    fail("n", "connections need n >= 3");
  }
  const auto pairs = read_probability_pairs(j, n, std::nullopt);
  std::vector<PairDistribution> out(static_cast<std::size_t>(n));
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const IndexedPair& p : pairs) {
    if (p.i < 1 || p.i > n || seen[static_cast<std::size_t>(p.i - 1)]) {
      fail("pairs", "indices must cover 1.." + std::to_string(n) +
                        " exactly once");
    }
    seen[static_cast<std::size_t>(p.i - 1)] = true;
    out[static_cast<std::size_t>(p.i - 1)] = p.dist;
  }
  return out;
}

std::string to_json(const CyclicSystem& sys) {
  json out;
  out["type"] = "cyclic";
  out["n"] = sys.rank();
  json pairs = json::array();
  for (int i = 0; i < sys.rank(); ++i) {
    pairs.push_back(pair_to_json(i + 1, sys.pairs[static_cast<std::size_t>(i)]));
  }
  out["pairs"] = std::move(pairs);
  return out.dump(2) + "\n";
}

std::string to_json_expectations(const MarginalSummary& summary) {
  json out;
  out["type"] = "cyclic-expectations";
  out["n"] = summary.rank();
  out["v"] = summary.v;
  out["w"] = summary.w;
  out["vw"] = summary.vw;
  return out.dump(2) + "\n";
}

std::string to_json(const GenericSystem& sys) {
  json out;
  out["type"] = "generic";
  json bunches = json::array();
  for (const Bunch& bunch : sys.bunches) {
    json entry;
    entry["vars"] = bunch.vars;
    json pmf = json::object();
    const std::size_t k = bunch.vars.size();
    for (std::size_t o = 0; o < bunch.pmf.size(); ++o) {
      std::string key(k, '+');
      for (std::size_t t = 0; t < k; ++t) {
        if ((o >> (k - 1 - t)) & 1u) {
          key[t] = '-';
        }
      }
      pmf[key] = bunch.pmf[o];
    }
    entry["pmf"] = std::move(pmf);
    bunches.push_back(std::move(entry));
  }
  out["bunches"] = std::move(bunches);
  json connections = json::array();
  for (const auto& conn : sys.connections) {
    connections.push_back(json::array({conn[0], conn[1]}));
  }
  out["connections"] = std::move(connections);
  return out.dump(2) + "\n";
}

std::string connections_to_json(const std::vector<PairDistribution>& pairs) {
  json out;
  out["type"] = "connections";
  out["n"] = pairs.size();
  json list = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    list.push_back(pair_to_json(static_cast<int>(i) + 1, pairs[i]));
  }
  out["pairs"] = std::move(list);
  return out.dump(2) + "\n";
}

std::string report_to_json(const AnalysisReport& report,
                           const std::vector<OracleVerdict>& oracle) {
  json out;
  out["system"] = json{{"type", "cyclic"}, {"n", report.n}};
  out["tolerance"] = report.tolerance;
  out["consistently_connected"] = report.consistently_connected;
  out["summary"] = json{{"v", report.summary.v},
                        {"w", report.summary.w},
                        {"vw", report.summary.vw}};
  out["delta0"] = report.delta0;
  out["delta_min_closed"] = report.delta_min_closed;
  out["delta_min_conjectural"] = report.delta_min_conjectural;
  if (report.delta_min_lp.has_value()) {
    out["delta_min_lp"] = *report.delta_min_lp;
  } else {
    out["delta_min_lp"] = nullptr;
  }
  out["cntx"] = report.cntx;
  out["contextual"] = report.contextual;
  json criteria;
  criteria["general"] = criterion_to_json(report.general);
  criteria["master"] = criterion_to_json(report.master);
  if (report.lp_criterion.has_value()) {
    criteria["lp"] = criterion_to_json(*report.lp_criterion);
  }
  out["criteria"] = std::move(criteria);
  json special;
  if (report.special_cases.kcbs.has_value()) {
    const auto& k = *report.special_cases.kcbs;
    special["kcbs"] = json{{"p", k.p},
                           {"sum_p", k.sum_p},
                           {"bound", 2.0},
                           {"satisfied", k.satisfied}};
  }
  if (report.special_cases.chsh.has_value()) {
    const auto& c = *report.special_cases.chsh;
    special["chsh"] = json{{"combos", c.combos},
                           {"max_abs", c.max_abs},
                           {"bound", 2.0},
                           {"satisfied", c.satisfied}};
  }
  if (report.special_cases.suppes_zanotti.has_value()) {
    const auto& s = *report.special_cases.suppes_zanotti;
    special["suppes_zanotti"] = json{{"sum", s.sum},
                                     {"lower", -1.0},
                                     {"upper", s.upper},
                                     {"satisfied", s.satisfied}};
  }
  special["skipped"] = report.special_cases.skipped;
  out["special_cases"] = std::move(special);
  if (report.relabel_new_to_old.has_value()) {
    out["relabeling"] = *report.relabel_new_to_old;
  }
  json certificates = json::array();
  for (const LpRunRecord& record : report.certificates) {
    certificates.push_back(record_to_json(record));
  }
  out["certificates"] = std::move(certificates);
  out["oracle"] = oracle_to_json(oracle);
  return out.dump(2) + "\n";
}

std::string report_to_json(const GenericAnalysisReport& report,
                           const std::vector<OracleVerdict>& oracle) {
  json out;
  out["system"] = json{{"type", "generic"},
                       {"variables", report.num_vars},
                       {"bunches", report.num_bunches},
                       {"connections", report.num_connections}};
  out["tolerance"] = report.tolerance;
  out["consistently_connected"] = report.consistently_connected;
  out["delta0"] = report.delta0;
  out["delta_min_lp"] =
      report.delta_min_lp.has_value() ? json(*report.delta_min_lp) : json();
  out["cntx"] = report.cntx.has_value() ? json(*report.cntx) : json();
  out["noncontextual"] =
      report.noncontextual.has_value() ? json(*report.noncontextual) : json();
  json certificates = json::array();
  for (const LpRunRecord& record : report.certificates) {
    certificates.push_back(record_to_json(record));
  }
  out["certificates"] = std::move(certificates);
  out["oracle"] = oracle_to_json(oracle);
  return out.dump(2) + "\n";
}

std::string compat_to_json(const CompatibilityResult& result) {
  json out;
  out["s_odd"] = result.s_value;
  out["bound"] = result.bound;
  out["compatible"] = result.compatible;
  out["odd_even_split"] = result.odd_even_split;
  out["even_odd_split"] = result.even_odd_split;
  if (result.lp_feasible.has_value()) {
    out["lp_feasible"] = *result.lp_feasible;
  }
  if (result.lp_record.has_value()) {
    out["lp_certificate"] = record_to_json(*result.lp_record);
  }
  return out.dump(2) + "\n";
}

} // namespace cbd

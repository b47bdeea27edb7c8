#include "cbd/oracle.hpp"

#include "cbd/coupling.hpp"
#include "cbd/errors.hpp"
#include "cbd/signed_sums.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace cbd {

namespace {

OracleVerdict deviation_verdict(std::string subject, double max_deviation,
                                double tolerance) {
  OracleVerdict v;
  v.subject = std::move(subject);
  v.claim = 0.0;
  v.independent = max_deviation;
  v.discrepancy = max_deviation;
  v.tolerance = tolerance;
  v.agreement = max_deviation <= tolerance;
  return v;
}

OracleVerdict value_verdict(std::string subject, double claim,
                            double independent, double tolerance) {
  OracleVerdict v;
  v.subject = std::move(subject);
  v.claim = claim;
  v.independent = independent;
  v.discrepancy = std::abs(claim - independent);
  v.tolerance = tolerance;
  v.agreement = v.discrepancy <= tolerance;
  return v;
}

OracleVerdict boolean_verdict(std::string subject, bool claim,
                              bool independent) {
  OracleVerdict v;
  v.subject = std::move(subject);
  v.claim = claim ? 1.0 : 0.0;
  v.independent = independent ? 1.0 : 0.0;
  v.discrepancy = std::abs(v.claim - v.independent);
  v.tolerance = 0.5;
  v.agreement = claim == independent;
  return v;
}

// 2-marginal of (var_a, var_b) by direct summation.
std::array<double, 4> atom_pair_marginal(std::span<const double> atoms,
                                         int var_a, int var_b, int num_vars) {
  std::array<double, 4> out = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t atom = 0; atom < atoms.size(); ++atom) {
    const int a =
        atom_outcome_bit(static_cast<std::uint32_t>(atom), var_a, num_vars);
    const int b =
        atom_outcome_bit(static_cast<std::uint32_t>(atom), var_b, num_vars);
    out[static_cast<std::size_t>(2 * a + b)] += atoms[atom];
  }
  return out;
}

double pair_deviation(const std::array<double, 4>& got,
                      const PairDistribution& want) {
  return std::max({std::abs(got[0] - want.pp), std::abs(got[1] - want.pm),
                   std::abs(got[2] - want.mp), std::abs(got[3] - want.mm)});
}

} // namespace

OracleVerdict verify_coupling(
    const CyclicSystem& sys, std::span<const double> atoms,
    const std::vector<PairDistribution>* connection_targets) {
  const int n = sys.rank();
  const int num_vars = 2 * n;
  if (atoms.size() != (std::size_t{1} << num_vars)) {
    throw DimensionMismatch("atom vector has " + std::to_string(atoms.size()) +
                            " entries; expected 2^" +
                            std::to_string(num_vars));
  }
  double max_deviation = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto got = atom_pair_marginal(atoms, i, n + (i + 1) % n, num_vars);
    max_deviation = std::max(
        max_deviation,
        pair_deviation(got, sys.pairs[static_cast<std::size_t>(i)]));
  }
  if (connection_targets != nullptr) {
    for (int i = 0; i < n; ++i) {
      const auto got = atom_pair_marginal(atoms, i, n + i, num_vars);
      max_deviation = std::max(
          max_deviation,
          pair_deviation(got,
                         (*connection_targets)[static_cast<std::size_t>(i)]));
    }
  }
  return deviation_verdict("coupling reproduces bunch marginals",
                           max_deviation, tol::kLpFeasibility);
}

OracleVerdict verify_coupling(const GenericSystem& sys,
                              std::span<const double> atoms,
                              bool check_maximal_connections) {
  int num_vars = 0;
  for (const Bunch& bunch : sys.bunches) {
    num_vars += static_cast<int>(bunch.vars.size());
  }
  if (atoms.size() != (std::size_t{1} << num_vars)) {
    throw DimensionMismatch("atom vector has " + std::to_string(atoms.size()) +
                            " entries; expected 2^" +
                            std::to_string(num_vars));
  }

  auto var_index = [&](const std::string& name) {
    int index = 0;
    for (const Bunch& bunch : sys.bunches) {
      for (const std::string& candidate : bunch.vars) {
        if (candidate == name) {
          return index;
        }
        ++index;
      }
    }
    throw ValidationError("unknown variable '" + name + "'");
  };

  double max_deviation = 0.0;
  int base = 0;
  for (const Bunch& bunch : sys.bunches) {
    const int k = static_cast<int>(bunch.vars.size());
    std::vector<double> got(std::size_t{1} << k, 0.0);
    for (std::size_t atom = 0; atom < atoms.size(); ++atom) {
      std::uint32_t outcome = 0;
      for (int t = 0; t < k; ++t) {
        outcome =
            (outcome << 1) |
            static_cast<std::uint32_t>(atom_outcome_bit(
                static_cast<std::uint32_t>(atom), base + t, num_vars));
      }
      got[outcome] += atoms[atom];
    }
    double total = 0.0;
    for (double x : bunch.pmf) {
      total += x;
    }
    for (std::size_t o = 0; o < got.size(); ++o) {
      max_deviation =
          std::max(max_deviation, std::abs(got[o] - bunch.pmf[o] / total));
    }
    base += k;
  }

  if (check_maximal_connections) {
    for (const auto& conn : sys.connections) {
      const int xa = var_index(conn[0]);
      const int xb = var_index(conn[1]);
      // Marginals re-read from the atom vector itself: the maximal-coupling
      // target is a function of the coupled marginals.
      double pa = 0.0;
      double pb = 0.0;
      for (std::size_t atom = 0; atom < atoms.size(); ++atom) {
        if (atom_outcome_bit(static_cast<std::uint32_t>(atom), xa, num_vars) ==
            0) {
          pa += atoms[atom];
        }
        if (atom_outcome_bit(static_cast<std::uint32_t>(atom), xb, num_vars) ==
            0) {
          pb += atoms[atom];
        }
      }
      const PairDistribution target = maximal_coupling(
          std::min(std::max(pa, 0.0), 1.0), std::min(std::max(pb, 0.0), 1.0));
      const auto got = atom_pair_marginal(atoms, xa, xb, num_vars);
      max_deviation = std::max(max_deviation, pair_deviation(got, target));
    }
  }
  return deviation_verdict("coupling reproduces bunch marginals",
                           max_deviation, tol::kLpFeasibility);
}

double coupling_mismatch_sum(const CyclicSystem& sys,
                             std::span<const double> atoms) {
  const int n = sys.rank();
  const int num_vars = 2 * n;
  if (atoms.size() != (std::size_t{1} << num_vars)) {
    throw DimensionMismatch("atom vector has " + std::to_string(atoms.size()) +
                            " entries; expected 2^" +
                            std::to_string(num_vars));
  }
  double sum = 0.0;
  for (std::size_t atom = 0; atom < atoms.size(); ++atom) {
    int mismatches = 0;
    for (int i = 0; i < n; ++i) {
      if (atom_outcome_bit(static_cast<std::uint32_t>(atom), i, num_vars) !=
          atom_outcome_bit(static_cast<std::uint32_t>(atom), n + i,
                           num_vars)) {
        ++mismatches;
      }
    }
    sum += static_cast<double>(mismatches) * atoms[atom];
  }
  return sum;
}

std::vector<OracleVerdict> cross_validate(const CyclicSystem& sys,
                                          const CrossValidateOptions& options) {
  AnalyzeOptions analyze_options;
  analyze_options.run_lp = options.with_lp;
  analyze_options.tolerance = options.tolerance;
  return cross_validate(sys, analyze(sys, analyze_options), options);
}

std::vector<OracleVerdict> cross_validate(const CyclicSystem& sys,
                                          const AnalysisReport& report,
                                          const CrossValidateOptions& options) {
  std::vector<OracleVerdict> verdicts;
  const int n = sys.rank();

  // Delta_0 re-derived directly from the raw pmf entries.
  double gap_sum = 0.0;
  std::vector<double> products;
  products.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const PairDistribution& here = sys.pairs[static_cast<std::size_t>(i)];
    const PairDistribution& before =
        sys.pairs[static_cast<std::size_t>((i + n - 1) % n)];
    const double v_i = here.pp + here.pm - here.mp - here.mm;
    const double w_i = before.pp - before.pm + before.mp - before.mm;
    gap_sum += std::abs(v_i - w_i);
    products.push_back(here.pp - here.pm - here.mp + here.mm);
  }
  verdicts.push_back(value_verdict("delta0 recomputed from raw pmfs",
                                   report.delta0, 0.5 * gap_sum, 1e-12));

  verdicts.push_back(value_verdict(
      "cntx consistency (delta_min_closed - delta0)", report.cntx,
      std::max(0.0, report.delta_min_closed - report.delta0), 1e-12));

  // Closed signed sums against the exhaustive enumeration (skipped beyond
  // the 2^24 enumeration bound).
  if (n <= 24) {
    verdicts.push_back(value_verdict(
        "s_odd closed vs exhaustive (products)", s_odd(products),
        s_parity_exhaustive(products, Parity::Odd), tol::kExhaustive));
  }
  if (2 * n <= 24) {
    std::vector<double> master_sequence(products);
    for (int i = 0; i < n; ++i) {
      const PairDistribution& here = sys.pairs[static_cast<std::size_t>(i)];
      const PairDistribution& before =
          sys.pairs[static_cast<std::size_t>((i + n - 1) % n)];
      const double v_i = here.pp + here.pm - here.mp - here.mm;
      const double w_i = before.pp - before.pm + before.mp - before.mm;
      master_sequence.push_back(1.0 - std::abs(v_i - w_i));
    }
    verdicts.push_back(value_verdict(
        "s_odd closed vs exhaustive (master sequence)", s_odd(master_sequence),
        s_parity_exhaustive(master_sequence, Parity::Odd), tol::kExhaustive));
  }

  verdicts.push_back(boolean_verdict("criterion closed vs master",
                                     report.general.noncontextual,
                                     report.master.noncontextual));

  if (report.delta_min_lp.has_value()) {
    verdicts.push_back(value_verdict("delta_min closed vs LP",
                                     report.delta_min_closed,
                                     *report.delta_min_lp, tol::kClosedVsLp));
    verdicts.push_back(value_verdict(
        "coupling lower bound (delta_min_lp >= delta0)",
        std::max(0.0, report.delta0 - *report.delta_min_lp), 0.0,
        tol::kLpFeasibility));
  }
  if (report.lp_criterion.has_value()) {
    verdicts.push_back(boolean_verdict("criterion closed vs LP feasibility",
                                       report.general.noncontextual,
                                       report.lp_criterion->noncontextual));
  }

  for (const LpRunRecord& record : report.certificates) {
    verdicts.push_back(boolean_verdict(
        "LP certificate verified (" + record.purpose + ")", true,
        record.certificate_ok));
    if (record.purpose == "delta_min" &&
        record.solution.status == LpStatus::Optimal) {
      OracleVerdict coupling = verify_coupling(sys, record.solution.x);
      coupling.subject = "delta_min coupling reproduces bunch marginals";
      verdicts.push_back(coupling);
      verdicts.push_back(value_verdict(
          "delta_min LP objective vs atom mismatch sum",
          record.solution.objective,
          coupling_mismatch_sum(sys, record.solution.x),
          tol::kLpFeasibility));
    }
    if (record.purpose == "maximal_connections" &&
        record.solution.status == LpStatus::Optimal) {
      const auto targets = maximal_connection_targets(sys);
      OracleVerdict coupling =
          verify_coupling(sys, record.solution.x, &targets);
      coupling.subject =
          "pinned coupling reproduces bunches and maximal connections";
      verdicts.push_back(coupling);
    }
  }

  if (report.special_cases.kcbs.has_value()) {
    verdicts.push_back(boolean_verdict(
        "KCBS inequality vs general criterion",
        report.special_cases.kcbs->satisfied, report.general.noncontextual));
  }
  if (report.special_cases.chsh.has_value()) {
    verdicts.push_back(boolean_verdict(
        "CHSH inequalities vs general criterion",
        report.special_cases.chsh->satisfied, report.general.noncontextual));
  }
  if (report.special_cases.suppes_zanotti.has_value()) {
    verdicts.push_back(
        boolean_verdict("Suppes-Zanotti bound vs general criterion",
                        report.special_cases.suppes_zanotti->satisfied,
                        report.general.noncontextual));
  }
  (void)options;
  return verdicts;
}

} // namespace cbd

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 1-13 exercise the library; criterion 14 aggregates the
// certificate and cross-validation record of everything that ran before it.

#include "cbd/analysis.hpp"
#include "cbd/coupling.hpp"
#include "cbd/json_io.hpp"
#include "cbd/lp.hpp"
#include "cbd/oracle.hpp"
#include "cbd/rng.hpp"
#include "cbd/scenarios.hpp"
#include "cbd/signed_sums.hpp"
#include "cbd/system_model.hpp"

#include "../support/corpus.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cbd;

namespace {

struct Ledger {
  long lp_records = 0;
  long certificate_failures = 0;
  long coupling_checks = 0;
  long coupling_failures = 0;
  long cv_checks = 0;
  long cv_disagreements = 0;

  void record(const LpRunRecord& record) {
    ++lp_records;
    if (!record.certificate_ok) {
      ++certificate_failures;
    }
  }
  void record(const AnalysisReport& report) {
    for (const auto& r : report.certificates) {
      record(r);
    }
  }
  void record(const std::vector<OracleVerdict>& verdicts) {
    for (const auto& v : verdicts) {
      ++cv_checks;
      if (!v.agreement) {
        ++cv_disagreements;
      }
    }
  }
  void record_coupling(const OracleVerdict& verdict) {
    ++coupling_checks;
    if (!verdict.agreement) {
      ++coupling_failures;
    }
  }
};

Ledger g_ledger;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    pass = false;
    if (detail.tellp() > 0) {
      detail << "; ";
    }
    detail << why;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// --- criterion 1: closed form equals LP for n in {3,4,5} ------------------

Outcome criterion_closed_lp_equality() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int n : {3, 4, 5}) {
    Rng rng(0xA11CE000u + static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 500; ++trial) {
      const auto sys = testing::random_valid(n, rng);
      const auto report = analyze(sys);
      g_ledger.record(report);
      const auto verdicts = cross_validate(sys, report);
      g_ledger.record(verdicts);
      const double gap =
          std::abs(report.delta_min_closed - *report.delta_min_lp);
      worst = std::max(worst, gap);
      if (gap > 1e-7) {
        out.fail("n=" + std::to_string(n) + " trial " +
                 std::to_string(trial) + " gap " + std::to_string(gap));
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0) {
    out.fail("runtime " + std::to_string(elapsed) + "s exceeds 60s");
  }
  out.detail << "1500 systems, max |closed - lp| = " << worst << ", "
             << elapsed << "s";
  return out;
}

// --- criterion 2: conjecture suite for n in {6,7} --------------------------

Outcome criterion_conjecture_suite() {
  Outcome out;
  double worst = 0.0;
  for (int n : {6, 7}) {
    Rng rng(0xC0733000u + static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 200; ++trial) {
      const auto sys = testing::random_valid(n, rng);
      const auto report = analyze(sys);
      g_ledger.record(report);
      const auto verdicts = cross_validate(sys, report);
      g_ledger.record(verdicts);
      const double gap =
          std::abs(report.delta_min_closed - *report.delta_min_lp);
      worst = std::max(worst, gap);
      if (gap > 1e-7) {
        const std::string artifact = "conjecture_counterexample_n" +
                                     std::to_string(n) + "_trial" +
                                     std::to_string(trial) + ".json";
        std::ofstream(artifact) << to_json(sys);
        out.fail("counterexample written to " + artifact + " (gap " +
                 std::to_string(gap) + ")");
      }
    }
  }
  out.detail << "400 systems, max |closed - lp| = " << worst;
  return out;
}

// --- criterion 3: PR box ----------------------------------------------------

Outcome criterion_pr_box() {
  Outcome out;
  const auto sys = pr_box();
  const auto report = analyze(sys);
  g_ledger.record(report);
  g_ledger.record(cross_validate(sys, report));
  if (std::abs(report.cntx - 1.0) > 1e-9) {
    out.fail("CNTX = " + std::to_string(report.cntx));
  }
  if (report.general.noncontextual || report.master.noncontextual ||
      report.lp_criterion->noncontextual) {
    out.fail("some criterion method missed the contextuality");
  }
  out.detail << "CNTX = " << report.cntx
             << ", contextual by closed, master and LP";
  return out;
}

// --- criterion 4: Tsirelson -------------------------------------------------

Outcome criterion_tsirelson() {
  Outcome out;
  const auto sys = from_expectations(tsirelson());
  const auto report = analyze(sys);
  g_ledger.record(report);
  g_ledger.record(cross_validate(sys, report));
  const double expected = std::sqrt(2.0) - 1.0;
  if (std::abs(report.cntx - expected) > 1e-7) {
    out.fail("CNTX = " + std::to_string(report.cntx));
  }
  if (!report.special_cases.chsh.has_value()) {
    out.fail("CHSH diagnostic missing");
  } else if (std::abs(report.special_cases.chsh->max_abs -
                      2.0 * std::sqrt(2.0)) > 1e-9) {
    out.fail("max CHSH combination = " +
             std::to_string(report.special_cases.chsh->max_abs));
  }
  out.detail << "CNTX = " << report.cntx << ", max CHSH combination = "
             << report.special_cases.chsh->max_abs;
  return out;
}

// --- criterion 5: ideal KCBS ------------------------------------------------

Outcome criterion_ideal_kcbs() {
  Outcome out;
  const auto sys = kcbs_quantum();
  const auto report = analyze(sys);
  g_ledger.record(report);
  g_ledger.record(cross_validate(sys, report));
  const double sqrt5 = std::sqrt(5.0);
  if (!report.special_cases.kcbs.has_value()) {
    out.fail("KCBS diagnostic missing");
    return out;
  }
  const auto& diag = *report.special_cases.kcbs;
  if (std::abs(diag.sum_p - sqrt5) > 1e-9 || diag.satisfied) {
    out.fail("sum p_i = " + std::to_string(diag.sum_p) + " not flagged");
  }
  if (diag.satisfied != report.general.noncontextual) {
    out.fail("KCBS verdict disagrees with the general criterion");
  }
  const double expected = 0.5 * (4.0 * sqrt5 - 8.0);
  if (std::abs(report.cntx - expected) > 1e-7) {
    out.fail("CNTX = " + std::to_string(report.cntx) + ", expected " +
             std::to_string(expected));
  }
  out.detail << "sum p_i = " << diag.sum_p << " > 2, CNTX = " << report.cntx;
  return out;
}

// --- criterion 6: KCBS-inequality equivalence sweep -------------------------

Outcome criterion_kcbs_sweep() {
  Outcome out;
  Rng rng(0x6BC5u);
  int contextual_seen = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto sys = testing::random_kcbs_exclusion(rng);
    const auto s = marginal_summary(sys);
    double sum_p = 0.0;
    for (double v : s.v) {
      sum_p += (1.0 + v) / 2.0;
    }
    const bool inequality = sum_p <= 2.0;
    const bool general = criterion_closed(s).noncontextual;
    if (inequality != general) {
      out.fail("trial " + std::to_string(trial) + ": sum p = " +
               std::to_string(sum_p) + " vs general verdict " +
               std::to_string(general));
    }
    if (!general) {
      ++contextual_seen;
    }
  }
  out.detail << "1000 exclusion systems, " << contextual_seen
             << " contextual, verdicts identical";
  return out;
}

// --- criterion 7: CHSH equivalence sweep ------------------------------------

Outcome criterion_chsh_sweep() {
  Outcome out;
  Rng rng(0xC4584u);
  int contextual_seen = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto sys = testing::random_cc(4, rng);
    const auto s = marginal_summary(sys);
    const auto& a = s.vw;
    const double combos[4] = {a[0] + a[1] + a[2] - a[3],
                              a[0] + a[1] - a[2] + a[3],
                              a[0] - a[1] + a[2] + a[3],
                              -a[0] + a[1] + a[2] + a[3]};
    bool within = true;
    for (double combo : combos) {
      if (std::abs(combo) > 2.0) {
        within = false;
      }
    }
    const bool general = criterion_closed(s).noncontextual;
    if (within != general) {
      out.fail("trial " + std::to_string(trial) + " disagrees");
    }
    if (!general) {
      ++contextual_seen;
    }
  }
  out.detail << "1000 CC EPRB systems, " << contextual_seen
             << " contextual, verdicts identical";
  return out;
}

// --- criterion 8: Suppes-Zanotti equivalence sweep ---------------------------

Outcome criterion_suppes_zanotti_sweep() {
  Outcome out;
  Rng rng(0x52A54u);
  int contextual_seen = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto sys = testing::random_cc(3, rng);
    const auto s = marginal_summary(sys);
    const double sum = s.vw[0] + s.vw[1] + s.vw[2];
    const double upper = 1.0 + 2.0 * std::min({s.vw[0], s.vw[1], s.vw[2]});
    const bool bound_ok = sum >= -1.0 && sum <= upper;
    const bool general = criterion_closed(s).noncontextual;
    if (bound_ok != general) {
      out.fail("trial " + std::to_string(trial) + " disagrees (sum " +
               std::to_string(sum) + ")");
    }
    if (!general) {
      ++contextual_seen;
    }
  }
  out.detail << "1000 CC SZLG systems, " << contextual_seen
             << " contextual, verdicts identical";
  return out;
}

// --- criterion 9: Specker ----------------------------------------------------

Outcome criterion_specker() {
  Outcome out;
  const auto generic = specker();
  const auto prog = build_generic_program(generic, MaximalConnections{});
  const auto record = solve_recorded(prog.problem, "maximal_connections");
  g_ledger.record(record);
  if (record.solution.status != LpStatus::Infeasible) {
    out.fail("identity-connection program unexpectedly feasible");
  }
  if (!record.certificate_ok) {
    out.fail("dual-ray certificate failed verification");
  }

  MarginalSummary s;
  s.v = {0.0, 0.0, 0.0};
  s.w = {0.0, 0.0, 0.0};
  s.vw = {-1.0, -1.0, -1.0};
  const auto cyclic = from_expectations(s);
  const auto report = analyze(cyclic);
  g_ledger.record(report);
  g_ledger.record(cross_validate(cyclic, report));
  if (std::abs(*report.delta_min_lp - 1.0) > 1e-9) {
    out.fail("cyclic delta_min = " + std::to_string(*report.delta_min_lp));
  }
  if (std::abs(report.cntx - 1.0) > 1e-9) {
    out.fail("cyclic CNTX = " + std::to_string(report.cntx));
  }
  out.detail << "infeasible with verified ray; cyclic delta_min = "
             << *report.delta_min_lp << ", CNTX = " << report.cntx;
  return out;
}

// --- criterion 10: two-bunch feasibility -------------------------------------

Outcome criterion_two_bunch_feasibility() {
  Outcome out;
  Rng rng(0x2B07u);
  for (int trial = 0; trial < 200; ++trial) {
    GenericSystem sys;
    const auto s = rng.dirichlet4();
    const auto t = rng.dirichlet4();
    sys.bunches = {{{"A", "C"}, {s[0], s[1], s[2], s[3]}},
                   {{"B", "D"}, {t[0], t[1], t[2], t[3]}}};
    sys.connections = {{"A", "B"}};
    const auto prog = build_generic_program(sys, MaximalConnections{});
    const auto record = solve_recorded(prog.problem, "maximal_connections");
    g_ledger.record(record);
    if (record.solution.status != LpStatus::Optimal) {
      out.fail("trial " + std::to_string(trial) + " infeasible");
      continue;
    }
    const auto coupling = verify_coupling(sys, record.solution.x, true);
    g_ledger.record_coupling(coupling);
    if (!coupling.agreement) {
      out.fail("trial " + std::to_string(trial) + " coupling deviates by " +
               std::to_string(coupling.discrepancy));
    }
  }
  out.detail << "200 random (s, t) programs feasible, couplings verified at "
                "1e-8";
  return out;
}

// --- criterion 11: signed-sum oracle -----------------------------------------

Outcome criterion_signed_sum_oracle() {
  Outcome out;
  Rng rng(0x0ddu);
  double worst = 0.0;
  for (int length = 2; length <= 12; ++length) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> values(static_cast<std::size_t>(length));
      for (double& x : values) {
        x = rng.uniform(-1.0, 1.0);
        if (rng.word() % 23 == 0) {
          x = 0.0;
        }
      }
      const double odd_gap = std::abs(
          s_odd(values) - s_parity_exhaustive(values, Parity::Odd));
      const double even_gap = std::abs(
          s_even(values) - s_parity_exhaustive(values, Parity::Even));
      worst = std::max({worst, odd_gap, even_gap});
      if (odd_gap > 1e-12 || even_gap > 1e-12) {
        out.fail("length " + std::to_string(length) + " trial " +
                 std::to_string(trial));
      }
    }
  }
  // Single-entry edge case follows the exhaustive definition.
  for (double a : {-0.7, 0.3, 0.0}) {
    const std::vector<double> single{a};
    if (std::abs(s_even(single) - a) > 1e-15 ||
        std::abs(s_even(single) -
                 s_parity_exhaustive(single, Parity::Even)) > 1e-15) {
      out.fail("single-entry s_even(" + std::to_string(a) + ")");
    }
    if (std::abs(s_odd(single) + a) > 1e-15) {
      out.fail("single-entry s_odd(" + std::to_string(a) + ")");
    }
  }
  out.detail << "11000 vectors, max |closed - exhaustive| = " << worst;
  return out;
}

// --- criterion 12: maximal coupling vs LP ------------------------------------

Outcome criterion_maximal_coupling_lp() {
  Outcome out;
  Rng rng(0x3A61u);
  double worst = 0.0;
  LpProblem prob;
  prob.rows = 3;
  prob.cols = 4;
  prob.a = {1.0, 1.0, 0.0, 0.0,
            1.0, 0.0, 1.0, 0.0,
            1.0, 1.0, 1.0, 1.0};
  prob.c = {-1.0, 0.0, 0.0, -1.0};
  for (int trial = 0; trial < 10000; ++trial) {
    const double p = rng.uniform01();
    const double q = rng.uniform01();
    prob.b = {p, q, 1.0};
    const auto record = solve_recorded(prob, "agreement");
    g_ledger.record(record);
    const double lp_agreement = -record.solution.objective;
    const double closed = 1.0 - std::abs(p - q);
    worst = std::max(worst, std::abs(lp_agreement - closed));
    if (std::abs(lp_agreement - closed) > 1e-9) {
      out.fail("p=" + std::to_string(p) + " q=" + std::to_string(q));
    }
  }
  out.detail << "10000 marginal pairs, max gap = " << worst;
  return out;
}

// --- criterion 13: order reduction -------------------------------------------

Outcome criterion_order_reduction() {
  Outcome out;
  double worst = 0.0;
  for (int n : {5, 4}) {
    Rng rng(0x02D0u + static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 200; ++trial) {
      const auto sys = testing::random_reducible(n, rng);
      const auto reduced = reduce_order(sys);
      const double gap = std::abs(cntx(sys) - cntx(reduced));
      worst = std::max(worst, gap);
      if (gap > 1e-9) {
        out.fail("n=" + std::to_string(n) + " trial " +
                 std::to_string(trial) + " gap " + std::to_string(gap));
      }
    }
  }
  out.detail << "400 reductions (5->4 and 4->3), max CNTX drift = " << worst;
  return out;
}

// --- criterion 14: certificate layer -----------------------------------------

Outcome criterion_certificate_layer() {
  Outcome out;
  if (g_ledger.lp_records == 0) {
    out.fail("no LP runs were recorded");
  }
  if (g_ledger.certificate_failures != 0) {
    out.fail(std::to_string(g_ledger.certificate_failures) +
             " certificate verifications failed");
  }
  if (g_ledger.coupling_failures != 0) {
    out.fail(std::to_string(g_ledger.coupling_failures) +
             " coupling verifications failed");
  }
  if (g_ledger.cv_disagreements != 0) {
    out.fail(std::to_string(g_ledger.cv_disagreements) +
             " cross-validation disagreements");
  }
  out.detail << g_ledger.lp_records << " LP certificates verified, "
             << g_ledger.cv_checks << " cross-validation checks, "
             << g_ledger.coupling_checks
             << " direct coupling checks, 0 failures";
  return out;
}

} // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"closed-form/LP equality, n in {3,4,5}, 500 systems each at 1e-7",
       criterion_closed_lp_equality},
      {"conjecture suite, n in {6,7}, 200 systems each at 1e-7",
       criterion_conjecture_suite},
      {"PR box: CNTX = 1 within 1e-9, contextual by all three methods",
       criterion_pr_box},
      {"Tsirelson: CNTX = sqrt(2)-1 within 1e-7, max CHSH = 2 sqrt(2)",
       criterion_tsirelson},
      {"ideal KCBS: sum p = sqrt(5) flagged, CNTX = (4 sqrt(5)-8)/2",
       criterion_ideal_kcbs},
      {"KCBS-inequality equivalence sweep, 1000 exclusion systems",
       criterion_kcbs_sweep},
      {"CHSH equivalence sweep, 1000 CC rank-4 systems",
       criterion_chsh_sweep},
      {"Suppes-Zanotti equivalence sweep, 1000 CC rank-3 systems",
       criterion_suppes_zanotti_sweep},
      {"Specker: infeasible with verified ray; cyclic delta_min = CNTX = 1",
       criterion_specker},
      {"two-bunch maximal-connection programs feasible, 200 samples",
       criterion_two_bunch_feasibility},
      {"signed-sum oracle, 1000 vectors per length 2..12 at 1e-12",
       criterion_signed_sum_oracle},
      {"maximal-coupling agreement vs LP, 10000 samples at 1e-9",
       criterion_maximal_coupling_lp},
      {"order reduction preserves CNTX, 200 KCBS + 200 EPRB reductions",
       criterion_order_reduction},
      {"certificate layer: all LP runs verified, zero oracle disagreements",
       criterion_certificate_layer},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    if (!outcome.pass) {
      ++failures;
    }
    std::printf("[%s] criterion %2zu: %s (%s)\n",
                outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                outcome.detail.str().c_str());
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 14 acceptance criteria passed\n");
  return 0;
}

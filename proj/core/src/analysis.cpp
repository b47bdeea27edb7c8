#include "cbd/analysis.hpp"

#include "cbd/errors.hpp"
#include "cbd/signed_sums.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>

namespace cbd {

namespace {

double abs_marginal_gap_sum(const MarginalSummary& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    sum += std::abs(s.v[i] - s.w[i]);
  }
  return sum;
}

bool summary_is_cc(const MarginalSummary& s, double tolerance) {
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    if (std::abs(s.v[i] - s.w[i]) > tolerance) {
      return false;
    }
  }
  return true;
}

void require_valid(const CyclicSystem& sys) {
  const auto violations = validate(sys);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "system is invalid: " << violations.front().location << ": "
        << violations.front().message;
    if (violations.size() > 1) {
      msg << " (+" << violations.size() - 1 << " more)";
    }
    throw ValidationError(msg.str());
  }
}

} // namespace

double delta0(const MarginalSummary& summary) {
  return 0.5 * abs_marginal_gap_sum(summary);
}

double delta0(const CyclicSystem& sys) {
  return delta0(marginal_summary(sys));
}

double delta_min_closed(const MarginalSummary& summary) {
  const double n = static_cast<double>(summary.rank());
  const double s = s_odd(summary.vw);
  return 0.5 * std::max(2.0 * delta0(summary), s - n + 2.0);
}

double delta_min_closed(const CyclicSystem& sys) {
  return delta_min_closed(marginal_summary(sys));
}

double cntx(const MarginalSummary& summary) {
  const double value = delta_min_closed(summary) - delta0(summary);
  if (value < 0.0 && value >= -1e-12) {
    return 0.0;
  }
  return value;
}

double cntx(const CyclicSystem& sys) { return cntx(marginal_summary(sys)); }

CriterionOutcome criterion_closed(const MarginalSummary& summary,
                                  double tolerance) {
  const double n = static_cast<double>(summary.rank());
  const double bound = n - 2.0 + abs_marginal_gap_sum(summary);
  const double margin = bound - s_odd(summary.vw);
  // margin >= -2*tol keeps the verdict aligned with cntx <= tol.
  return {margin >= -2.0 * tolerance, margin};
}

CriterionOutcome criterion_master(const MarginalSummary& summary,
                                  double tolerance) {
  const std::size_t n = summary.v.size();
  std::vector<double> sequence(summary.vw);
  sequence.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    sequence.push_back(1.0 - std::abs(summary.v[i] - summary.w[i]));
  }
  const double bound = 2.0 * static_cast<double>(n) - 2.0;
  const double margin = bound - s_odd(sequence);
  return {margin >= -2.0 * tolerance, margin};
}

LpRunRecord solve_recorded(const LpProblem& problem, std::string purpose) {
  LpRunRecord record;
  record.purpose = std::move(purpose);
  record.rows = problem.rows;
  record.cols = problem.cols;
  try {
    record.solution = solve(problem);
  } catch (const NumericalBreakdown&) {
    LpProblem perturbed = problem;
    const double base = 1e-12;
    for (int r = 0; r < perturbed.rows; ++r) {
      perturbed.b[static_cast<std::size_t>(r)] +=
          base * static_cast<double>(r + 1) /
          static_cast<double>(perturbed.rows);
    }
    record.solution = solve(perturbed);
    record.rhs_perturbation = base;
  }
  record.certificate_ok = verify_certificate(problem, record.solution);
  return record;
}

LpValue delta_min_lp(const CyclicSystem& sys) {
  const CouplingProgram prog = build_cyclic_program(sys, MinimizeMismatch{});
  LpValue result;
  result.record = solve_recorded(prog.problem, "delta_min");
  if (result.record.solution.status != LpStatus::Optimal) {
    throw NumericalBreakdown(
        "delta_min coupling program reported infeasible; bunch marginals "
        "should always admit a product coupling");
  }
  result.value = result.record.solution.objective;
  return result;
}

LpCriterion criterion_lp(const CyclicSystem& sys, double tolerance) {
  (void)tolerance; // feasibility verdicts use the solver's own tolerance
  const CouplingProgram prog =
      build_cyclic_program(sys, FixConnections{});
  LpCriterion result;
  result.record = solve_recorded(prog.problem, "maximal_connections");
  const bool feasible = result.record.solution.status == LpStatus::Optimal;
  result.outcome.noncontextual = feasible;
  result.outcome.margin =
      feasible ? 0.0 : -result.record.solution.objective;
  return result;
}

CriterionOutcome is_noncontextual(const CyclicSystem& sys,
                                  CriterionMethod method, double tolerance) {
  switch (method) {
  case CriterionMethod::Closed:
    return criterion_closed(marginal_summary(sys), tolerance);
  case CriterionMethod::Master:
    return criterion_master(marginal_summary(sys), tolerance);
  case CriterionMethod::Lp:
    return criterion_lp(sys, tolerance).outcome;
  }
  throw ValidationError("unknown criterion method");
}

CompatibilityResult compatibility(
    const CyclicSystem& sys, const std::vector<PairDistribution>& connections,
    bool with_lp) {
  const int n = sys.rank();
  if (static_cast<int>(connections.size()) != n) {
    throw ValidationError("expected " + std::to_string(n) +
                          " connection couplings, got " +
                          std::to_string(connections.size()));
  }
  for (std::size_t i = 0; i < connections.size(); ++i) {
    const auto violations =
        validate(connections[i], "connection " + std::to_string(i + 1));
    if (!violations.empty()) {
      throw ValidationError("connection " + std::to_string(i + 1) + ": " +
                            violations.front().message);
    }
  }
  const MarginalSummary s = marginal_summary(sys);
  for (std::size_t i = 0; i < connections.size(); ++i) {
    const double dv = std::abs(connections[i].v() - s.v[i]);
    const double dw = std::abs(connections[i].w() - s.w[i]);
    if (dv > tol::kProbabilitySum || dw > tol::kProbabilitySum) {
      std::ostringstream msg;
      msg << "connection " << i + 1
          << " marginals do not match the system (|dV| = " << dv
          << ", |dW| = " << dw << ")";
      throw MarginalMismatch(msg.str());
    }
  }

  CompatibilityResult result;
  std::vector<double> conn_vw;
  conn_vw.reserve(connections.size());
  for (const PairDistribution& c : connections) {
    conn_vw.push_back(c.vw());
  }
  std::vector<double> joint(s.vw);
  joint.insert(joint.end(), conn_vw.begin(), conn_vw.end());
  result.s_value = s_odd(joint);
  result.bound = 2.0 * static_cast<double>(n) - 2.0;
  result.compatible = result.s_value <= result.bound + 2.0 * tol::kVerdict;
  result.odd_even_split = s_odd(s.vw) + s_even(conn_vw);
  result.even_odd_split = s_even(s.vw) + s_odd(conn_vw);

  if (with_lp && 2 * n <= 24) {
    const CouplingProgram prog =
        build_cyclic_program(sys, FixConnections{connections});
    result.lp_record = solve_recorded(prog.problem, "compatibility");
    result.lp_feasible =
        result.lp_record->solution.status == LpStatus::Optimal;
  }
  return result;
}

CyclicSystem reduce_order(const CyclicSystem& sys) {
  const int n = sys.rank();
  if (n < 4) {
    throw PreconditionFailed("order reduction needs n >= 4, got " +
                             std::to_string(n));
  }
  const double last_vw = sys.pairs.back().vw();
  if (std::abs(last_vw - 1.0) > tol::kProbabilitySum) {
    throw PreconditionFailed(
        "order reduction needs <V_n W_1> = 1, got " + std::to_string(last_vw));
  }
  // Pair n is a perfect correlation, so W_1 tracks V_n exactly; dropping it
  // and reading pair n-1's second coordinate as W_1 yields the (n-1)-system.
  CyclicSystem reduced;
  reduced.pairs.assign(sys.pairs.begin(), sys.pairs.end() - 1);
  return reduced;
}

SpecialCases special_cases(const CyclicSystem& sys, double tolerance) {
  SpecialCases out;
  const int n = sys.rank();
  const MarginalSummary s = marginal_summary(sys);
  const bool cc = summary_is_cc(s, tol::kProbabilitySum);

  if (n == 5) {
    bool exclusion = true;
    for (const PairDistribution& pair : sys.pairs) {
      if (pair.pp > tol::kProbabilitySum) {
        exclusion = false;
        break;
      }
    }
    if (!cc) {
      out.skipped.push_back("KCBS inequality: system is not consistently "
                            "connected");
    } else if (!exclusion) {
      out.skipped.push_back(
          "KCBS inequality: exclusion Pr[V_i=1, W_(i+1)=1] = 0 not satisfied");
    } else {
      KcbsDiagnostics diag;
      diag.sum_p = 0.0;
      for (int i = 0; i < 5; ++i) {
        diag.p[static_cast<std::size_t>(i)] =
            (1.0 + s.v[static_cast<std::size_t>(i)]) / 2.0;
        diag.sum_p += diag.p[static_cast<std::size_t>(i)];
      }
      diag.satisfied = diag.sum_p <= 2.0 + tolerance;
      out.kcbs = diag;
    }
  } else if (n == 4) {
    if (!cc) {
      out.skipped.push_back("CHSH inequalities: system is not consistently "
                            "connected");
    } else {
      ChshDiagnostics diag;
      const auto& a = s.vw;
      diag.combos = {a[0] + a[1] + a[2] - a[3], a[0] + a[1] - a[2] + a[3],
                     a[0] - a[1] + a[2] + a[3], -a[0] + a[1] + a[2] + a[3]};
      diag.max_abs = 0.0;
      for (double combo : diag.combos) {
        diag.max_abs = std::max(diag.max_abs, std::abs(combo));
      }
      diag.satisfied = diag.max_abs <= 2.0 + tolerance;
      out.chsh = diag;
    }
  } else if (n == 3) {
    if (!cc) {
      out.skipped.push_back("Suppes-Zanotti bound: system is not consistently "
                            "connected");
    } else {
      SuppesZanottiDiagnostics diag;
      diag.sum = s.vw[0] + s.vw[1] + s.vw[2];
      diag.upper = 1.0 + 2.0 * std::min({s.vw[0], s.vw[1], s.vw[2]});
      diag.satisfied =
          diag.sum >= -1.0 - tolerance && diag.sum <= diag.upper + tolerance;
      out.suppes_zanotti = diag;
    }
  } else {
    out.skipped.push_back("no special-case inequality for n = " +
                          std::to_string(n));
  }
  return out;
}

AnalysisReport analyze(const CyclicSystem& sys, const AnalyzeOptions& options) {
  require_valid(sys);
  const int n = sys.rank();

  AnalysisReport report;
  report.n = n;
  report.summary = marginal_summary(sys);
  report.consistently_connected =
      summary_is_cc(report.summary, tol::kProbabilitySum);
  report.tolerance = options.tolerance;
  report.delta0 = delta0(report.summary);
  report.delta_min_closed = delta_min_closed(report.summary);
  report.delta_min_conjectural = n >= 6;
  report.cntx = cntx(report.summary);
  report.contextual = report.cntx > options.tolerance;
  report.general = criterion_closed(report.summary, options.tolerance);
  report.master = criterion_master(report.summary, options.tolerance);
  report.special_cases = special_cases(sys, options.tolerance);

  if (options.run_lp && 2 * n <= 24) {
    LpValue lp_value = delta_min_lp(sys);
    report.delta_min_lp = lp_value.value;
    report.certificates.push_back(std::move(lp_value.record));
    LpCriterion lp_crit = criterion_lp(sys, options.tolerance);
    report.lp_criterion = lp_crit.outcome;
    report.certificates.push_back(std::move(lp_crit.record));
  }
  return report;
}

GenericAnalysisReport analyze(const GenericSystem& sys,
                              const AnalyzeOptions& options) {
  const auto violations = validate(sys);
  if (!violations.empty()) {
    throw ValidationError("system is invalid: " + violations.front().location +
                          ": " + violations.front().message);
  }

  GenericAnalysisReport report;
  report.tolerance = options.tolerance;
  report.num_bunches = static_cast<int>(sys.bunches.size());
  report.num_connections = static_cast<int>(sys.connections.size());
  for (const Bunch& bunch : sys.bunches) {
    report.num_vars += static_cast<int>(bunch.vars.size());
  }

  // <A> for a named variable, read from its bunch.
  auto mean_of = [&](const std::string& name) {
    for (const Bunch& bunch : sys.bunches) {
      for (std::size_t t = 0; t < bunch.vars.size(); ++t) {
        if (bunch.vars[t] != name) {
          continue;
        }
        const int k = static_cast<int>(bunch.vars.size());
        double total = 0.0;
        double mean = 0.0;
        for (std::size_t o = 0; o < bunch.pmf.size(); ++o) {
          total += bunch.pmf[o];
          const bool minus = ((o >> (k - 1 - static_cast<int>(t))) & 1u) != 0u;
          mean += minus ? -bunch.pmf[o] : bunch.pmf[o];
        }
        return mean / total;
      }
    }
    throw ValidationError("unknown variable '" + name + "'");
  };

  report.consistently_connected = true;
  double gap_sum = 0.0;
  for (const auto& conn : sys.connections) {
    const double gap = std::abs(mean_of(conn[0]) - mean_of(conn[1]));
    gap_sum += gap;
    if (gap > tol::kProbabilitySum) {
      report.consistently_connected = false;
    }
  }
  report.delta0 = 0.5 * gap_sum;

  if (options.run_lp && report.num_vars <= 24) {
    const CouplingProgram mismatch =
        build_generic_program(sys, MinimizeMismatch{});
    LpRunRecord run = solve_recorded(mismatch.problem, "delta_min");
    if (run.solution.status != LpStatus::Optimal) {
      throw NumericalBreakdown(
          "generic delta_min program reported infeasible");
    }
    report.delta_min_lp = run.solution.objective;
    report.cntx =
        std::max(0.0, run.solution.objective - report.delta0);
    report.certificates.push_back(std::move(run));

    const CouplingProgram fixed =
        build_generic_program(sys, MaximalConnections{});
    LpRunRecord feasibility = solve_recorded(fixed.problem, "maximal_connections");
    report.noncontextual =
        feasibility.solution.status == LpStatus::Optimal;
    report.certificates.push_back(std::move(feasibility));
  }
  return report;
}

} // namespace cbd

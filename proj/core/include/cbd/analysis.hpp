#pragma once

#include "cbd/coupling.hpp"
#include "cbd/lp.hpp"
#include "cbd/system_model.hpp"
#include "cbd/tolerances.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cbd {

/// Criterion verdict with its signed slack: nonnegative margin means
/// noncontextual. For the closed criterion the margin is
/// (n - 2 + sum|v_i - w_i|) - s_odd(vw); for the master criterion it is
/// (2n - 2) - s_odd(vw, 1 - |v_i - w_i|); for the LP criterion it is 0 when
/// the pinned-connections program is feasible and minus the phase-1
/// infeasibility measure otherwise.
struct CriterionOutcome {
  bool noncontextual = false;
  double margin = 0.0;
};

enum class CriterionMethod { Closed, Master, Lp };

/// One LP run kept for certificate re-checking.
struct LpRunRecord {
  std::string purpose;
  int rows = 0;
  int cols = 0;
  LpSolution solution;
  bool certificate_ok = false;
  double rhs_perturbation = 0.0;
};

struct KcbsDiagnostics {
  std::array<double, 5> p; // p_i = Pr[V_i = 1]
  double sum_p = 0.0;      // noncontextual iff <= 2
  bool satisfied = false;
};

struct ChshDiagnostics {
  std::array<double, 4> combos; // one minus sign in position 4, 3, 2, 1
  double max_abs = 0.0;         // noncontextual iff <= 2
  bool satisfied = false;
};

/// Two-sided Suppes-Zanotti bound: -1 <= sum(vw) <= 1 + 2 min(vw).
struct SuppesZanottiDiagnostics {
  double sum = 0.0;
  double upper = 0.0;
  bool satisfied = false;
};

struct SpecialCases {
  std::optional<KcbsDiagnostics> kcbs;
  std::optional<ChshDiagnostics> chsh;
  std::optional<SuppesZanottiDiagnostics> suppes_zanotti;
  std::vector<std::string> skipped; // inapplicable cases with reasons
};

struct AnalysisReport {
  int n = 0;
  MarginalSummary summary;
  bool consistently_connected = false;
  double delta0 = 0.0;
  double delta_min_closed = 0.0;
  bool delta_min_conjectural = false; // n >= 6: closed form is LP-verified
  std::optional<double> delta_min_lp;
  double cntx = 0.0;
  bool contextual = false;
  CriterionOutcome general;
  CriterionOutcome master;
  std::optional<CriterionOutcome> lp_criterion;
  SpecialCases special_cases;
  std::vector<LpRunRecord> certificates;
  std::optional<std::vector<int>> relabel_new_to_old;
  double tolerance = tol::kVerdict;
};

struct AnalyzeOptions {
  bool run_lp = true;       // skipped anyway when 2n > 24
  double tolerance = tol::kVerdict;
};

// Closed-form layer. All functions are well-defined on raw expectation
// summaries; the CyclicSystem overloads go through marginal_summary.

/// Delta_0 = half the sum of |<V_i> - <W_i>|.
double delta0(const MarginalSummary& summary);
double delta0(const CyclicSystem& sys);

/// Closed form: (1/2) max(2 Delta_0, s_odd(vw) - n + 2). Exact for
/// n in {3, 4, 5}; for larger n the same formula is reported as
/// conjectural and cross-checked by LP.
double delta_min_closed(const MarginalSummary& summary);
double delta_min_closed(const CyclicSystem& sys);

/// Degree of contextuality delta_min - delta0, clamped to 0 within -1e-12.
double cntx(const MarginalSummary& summary);
double cntx(const CyclicSystem& sys);

CriterionOutcome criterion_closed(const MarginalSummary& summary,
                                  double tolerance = tol::kVerdict);
CriterionOutcome criterion_master(const MarginalSummary& summary,
                                  double tolerance = tol::kVerdict);

// LP layer.

struct LpValue {
  double value = 0.0;
  LpRunRecord record;
};

/// Optimal value of the MinimizeMismatch coupling program (the infimum is
/// attained, so this is exact up to solver tolerances). Requires 2n <= 24.
LpValue delta_min_lp(const CyclicSystem& sys);

struct LpCriterion {
  CriterionOutcome outcome;
  LpRunRecord record;
};

/// Noncontextual-description test: feasibility of the coupling program
/// with every connection pinned to its maximal coupling.
LpCriterion criterion_lp(const CyclicSystem& sys,
                         double tolerance = tol::kVerdict);

CriterionOutcome is_noncontextual(const CyclicSystem& sys,
                                  CriterionMethod method,
                                  double tolerance = tol::kVerdict);

/// Compatibility of explicitly given connection couplings with the
/// observed pairs: s_odd over the 2n product expectations against the
/// 2n - 2 bound, plus the equivalent two-inequality split and an optional
/// FixConnections LP cross-check.
struct CompatibilityResult {
  double s_value = 0.0;
  double bound = 0.0;
  bool compatible = false;
  double odd_even_split = 0.0;  // s_odd(vw) + s_even(conn)
  double even_odd_split = 0.0;  // s_even(vw) + s_odd(conn)
  std::optional<bool> lp_feasible;
  std::optional<LpRunRecord> lp_record;
};

/// Throws MarginalMismatch when a connection coupling's marginals disagree
/// with the system's (<V_i>, <W_i>) beyond 1e-9, ValidationError on invalid
/// pmfs or a length mismatch.
CompatibilityResult compatibility(const CyclicSystem& sys,
                                  const std::vector<PairDistribution>& connections,
                                  bool with_lp = true);

/// Collapses a rank-n system to rank n-1 when pair n is a perfect
/// correlation (vw_n = 1 within 1e-9): W_n and V_n merge and pair n-1's
/// second coordinate is relabeled W_1. Preserves CNTX when additionally
/// <W_n> = <V_n>. Throws PreconditionFailed.
CyclicSystem reduce_order(const CyclicSystem& sys);

SpecialCases special_cases(const CyclicSystem& sys,
                           double tolerance = tol::kVerdict);

/// Full cyclic analysis. The input must be valid (throws ValidationError
/// otherwise). LP failures are retried once with the right-hand side
/// perturbed by 1e-12 and the perturbation recorded.
AnalysisReport analyze(const CyclicSystem& sys,
                       const AnalyzeOptions& options = {});

/// Generic systems have no closed form; the report is LP-based.
/// delta0 is half the sum of |<A> - <B>| over connections; the verdict is
/// coupling feasibility with every connection pinned to its maximal
/// coupling.
struct GenericAnalysisReport {
  int num_vars = 0;
  int num_bunches = 0;
  int num_connections = 0;
  bool consistently_connected = false;
  double delta0 = 0.0;
  std::optional<double> delta_min_lp;
  std::optional<double> cntx;
  std::optional<bool> noncontextual;
  std::vector<LpRunRecord> certificates;
  double tolerance = tol::kVerdict;
};

GenericAnalysisReport analyze(const GenericSystem& sys,
                              const AnalyzeOptions& options = {});

/// Solve with the documented one-shot retry: on NumericalBreakdown the
/// right-hand side is perturbed by 1e-12 (scaled per row index) and the
/// perturbation recorded in the run record.
LpRunRecord solve_recorded(const LpProblem& problem, std::string purpose);

} // namespace cbd

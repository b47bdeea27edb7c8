#pragma once

#include "cbd/analysis.hpp"
#include "cbd/system_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cbd {

/// One independent re-check: a claimed value against a re-derived one.
/// Boolean claims are encoded as 0/1 with tolerance 0.5. Invariant:
/// agreement iff discrepancy <= tolerance.
struct OracleVerdict {
  std::string subject;
  double claim = 0.0;
  double independent = 0.0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool agreement = false;
};

/// Re-derives every bunch 2-marginal of a cyclic coupling by direct
/// summation over the atom vector and compares against the observed pairs
/// (and against claimed connection targets when given). The atom layout is
/// the canonical one from coupling.hpp; no solver or closed-form code is
/// involved. Throws DimensionMismatch.
OracleVerdict verify_coupling(
    const CyclicSystem& sys, std::span<const double> atoms,
    const std::vector<PairDistribution>* connection_targets = nullptr);

/// Generic-system variant: re-derives every bunch marginal; with
/// check_maximal_connections also the connection 2-marginals against the
/// maximal couplings of the observed marginals.
OracleVerdict verify_coupling(const GenericSystem& sys,
                              std::span<const double> atoms,
                              bool check_maximal_connections = false);

/// Sum over connections of Pr[V_i != W_i], re-derived from raw atoms.
double coupling_mismatch_sum(const CyclicSystem& sys,
                             std::span<const double> atoms);

struct CrossValidateOptions {
  bool with_lp = true;
  double tolerance = tol::kVerdict;
};

/// Runs every redundant pair of routes on a fresh analysis of the system:
/// closed-form delta_min vs LP, the three criterion methods against each
/// other, closed vs exhaustive signed sums, special-case inequalities vs
/// the general criterion, plus coupling and certificate re-verification.
std::vector<OracleVerdict> cross_validate(
    const CyclicSystem& sys, const CrossValidateOptions& options = {});

/// Same checks against an existing report (detects tampered values).
std::vector<OracleVerdict> cross_validate(
    const CyclicSystem& sys, const AnalysisReport& report,
    const CrossValidateOptions& options = {});

} // namespace cbd

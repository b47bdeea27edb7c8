#pragma once

#include "cbd/lp.hpp"
#include "cbd/system_model.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace cbd {

/// Distribution of the coupling (A*, B*) maximizing Pr[A* = B*] for binary
/// marginals p = Pr[A = 1], q = Pr[B = 1]. For p >= q this is
/// (q, p - q, 0, 1 - p); the p < q case is the symmetric mirror. The
/// achieved agreement is 1 - |p - q|. Throws OutOfRange.
PairDistribution maximal_coupling(double p, double q);

/// Atom indexing shared by program builders and the verification layer:
/// variables in canonical order (cyclic: V_1..V_n, W_1..W_n; generic:
/// bunch order), first variable most significant, bit 0 = +1, bit 1 = -1.
/// Atom 0 is the all-+1 outcome.
inline int atom_outcome_bit(std::uint32_t atom, int var, int num_vars) {
  return static_cast<int>((atom >> (num_vars - 1 - var)) & 1u);
}

struct Feasibility {};
struct MinimizeMismatch {};
/// Pin every connection 2-marginal to the given pmf (one per connection,
/// in connection order). An empty list means "maximal couplings of the
/// observed marginals", realizing the noncontextual-description test.
struct FixConnections {
  std::vector<PairDistribution> targets;
};
/// Generic-system shorthand for FixConnections with maximal targets.
struct MaximalConnections {};

using CyclicMode = std::variant<Feasibility, MinimizeMismatch, FixConnections>;
using GenericMode =
    std::variant<Feasibility, MinimizeMismatch, MaximalConnections>;

/// A coupling LP over the joint outcome atoms of all system variables.
struct CouplingProgram {
  LpProblem problem;
  int num_vars = 0;
  std::vector<std::string> var_names;
};

/// Rows: four marginal equations per bunch (pair pmfs renormalized so the
/// right-hand side is self-consistent), optional four equations per
/// connection, plus an explicit normalization row. Objective in
/// MinimizeMismatch mode: sum over connections of Pr[V_i != W_i].
/// Throws TooManyVariables when 2n > 24.
CouplingProgram build_cyclic_program(const CyclicSystem& sys,
                                     const CyclicMode& mode);

/// One marginal equation per outcome of each bunch; per connection either
/// maximal-coupling target equations or mismatch terms in the objective.
/// No explicit normalization row. Throws TooManyVariables when the total
/// variable count exceeds 24.
CouplingProgram build_generic_program(const GenericSystem& sys,
                                      const GenericMode& mode);

/// Maximal-coupling targets for every cyclic connection, built from
/// (Pr[V_i = 1], Pr[W_i = 1]).
std::vector<PairDistribution> maximal_connection_targets(
    const CyclicSystem& sys);

} // namespace cbd

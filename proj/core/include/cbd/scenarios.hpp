#pragma once

#include "cbd/system_model.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace cbd {

/// Rank-4 extremal no-signaling box: three perfect correlations and one
/// perfect anticorrelation, uniform marginals. CNTX = 1.
CyclicSystem pr_box();

/// Quantum-maximal EPRB correlations (expectations form): vw_i = sqrt(2)/2
/// for i < 4 and -sqrt(2)/2 for i = 4, all singles zero.
MarginalSummary tsirelson();

/// Ideal rank-5 system with the exclusion Pr[V_i=1, W_{i+1}=1] = 0 and
/// p_i = 1/sqrt(5).
CyclicSystem kcbs_quantum();

/// The three magic boxes: pairwise perfect anticorrelation chains with
/// uniform singleton marginals, identity connections.
GenericSystem specker();

/// vw_i = 1 with uniform marginals at any rank.
CyclicSystem all_correlated(int n);

/// Each pair pmf drawn from a symmetric Dirichlet over 4 outcomes
/// (concentration 1); valid by construction, deterministic given the seed.
CyclicSystem random_cyclic(int n, std::uint64_t seed);

enum class Scenario {
  PrBox,
  Tsirelson,
  KcbsQuantum,
  Specker,
  AllCorrelated,
  Random,
};

std::optional<Scenario> scenario_from_name(const std::string& name);

} // namespace cbd

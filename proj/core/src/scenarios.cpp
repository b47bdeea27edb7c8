#include "cbd/scenarios.hpp"

#include "cbd/errors.hpp"
#include "cbd/rng.hpp"

#include <cmath>
#include <cstddef>

namespace cbd {

CyclicSystem pr_box() {
  CyclicSystem sys;
  const PairDistribution correlated{0.5, 0.0, 0.0, 0.5};
  const PairDistribution anticorrelated{0.0, 0.5, 0.5, 0.0};
  sys.pairs = {correlated, correlated, correlated, anticorrelated};
  return sys;
}

MarginalSummary tsirelson() {
  const double s = std::sqrt(2.0) / 2.0;
  MarginalSummary summary;
  summary.v = {0.0, 0.0, 0.0, 0.0};
  summary.w = {0.0, 0.0, 0.0, 0.0};
  summary.vw = {s, s, s, -s};
  return summary;
}

CyclicSystem kcbs_quantum() {
  const double p = 1.0 / std::sqrt(5.0);
  CyclicSystem sys;
  sys.pairs.assign(5, PairDistribution{0.0, p, p, 1.0 - 2.0 * p});
  return sys;
}

GenericSystem specker() {
  GenericSystem sys;
  // Pr[A = -B] = 1, Pr[-B = C] = 1, Pr[C = -A] = 1, uniform marginals.
  sys.bunches = {
      {{"A_X", "B_X"}, {0.0, 0.5, 0.5, 0.0}},
      {{"B_Y", "C_Y"}, {0.0, 0.5, 0.5, 0.0}},
      {{"A_Z", "C_Z"}, {0.0, 0.5, 0.5, 0.0}},
  };
  sys.connections = {{"A_X", "A_Z"}, {"B_X", "B_Y"}, {"C_Y", "C_Z"}};
  return sys;
}

CyclicSystem all_correlated(int n) {
  if (n < 3) {
    throw OutOfRange("all-correlated scenario needs n >= 3");
  }
  CyclicSystem sys;
  sys.pairs.assign(static_cast<std::size_t>(n),
                   PairDistribution{0.5, 0.0, 0.0, 0.5});
  return sys;
}

CyclicSystem random_cyclic(int n, std::uint64_t seed) {
  if (n < 3) {
    throw OutOfRange("random scenario needs n >= 3");
  }
  Rng rng(seed);
  CyclicSystem sys;
  sys.pairs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto d = rng.dirichlet4();
    sys.pairs.push_back(PairDistribution{d[0], d[1], d[2], d[3]});
  }
  return sys;
}

std::optional<Scenario> scenario_from_name(const std::string& name) {
  if (name == "pr-box") {
    return Scenario::PrBox;
  }
  if (name == "tsirelson") {
    return Scenario::Tsirelson;
  }
  if (name == "kcbs-quantum") {
    return Scenario::KcbsQuantum;
  }
  if (name == "specker") {
    return Scenario::Specker;
  }
  if (name == "all-correlated") {
    return Scenario::AllCorrelated;
  }
  if (name == "random") {
    return Scenario::Random;
  }
  return std::nullopt;
}

} // namespace cbd

#pragma once

#include <array>
#include <string>
#include <vector>

namespace cbd {

/// Joint pmf of one binary (+1/-1) measurement pair. Field order:
/// (+1,+1), (+1,-1), (-1,+1), (-1,-1).
struct PairDistribution {
  double pp = 0.0;
  double pm = 0.0;
  double mp = 0.0;
  double mm = 0.0;

  /// Clamps entries in [-1e-12, 0) to 0; everything else is kept verbatim
  /// for validation to report.
  static PairDistribution from_probabilities(double pp, double pm, double mp,
                                             double mm);

  /// Reconstructs the pmf from (v, w, vw) via r_ab = (1 + a v + b w + ab vw)/4.
  /// Throws InfeasibleExpectations if any entry falls below -1e-9; entries in
  /// [-1e-9, 0) are clamped and the pmf renormalized.
  static PairDistribution from_expectations(double v, double w, double vw);

  double v() const { return pp + pm - mp - mm; }  // <first>
  double w() const { return pp - pm + mp - mm; }  // <second>
  double vw() const { return pp - pm - mp + mm; } // <product>
  double total() const { return pp + pm + mp + mm; }
};

/// Rank-n cyclic system: pair k (0-based) is the distribution of
/// (V_k, W_{k+1 mod n}). All analysis code assumes this successor pairing;
/// other circular pairings are canonicalized at ingestion.
struct CyclicSystem {
  std::vector<PairDistribution> pairs;

  int rank() const { return static_cast<int>(pairs.size()); }
};

/// One context: jointly recorded named binary variables with a dense pmf
/// over all 2^k outcome tuples. Outcome index: first variable is the most
/// significant position, bit 0 = +1, bit 1 = -1.
struct Bunch {
  std::vector<std::string> vars;
  std::vector<double> pmf;
};

/// Specker-style system: arbitrary bunches plus a disjoint set of
/// two-element connections across distinct bunches.
struct GenericSystem {
  std::vector<Bunch> bunches;
  std::vector<std::array<std::string, 2>> connections;
};

/// Expectation parameterization of a cyclic system: v[i] = <V_i>,
/// w[i] = <W_i> (read from the unique pair containing W_i, i.e. pair i-1),
/// vw[i] = <V_i W_{i+1 mod n}>.
struct MarginalSummary {
  std::vector<double> v;
  std::vector<double> w;
  std::vector<double> vw;

  int rank() const { return static_cast<int>(v.size()); }
};

struct Violation {
  std::string location;
  std::string message;
  double magnitude = 0.0;
};

/// Returns every invariant violation with location and magnitude;
/// empty result means the system is valid. Never mutates the input.
std::vector<Violation> validate(const CyclicSystem& sys);
std::vector<Violation> validate(const GenericSystem& sys);
std::vector<Violation> validate(const PairDistribution& pair,
                                const std::string& location);

/// Reads the expectation parameterization off a cyclic system.
MarginalSummary marginal_summary(const CyclicSystem& sys);

/// Inverts marginal_summary. Throws InfeasibleExpectations when some triple
/// is not realizable, ValidationError when lengths disagree or n < 3.
CyclicSystem from_expectations(const MarginalSummary& summary);

/// One observed pair together with its variable indices: couples (V_i, W_j).
/// Indices are 1-based to match the file format.
struct IndexedPair {
  int i = 0;
  int j = 0;
  PairDistribution dist;
};

struct RelabelResult {
  CyclicSystem system;
  /// new_to_old[k] = original variable index (1-based) renamed to k+1.
  std::vector<int> new_to_old;
};

/// Renames variables so an arbitrary single-cycle pairing pi becomes the
/// successor map. pi[k] = pi(k+1), 1-based values. Throws NotCircular when
/// pi has more than one cycle, ValidationError when pi is not a permutation
/// or the (i, j) index pairs do not match pi.
RelabelResult relabel_permutation(const std::vector<IndexedPair>& pairs,
                                  const std::vector<int>& pi);

} // namespace cbd

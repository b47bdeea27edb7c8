#include "cbd/system_model.hpp"

#include "cbd/errors.hpp"
#include "cbd/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace cbd {

namespace {

double clamp_tiny_negative(double x, double bound) {
  return (x < 0.0 && x >= -bound) ? 0.0 : x;
}

void check_probability_entries(const double* entries, std::size_t count,
                               const std::string& location,
                               std::vector<Violation>& out) {
  double sum = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = entries[k];
    sum += x;
    if (x < -tol::kNegativeClamp) {
      out.push_back({location, "probability out of range (negative entry " +
                                   std::to_string(k) + ")",
                     -x});
    } else if (x > 1.0 + tol::kProbabilitySum) {
      out.push_back({location, "probability out of range (entry " +
                                   std::to_string(k) + " above 1)",
                     x - 1.0});
    }
  }
  if (std::abs(sum - 1.0) > tol::kProbabilitySum) {
    out.push_back({location, "pmf does not sum to 1", std::abs(sum - 1.0)});
  }
}

} // namespace

PairDistribution PairDistribution::from_probabilities(double pp, double pm,
                                                      double mp, double mm) {
  PairDistribution d;
  d.pp = clamp_tiny_negative(pp, tol::kNegativeClamp);
  d.pm = clamp_tiny_negative(pm, tol::kNegativeClamp);
  d.mp = clamp_tiny_negative(mp, tol::kNegativeClamp);
  d.mm = clamp_tiny_negative(mm, tol::kNegativeClamp);
  return d;
}

PairDistribution PairDistribution::from_expectations(double v, double w,
                                                     double vw) {
  PairDistribution d;
  d.pp = (1.0 + v + w + vw) / 4.0;
  d.pm = (1.0 + v - w - vw) / 4.0;
  d.mp = (1.0 - v + w - vw) / 4.0;
  d.mm = (1.0 - v - w + vw) / 4.0;
  bool clamped = false;
  for (double* entry : {&d.pp, &d.pm, &d.mp, &d.mm}) {
    if (*entry < -tol::kExpectationFeasibility) {
      std::ostringstream msg;
      msg << "expectations (v=" << v << ", w=" << w << ", vw=" << vw
          << ") are not realizable: reconstructed entry " << *entry;
      throw InfeasibleExpectations(msg.str());
    }
    if (*entry < 0.0) {
      *entry = 0.0;
      clamped = true;
    }
  }
  if (clamped) {
    const double total = d.total();
    d.pp /= total;
    d.pm /= total;
    d.mp /= total;
    d.mm /= total;
  }
  return d;
}

std::vector<Violation> validate(const PairDistribution& pair,
                                const std::string& location) {
  std::vector<Violation> out;
  const double entries[4] = {pair.pp, pair.pm, pair.mp, pair.mm};
  check_probability_entries(entries, 4, location, out);
  for (const auto& [name, value] :
       {std::pair<const char*, double>{"<V>", pair.v()},
        {"<W>", pair.w()},
        {"<VW>", pair.vw()}}) {
    if (std::abs(value) > 1.0 + tol::kProbabilitySum) {
      out.push_back({location, std::string("derived expectation ") + name +
                                   " outside [-1, 1]",
                     std::abs(value) - 1.0});
    }
  }
  return out;
}

std::vector<Violation> validate(const CyclicSystem& sys) {
  std::vector<Violation> out;
  if (sys.rank() < 3) {
    out.push_back({"system", "cyclic rank below 3",
                   static_cast<double>(3 - sys.rank())});
  }
  for (int i = 0; i < sys.rank(); ++i) {
    auto pair_violations =
        validate(sys.pairs[static_cast<std::size_t>(i)],
                 "pair " + std::to_string(i + 1));
    out.insert(out.end(), pair_violations.begin(), pair_violations.end());
  }
  return out;
}

std::vector<Violation> validate(const GenericSystem& sys) {
  std::vector<Violation> out;
  std::unordered_map<std::string, int> owner; // variable -> bunch index
  for (std::size_t b = 0; b < sys.bunches.size(); ++b) {
    const Bunch& bunch = sys.bunches[b];
    const std::string location = "bunch " + std::to_string(b + 1);
    if (bunch.vars.empty()) {
      out.push_back({location, "bunch has no variables", 0.0});
      continue;
    }
    if (bunch.vars.size() > 16) {
      out.push_back({location, "bunch exceeds 16 variables (dense pmf bound)",
                     static_cast<double>(bunch.vars.size() - 16)});
      continue;
    }
    const std::size_t expected = std::size_t{1} << bunch.vars.size();
    if (bunch.pmf.size() != expected) {
      out.push_back({location,
                     "pmf size " + std::to_string(bunch.pmf.size()) +
                         " does not match 2^" +
                         std::to_string(bunch.vars.size()),
                     static_cast<double>(bunch.pmf.size()) -
                         static_cast<double>(expected)});
      continue;
    }
    check_probability_entries(bunch.pmf.data(), bunch.pmf.size(), location,
                              out);
    for (const std::string& name : bunch.vars) {
      auto [it, inserted] = owner.emplace(name, static_cast<int>(b));
      if (!inserted) {
        out.push_back({location, "variable name '" + name +
                                     "' already used in bunch " +
                                     std::to_string(it->second + 1),
                       0.0});
      }
    }
  }
  std::unordered_set<std::string> connected;
  for (std::size_t c = 0; c < sys.connections.size(); ++c) {
    const auto& conn = sys.connections[c];
    const std::string location = "connection " + std::to_string(c + 1);
    int bunches[2] = {-1, -1};
    for (int side = 0; side < 2; ++side) {
      auto it = owner.find(conn[static_cast<std::size_t>(side)]);
      if (it == owner.end()) {
        out.push_back({location, "unknown variable '" +
                                     conn[static_cast<std::size_t>(side)] +
                                     "'",
                       0.0});
      } else {
        bunches[side] = it->second;
      }
    }
    if (bunches[0] >= 0 && bunches[0] == bunches[1]) {
      out.push_back({location, "connection within single bunch", 0.0});
    }
    for (const std::string& name : conn) {
      if (!connected.insert(name).second) {
        out.push_back({location, "variable '" + name +
                                     "' appears in more than one connection",
                       0.0});
      }
    }
  }
  return out;
}

MarginalSummary marginal_summary(const CyclicSystem& sys) {
  const int n = sys.rank();
  MarginalSummary s;
  s.v.resize(static_cast<std::size_t>(n));
  s.w.resize(static_cast<std::size_t>(n));
  s.vw.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    s.v[k] = sys.pairs[k].v();
    // W_i occurs as the second coordinate of pair i-1.
    s.w[k] = sys.pairs[static_cast<std::size_t>((i + n - 1) % n)].w();
    s.vw[k] = sys.pairs[k].vw();
  }
  return s;
}

CyclicSystem from_expectations(const MarginalSummary& summary) {
  const std::size_t n = summary.v.size();
  if (n < 3) {
    throw ValidationError("expectation summary needs n >= 3, got " +
                          std::to_string(n));
  }
  if (summary.w.size() != n || summary.vw.size() != n) {
    throw ValidationError("expectation sequences have mismatched lengths");
  }
  CyclicSystem sys;
  sys.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      sys.pairs.push_back(PairDistribution::from_expectations(
          summary.v[i], summary.w[(i + 1) % n], summary.vw[i]));
    } catch (const InfeasibleExpectations& e) {
      throw InfeasibleExpectations("pair " + std::to_string(i + 1) + ": " +
                                   e.what());
    }
  }
  return sys;
}

RelabelResult relabel_permutation(const std::vector<IndexedPair>& pairs,
                                  const std::vector<int>& pi) {
  const int n = static_cast<int>(pi.size());
  if (n < 3) {
    throw ValidationError("permutation needs n >= 3, got " +
                          std::to_string(n));
  }
  if (static_cast<int>(pairs.size()) != n) {
    throw ValidationError("expected " + std::to_string(n) + " pairs, got " +
                          std::to_string(pairs.size()));
  }
  std::vector<bool> hit(static_cast<std::size_t>(n), false);
  for (int image : pi) {
    if (image < 1 || image > n || hit[static_cast<std::size_t>(image - 1)]) {
      throw ValidationError("pi is not a permutation of 1.." +
                            std::to_string(n));
    }
    hit[static_cast<std::size_t>(image - 1)] = true;
  }
  std::unordered_map<int, const IndexedPair*> by_first;
  for (const IndexedPair& p : pairs) {
    if (p.i < 1 || p.i > n || !by_first.emplace(p.i, &p).second) {
      throw ValidationError("pair indices must cover 1.." + std::to_string(n) +
                            " exactly once");
    }
    if (p.j != pi[static_cast<std::size_t>(p.i - 1)]) {
      throw ValidationError("pair (" + std::to_string(p.i) + ", " +
                            std::to_string(p.j) +
                            ") does not match pi(" + std::to_string(p.i) +
                            ") = " +
                            std::to_string(pi[static_cast<std::size_t>(
                                p.i - 1)]));
    }
  }
  // Walk the cycle starting at 1; a single cycle visits every index.
  RelabelResult result;
  result.new_to_old.reserve(static_cast<std::size_t>(n));
  result.system.pairs.reserve(static_cast<std::size_t>(n));
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  int current = 1;
  for (int step = 0; step < n; ++step) {
    if (visited[static_cast<std::size_t>(current - 1)]) {
      throw NotCircular("pi decomposes into more than one cycle");
    }
    visited[static_cast<std::size_t>(current - 1)] = true;
    result.new_to_old.push_back(current);
    result.system.pairs.push_back(by_first.at(current)->dist);
    current = pi[static_cast<std::size_t>(current - 1)];
  }
  if (current != 1) {
    throw NotCircular("pi decomposes into more than one cycle");
  }
  return result;
}

} // namespace cbd

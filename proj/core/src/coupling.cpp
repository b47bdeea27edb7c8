#include "cbd/coupling.hpp"

#include "cbd/errors.hpp"
#include "cbd/tolerances.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <unordered_map>

namespace cbd {

namespace {

constexpr int kMaxVariables = 24;

void check_variable_budget(int num_vars) {
  if (num_vars > kMaxVariables) {
    throw TooManyVariables("coupling program needs " +
                           std::to_string(num_vars) +
                           " variables; the dense atom bound is " +
                           std::to_string(kMaxVariables));
  }
}

std::array<double, 4> normalized_entries(const PairDistribution& d) {
  const double total = d.total();
  if (total <= 0.0) {
    throw ValidationError("pair pmf has nonpositive total mass");
  }
  return {d.pp / total, d.pm / total, d.mp / total, d.mm / total};
}

// Appends four rows pinning the 2-marginal of (var_a, var_b) to `target`.
// Row order within the block: (+,+), (+,-), (-,+), (-,-).
void append_pair_marginal_rows(LpProblem& lp, int num_vars, int var_a,
                               int var_b, const std::array<double, 4>& target,
                               int& next_row) {
  const std::size_t atoms = std::size_t{1} << num_vars;
  for (std::uint32_t atom = 0; atom < atoms; ++atom) {
    const int a = atom_outcome_bit(atom, var_a, num_vars);
    const int b = atom_outcome_bit(atom, var_b, num_vars);
    lp.at(next_row + 2 * a + b, static_cast<int>(atom)) = 1.0;
  }
  for (int k = 0; k < 4; ++k) {
    lp.b[static_cast<std::size_t>(next_row + k)] =
        target[static_cast<std::size_t>(k)];
  }
  next_row += 4;
}

} // namespace

PairDistribution maximal_coupling(double p, double q) {
  constexpr double slack = tol::kNegativeClamp;
  if (p < -slack || p > 1.0 + slack || q < -slack || q > 1.0 + slack) {
    throw OutOfRange("maximal_coupling marginals must lie in [0, 1], got p=" +
                     std::to_string(p) + ", q=" + std::to_string(q));
  }
  p = std::min(std::max(p, 0.0), 1.0);
  q = std::min(std::max(q, 0.0), 1.0);
  PairDistribution d;
  if (p >= q) {
    d.pp = q;
    d.pm = p - q;
    d.mp = 0.0;
    d.mm = 1.0 - p;
  } else {
    d.pp = p;
    d.pm = 0.0;
    d.mp = q - p;
    d.mm = 1.0 - q;
  }
  return d;
}

std::vector<PairDistribution> maximal_connection_targets(
    const CyclicSystem& sys) {
  const MarginalSummary s = marginal_summary(sys);
  std::vector<PairDistribution> targets;
  targets.reserve(static_cast<std::size_t>(sys.rank()));
  for (int i = 0; i < sys.rank(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    targets.push_back(
        maximal_coupling((1.0 + s.v[k]) / 2.0, (1.0 + s.w[k]) / 2.0));
  }
  return targets;
}

CouplingProgram build_cyclic_program(const CyclicSystem& sys,
                                     const CyclicMode& mode) {
  const int n = sys.rank();
  if (n < 3) {
    throw ValidationError("cyclic coupling program needs n >= 3");
  }
  const int num_vars = 2 * n;
  check_variable_budget(num_vars);
  const std::size_t atoms = std::size_t{1} << num_vars;

  const FixConnections* fixed = std::get_if<FixConnections>(&mode);
  std::vector<PairDistribution> targets;
  if (fixed != nullptr) {
    targets = fixed->targets.empty() ? maximal_connection_targets(sys)
                                     : fixed->targets;
    if (static_cast<int>(targets.size()) != n) {
      throw DimensionMismatch("expected " + std::to_string(n) +
                              " connection targets, got " +
                              std::to_string(targets.size()));
    }
  }

  CouplingProgram prog;
  prog.num_vars = num_vars;
  prog.var_names.reserve(static_cast<std::size_t>(num_vars));
  for (int i = 1; i <= n; ++i) {
    prog.var_names.push_back("V" + std::to_string(i));
  }
  for (int i = 1; i <= n; ++i) {
    prog.var_names.push_back("W" + std::to_string(i));
  }

  LpProblem& lp = prog.problem;
  lp.cols = static_cast<int>(atoms);
  lp.rows = 4 * n + (fixed != nullptr ? 4 * n : 0) + 1;
  lp.a.assign(static_cast<std::size_t>(lp.rows) * atoms, 0.0);
  lp.b.assign(static_cast<std::size_t>(lp.rows), 0.0);
  lp.c.assign(atoms, 0.0);

  int next_row = 0;
  for (int i = 0; i < n; ++i) {
    // Bunch i records (V_i, W_{i+1 mod n}).
    append_pair_marginal_rows(
        lp, num_vars, /*var_a=*/i, /*var_b=*/n + (i + 1) % n,
        normalized_entries(sys.pairs[static_cast<std::size_t>(i)]), next_row);
  }
  if (fixed != nullptr) {
    for (int i = 0; i < n; ++i) {
      append_pair_marginal_rows(
          lp, num_vars, /*var_a=*/i, /*var_b=*/n + i,
          normalized_entries(targets[static_cast<std::size_t>(i)]), next_row);
    }
  }
  // Normalization row; redundant with the bunch equations but improves
  // phase-1 conditioning.
  for (std::uint32_t atom = 0; atom < atoms; ++atom) {
    lp.at(next_row, static_cast<int>(atom)) = 1.0;
  }
  lp.b[static_cast<std::size_t>(next_row)] = 1.0;

  if (std::holds_alternative<MinimizeMismatch>(mode)) {
    for (std::uint32_t atom = 0; atom < atoms; ++atom) {
      int mismatches = 0;
      for (int i = 0; i < n; ++i) {
        if (atom_outcome_bit(atom, i, num_vars) !=
            atom_outcome_bit(atom, n + i, num_vars)) {
          ++mismatches;
        }
      }
      lp.c[atom] = static_cast<double>(mismatches);
    }
  }
  return prog;
}

CouplingProgram build_generic_program(const GenericSystem& sys,
                                      const GenericMode& mode) {
  int num_vars = 0;
  std::unordered_map<std::string, int> index_of;
  CouplingProgram prog;
  for (const Bunch& bunch : sys.bunches) {
    for (const std::string& name : bunch.vars) {
      if (!index_of.emplace(name, num_vars).second) {
        throw ValidationError("duplicate variable name '" + name + "'");
      }
      prog.var_names.push_back(name);
      ++num_vars;
    }
  }
  check_variable_budget(num_vars);
  prog.num_vars = num_vars;
  const std::size_t atoms = std::size_t{1} << num_vars;

  for (const auto& conn : sys.connections) {
    for (const std::string& name : conn) {
      if (!index_of.contains(name)) {
        throw ValidationError("connection references unknown variable '" +
                              name + "'");
      }
    }
  }

  int rows = 0;
  for (const Bunch& bunch : sys.bunches) {
    rows += static_cast<int>(std::size_t{1} << bunch.vars.size());
  }
  const bool maximal = std::holds_alternative<MaximalConnections>(mode);
  if (maximal) {
    rows += 4 * static_cast<int>(sys.connections.size());
  }

  LpProblem& lp = prog.problem;
  lp.cols = static_cast<int>(atoms);
  lp.rows = rows;
  lp.a.assign(static_cast<std::size_t>(rows) * atoms, 0.0);
  lp.b.assign(static_cast<std::size_t>(rows), 0.0);
  lp.c.assign(atoms, 0.0);

  int next_row = 0;
  for (const Bunch& bunch : sys.bunches) {
    const int k = static_cast<int>(bunch.vars.size());
    const std::size_t outcomes = std::size_t{1} << k;
    double total = 0.0;
    for (double x : bunch.pmf) {
      total += x;
    }
    if (total <= 0.0) {
      throw ValidationError("bunch pmf has nonpositive total mass");
    }
    std::vector<int> var_index(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
      var_index[static_cast<std::size_t>(t)] =
          index_of.at(bunch.vars[static_cast<std::size_t>(t)]);
    }
    for (std::uint32_t atom = 0; atom < atoms; ++atom) {
      std::uint32_t outcome = 0;
      for (int t = 0; t < k; ++t) {
        outcome = (outcome << 1) |
                  static_cast<std::uint32_t>(atom_outcome_bit(
                      atom, var_index[static_cast<std::size_t>(t)], num_vars));
      }
      lp.at(next_row + static_cast<int>(outcome), static_cast<int>(atom)) =
          1.0;
    }
    for (std::size_t o = 0; o < outcomes; ++o) {
      lp.b[static_cast<std::size_t>(next_row) + o] = bunch.pmf[o] / total;
    }
    next_row += static_cast<int>(outcomes);
  }

  // Pr[x = +1] for a variable, read from its bunch pmf.
  auto plus_probability = [&](const std::string& name) {
    for (const Bunch& bunch : sys.bunches) {
      for (std::size_t t = 0; t < bunch.vars.size(); ++t) {
        if (bunch.vars[t] != name) {
          continue;
        }
        const int k = static_cast<int>(bunch.vars.size());
        double total = 0.0;
        double plus = 0.0;
        for (std::size_t o = 0; o < bunch.pmf.size(); ++o) {
          total += bunch.pmf[o];
          if (((o >> (k - 1 - static_cast<int>(t))) & 1u) == 0u) {
            plus += bunch.pmf[o];
          }
        }
        return plus / total;
      }
    }
    throw ValidationError("connection references unknown variable '" + name +
                          "'");
  };

  if (maximal) {
    for (const auto& conn : sys.connections) {
      const PairDistribution target = maximal_coupling(
          plus_probability(conn[0]), plus_probability(conn[1]));
      append_pair_marginal_rows(lp, num_vars, index_of.at(conn[0]),
                                index_of.at(conn[1]),
                                {target.pp, target.pm, target.mp, target.mm},
                                next_row);
    }
  } else if (std::holds_alternative<MinimizeMismatch>(mode)) {
    for (std::uint32_t atom = 0; atom < atoms; ++atom) {
      int mismatches = 0;
      for (const auto& conn : sys.connections) {
        if (atom_outcome_bit(atom, index_of.at(conn[0]), num_vars) !=
            atom_outcome_bit(atom, index_of.at(conn[1]), num_vars)) {
          ++mismatches;
        }
      }
      lp.c[atom] = static_cast<double>(mismatches);
    }
  }
  return prog;
}

} // namespace cbd

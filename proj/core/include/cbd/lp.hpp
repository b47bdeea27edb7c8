#pragma once

#include <cstddef>
#include <vector>

namespace cbd {

/// Standard-form linear program: minimize c.x subject to A x = b, x >= 0.
/// Dense row-major coefficient matrix.
struct LpProblem {
  int rows = 0;
  int cols = 0;
  std::vector<double> a; // rows x cols, row-major
  std::vector<double> b; // rows
  std::vector<double> c; // cols

  double& at(int r, int col) {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
             static_cast<std::size_t>(col)];
  }
  double at(int r, int col) const {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
             static_cast<std::size_t>(col)];
  }
};

enum class LpStatus { Optimal, Infeasible };

/// Solver output with a verifiable certificate: the primal vector when
/// optimal, a Farkas dual ray (ray.A <= 0 componentwise, ray.b > 0) when
/// infeasible. `objective` holds the phase-1 infeasibility measure in the
/// infeasible case.
struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;   // cols entries (Optimal)
  std::vector<double> ray; // rows entries (Infeasible)
  int pivots = 0;
  bool bland_engaged = false;
};

/// Two-phase dense tableau simplex. Dantzig pricing with Bland's rule
/// engaged after 5*(rows+cols) pivots; pivot tolerance 1e-10. Throws
/// NumericalBreakdown when no pivot above tolerance exists for a column
/// with negative reduced cost (callers may retry with a perturbed b), and
/// UnboundedObjective on a genuine phase-2 ray.
LpSolution solve(const LpProblem& problem);

/// Re-checks the certificate in fresh arithmetic, independent of solver
/// internals: residuals, nonnegativity and objective for Optimal; the ray
/// inequalities for Infeasible.
bool verify_certificate(const LpProblem& problem, const LpSolution& solution);

} // namespace cbd

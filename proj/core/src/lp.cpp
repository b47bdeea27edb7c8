#include "cbd/lp.hpp"

#include "cbd/errors.hpp"
#include "cbd/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace cbd {

namespace {

constexpr double kPivotTol = tol::kLpPivot;       // 1e-10
constexpr double kFeasTol = tol::kLpFeasibility;  // 1e-8
constexpr double kRcTolPhase1 = 1e-10; // matches the certificate bound y.A <= 1e-10
constexpr double kRcTolPhase2 = 1e-9;

// Dense tableau over [original columns | artificial columns | rhs].
// The objective row carries reduced costs and is pivoted like any row.
class Tableau {
public:
  explicit Tableau(const LpProblem& p)
      : m_(p.rows), n_(p.cols), width_(p.cols + p.rows + 1),
        t_(static_cast<std::size_t>(p.rows) *
               static_cast<std::size_t>(width_),
           0.0),
        obj_(static_cast<std::size_t>(width_), 0.0), basis_(p.rows, 0),
        active_(p.rows, true), row_sign_(p.rows, 1) {
    for (int r = 0; r < m_; ++r) {
      const double sign = p.b[static_cast<std::size_t>(r)] < 0.0 ? -1.0 : 1.0;
      row_sign_[static_cast<std::size_t>(r)] = sign;
      for (int j = 0; j < n_; ++j) {
        cell(r, j) = sign * p.at(r, j);
      }
      cell(r, n_ + r) = 1.0;
      rhs(r) = sign * p.b[static_cast<std::size_t>(r)];
      basis_[static_cast<std::size_t>(r)] = n_ + r;
    }
  }

  double& cell(int r, int j) {
    return t_[static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
              static_cast<std::size_t>(j)];
  }
  double cell(int r, int j) const {
    return t_[static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
              static_cast<std::size_t>(j)];
  }
  double& rhs(int r) { return cell(r, width_ - 1); }
  double rhs(int r) const { return cell(r, width_ - 1); }

  int rows() const { return m_; }
  int original_cols() const { return n_; }
  int basis(int r) const { return basis_[static_cast<std::size_t>(r)]; }
  bool active(int r) const { return active_[static_cast<std::size_t>(r)]; }
  void deactivate(int r) { active_[static_cast<std::size_t>(r)] = false; }
  double row_sign(int r) const {
    return row_sign_[static_cast<std::size_t>(r)];
  }
  double reduced_cost(int j) const {
    return obj_[static_cast<std::size_t>(j)];
  }

  void load_phase1_objective() {
    // Artificial basis: reduced cost of original column j is -sum of its
    // entries; objective value is sum of b.
    std::fill(obj_.begin(), obj_.end(), 0.0);
    double value = 0.0;
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < n_; ++j) {
        obj_[static_cast<std::size_t>(j)] -= cell(r, j);
      }
      value += rhs(r);
    }
    obj_[static_cast<std::size_t>(width_ - 1)] = -value;
  }

  void load_phase2_objective(const std::vector<double>& c) {
    std::fill(obj_.begin(), obj_.end(), 0.0);
    for (int j = 0; j < n_; ++j) {
      obj_[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
    }
    double value = 0.0;
    for (int r = 0; r < m_; ++r) {
      if (!active(r)) {
        continue;
      }
      const int bj = basis(r);
      const double cost = bj < n_ ? c[static_cast<std::size_t>(bj)] : 0.0;
      if (cost == 0.0) {
        continue;
      }
      for (int j = 0; j < width_; ++j) {
        obj_[static_cast<std::size_t>(j)] -= cost * cell(r, j);
      }
      value += cost * rhs(r);
    }
    // Basic columns must price to exactly zero.
    for (int r = 0; r < m_; ++r) {
      if (active(r)) {
        obj_[static_cast<std::size_t>(basis(r))] = 0.0;
      }
    }
    obj_[static_cast<std::size_t>(width_ - 1)] = -value;
  }

  double objective_value() const {
    return -obj_[static_cast<std::size_t>(width_ - 1)];
  }

  void pivot(int pr, int pc) {
    const double pivot_value = cell(pr, pc);
    const double inv = 1.0 / pivot_value;
    for (int j = 0; j < width_; ++j) {
      cell(pr, j) *= inv;
    }
    cell(pr, pc) = 1.0; // exact
    for (int r = 0; r < m_; ++r) {
      if (r == pr || !active(r)) {
        continue;
      }
      const double factor = cell(r, pc);
      if (factor == 0.0) {
        continue;
      }
      for (int j = 0; j < width_; ++j) {
        cell(r, j) -= factor * cell(pr, j);
      }
      cell(r, pc) = 0.0; // exact
    }
    const double ofactor = obj_[static_cast<std::size_t>(pc)];
    if (ofactor != 0.0) {
      for (int j = 0; j < width_; ++j) {
        obj_[static_cast<std::size_t>(j)] -= ofactor * cell(pr, j);
      }
      obj_[static_cast<std::size_t>(pc)] = 0.0;
    }
    basis_[static_cast<std::size_t>(pr)] = pc;
  }

private:
  int m_;
  int n_;
  int width_;
  std::vector<double> t_;
  std::vector<double> obj_;
  std::vector<int> basis_;
  std::vector<bool> active_;
  std::vector<double> row_sign_;
};

struct PivotState {
  int count = 0;
  int bland_threshold = 0;
  int hard_cap = 0;
  bool bland = false;
};

// Returns false when the current phase is optimal (no improving column).
bool run_phase(Tableau& tab, PivotState& state, double rc_tol, bool phase1) {
  const int n = tab.original_cols();
  while (true) {
    if (state.count >= state.bland_threshold) {
      state.bland = true;
    }
    // Entering column: only original columns ever enter (artificials leave
    // and stay out).
    int pc = -1;
    double best = -rc_tol;
    for (int j = 0; j < n; ++j) {
      const double rc = tab.reduced_cost(j);
      if (rc < best) {
        pc = j;
        if (state.bland) {
          break; // lowest index with negative reduced cost
        }
        best = rc;
      }
    }
    if (pc < 0) {
      return false; // phase optimal
    }
    // Ratio test over active rows with a usable pivot entry.
    int pr = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    double max_entry = 0.0;
    for (int r = 0; r < tab.rows(); ++r) {
      if (!tab.active(r)) {
        continue;
      }
      const double entry = tab.cell(r, pc);
      max_entry = std::max(max_entry, entry);
      if (entry <= kPivotTol) {
        continue;
      }
      const double ratio = tab.rhs(r) / entry;
      bool better = ratio < best_ratio - 1e-15;
      if (!better && ratio < best_ratio + 1e-15 && pr >= 0) {
        if (state.bland) {
          better = tab.basis(r) < tab.basis(pr);
        } else {
          // Prefer driving artificials out, then lowest basis index.
          const bool r_art = tab.basis(r) >= n;
          const bool pr_art = tab.basis(pr) >= n;
          better = (r_art && !pr_art) ||
                   (r_art == pr_art && tab.basis(r) < tab.basis(pr));
        }
      }
      if (pr < 0 || better) {
        pr = r;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (pr < 0) {
      if (max_entry > 0.0 || phase1) {
        throw NumericalBreakdown(
            "no pivot above tolerance in column " + std::to_string(pc) +
            " with reduced cost " + std::to_string(tab.reduced_cost(pc)));
      }
      throw UnboundedObjective("objective unbounded along column " +
                               std::to_string(pc));
    }
    tab.pivot(pr, pc);
    if (++state.count > state.hard_cap) {
      throw NumericalBreakdown("pivot limit exceeded (" +
                               std::to_string(state.hard_cap) + ")");
    }
  }
}

} // namespace

LpSolution solve(const LpProblem& problem) {
  if (problem.rows <= 0 || problem.cols <= 0) {
    throw ValidationError("LP needs at least one row and one column");
  }
  if (problem.a.size() != static_cast<std::size_t>(problem.rows) *
                              static_cast<std::size_t>(problem.cols) ||
      problem.b.size() != static_cast<std::size_t>(problem.rows) ||
      problem.c.size() != static_cast<std::size_t>(problem.cols)) {
    throw DimensionMismatch("LP array sizes disagree with rows/cols");
  }
  for (double x : problem.a) {
    if (!std::isfinite(x)) {
      throw ValidationError("LP coefficient matrix has non-finite entries");
    }
  }

  Tableau tab(problem);
  PivotState state;
  state.bland_threshold = 5 * (problem.rows + problem.cols);
  state.hard_cap = state.bland_threshold + 200 * problem.rows + 100000;

  tab.load_phase1_objective();
  run_phase(tab, state, kRcTolPhase1, /*phase1=*/true);

  const int n = problem.cols;
  LpSolution sol;
  sol.pivots = state.count;
  sol.bland_engaged = state.bland;

  const double phase1_value = tab.objective_value();
  if (phase1_value > kFeasTol) {
    // Farkas ray from the phase-1 duals: the reduced cost of artificial k
    // is 1 - y_k, mapped back through the row scaling.
    sol.status = LpStatus::Infeasible;
    sol.objective = phase1_value;
    sol.ray.resize(static_cast<std::size_t>(problem.rows));
    for (int r = 0; r < problem.rows; ++r) {
      const double y = 1.0 - tab.reduced_cost(n + r);
      sol.ray[static_cast<std::size_t>(r)] = tab.row_sign(r) * y;
    }
    sol.pivots = state.count;
    return sol;
  }

  // Drive leftover artificials out of the basis; on rows carrying real
  // residual mass only a positive pivot keeps atoms nonnegative.
  for (int r = 0; r < problem.rows; ++r) {
    if (!tab.active(r) || tab.basis(r) < n) {
      continue;
    }
    int pc = -1;
    for (int j = 0; j < n; ++j) {
      const double entry = tab.cell(r, j);
      if (std::abs(entry) > kPivotTol &&
          (entry > 0.0 || tab.rhs(r) <= 1e-12)) {
        pc = j;
        break;
      }
    }
    if (pc >= 0) {
      tab.pivot(r, pc);
      ++state.count;
    } else if (tab.rhs(r) <= 1e-12) {
      tab.deactivate(r); // redundant row
    }
    // else: keep the artificial basic at its (<= kFeasTol) level; the
    // residual on this row stays within the certificate tolerance.
  }

  tab.load_phase2_objective(problem.c);
  run_phase(tab, state, kRcTolPhase2, /*phase1=*/false);

  sol.status = LpStatus::Optimal;
  sol.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < problem.rows; ++r) {
    if (tab.active(r) && tab.basis(r) < n) {
      double value = tab.rhs(r);
      if (value < 0.0 && value >= -tol::kLpAtomNegative) {
        value = 0.0;
      }
      sol.x[static_cast<std::size_t>(tab.basis(r))] = value;
    }
  }
  double objective = 0.0;
  for (int j = 0; j < n; ++j) {
    objective +=
        problem.c[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
  }
  sol.objective = objective;
  sol.pivots = state.count;
  sol.bland_engaged = state.bland;
  return sol;
}

bool verify_certificate(const LpProblem& problem, const LpSolution& solution) {
  if (solution.status == LpStatus::Optimal) {
    if (solution.x.size() != static_cast<std::size_t>(problem.cols)) {
      return false;
    }
    double min_x = 0.0;
    for (double xj : solution.x) {
      min_x = std::min(min_x, xj);
    }
    if (min_x < -tol::kLpAtomNegative) {
      return false;
    }
    double max_residual = 0.0;
    for (int r = 0; r < problem.rows; ++r) {
      double lhs = 0.0;
      for (int j = 0; j < problem.cols; ++j) {
        lhs += problem.at(r, j) * solution.x[static_cast<std::size_t>(j)];
      }
      max_residual =
          std::max(max_residual,
                   std::abs(lhs - problem.b[static_cast<std::size_t>(r)]));
    }
    if (max_residual > tol::kLpFeasibility) {
      return false;
    }
    double objective = 0.0;
    for (int j = 0; j < problem.cols; ++j) {
      objective += problem.c[static_cast<std::size_t>(j)] *
                   solution.x[static_cast<std::size_t>(j)];
    }
    return std::abs(objective - solution.objective) <= tol::kLpFeasibility;
  }
  // Infeasible: y.A <= 1e-10 componentwise and y.b > 1e-8.
  if (solution.ray.size() != static_cast<std::size_t>(problem.rows)) {
    return false;
  }
  for (int j = 0; j < problem.cols; ++j) {
    double dot = 0.0;
    for (int r = 0; r < problem.rows; ++r) {
      dot += solution.ray[static_cast<std::size_t>(r)] * problem.at(r, j);
    }
    if (dot > tol::kLpPivot) {
      return false;
    }
  }
  double yb = 0.0;
  for (int r = 0; r < problem.rows; ++r) {
    yb += solution.ray[static_cast<std::size_t>(r)] *
          problem.b[static_cast<std::size_t>(r)];
  }
  return yb > tol::kLpFeasibility;
}

} // namespace cbd

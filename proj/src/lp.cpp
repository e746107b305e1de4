#include "frostgrid/lp.hpp"

#include <algorithm>
#include <cmath>

#include "frostgrid/rng.hpp"

namespace frostgrid::lp {

namespace {

// Box used for columns whose required bound is infinite. A column that ends
// the solve on this box makes the LP report Unbounded.
constexpr double kArtificialBound = 1e6;
constexpr double kDropTol = 1e-13;
constexpr double kSingularTol = 1e-9;
constexpr double kPerturbation = 1e-6;  // relative to the largest cost
constexpr std::uint64_t kPerturbationSeed = 0x5eed;

}  // namespace

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Cutoff: return "cutoff";
    case LpStatus::IterationLimit: return "iteration-limit";
    case LpStatus::TimeLimit: return "time-limit";
    case LpStatus::Numeric: return "numeric";
  }
  return "numeric";
}

DualSimplex::DualSimplex(const MilpModel& model)
    : m_(model.constraint_count()), n_(model.variable_count()), cols_(n_ + m_) {
  tab_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
  rhs_.resize(m_);
  b_.resize(m_);
  rows_.resize(m_);
  cost_.assign(cols_, 0.0);
  lo_.resize(cols_);
  hi_.resize(cols_);
  artificial_lo_.assign(cols_, 0);
  artificial_hi_.assign(cols_, 0);
  at_.assign(cols_, At::Lower);
  x_.assign(cols_, 0.0);
  basis_.resize(m_);
  row_of_.assign(cols_, -1);

  for (int j = 0; j < n_; ++j) {
    lo_[j] = model.variables()[j].lower;
    hi_[j] = model.variables()[j].upper;
    cost_[j] = model.objective()[j];
  }
  for (int r = 0; r < m_; ++r) {
    const Constraint& row = model.constraints()[r];
    for (const Term& term : row.terms) t(r, term.var) += term.coeff;
    rows_[r] = row.terms;
    const int s = n_ + r;
    t(r, s) = 1.0;
    rhs_[r] = b_[r] = row.rhs;
    switch (row.sense) {
      case Sense::LessEqual: lo_[s] = 0.0; hi_[s] = kInfinity; break;
      case Sense::GreaterEqual: lo_[s] = -kInfinity; hi_[s] = 0.0; break;
      case Sense::Equal: lo_[s] = 0.0; hi_[s] = 0.0; break;
    }
    basis_[r] = s;
    row_of_[s] = r;
    at_[s] = At::Basic;
  }
  weight_.assign(m_, 1.0);
  d_ = cost_;
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  recompute_basic_values();

  true_cost_ = cost_;
  perturbed_cost_ = cost_;
  double cmax = 0.0;
  for (int j = 0; j < n_; ++j) cmax = std::max(cmax, std::abs(cost_[j]));
  if (cmax == 0.0) cmax = 1.0;
  for (int j = 0; j < n_; ++j) {
    if (!std::isfinite(lo_[j]) || !std::isfinite(hi_[j]) || lo_[j] == hi_[j]) continue;
    // Push away from the bound the column sits at, so the start stays dual feasible.
    const double shift = cmax * kPerturbation * (1.0 + counter_uniform(kPerturbationSeed, 0, j));
    perturbed_cost_[j] += at_[j] == At::Upper ? -shift : shift;
  }
}

void DualSimplex::place_nonbasic(int j) {
  const double tol = 1e-9;
  if (artificial_lo_[j]) {
    lo_[j] = -kInfinity;
    artificial_lo_[j] = 0;
  }
  if (artificial_hi_[j]) {
    hi_[j] = kInfinity;
    artificial_hi_[j] = 0;
  }
  const bool lo_finite = std::isfinite(lo_[j]);
  const bool hi_finite = std::isfinite(hi_[j]);
  if (lo_finite && (d_[j] >= -tol || !hi_finite)) {
    if (!hi_finite && d_[j] < -tol) {
      hi_[j] = kArtificialBound;
      artificial_hi_[j] = 1;
      at_[j] = At::Upper;
      x_[j] = hi_[j];
      return;
    }
    at_[j] = At::Lower;
    x_[j] = lo_[j];
  } else if (hi_finite) {
    at_[j] = At::Upper;
    x_[j] = hi_[j];
  } else {
    // Free column.
    if (d_[j] >= 0.0) {
      lo_[j] = -kArtificialBound;
      artificial_lo_[j] = 1;
      at_[j] = At::Lower;
      x_[j] = lo_[j];
    } else {
      hi_[j] = kArtificialBound;
      artificial_hi_[j] = 1;
      at_[j] = At::Upper;
      x_[j] = hi_[j];
    }
  }
}

void DualSimplex::set_bounds(int var, double lower, double upper) {
  if (var < 0 || var >= n_ || lower > upper) throw InvalidArgument("bad LP bound update");
  lo_[var] = lower;
  hi_[var] = upper;
  artificial_lo_[var] = 0;
  artificial_hi_[var] = 0;
  if (at_[var] == At::Basic) return;
  const double old = x_[var];
  place_nonbasic(var);
  const double delta = x_[var] - old;
  if (delta != 0.0) {
    for (int r = 0; r < m_; ++r) {
      const double a = t(r, var);
      if (a != 0.0) x_[basis_[r]] -= a * delta;
    }
  }
}

void DualSimplex::recompute_basic_values() {
  std::vector<int> active;
  for (int j = 0; j < cols_; ++j) {
    if (at_[j] != At::Basic && x_[j] != 0.0) active.push_back(j);
  }
  for (int r = 0; r < m_; ++r) {
    double v = rhs_[r];
    const double* row = &tab_[static_cast<std::size_t>(r) * cols_];
    for (int j : active) v -= row[j] * x_[j];
    x_[basis_[r]] = v;
  }
}

void DualSimplex::recompute_reduced_costs() {
  d_ = cost_;
  for (int r = 0; r < m_; ++r) {
    const double cb = cost_[basis_[r]];
    if (cb == 0.0) continue;
    const double* row = &tab_[static_cast<std::size_t>(r) * cols_];
    for (int j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
  }
  for (int r = 0; r < m_; ++r) d_[basis_[r]] = 0.0;
}

// The slack block of the tableau is B^-1.
double DualSimplex::row_weight(int r) const {
  const double* row = &tab_[static_cast<std::size_t>(r) * cols_ + n_];
  double w = 0.0;
  for (int c = 0; c < m_; ++c) w += row[c] * row[c];
  return std::max(w, 1e-12);
}

void DualSimplex::pivot(int r, int q) {
  double* prow = &tab_[static_cast<std::size_t>(r) * cols_];
  const double piv = prow[q];
  scratch_nz_.clear();
  for (int c = 0; c < cols_; ++c) {
    if (prow[c] != 0.0) {
      prow[c] /= piv;
      scratch_nz_.push_back(c);
    }
  }
  prow[q] = 1.0;
  rhs_[r] /= piv;
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* row = &tab_[static_cast<std::size_t>(i) * cols_];
    const double f = row[q];
    if (f == 0.0) continue;
    for (int c : scratch_nz_) {
      double v = row[c] - f * prow[c];
      row[c] = std::abs(v) < kDropTol ? 0.0 : v;
    }
    row[q] = 0.0;
    rhs_[i] -= f * rhs_[r];
    weight_[i] = row_weight(i);
  }
  weight_[r] = row_weight(r);
  const double dq = d_[q];
  if (dq != 0.0) {
    for (int c : scratch_nz_) d_[c] -= dq * prow[c];
  }
  d_[q] = 0.0;

  const int leaving = basis_[r];
  row_of_[leaving] = -1;
  basis_[r] = q;
  row_of_[q] = r;
  at_[q] = At::Basic;
  ++pivots_since_refactor_;
}

double DualSimplex::objective_value() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) z += true_cost_[j] * x_[j];
  return z;
}

// Lower bound on the true LP optimum from the current row prices, valid
// whatever the state of the basis: c'x + sum_j d_j (best bound_j - x_j)
// with reduced costs taken against the true costs.
double DualSimplex::lagrangian_bound() const {
  double bound = objective_value();
  for (int j = 0; j < cols_; ++j) {
    const double dj = (at_[j] == At::Basic ? 0.0 : d_[j]) - (cost_[j] - true_cost_[j]);
    if (std::abs(dj) <= 1e-11) continue;
    if (dj > 0.0) {
      if (artificial_lo_[j] || !std::isfinite(lo_[j])) return -kInfinity;
      bound += dj * (lo_[j] - x_[j]);
    } else {
      if (artificial_hi_[j] || !std::isfinite(hi_[j])) return -kInfinity;
      bound += dj * (hi_[j] - x_[j]);
    }
  }
  return bound;
}

void DualSimplex::use_costs(const std::vector<double>& costs) {
  cost_ = costs;
  recompute_reduced_costs();
  for (int j = 0; j < cols_; ++j) {
    if (at_[j] == At::Basic) continue;
    if ((at_[j] == At::Lower && (d_[j] < -1e-9 || artificial_lo_[j])) ||
        (at_[j] == At::Upper && (d_[j] > 1e-9 || artificial_hi_[j]))) {
      place_nonbasic(j);
    }
  }
  recompute_basic_values();
}

std::vector<double> DualSimplex::structural_values() const {
  return {x_.begin(), x_.begin() + n_};
}

double DualSimplex::max_row_residual() const {
  double worst = 0.0;
  for (int r = 0; r < m_; ++r) {
    double activity = x_[n_ + r];
    for (const Term& term : rows_[r]) activity += term.coeff * x_[term.var];
    worst = std::max(worst, std::abs(activity - b_[r]));
  }
  return worst;
}

void DualSimplex::refactor() {
  // Gauss-Jordan on the original [A I | b] using the current basic columns.
  std::fill(tab_.begin(), tab_.end(), 0.0);
  for (int r = 0; r < m_; ++r) {
    for (const Term& term : rows_[r]) t(r, term.var) += term.coeff;
    t(r, n_ + r) = 1.0;
    rhs_[r] = b_[r];
  }
  std::vector<int> columns = basis_;
  std::sort(columns.begin(), columns.end());
  std::vector<char> used(m_, 0);
  std::vector<int> new_basis(m_, -1);
  std::vector<char> in_basis(cols_, 0);
  auto eliminate = [&](int best, int q) {
    used[best] = 1;
    new_basis[best] = q;
    in_basis[q] = 1;
    double* prow = &tab_[static_cast<std::size_t>(best) * cols_];
    const double piv = prow[q];
    for (int c = 0; c < cols_; ++c) prow[c] /= piv;
    prow[q] = 1.0;
    rhs_[best] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == best) continue;
      double* row = &tab_[static_cast<std::size_t>(i) * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (int c = 0; c < cols_; ++c) {
        if (prow[c] != 0.0) {
          const double v = row[c] - f * prow[c];
          row[c] = std::abs(v) < kDropTol ? 0.0 : v;
        }
      }
      row[q] = 0.0;
      rhs_[i] -= f * rhs_[best];
    }
  };
  for (int q : columns) {
    int best = -1;
    double best_abs = 0.0;
    for (int r = 0; r < m_; ++r) {
      if (used[r]) continue;
      const double a = std::abs(t(r, q));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    // Dependent columns leave the basis; the gaps are filled below.
    if (best < 0 || best_abs < kSingularTol) continue;
    eliminate(best, q);
  }
  for (int r = 0; r < m_; ++r) {
    if (used[r]) continue;
    int best = -1;
    double best_abs = 0.0;
    for (int q = cols_ - 1; q >= 0; --q) {
      if (in_basis[q]) continue;
      const double a = std::abs(t(r, q));
      if (a > best_abs) {
        best_abs = a;
        best = q;
      }
    }
    if (best < 0 || best_abs < kSingularTol) throw SolverError("basis matrix became singular");
    eliminate(r, best);
  }
  std::vector<int> dropped;
  for (int q : columns) {
    if (!in_basis[q]) dropped.push_back(q);
  }
  basis_ = new_basis;
  for (int r = 0; r < m_; ++r) weight_[r] = row_weight(r);
  std::fill(row_of_.begin(), row_of_.end(), -1);
  for (int r = 0; r < m_; ++r) {
    row_of_[basis_[r]] = r;
    at_[basis_[r]] = At::Basic;
  }
  recompute_reduced_costs();
  for (int q : dropped) place_nonbasic(q);
  for (int j = 0; j < cols_; ++j) {
    if (at_[j] == At::Basic) continue;
    // Restore dual feasibility: flip boxed columns, re-box the others.
    if ((at_[j] == At::Lower && d_[j] < -1e-9) || (at_[j] == At::Upper && d_[j] > 1e-9)) {
      place_nonbasic(j);
    }
  }
  recompute_basic_values();
  pivots_since_refactor_ = 0;
}

LpResult DualSimplex::solve(const LpOptions& opt) {
  LpResult result;
  use_costs(perturbed_cost_);
  LpStatus status = iterate(opt, result.iterations);
  if (status == LpStatus::Optimal) {
    use_costs(true_cost_);
    status = iterate(opt, result.iterations);
  }
  result.status = status;
  result.objective = status == LpStatus::Cutoff ? lagrangian_bound() : objective_value();
  if (status == LpStatus::Optimal) {
    for (int j = 0; j < cols_; ++j) {
      if (at_[j] == At::Basic) continue;
      if ((artificial_lo_[j] && at_[j] == At::Lower) || (artificial_hi_[j] && at_[j] == At::Upper)) {
        result.status = LpStatus::Unbounded;
      }
    }
  }
  result.x = structural_values();
  return result;
}

LpStatus DualSimplex::iterate(const LpOptions& opt, long& iterations) {
  bool bland = false;
  double best_obj = -kInfinity;
  long stalled = 0;
  bool refactored_for_check = false;
  const long refactor_every = std::max<long>(400, 2L * m_);

  for (long iter = 0;; ++iter) {
    if (iterations >= opt.max_iterations) return LpStatus::IterationLimit;
    if (opt.deadline && (iter & 31) == 0 && std::chrono::steady_clock::now() >= *opt.deadline) {
      return LpStatus::TimeLimit;
    }
    if (pivots_since_refactor_ >= refactor_every) refactor();

    // Dual objective of the phase's costs; it only drives stall detection.
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
    if (std::isfinite(opt.cutoff) && lagrangian_bound() > opt.cutoff) {
      return LpStatus::Cutoff;
    }
    if (obj > best_obj + 1e-12) {
      best_obj = obj;
      stalled = 0;
      bland = false;
    } else if (++stalled > 50) {
      bland = true;
    }

    // Leaving row: largest infeasibility relative to its steepest-edge weight.
    int r = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int p = basis_[i];
      const double v = x_[p];
      const double infeas = std::max(lo_[p] - v, v - hi_[p]);
      if (infeas <= opt.primal_tol) continue;
      if (bland) {
        if (r < 0 || p < basis_[r]) r = i;
      } else if (infeas * infeas / weight_[i] > worst) {
        worst = infeas * infeas / weight_[i];
        r = i;
      }
    }
    if (r < 0) {
      if (max_row_residual() > 1e-7 && !refactored_for_check) {
        refactor();
        refactored_for_check = true;
        continue;
      }
      return LpStatus::Optimal;
    }

    const int p = basis_[r];
    const bool raise = x_[p] < lo_[p];
    const double target = raise ? lo_[p] : hi_[p];

    // Entering column: dual ratio test, largest pivot among the ties. The
    // tie window stays tiny; a wider one leaves dual infeasibilities that the
    // artificial boxes magnify into wrong bounds.
    const double* prow = &tab_[static_cast<std::size_t>(r) * cols_];
    auto ratio_of = [&](int j, double& abs_a) {
      abs_a = 0.0;
      if (at_[j] == At::Basic || lo_[j] == hi_[j]) return -1.0;
      const double a = prow[j];
      if (std::abs(a) <= opt.pivot_tol) return -1.0;
      const bool at_lower = at_[j] == At::Lower;
      // Moving x_j away from its bound must move x_p towards `target`.
      const bool eligible = raise ? (at_lower ? a < 0.0 : a > 0.0) : (at_lower ? a > 0.0 : a < 0.0);
      if (!eligible) return -1.0;
      abs_a = std::abs(a);
      return at_lower ? std::max(0.0, d_[j]) : std::max(0.0, -d_[j]);
    };
    int q = -1;
    if (bland) {
      double best_ratio = kInfinity;
      for (int j = 0; j < cols_; ++j) {
        double abs_a;
        const double dj = ratio_of(j, abs_a);
        if (dj < 0.0) continue;
        if (dj / abs_a < best_ratio - 1e-12) {
          best_ratio = dj / abs_a;
          q = j;
        }
      }
    } else {
      double bound = kInfinity;
      for (int j = 0; j < cols_; ++j) {
        double abs_a;
        const double dj = ratio_of(j, abs_a);
        if (dj >= 0.0) bound = std::min(bound, dj / abs_a);
      }
      double best_abs = 0.0;
      for (int j = 0; j < cols_; ++j) {
        double abs_a;
        const double dj = ratio_of(j, abs_a);
        if (dj >= 0.0 && dj / abs_a <= bound + 1e-12 && abs_a > best_abs) {
          best_abs = abs_a;
          q = j;
        }
      }
    }
    if (q < 0) {
      if (!refactored_for_check) {
        refactor();
        refactored_for_check = true;
        continue;
      }
      return LpStatus::Infeasible;
    }

    const double a = prow[q];
    const double delta = (x_[p] - target) / a;
    for (int i = 0; i < m_; ++i) {
      const double f = t(i, q);
      if (f != 0.0) x_[basis_[i]] -= f * delta;
    }
    x_[q] += delta;
    x_[p] = target;
    at_[p] = raise ? At::Lower : At::Upper;
    pivot(r, q);
    ++iterations;
    ++total_iterations_;
    refactored_for_check = false;
  }
}

}  // namespace frostgrid::lp

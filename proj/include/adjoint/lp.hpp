#pragma once

// Exact two-phase simplex over an ordered field. Bland's rule guarantees
// termination; problem sizes in this library are tiny, so the dense tableau
// is adequate.

#include <cstddef>
#include <optional>
#include <vector>

#include "adjoint/rational.hpp"

namespace adjoint::lp {

enum class Relation { LessEq, GreaterEq, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

template <class T>
struct Constraint {
  std::vector<T> coeffs;
  Relation rel;
  T rhs;
};

template <class T>
struct Problem {
  std::size_t num_vars = 0;
  std::vector<bool> nonneg;  // empty means every variable is free
  std::vector<Constraint<T>> constraints;
  std::vector<T> objective;  // empty means pure feasibility
  bool maximize = true;

  explicit Problem(std::size_t n = 0) : num_vars(n) {}

  void add(std::vector<T> coeffs, Relation rel, T rhs) {
    if (coeffs.size() != num_vars) throw Error(ErrorKind::Dimension, "LP constraint has wrong width");
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
  void set_nonneg(std::size_t j) {
    if (nonneg.empty()) nonneg.assign(num_vars, false);
    nonneg[j] = true;
  }
  void all_nonneg() { nonneg.assign(num_vars, true); }
};

template <class T>
struct Result {
  Status status = Status::Infeasible;
  T value = T(0);
  std::vector<T> x;
};

namespace detail {

template <class T>
class Tableau {
 public:
  Tableau(std::vector<std::vector<T>> rows, std::vector<std::size_t> basis, std::size_t ncols)
      : t_(std::move(rows)), basis_(std::move(basis)), ncols_(ncols) {}

  // Maximizes cost.y over the current feasible basis, skipping barred columns.
  Status optimize(const std::vector<T>& cost, const std::vector<bool>& barred) {
    for (;;) {
      std::vector<T> reduced(ncols_, T(0));
      for (std::size_t j = 0; j < ncols_; ++j) {
        T z(0);
        for (std::size_t i = 0; i < t_.size(); ++i)
          if (!(cost[basis_[i]] == T(0)) && !(t_[i][j] == T(0))) z = z + cost[basis_[i]] * t_[i][j];
        reduced[j] = z - cost[j];
      }
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < ncols_; ++j) {
        if (barred[j]) continue;
        if (reduced[j] < T(0)) {
          enter = j;
          break;
        }
      }
      if (!enter) return Status::Optimal;
      std::optional<std::size_t> leave;
      T best(0);
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!(t_[i][*enter] > T(0))) continue;
        T ratio = t_[i][ncols_] / t_[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return Status::Unbounded;
      pivot(*leave, *enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    T inv = T(1) / t_[row][col];
    for (auto& v : t_[row]) v = v * inv;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == row || t_[i][col] == T(0)) continue;
      T f = t_[i][col];
      for (std::size_t j = 0; j <= ncols_; ++j)
        if (!(t_[row][j] == T(0))) t_[i][j] = t_[i][j] - f * t_[row][j];
    }
    basis_[row] = col;
  }

  T value(const std::vector<T>& cost) const {
    T v(0);
    for (std::size_t i = 0; i < t_.size(); ++i) v = v + cost[basis_[i]] * t_[i][ncols_];
    return v;
  }

  std::vector<T> solution() const {
    std::vector<T> y(ncols_, T(0));
    for (std::size_t i = 0; i < t_.size(); ++i) y[basis_[i]] = t_[i][ncols_];
    return y;
  }

  std::vector<std::vector<T>>& rows() { return t_; }
  std::vector<std::size_t>& basis() { return basis_; }

 private:
  std::vector<std::vector<T>> t_;
  std::vector<std::size_t> basis_;
  std::size_t ncols_;
};

}  // namespace detail

template <class T>
Result<T> solve(const Problem<T>& p) {
  const std::size_t n = p.num_vars;
  // column layout: [split original vars][slacks][artificials]
  std::vector<std::size_t> pos_col(n), neg_col(n, static_cast<std::size_t>(-1));
  std::size_t col = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos_col[j] = col++;
    bool nn = !p.nonneg.empty() && p.nonneg[j];
    if (!nn) neg_col[j] = col++;
  }
  const std::size_t m = p.constraints.size();
  std::vector<std::size_t> slack_col(m, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < m; ++i)
    if (p.constraints[i].rel != Relation::Equal) slack_col[i] = col++;
  const std::size_t art_start = col;
  const std::size_t ncols = art_start + m;

  std::vector<std::vector<T>> rows(m, std::vector<T>(ncols + 1, T(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = p.constraints[i];
    auto& r = rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      r[pos_col[j]] = c.coeffs[j];
      if (neg_col[j] != static_cast<std::size_t>(-1)) r[neg_col[j]] = T(0) - c.coeffs[j];
    }
    if (c.rel == Relation::LessEq) r[slack_col[i]] = T(1);
    if (c.rel == Relation::GreaterEq) r[slack_col[i]] = T(-1);
    r[ncols] = c.rhs;
    if (c.rhs < T(0))
      for (std::size_t j = 0; j <= ncols; ++j) r[j] = T(0) - r[j];
    r[art_start + i] = T(1);
    basis[i] = art_start + i;
  }

  detail::Tableau<T> tab(std::move(rows), std::move(basis), ncols);
  std::vector<T> phase1(ncols, T(0));
  for (std::size_t i = 0; i < m; ++i) phase1[art_start + i] = T(-1);
  std::vector<bool> none_barred(ncols, false);
  tab.optimize(phase1, none_barred);
  Result<T> res;
  if (tab.value(phase1) < T(0)) {
    res.status = Status::Infeasible;
    return res;
  }
  // Drive artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.rows().size();) {
    if (tab.basis()[i] < art_start) {
      ++i;
      continue;
    }
    std::optional<std::size_t> j;
    for (std::size_t c2 = 0; c2 < art_start; ++c2)
      if (!(tab.rows()[i][c2] == T(0))) {
        j = c2;
        break;
      }
    if (j) {
      tab.pivot(i, *j);
      ++i;
    } else {
      tab.rows().erase(tab.rows().begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis().erase(tab.basis().begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  std::vector<T> cost(ncols, T(0));
  if (!p.objective.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      T c = p.maximize ? p.objective[j] : T(0) - p.objective[j];
      cost[pos_col[j]] = c;
      if (neg_col[j] != static_cast<std::size_t>(-1)) cost[neg_col[j]] = T(0) - c;
    }
  }
  std::vector<bool> barred(ncols, false);
  for (std::size_t j = art_start; j < ncols; ++j) barred[j] = true;
  if (tab.optimize(cost, barred) == Status::Unbounded) {
    res.status = Status::Unbounded;
    return res;
  }
  auto y = tab.solution();
  res.status = Status::Optimal;
  res.x.assign(n, T(0));
  for (std::size_t j = 0; j < n; ++j) {
    res.x[j] = y[pos_col[j]];
    if (neg_col[j] != static_cast<std::size_t>(-1)) res.x[j] = res.x[j] - y[neg_col[j]];
  }
  T v = tab.value(cost);
  res.value = p.maximize ? v : T(0) - v;
  return res;
}

template <class T>
bool feasible(const Problem<T>& p) {
  Problem<T> q = p;
  q.objective.clear();
  return solve(q).status != Status::Infeasible;
}

}  // namespace adjoint::lp

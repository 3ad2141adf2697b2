#pragma once

// Smallest rationally defined affine subspace through a point of Q(sqrt d)^n.

#include <vector>

#include "adjoint/linalg.hpp"
#include "adjoint/quadratic.hpp"

namespace adjoint {

struct AffineSubspaceQ {
  RatVec base_point;
  std::vector<RatVec> direction_basis;
  // Certificate: the rational relations L y = c cutting out the subspace.
  std::vector<RatVec> relations;
  RatVec relation_rhs;

  std::size_t dim() const { return direction_basis.size(); }

  bool contains(const RatVec& y) const {
    for (std::size_t i = 0; i < relations.size(); ++i)
      if (dot(relations[i], y) != relation_rhs[i]) return false;
    return true;
  }

  bool contains(const QuadVec& y) const {
    for (std::size_t i = 0; i < relations.size(); ++i) {
      QuadNum s = 0;
      for (std::size_t j = 0; j < y.size(); ++j) s += QuadNum(relations[i][j]) * y.entries[j];
      if (!(s == QuadNum(relation_rhs[i]))) return false;
    }
    return true;
  }

  RatVec point_at(const RatVec& t) const {
    RatVec p = base_point;
    for (std::size_t i = 0; i < t.size(); ++i) p = p + t[i] * direction_basis[i];
    return p;
  }
};

/// For x = a + sqrt(d) b, a rational relation L x = c forces L b = 0 and
/// L a = c, so the hull is a + span(b).
inline AffineSubspaceQ rational_affine_hull(const QuadVec& x) {
  AffineSubspaceQ u;
  u.base_point = x.rational_parts();
  RatVec b = x.irrational_parts();
  const std::size_t n = x.size();
  if (!is_zero(b)) u.direction_basis.push_back(primitive(b));
  for (auto& row : linalg::nullspace(u.direction_basis, n)) {
    RatVec l = primitive(row);
    u.relation_rhs.push_back(dot(l, u.base_point));
    u.relations.push_back(std::move(l));
  }
  return u;
}

}  // namespace adjoint

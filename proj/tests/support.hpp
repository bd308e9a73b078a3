#pragma once

// Test-side generators and independent oracles. Nothing here calls into the
// code paths it is used to check.

#include "ipmkit/core.hpp"
#include "ipmkit/lp.hpp"

#include <Eigen/LU>

#include <cmath>
#include <optional>
#include <random>

namespace testkit {

using ipmkit::PointMatrix;

inline PointMatrix random_points(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d, double lo = -1.0,
                                 double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  PointMatrix pts(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) pts(i, k) = u(rng);
  }
  return pts;
}

/// Points on a coarse integer grid, so duplicates occur.
inline PointMatrix grid_points(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d, int span) {
  std::uniform_int_distribution<int> u(0, span);
  PointMatrix pts(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) pts(i, k) = u(rng);
  }
  return pts;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct VertexOracleResult {
  bool feasible = false;
  double best = -std::numeric_limits<double>::infinity();
};

/// Maximises over all vertices of a bounded polyhedron in R^3 given as
/// constraint rows plus finite variable bounds, by solving every 3x3 system
/// of active constraints.
inline VertexOracleResult vertex_enumeration(const ipmkit::LpProblem& p, double tol = 1e-9) {
  const Eigen::Index n = p.num_variables();
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < p.num_constraints(); ++i) {
    rows.emplace_back(p.A.row(i));
    rhs.push_back(p.rhs(i));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e(j) = 1.0;
    if (std::isfinite(p.lower(j))) {
      rows.push_back(e);
      rhs.push_back(p.lower(j));
    }
    if (std::isfinite(p.upper(j))) {
      rows.push_back(e);
      rhs.push_back(p.upper(j));
    }
  }
  VertexOracleResult out;
  const auto m = rows.size();
  std::vector<std::size_t> pick(static_cast<std::size_t>(n));
  // Recursive choice of n active rows.
  auto visit = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == static_cast<std::size_t>(n)) {
      Eigen::MatrixXd M(n, n);
      Eigen::VectorXd b(n);
      for (Eigen::Index r = 0; r < n; ++r) {
        M.row(r) = rows[pick[static_cast<std::size_t>(r)]];
        b(r) = rhs[pick[static_cast<std::size_t>(r)]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      if (ipmkit::max_violation(p, x) > tol) return;
      out.feasible = true;
      out.best = std::max(out.best, p.objective.dot(x));
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  visit(visit, 0, 0);
  return out;
}

/// sqrt(sum_i sum_j y_i y_j k(X_i, X_j)) by the plain double loop, accumulated
/// in extended precision.
template <typename K>
double naive_mmd(const PointMatrix& pts, const Eigen::VectorXd& y, const K& k) {
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index j = 0; j < pts.rows(); ++j) {
      s += static_cast<long double>(y(i)) * y(j) * k(pts.row(i), pts.row(j));
    }
  }
  return static_cast<double>(std::sqrt(std::max(0.0L, s)));
}

/// Largest |f(X_i) - f(X_j)| / rho(X_i, X_j) over distinct pairs.
template <typename G>
double max_ratio(const PointMatrix& pts, const Eigen::VectorXd& f, const G& g) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < pts.rows(); ++j) {
      const double r = g(pts.row(i), pts.row(j));
      if (r > 0.0) worst = std::max(worst, std::abs(f(i) - f(j)) / r);
    }
  }
  return worst;
}

}  // namespace testkit

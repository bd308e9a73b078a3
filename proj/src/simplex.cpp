#include "ipmkit/lp.hpp"

#include <Eigen/LU>

#include <cmath>

namespace ipmkit {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Unbounded:
      return "unbounded";
    case LpStatus::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

LpProblem::LpProblem(Eigen::Index num_variables)
    : objective(Eigen::VectorXd::Zero(num_variables)),
      A(0, num_variables),
      lower(Eigen::VectorXd::Zero(num_variables)),
      upper(Eigen::VectorXd::Constant(num_variables, std::numeric_limits<double>::infinity())) {}

void LpProblem::add_constraint(const Eigen::RowVectorXd& row, Relation rel, double b) {
  if (row.size() != num_variables()) {
    throw DataError("constraint row has " + std::to_string(row.size()) + " coefficients, expected " +
                    std::to_string(num_variables()));
  }
  A.conservativeResize(A.rows() + 1, num_variables());
  A.row(A.rows() - 1) = row;
  relations.push_back(rel);
  rhs.conservativeResize(rhs.size() + 1);
  rhs(rhs.size() - 1) = b;
}

void LpProblem::set_free(Eigen::Index j) {
  lower(j) = -std::numeric_limits<double>::infinity();
  upper(j) = std::numeric_limits<double>::infinity();
}

double max_violation(const LpProblem& p, const Eigen::VectorXd& x) {
  double worst = 0.0;
  if (p.num_constraints() > 0) {
    const Eigen::VectorXd r = p.A * x - p.rhs;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      switch (p.relations[static_cast<std::size_t>(i)]) {
        case Relation::LessEqual:
          worst = std::max(worst, r(i));
          break;
        case Relation::GreaterEqual:
          worst = std::max(worst, -r(i));
          break;
        case Relation::Equal:
          worst = std::max(worst, std::abs(r(i)));
          break;
      }
    }
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    worst = std::max({worst, p.lower(j) - x(j), x(j) - p.upper(j)});
  }
  return worst;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// min c.x  s.t.  A x = b,  x >= 0,  b >= 0, with a starting basis made of
// unit columns (slacks or artificials).
struct StandardForm {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<bool> artificial;
  std::vector<Eigen::Index> basis;
};

struct CoreResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  Eigen::VectorXd pi;
  std::size_t iterations = 0;
};

class RevisedSimplex {
 public:
  explicit RevisedSimplex(const StandardForm& sf)
      : sf_(sf),
        m_(sf.A.rows()),
        n_(sf.A.cols()),
        basis_(sf.basis),
        position_(static_cast<std::size_t>(n_), -1),
        cap_(static_cast<std::size_t>(50 * (n_ + m_))) {
    for (Eigen::Index r = 0; r < m_; ++r) {
      position_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = r;
    }
    refactor();
  }

  CoreResult run() {
    CoreResult out;
    const bool needs_phase_one =
        std::any_of(basis_.begin(), basis_.end(), [&](Eigen::Index j) { return is_artificial(j); });
    if (needs_phase_one) {
      Eigen::VectorXd phase_one_cost(n_);
      for (Eigen::Index j = 0; j < n_; ++j) phase_one_cost(j) = is_artificial(j) ? 1.0 : 0.0;
      iterate(phase_one_cost);  // bounded below by zero
      double infeasibility = 0.0;
      for (Eigen::Index r = 0; r < m_; ++r) {
        if (is_artificial(basis_[static_cast<std::size_t>(r)])) infeasibility += x_basic_(r);
      }
      const double scale = std::max(1.0, sf_.b.size() ? sf_.b.cwiseAbs().maxCoeff() : 0.0);
      if (infeasibility > lp_tolerance::feasibility * scale) {
        out.status = LpStatus::Infeasible;
        out.iterations = iterations_;
        return out;
      }
      drive_out_artificials();
    }

    Eigen::VectorXd cost = sf_.c;
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (is_artificial(j)) cost(j) = 0.0;
    }
    const bool bounded = iterate(cost);
    out.iterations = iterations_;
    if (!bounded) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    refactor();
    out.status = LpStatus::Optimal;
    out.x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      out.x(basis_[static_cast<std::size_t>(r)]) = x_basic_(r);
    }
    out.pi = multipliers(cost);
    return out;
  }

 private:
  bool is_artificial(Eigen::Index j) const { return sf_.artificial[static_cast<std::size_t>(j)]; }

  Eigen::VectorXd multipliers(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(m_);
    for (Eigen::Index r = 0; r < m_; ++r) cb(r) = cost(basis_[static_cast<std::size_t>(r)]);
    return binv_.transpose() * cb;
  }

  void refactor() {
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      basis_matrix.col(r) = sf_.A.col(basis_[static_cast<std::size_t>(r)]);
    }
    binv_ = m_ > 0 ? Eigen::MatrixXd(basis_matrix.partialPivLu().inverse()) : Eigen::MatrixXd(0, 0);
    x_basic_ = binv_ * sf_.b;
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (x_basic_(r) < 0.0) x_basic_(r) = 0.0;
    }
    since_refactor_ = 0;
  }

  void pivot(Eigen::Index leave, Eigen::Index enter, const Eigen::VectorXd& d) {
    const double theta = x_basic_(leave) / d(leave);
    x_basic_ -= theta * d;
    x_basic_(leave) = theta;
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (x_basic_(r) < 0.0) x_basic_(r) = 0.0;
    }
    const Eigen::RowVectorXd pivot_row = binv_.row(leave) / d(leave);
    binv_.noalias() -= d * pivot_row;
    binv_.row(leave) = pivot_row;
    position_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(leave)])] = -1;
    basis_[static_cast<std::size_t>(leave)] = enter;
    position_[static_cast<std::size_t>(enter)] = leave;
    if (++iterations_ > cap_) {
      throw SolverError("simplex iteration limit exceeded (" + std::to_string(cap_) + ")");
    }
    if (++since_refactor_ >= 64) refactor();
  }

  // Bland's rule throughout: lowest-index improving column enters, ties in
  // the ratio test leave by lowest variable index. Artificial columns never
  // enter. Returns false when the program is unbounded.
  bool iterate(const Eigen::VectorXd& cost) {
    while (true) {
      const Eigen::VectorXd pi = multipliers(cost);
      const Eigen::VectorXd reduced = cost - sf_.A.transpose() * pi;
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (position_[static_cast<std::size_t>(j)] < 0 && !is_artificial(j) &&
            reduced(j) < -lp_tolerance::optimality) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      const Eigen::VectorXd d = binv_ * sf_.A.col(enter);
      Eigen::Index leave = -1;
      double best = kInf;
      for (Eigen::Index r = 0; r < m_; ++r) {
        if (d(r) <= lp_tolerance::pivot) continue;
        const double ratio = x_basic_(r) / d(r);
        if (leave < 0 || ratio < best - 1e-12) {
          leave = r;
          best = ratio;
        } else if (ratio <= best + 1e-12 &&
                   basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)]) {
          leave = r;
          best = std::min(best, ratio);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter, d);
    }
  }

  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[static_cast<std::size_t>(r)])) continue;
      const Eigen::RowVectorXd row = binv_.row(r) * sf_.A;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (position_[static_cast<std::size_t>(j)] >= 0 || is_artificial(j)) continue;
        if (std::abs(row(j)) > 1e-9) {
          const Eigen::VectorXd d = binv_ * sf_.A.col(j);
          pivot(r, j, d);
          break;
        }
      }
      // No candidate: the row is redundant and its artificial stays basic at zero.
    }
  }

  const StandardForm& sf_;
  Eigen::Index m_;
  Eigen::Index n_;
  std::vector<Eigen::Index> basis_;
  std::vector<Eigen::Index> position_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd x_basic_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  std::size_t cap_;
};

// max c.y  s.t.  A y (rel) b,  y_k >= 0 unless free[k].
// Original variables are recovered as x = shift + sign .* y.
struct Canonical {
  Eigen::MatrixXd A;
  std::vector<Relation> rel;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<bool> free;
  Eigen::VectorXd shift;
  Eigen::VectorXd sign;
  Eigen::Index original_rows = 0;
};

Canonical canonicalize(const LpProblem& p) {
  const Eigen::Index n = p.num_variables();
  Canonical cf;
  cf.shift = Eigen::VectorXd::Zero(n);
  cf.sign = Eigen::VectorXd::Ones(n);
  cf.free.assign(static_cast<std::size_t>(n), false);
  std::vector<std::pair<Eigen::Index, double>> upper_rows;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = p.lower(j);
    const double hi = p.upper(j);
    if (std::isfinite(lo)) {
      cf.shift(j) = lo;
      if (std::isfinite(hi)) upper_rows.emplace_back(j, hi - lo);
    } else if (std::isfinite(hi)) {
      cf.shift(j) = hi;
      cf.sign(j) = -1.0;
    } else {
      cf.free[static_cast<std::size_t>(j)] = true;
    }
  }
  cf.original_rows = p.num_constraints();
  const Eigen::Index rows = cf.original_rows + static_cast<Eigen::Index>(upper_rows.size());
  cf.A = Eigen::MatrixXd::Zero(rows, n);
  cf.b.resize(rows);
  if (cf.original_rows > 0) {
    cf.A.topRows(cf.original_rows) = p.A * cf.sign.asDiagonal();
    cf.b.head(cf.original_rows) = p.rhs - p.A * cf.shift;
  }
  cf.rel = p.relations;
  for (std::size_t k = 0; k < upper_rows.size(); ++k) {
    const Eigen::Index row = cf.original_rows + static_cast<Eigen::Index>(k);
    cf.A(row, upper_rows[k].first) = 1.0;
    cf.b(row) = upper_rows[k].second;
    cf.rel.push_back(Relation::LessEqual);
  }
  cf.c = p.objective.cwiseProduct(cf.sign);
  return cf;
}

struct RouteResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd y;
  Eigen::VectorXd duals;  // canonical rows
  std::size_t iterations = 0;
};

RouteResult solve_primal_route(const Canonical& cf) {
  const Eigen::Index m = cf.A.rows();
  const Eigen::Index nv = cf.A.cols();

  std::vector<std::pair<Eigen::Index, double>> structural;
  for (Eigen::Index k = 0; k < nv; ++k) {
    structural.emplace_back(k, 1.0);
    if (cf.free[static_cast<std::size_t>(k)]) structural.emplace_back(k, -1.0);
  }
  const auto n_struct = static_cast<Eigen::Index>(structural.size());

  Eigen::VectorXd row_sign(m);
  std::vector<double> slack_coeff(static_cast<std::size_t>(m), 0.0);
  Eigen::Index n_slack = 0;
  Eigen::Index n_art = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    row_sign(i) = cf.b(i) < 0.0 ? -1.0 : 1.0;
    const Relation rel = cf.rel[static_cast<std::size_t>(i)];
    if (rel != Relation::Equal) {
      slack_coeff[static_cast<std::size_t>(i)] = rel == Relation::LessEqual ? 1.0 : -1.0;
      ++n_slack;
    }
    if (slack_coeff[static_cast<std::size_t>(i)] * row_sign(i) != 1.0) ++n_art;
  }

  StandardForm sf;
  const Eigen::Index total = n_struct + n_slack + n_art;
  sf.A = Eigen::MatrixXd::Zero(m, total);
  sf.c = Eigen::VectorXd::Zero(total);
  sf.artificial.assign(static_cast<std::size_t>(total), false);
  sf.basis.assign(static_cast<std::size_t>(m), -1);
  sf.b = row_sign.cwiseProduct(cf.b);

  for (Eigen::Index col = 0; col < n_struct; ++col) {
    const auto [k, s] = structural[static_cast<std::size_t>(col)];
    sf.A.col(col) = s * row_sign.cwiseProduct(cf.A.col(k));
    sf.c(col) = -s * cf.c(k);
  }
  Eigen::Index next_slack = n_struct;
  Eigen::Index next_art = n_struct + n_slack;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double coeff = slack_coeff[static_cast<std::size_t>(i)] * row_sign(i);
    if (slack_coeff[static_cast<std::size_t>(i)] != 0.0) {
      sf.A(i, next_slack) = coeff;
      if (coeff == 1.0) sf.basis[static_cast<std::size_t>(i)] = next_slack;
      ++next_slack;
    }
    if (coeff != 1.0) {
      sf.A(i, next_art) = 1.0;
      sf.artificial[static_cast<std::size_t>(next_art)] = true;
      sf.basis[static_cast<std::size_t>(i)] = next_art;
      ++next_art;
    }
  }

  RevisedSimplex simplex(sf);
  const CoreResult core = simplex.run();
  RouteResult out;
  out.status = core.status;
  out.iterations = core.iterations;
  if (core.status != LpStatus::Optimal) return out;
  out.y = Eigen::VectorXd::Zero(nv);
  for (Eigen::Index col = 0; col < n_struct; ++col) {
    const auto [k, s] = structural[static_cast<std::size_t>(col)];
    out.y(k) += s * core.x(col);
  }
  out.duals = -row_sign.cwiseProduct(core.pi);
  return out;
}

// Solves the LP dual, min b.w s.t. A^T w (>= or =) c with sign-constrained
// w, and reads the primal point off its simplex multipliers.
RouteResult solve_dual_route(const Canonical& cf) {
  const Eigen::Index m = cf.A.rows();
  const Eigen::Index nv = cf.A.cols();

  std::vector<std::pair<Eigen::Index, double>> columns;
  for (Eigen::Index i = 0; i < m; ++i) {
    switch (cf.rel[static_cast<std::size_t>(i)]) {
      case Relation::LessEqual:
        columns.emplace_back(i, 1.0);
        break;
      case Relation::GreaterEqual:
        columns.emplace_back(i, -1.0);
        break;
      case Relation::Equal:
        columns.emplace_back(i, 1.0);
        columns.emplace_back(i, -1.0);
        break;
    }
  }
  const auto n_cols = static_cast<Eigen::Index>(columns.size());

  Eigen::VectorXd row_sign(nv);
  Eigen::Index n_surplus = 0;
  Eigen::Index n_art = 0;
  for (Eigen::Index k = 0; k < nv; ++k) {
    row_sign(k) = cf.c(k) < 0.0 ? -1.0 : 1.0;
    const bool has_surplus = !cf.free[static_cast<std::size_t>(k)];
    if (has_surplus) ++n_surplus;
    if (!(has_surplus && row_sign(k) < 0.0)) ++n_art;
  }

  StandardForm sf;
  const Eigen::Index total = n_cols + n_surplus + n_art;
  sf.A = Eigen::MatrixXd::Zero(nv, total);
  sf.c = Eigen::VectorXd::Zero(total);
  sf.artificial.assign(static_cast<std::size_t>(total), false);
  sf.basis.assign(static_cast<std::size_t>(nv), -1);
  sf.b = row_sign.cwiseProduct(cf.c);
  for (Eigen::Index col = 0; col < n_cols; ++col) {
    const auto [i, s] = columns[static_cast<std::size_t>(col)];
    sf.A.col(col) = s * row_sign.cwiseProduct(cf.A.row(i).transpose());
    sf.c(col) = s * cf.b(i);
  }
  Eigen::Index next_surplus = n_cols;
  Eigen::Index next_art = n_cols + n_surplus;
  for (Eigen::Index k = 0; k < nv; ++k) {
    const bool has_surplus = !cf.free[static_cast<std::size_t>(k)];
    if (has_surplus) {
      sf.A(k, next_surplus) = -row_sign(k);
      if (row_sign(k) < 0.0) sf.basis[static_cast<std::size_t>(k)] = next_surplus;
      ++next_surplus;
    }
    if (!(has_surplus && row_sign(k) < 0.0)) {
      sf.A(k, next_art) = 1.0;
      sf.artificial[static_cast<std::size_t>(next_art)] = true;
      sf.basis[static_cast<std::size_t>(k)] = next_art;
      ++next_art;
    }
  }

  RevisedSimplex simplex(sf);
  const CoreResult core = simplex.run();
  RouteResult out;
  out.iterations = core.iterations;
  switch (core.status) {
    case LpStatus::Optimal:
      out.status = LpStatus::Optimal;
      break;
    case LpStatus::Unbounded:
      out.status = LpStatus::Infeasible;
      return out;
    case LpStatus::Infeasible:
      // Primal is unbounded or infeasible; the caller decides which.
      out.status = LpStatus::Unbounded;
      out.y.resize(0);
      return out;
  }
  out.y = row_sign.cwiseProduct(core.pi);
  out.duals = Eigen::VectorXd::Zero(m);
  for (Eigen::Index col = 0; col < n_cols; ++col) {
    const auto [i, s] = columns[static_cast<std::size_t>(col)];
    out.duals(i) += s * core.x(col);
  }
  return out;
}

void validate(const LpProblem& p) {
  const Eigen::Index n = p.num_variables();
  if (n == 0) throw DataError("linear program has no variables");
  if (p.A.cols() != n && p.A.rows() > 0) throw DataError("constraint matrix width does not match variables");
  if (p.rhs.size() != p.A.rows() || static_cast<Eigen::Index>(p.relations.size()) != p.A.rows()) {
    throw DataError("constraint rows, relations and rhs sizes differ");
  }
  if (p.lower.size() != n || p.upper.size() != n) throw DataError("bounds must have one entry per variable");
  if (!p.objective.allFinite() || !p.A.allFinite() || !p.rhs.allFinite()) {
    throw DataError("linear program has non-finite coefficients");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(p.lower(j)) || std::isnan(p.upper(j)) || p.lower(j) > p.upper(j) ||
        p.lower(j) == kInf || p.upper(j) == -kInf) {
      throw DataError("invalid bounds on variable " + std::to_string(j));
    }
  }
}

}  // namespace

LpSolution solve(const LpProblem& problem, const SolveOptions& options) {
  validate(problem);
  const Canonical cf = canonicalize(problem);

  const bool use_dual = options.route == SimplexRoute::Dual ||
                        (options.route == SimplexRoute::Auto && cf.A.cols() < cf.A.rows());
  RouteResult rr = use_dual ? solve_dual_route(cf) : solve_primal_route(cf);
  if (use_dual && rr.status == LpStatus::Unbounded) {
    // The dual was infeasible; only the primal can tell unbounded from infeasible.
    const std::size_t spent = rr.iterations;
    rr = solve_primal_route(cf);
    rr.iterations += spent;
  }

  LpSolution sol;
  sol.status = rr.status;
  sol.iterations = rr.iterations;
  if (rr.status != LpStatus::Optimal) return sol;
  sol.x = cf.shift + cf.sign.cwiseProduct(rr.y);
  sol.objective_value = problem.objective.dot(sol.x);
  sol.duals = rr.duals.head(cf.original_rows);
  return sol;
}

}  // namespace ipmkit

#include "ipmkit/lp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ipmkit {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_linear(std::ostringstream& out, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  bool first = true;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    const double v = row(j);
    if (v == 0.0) continue;
    if (first) {
      out << (v < 0 ? "- " : "");
    } else {
      out << (v < 0 ? " - " : " + ");
    }
    out << num(std::abs(v)) << " x" << j + 1;
    first = false;
  }
  if (first) out << "0 x1";
}

}  // namespace

std::string to_lp_format(const LpProblem& p) {
  std::ostringstream out;
  out << "Maximize\n obj: ";
  write_linear(out, p.objective.transpose());
  out << "\nSubject To\n";
  for (Eigen::Index i = 0; i < p.num_constraints(); ++i) {
    out << " c" << i + 1 << ": ";
    write_linear(out, p.A.row(i));
    switch (p.relations[static_cast<std::size_t>(i)]) {
      case Relation::LessEqual:
        out << " <= ";
        break;
      case Relation::GreaterEqual:
        out << " >= ";
        break;
      case Relation::Equal:
        out << " = ";
        break;
    }
    out << num(p.rhs(i)) << '\n';
  }
  out << "Bounds\n";
  for (Eigen::Index j = 0; j < p.num_variables(); ++j) {
    const double lo = p.lower(j);
    const double hi = p.upper(j);
    const std::string name = "x" + std::to_string(j + 1);
    if (std::isinf(lo) && std::isinf(hi)) {
      out << ' ' << name << " free\n";
    } else if (std::isinf(lo)) {
      out << " -inf <= " << name << " <= " << num(hi) << '\n';
    } else if (std::isinf(hi)) {
      out << ' ' << name << " >= " << num(lo) << '\n';
    } else {
      out << ' ' << num(lo) << " <= " << name << " <= " << num(hi) << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace ipmkit

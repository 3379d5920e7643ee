#include "program.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace h2plan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int ConicProgram::add_var(VarKind kind, double lo, double hi,
                          std::string name) {
  if (lo > hi) throw std::invalid_argument("add_var: lb > ub for " + name);
  const int id = num_vars();
  kind_.push_back(kind);
  lb_.push_back(lo);
  ub_.push_back(hi);
  name_.push_back(std::move(name));
  if (kind == VarKind::Binary) {
    ++n_binary_;
    binary_ids_.push_back(id);
  }
  return id;
}

void ConicProgram::set_bounds(int v, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("set_bounds: lb > ub");
  lb_[v] = lo;
  ub_[v] = hi;
}

int ConicProgram::add_row(Sense sense, double rhs,
                          const std::vector<LinTerm>& terms) {
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= num_vars())
      throw std::out_of_range("add_row: unknown variable");
  row_sense_.push_back(sense);
  row_rhs_.push_back(rhs);
  for (const auto& t : terms) {
    term_var_.push_back(t.var);
    term_coef_.push_back(t.coef);
  }
  row_start_.push_back(static_cast<int32_t>(term_var_.size()));
  return num_rows() - 1;
}

int ConicProgram::add_soc(Affine t, std::vector<Affine> norm) {
  ConeRow c;
  c.kind = ConeRow::Soc;
  c.u = std::move(t);
  c.norm = std::move(norm);
  cones_.push_back(std::move(c));
  return num_cones() - 1;
}

int ConicProgram::add_rsoc(Affine u, Affine v, std::vector<Affine> norm) {
  ConeRow c;
  c.kind = ConeRow::Rsoc;
  c.u = std::move(u);
  c.v = std::move(v);
  c.norm = std::move(norm);
  cones_.push_back(std::move(c));
  return num_cones() - 1;
}

void ConicProgram::add_objective_term(int var, double coef) {
  objective_.push_back({var, coef});
}

double ConicProgram::eval_affine(const Affine& a,
                                 const std::vector<double>& x) const {
  double v = a.constant;
  for (const auto& t : a.terms) v += t.coef * x[t.var];
  return v;
}

double ConicProgram::eval_objective(const std::vector<double>& x) const {
  double v = obj_constant_;
  for (const auto& t : objective_) v += t.coef * x[t.var];
  return v;
}

PointCheck ConicProgram::check_point(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != num_vars())
    throw std::invalid_argument("check_point: dimension mismatch");
  PointCheck pc;
  auto worse = [&](double viol, const std::string& what) {
    if (viol > pc.max_violation) {
      pc.max_violation = viol;
      pc.worst = what;
    }
  };
  for (int v = 0; v < num_vars(); ++v) {
    if (lb_[v] > -kInf) worse(lb_[v] - x[v], "lb " + name_[v]);
    if (ub_[v] < kInf) worse(x[v] - ub_[v], "ub " + name_[v]);
  }
  for (int r = 0; r < num_rows(); ++r) {
    double lhs = 0.0;
    for_row_terms(r, [&](int v, double c) { lhs += c * x[v]; });
    const double d = lhs - row_rhs_[r];
    switch (row_sense_[r]) {
      case Sense::LE: worse(d, "row " + std::to_string(r)); break;
      case Sense::GE: worse(-d, "row " + std::to_string(r)); break;
      case Sense::EQ: worse(std::abs(d), "row " + std::to_string(r)); break;
    }
  }
  for (int k = 0; k < num_cones(); ++k) {
    const ConeRow& c = cones_[k];
    double nsq = 0.0;
    for (const auto& a : c.norm) {
      const double v = eval_affine(a, x);
      nsq += v * v;
    }
    if (c.kind == ConeRow::Soc) {
      const double t = eval_affine(c.u, x);
      worse(std::sqrt(nsq) - t, "soc " + std::to_string(k));
    } else {
      const double u = eval_affine(c.u, x);
      const double v = eval_affine(c.v, x);
      worse(-u, "rsoc.u " + std::to_string(k));
      worse(-v, "rsoc.v " + std::to_string(k));
      // scale-balanced violation of u*v >= |n|^2
      const double viol = nsq - u * v;
      worse(viol / std::max(1.0, std::max(u, v)), "rsoc " + std::to_string(k));
    }
  }
  return pc;
}

std::vector<std::string> ConicProgram::check_convexity() const {
  std::vector<std::string> issues;
  auto interval_lb = [&](const Affine& a) {
    double lo = a.constant;
    for (const auto& t : a.terms) {
      const double b1 = t.coef * lb_[t.var];
      const double b2 = t.coef * ub_[t.var];
      lo += std::min(b1, b2);
    }
    return lo;
  };
  auto binary_free = [&](const Affine& a) {
    for (const auto& t : a.terms)
      if (kind_[t.var] == VarKind::Binary) return false;
    return true;
  };
  for (int k = 0; k < num_cones(); ++k) {
    const ConeRow& c = cones_[k];
    if (c.norm.empty())
      issues.push_back("cone " + std::to_string(k) + ": empty norm");
    for (const auto& a : c.norm)
      if (!binary_free(a))
        issues.push_back("cone " + std::to_string(k) +
                         ": binary inside a quadratic term");
    if (c.kind == ConeRow::Rsoc) {
      if (interval_lb(c.u) < -1e-9 || interval_lb(c.v) < -1e-9)
        issues.push_back("cone " + std::to_string(k) +
                         ": rotated-cone side not provably nonnegative");
    }
  }
  return issues;
}

namespace {

void write_affine(std::ostream& os, const Affine& a) {
  os << a.constant << ' ' << a.terms.size();
  for (const auto& t : a.terms) os << ' ' << t.var << ':' << t.coef;
}

Affine read_affine(std::istream& is) {
  Affine a;
  size_t n = 0;
  is >> a.constant >> n;
  a.terms.resize(n);
  for (auto& t : a.terms) {
    char colon;
    is >> t.var >> colon >> t.coef;
  }
  return a;
}

const char* sense_str(Sense s) {
  switch (s) {
    case Sense::LE: return "<=";
    case Sense::GE: return ">=";
    default: return "==";
  }
}

Sense parse_sense(const std::string& s) {
  if (s == "<=") return Sense::LE;
  if (s == ">=") return Sense::GE;
  if (s == "==") return Sense::EQ;
  throw std::runtime_error("program read: bad sense '" + s + "'");
}

}  // namespace

void ConicProgram::write(std::ostream& os) const {
  os.precision(17);
  os << "h2plan-program v1\n";
  os << "vars " << num_vars() << "\n";
  for (int v = 0; v < num_vars(); ++v) {
    os << "v " << (kind_[v] == VarKind::Binary ? 'B' : 'C') << ' ' << lb_[v]
       << ' ' << ub_[v] << ' ' << name_[v] << "\n";
  }
  os << "rows " << num_rows() << "\n";
  for (int r = 0; r < num_rows(); ++r) {
    os << "r " << sense_str(row_sense_[r]) << ' ' << row_rhs_[r] << ' '
       << row_nnz(r);
    for_row_terms(r, [&](int v, double c) { os << ' ' << v << ':' << c; });
    os << "\n";
  }
  os << "cones " << num_cones() << "\n";
  for (const auto& c : cones_) {
    os << (c.kind == ConeRow::Soc ? "soc " : "rsoc ");
    write_affine(os, c.u);
    if (c.kind == ConeRow::Rsoc) {
      os << " | ";
      write_affine(os, c.v);
    }
    os << " | " << c.norm.size();
    for (const auto& a : c.norm) {
      os << " | ";
      write_affine(os, a);
    }
    os << "\n";
  }
  os << "obj " << obj_constant_ << ' ' << objective_.size();
  for (const auto& t : objective_) os << ' ' << t.var << ':' << t.coef;
  os << "\nend\n";
}

ConicProgram ConicProgram::read(std::istream& is) {
  ConicProgram p;
  std::string word, version;
  is >> word >> version;
  if (word != "h2plan-program" || version != "v1")
    throw std::runtime_error("program read: unknown header");
  int nv = 0;
  is >> word >> nv;
  for (int i = 0; i < nv; ++i) {
    char tag, kind;
    double lo, hi;
    std::string name;
    is >> tag >> kind >> lo >> hi >> name;
    p.add_var(kind == 'B' ? VarKind::Binary : VarKind::Continuous, lo, hi,
              name);
  }
  int nr = 0;
  is >> word >> nr;
  for (int i = 0; i < nr; ++i) {
    char tag;
    std::string sense;
    double rhs;
    int nnz;
    is >> tag >> sense >> rhs >> nnz;
    std::vector<LinTerm> terms(nnz);
    for (auto& t : terms) {
      char colon;
      is >> t.var >> colon >> t.coef;
    }
    p.add_row(parse_sense(sense), rhs, terms);
  }
  int nc = 0;
  is >> word >> nc;
  std::string line;
  std::getline(is, line);  // finish the count line
  for (int i = 0; i < nc; ++i) {
    std::getline(is, line);
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    auto next_part = [&]() {
      char bar;
      ls >> bar;  // '|'
    };
    if (kind == "soc") {
      Affine t = read_affine(ls);
      next_part();
      size_t n;
      ls >> n;
      std::vector<Affine> norm;
      for (size_t j = 0; j < n; ++j) {
        next_part();
        norm.push_back(read_affine(ls));
      }
      p.add_soc(std::move(t), std::move(norm));
    } else if (kind == "rsoc") {
      Affine u = read_affine(ls);
      next_part();
      Affine v = read_affine(ls);
      next_part();
      size_t n;
      ls >> n;
      std::vector<Affine> norm;
      for (size_t j = 0; j < n; ++j) {
        next_part();
        norm.push_back(read_affine(ls));
      }
      p.add_rsoc(std::move(u), std::move(v), std::move(norm));
    } else {
      throw std::runtime_error("program read: bad cone kind '" + kind + "'");
    }
  }
  double oc;
  size_t on;
  is >> word >> oc >> on;
  p.set_objective_constant(oc);
  for (size_t i = 0; i < on; ++i) {
    char colon;
    LinTerm t;
    is >> t.var >> colon >> t.coef;
    p.add_objective_term(t.var, t.coef);
  }
  return p;
}

}  // namespace h2plan

#pragma once

// Solver-agnostic intermediate representation of the planning MIQCP:
// continuous/binary variables with bounds, one-sided linear rows, and
// convex cone rows (second-order / rotated second-order on affine
// expressions). Binaries never appear inside a quadratic (norm) slot.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace h2plan {

enum class VarKind : uint8_t { Continuous, Binary };
enum class Sense : uint8_t { LE, GE, EQ };

struct LinTerm {
  int32_t var;
  double coef;
};

struct Affine {
  std::vector<LinTerm> terms;
  double constant = 0.0;
};

struct ConeRow {
  enum Kind : uint8_t { Soc, Rsoc } kind = Soc;
  // Soc:  ||norm|| <= t      (t = `u`)
  // Rsoc: u * v >= sum norm_k^2, with u, v >= 0
  Affine u;
  Affine v;  // Rsoc only
  std::vector<Affine> norm;
};

struct PointCheck {
  double max_violation = 0.0;
  std::string worst;  // description of the worst row
};

class ConicProgram {
 public:
  int add_var(VarKind kind, double lb, double ub, std::string name);
  // One linear row; terms are copied into a flat pool.
  int add_row(Sense sense, double rhs, const std::vector<LinTerm>& terms);
  int add_soc(Affine t, std::vector<Affine> norm);
  int add_rsoc(Affine u, Affine v, std::vector<Affine> norm);
  void add_objective_term(int var, double coef);
  void set_objective_constant(double c) { obj_constant_ = c; }

  int num_vars() const { return static_cast<int>(kind_.size()); }
  int num_binaries() const { return n_binary_; }
  int num_continuous() const { return num_vars() - n_binary_; }
  int num_rows() const { return static_cast<int>(row_sense_.size()); }
  int num_cones() const { return static_cast<int>(cones_.size()); }

  VarKind var_kind(int v) const { return kind_[v]; }
  double lb(int v) const { return lb_[v]; }
  double ub(int v) const { return ub_[v]; }
  void set_bounds(int v, double lo, double hi);
  const std::string& var_name(int v) const { return name_[v]; }
  const std::vector<int>& binaries() const { return binary_ids_; }

  Sense row_sense(int r) const { return row_sense_[r]; }
  double row_rhs(int r) const { return row_rhs_[r]; }
  // Iterate the terms of linear row r.
  template <typename F>
  void for_row_terms(int r, F&& f) const {
    for (int32_t k = row_start_[r]; k < row_start_[r + 1]; ++k)
      f(term_var_[k], term_coef_[k]);
  }
  int row_nnz(int r) const { return row_start_[r + 1] - row_start_[r]; }

  const ConeRow& cone(int k) const { return cones_[k]; }
  const std::vector<LinTerm>& objective() const { return objective_; }
  double objective_constant() const { return obj_constant_; }

  double eval_affine(const Affine& a, const std::vector<double>& x) const;
  double eval_objective(const std::vector<double>& x) const;
  // Violation of every row, cone and bound at the point (0 when feasible).
  PointCheck check_point(const std::vector<double>& x) const;
  // Structural convexity audit: cone shapes recognizable, no binary in any
  // norm slot, rotated-cone sides provably nonnegative from bounds.
  std::vector<std::string> check_convexity() const;

  void write(std::ostream& os) const;
  static ConicProgram read(std::istream& is);

 private:
  std::vector<VarKind> kind_;
  std::vector<double> lb_, ub_;
  std::vector<std::string> name_;
  std::vector<int> binary_ids_;
  int n_binary_ = 0;

  std::vector<Sense> row_sense_;
  std::vector<double> row_rhs_;
  std::vector<int32_t> row_start_{0};
  std::vector<int32_t> term_var_;
  std::vector<double> term_coef_;

  std::vector<ConeRow> cones_;
  std::vector<LinTerm> objective_;
  double obj_constant_ = 0.0;
};

}  // namespace h2plan

#include "backend.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace h2plan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Standard-form image of a ConicProgram:
//   x: program variables (binaries as continuous columns)
//   A: equality rows + one fixing row per binary (coefficient toggled 0/1)
//   G: LE/GE rows, finite bounds, then cone blocks
// Fixing a binary switches its A row to z = v and relaxes its box rows by
// one unit each way so the fixed point keeps a strict cone interior.
struct Lowered {
  Eigen::SparseMatrix<double> G, A;
  Eigen::VectorXd c, h, b;
  std::vector<int> soc_dims;
  // per-binary slots
  std::vector<int> fix_row;    // row in A
  std::vector<int> ub_row;     // rows in G (h slots)
  std::vector<int> lb_row;
  std::vector<int> bin_var;
  double obj_constant = 0.0;
  int n = 0;
};

Lowered lower(const ConicProgram& p) {
  Lowered L;
  L.n = p.num_vars();
  L.obj_constant = p.objective_constant();

  L.c = Eigen::VectorXd::Zero(L.n);
  for (const auto& t : p.objective()) L.c(t.var) += t.coef;

  std::vector<Eigen::Triplet<double>> at, gt;
  std::vector<double> bv, hv;

  // equality rows
  for (int r = 0; r < p.num_rows(); ++r) {
    if (p.row_sense(r) != Sense::EQ) continue;
    const int row = static_cast<int>(bv.size());
    p.for_row_terms(r, [&](int v, double coef) {
      at.emplace_back(row, v, coef);
    });
    bv.push_back(p.row_rhs(r));
  }
  // binary fixing rows (structural; value toggled per node)
  for (int bin : p.binaries()) {
    const int row = static_cast<int>(bv.size());
    L.fix_row.push_back(row);
    L.bin_var.push_back(bin);
    at.emplace_back(row, bin, 1.0);
    bv.push_back(0.0);
  }

  // inequality rows
  for (int r = 0; r < p.num_rows(); ++r) {
    const Sense s = p.row_sense(r);
    if (s == Sense::EQ) continue;
    const int row = static_cast<int>(hv.size());
    const double sign = (s == Sense::LE) ? 1.0 : -1.0;
    p.for_row_terms(r, [&](int v, double coef) {
      gt.emplace_back(row, v, sign * coef);
    });
    hv.push_back(sign * p.row_rhs(r));
  }
  // variable bounds
  std::vector<int> ubrow(L.n, -1), lbrow(L.n, -1);
  for (int v = 0; v < L.n; ++v) {
    if (p.ub(v) < kInf) {
      ubrow[v] = static_cast<int>(hv.size());
      gt.emplace_back(ubrow[v], v, 1.0);
      hv.push_back(p.ub(v));
    }
    if (p.lb(v) > -kInf) {
      lbrow[v] = static_cast<int>(hv.size());
      gt.emplace_back(lbrow[v], v, -1.0);
      hv.push_back(-p.lb(v));
    }
  }
  for (int bin : p.binaries()) {
    L.ub_row.push_back(ubrow[bin]);
    L.lb_row.push_back(lbrow[bin]);
  }

  // cones
  auto push_affine = [&](const Affine& a, double scale, int row) {
    for (const auto& t : a.terms) gt.emplace_back(row, t.var, -scale * t.coef);
    hv.push_back(scale * a.constant);
  };
  for (int k = 0; k < p.num_cones(); ++k) {
    const ConeRow& c = p.cone(k);
    if (c.kind == ConeRow::Soc) {
      L.soc_dims.push_back(static_cast<int>(c.norm.size()) + 1);
      push_affine(c.u, 1.0, static_cast<int>(hv.size()));
      for (const auto& a : c.norm)
        push_affine(a, 1.0, static_cast<int>(hv.size()));
    } else {
      // u v >= |n|^2, u,v >= 0  <=>  ||(2n, u - v)|| <= u + v
      L.soc_dims.push_back(static_cast<int>(c.norm.size()) + 2);
      Affine sum = c.u, diff = c.u;
      for (const auto& t : c.v.terms) {
        sum.terms.push_back(t);
        diff.terms.push_back({t.var, -t.coef});
      }
      sum.constant += c.v.constant;
      diff.constant -= c.v.constant;
      push_affine(sum, 1.0, static_cast<int>(hv.size()));
      for (const auto& a : c.norm)
        push_affine(a, 2.0, static_cast<int>(hv.size()));
      push_affine(diff, 1.0, static_cast<int>(hv.size()));
    }
  }

  L.A.resize(static_cast<int>(bv.size()), L.n);
  L.A.setFromTriplets(at.begin(), at.end());
  L.A.makeCompressed();
  L.G.resize(static_cast<int>(hv.size()), L.n);
  L.G.setFromTriplets(gt.begin(), gt.end());
  L.G.makeCompressed();
  L.b = Eigen::Map<Eigen::VectorXd>(bv.data(), bv.size());
  L.h = Eigen::Map<Eigen::VectorXd>(hv.data(), hv.size());
  return L;
}

class IpmBackend final : public ConicBackend {
 public:
  IpmBackend(const ConicProgram& program, const SocpSettings& settings)
      : program_(&program),
        settings_(settings),
        lowered_(lower(program)),
        solver_(lowered_.G, lowered_.A, lowered_.c, lowered_.h, lowered_.b,
                lowered_.soc_dims, settings) {
    for (size_t j = 0; j < lowered_.fix_row.size(); ++j)
      fix_ptr_.push_back(
          &lowered_.A.coeffRef(lowered_.fix_row[j], lowered_.bin_var[j]));
  }

  int num_binaries() const override {
    return static_cast<int>(lowered_.fix_row.size());
  }

  BackendResult solve(const std::vector<int8_t>& fixings, double time_limit_s,
                      bool tightened = false) override {
    if (static_cast<int>(fixings.size()) != num_binaries())
      throw std::invalid_argument("backend: fixing vector size mismatch");
    for (int j = 0; j < num_binaries(); ++j) {
      const int8_t f = fixings[j];
      if (f == kBinFree) {
        *fix_ptr_[j] = 0.0;
        lowered_.b(lowered_.fix_row[j]) = 0.0;
        lowered_.h(lowered_.ub_row[j]) = 1.0;
        lowered_.h(lowered_.lb_row[j]) = 0.0;
      } else {
        const double v = static_cast<double>(f);
        *fix_ptr_[j] = 1.0;
        lowered_.b(lowered_.fix_row[j]) = v;
        lowered_.h(lowered_.ub_row[j]) = v + 1.0;
        lowered_.h(lowered_.lb_row[j]) = 1.0 - v;
      }
    }
    solver_.update_values(lowered_.c, lowered_.h, lowered_.b, nullptr,
                          &lowered_.A);
    solver_.settings() = settings_;
    solver_.settings().time_limit_s = time_limit_s;
    if (tightened) {
      solver_.settings().feastol *= 1e-2;
      solver_.settings().abstol *= 1e-2;
      solver_.settings().reltol *= 1e-2;
      solver_.settings().max_iters += 50;
      solver_.settings().nitref += 6;
    }

    SocpResult r = solver_.solve();
    BackendResult out;
    out.iters = r.iters;
    out.x.assign(r.x.data(), r.x.data() + r.x.size());
    out.objective = program_->eval_objective(out.x);
    if (r.optimal()) {
      out.status = BackendStatus::Optimal;
      out.dual_bound = r.dobj + lowered_.obj_constant;
      out.certificate = true;
    } else if (r.primal_infeasible()) {
      out.status = BackendStatus::Infeasible;
      out.dual_bound = kInf;
      out.certificate = true;
    } else if (r.dual_infeasible()) {
      out.status = BackendStatus::Unbounded;
      out.dual_bound = -kInf;
    } else if (r.status == SocpStatus::TimeLimit) {
      out.status = BackendStatus::TimeLimit;
      out.dual_bound = -kInf;
    } else {
      out.status = BackendStatus::NumericalTrouble;
      out.dual_bound = -kInf;
    }
    return out;
  }

  std::unique_ptr<ConicBackend> clone() const override {
    return std::make_unique<IpmBackend>(*program_, settings_);
  }

 private:
  const ConicProgram* program_;
  SocpSettings settings_;
  Lowered lowered_;
  SocpSolver solver_;
  std::vector<double*> fix_ptr_;
};

}  // namespace

std::unique_ptr<ConicBackend> make_ipm_backend(const ConicProgram& program,
                                               const SocpSettings& settings) {
  return std::make_unique<IpmBackend>(program, settings);
}

}  // namespace h2plan

#pragma once

// Primal-dual interior-point solver for second-order cone programs in
// standard form:
//
//   minimize    c'x
//   subject to  A x = b
//               G x + s = h,   s in K = R+^l x SOC(q_1) x ... x SOC(q_N)
//
// Homogeneous self-dual embedding with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector, after the ECOS scheme: each second-order
// cone scaling block is expanded by two rows/columns so the KKT matrix is
// quasidefinite with a static sparsity pattern, factorized with Eigen's
// sparse LDLT. Deterministic for fixed inputs and settings.
//
// Problem values (not patterns) may be updated between solves; the
// symbolic factorization and equilibration are computed once.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <vector>

namespace h2plan {

struct SocpSettings {
  double feastol = 1e-8;
  double abstol = 1e-8;
  double reltol = 1e-8;
  double feastol_inacc = 1e-4;
  double abstol_inacc = 5e-5;
  double reltol_inacc = 5e-5;
  int max_iters = 100;
  int nitref = 9;           // iterative refinement steps per KKT solve
  double irerrfact = 6.0;   // stop refining below this improvement factor
  double linsysacc = 1e-14;
  double deltastat = 7e-8;  // static KKT regularization
  double step_scale = 0.99;
  double stepmin = 1e-6;
  double stepmax = 0.999;
  double sigmamin = 1e-4;
  double sigmamax = 1.0;
  double safeguard = 500.0;  // divergence backtrack factor on pres
  int equil_iters = 3;
  double time_limit_s = 0.0;  // <= 0: none
};

enum class SocpStatus {
  Optimal,
  CloseToOptimal,
  PrimalInfeasible,
  CloseToPrimalInfeasible,
  DualInfeasible,
  CloseToDualInfeasible,
  MaxIters,
  Numerics,
  TimeLimit,
  Fatal,
};

struct SocpResult {
  SocpStatus status = SocpStatus::Fatal;
  Eigen::VectorXd x, y, z, s;
  double pobj = 0.0;   // c'x
  double dobj = 0.0;   // -(h'z + b'y)
  double gap = 0.0;    // s'z
  double relgap = 0.0;
  double pres = 0.0, dres = 0.0;
  int iters = 0;
  bool optimal() const {
    return status == SocpStatus::Optimal || status == SocpStatus::CloseToOptimal;
  }
  bool primal_infeasible() const {
    return status == SocpStatus::PrimalInfeasible ||
           status == SocpStatus::CloseToPrimalInfeasible;
  }
  bool dual_infeasible() const {
    return status == SocpStatus::DualInfeasible ||
           status == SocpStatus::CloseToDualInfeasible;
  }
};

class SocpSolver {
 public:
  using Sparse = Eigen::SparseMatrix<double>;
  using Vec = Eigen::VectorXd;

  // soc_dims[i] >= 2; the first l = G.rows() - sum(soc_dims) rows of G are
  // the positive orthant.
  SocpSolver(Sparse G, Sparse A, Vec c, Vec h, Vec b,
             std::vector<int> soc_dims, SocpSettings settings = {});

  // Replace numeric values; patterns of G and A must match construction.
  void update_values(const Vec& c, const Vec& h, const Vec& b,
                     const Sparse* G = nullptr, const Sparse* A = nullptr);

  SocpResult solve();

  SocpSettings& settings() { return settings_; }

 private:
  struct SoCone {
    int dim = 0;
    // NT scaling state
    Eigen::VectorXd q;  // dim-1
    double eta = 0, eta2 = 0, a = 0;
    double d1 = 0, u0 = 0, u1 = 0, v1 = 0;
  };

  void setup_kkt();
  void cache_kkt_pointers();
  void reset_kkt_scalings();
  void update_kkt_scalings();
  bool update_scalings(const Vec& s, const Vec& z);
  void scale(const Vec& z, Vec& lambda) const;       // lambda = W z
  void scale2(const Vec& x, Vec& out) const;         // out = W^2 x
  void conic_product(const Vec& u, const Vec& v, Vec& w) const;
  void conic_division(const Vec& u, const Vec& w, Vec& v) const;
  void bring_to_cone(const Vec& r, Vec& s) const;
  double line_search(const Vec& lambda, const Vec& ds, const Vec& dz,
                     double tau, double dtau, double kap, double dkap) const;
  // Solve K [dx;dy;dz~] = rhs with iterative refinement against the
  // unexpanded system; `init` treats the scaling block as identity.
  void solve_kkt(const Vec& rhs, Vec& dx, Vec& dy, Vec& dz, bool init);
  void expand_rhs(const Vec& x_part, const Vec& y_part, const Vec& z_part,
                  Vec& rhs) const;

  SocpSettings settings_;
  Sparse G_, A_, Gt_, At_;
  Vec c_, h_, b_;
  Vec x_equil_, A_equil_, G_equil_;
  int n_ = 0, p_ = 0, m_ = 0, l_ = 0;
  int dim_kkt_ = 0;
  std::vector<SoCone> cones_;
  Eigen::VectorXd lp_w2_;  // LP cone scaling, w_i^2 = s_i / z_i

  Sparse K_;
  Eigen::SimplicialLDLT<Sparse, Eigen::Upper> ldlt_;
  bool analyzed_ = false;
  std::vector<double*> kkt_v_ptr_;   // scaling block entries
  std::vector<double*> kkt_ag_ptr_;  // A' and G' entries

  // iterate state
  Vec x_, y_, z_, s_, lambda_;
  double tau_ = 1.0, kap_ = 1.0;
};

}  // namespace h2plan

#include "socp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace h2plan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void max_rows(Eigen::VectorXd& e, const Eigen::SparseMatrix<double>& m) {
  for (int j = 0; j < m.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it)
      e(it.row()) = std::max(std::abs(it.value()), e(it.row()));
}

void max_cols(Eigen::VectorXd& e, const Eigen::SparseMatrix<double>& m) {
  for (int j = 0; j < m.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it)
      e(j) = std::max(std::abs(it.value()), e(j));
}

void scale_rows(const Eigen::VectorXd& e, Eigen::SparseMatrix<double>& m) {
  for (int j = 0; j < m.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it)
      it.valueRef() /= e(it.row());
}

void scale_cols(const Eigen::VectorXd& e, Eigen::SparseMatrix<double>& m) {
  for (int j = 0; j < m.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, j); it; ++it)
      it.valueRef() /= e(j);
}

struct IterInfo {
  double gap = 0, mu = 0, kapovert = 0, pcost = 0, dcost = 0;
  std::optional<double> relgap;
  double pres = 0, dres = 0;
  std::optional<double> pinfres, dinfres;
  int iter = 0;

  // Preference order between saved iterates, after ECOS.
  bool better_than(const IterInfo& o) const {
    if (pinfres.has_value() && kapovert > 1.0) {
      return gap > 0 && o.gap > 0 && gap < o.gap && pinfres.value() > 0 &&
             pinfres.value() < o.pres && mu > 0 && mu < o.mu;
    }
    return gap > 0 && o.gap > 0 && gap < o.gap && pres > 0 && pres < o.pres &&
           dres > 0 && dres < o.dres && kapovert > 0 && kapovert < o.kapovert &&
           mu > 0 && mu < o.mu;
  }
};

}  // namespace

SocpSolver::SocpSolver(Sparse G, Sparse A, Vec c, Vec h, Vec b,
                       std::vector<int> soc_dims, SocpSettings settings)
    : settings_(settings),
      G_(std::move(G)),
      A_(std::move(A)),
      c_(std::move(c)),
      h_(std::move(h)),
      b_(std::move(b)) {
  n_ = static_cast<int>(c_.size());
  p_ = static_cast<int>(A_.rows());
  m_ = static_cast<int>(G_.rows());
  if (m_ <= 0) throw std::invalid_argument("socp: no conic constraints");
  int soc_total = 0;
  cones_.resize(soc_dims.size());
  for (size_t i = 0; i < soc_dims.size(); ++i) {
    if (soc_dims[i] < 2) throw std::invalid_argument("socp: cone dim < 2");
    cones_[i].dim = soc_dims[i];
    cones_[i].q.resize(soc_dims[i] - 1);
    soc_total += soc_dims[i];
  }
  l_ = m_ - soc_total;
  if (l_ < 0) throw std::invalid_argument("socp: cone dims exceed G rows");
  if (A_.rows() > 0 && A_.cols() != n_)
    throw std::invalid_argument("socp: A column mismatch");
  if (G_.cols() != n_) throw std::invalid_argument("socp: G column mismatch");

  G_.makeCompressed();
  A_.makeCompressed();

  // Equilibration: iterative sqrt max-norm scaling, cones kept uniform.
  x_equil_ = Vec::Ones(n_);
  A_equil_ = Vec::Ones(p_);
  G_equil_ = Vec::Ones(m_);
  Vec xt(n_), at(p_), gt(m_);
  for (int it = 0; it < settings_.equil_iters; ++it) {
    xt.setZero();
    at.setZero();
    gt.setZero();
    max_cols(xt, A_);
    max_cols(xt, G_);
    max_rows(at, A_);
    max_rows(gt, G_);
    int ind = l_;
    for (const SoCone& sc : cones_) {
      const double total = gt.segment(ind, sc.dim).sum();
      gt.segment(ind, sc.dim).setConstant(total);
      ind += sc.dim;
    }
    auto sq = [](double v) { return std::abs(v) < 1e-6 ? 1.0 : std::sqrt(v); };
    xt = xt.unaryExpr(sq);
    at = at.unaryExpr(sq);
    gt = gt.unaryExpr(sq);
    scale_rows(at, A_);
    scale_rows(gt, G_);
    scale_cols(xt, A_);
    scale_cols(xt, G_);
    x_equil_ = x_equil_.cwiseProduct(xt);
    A_equil_ = A_equil_.cwiseProduct(at);
    G_equil_ = G_equil_.cwiseProduct(gt);
  }
  c_ = c_.cwiseQuotient(x_equil_);
  b_ = b_.cwiseQuotient(A_equil_);
  h_ = h_.cwiseQuotient(G_equil_);

  Gt_ = G_.transpose();
  At_ = A_.transpose();

  lp_w2_ = Vec::Ones(l_);

  int expanded = 0;
  for (const SoCone& sc : cones_) expanded += sc.dim + 2;
  dim_kkt_ = n_ + p_ + l_ + expanded;

  setup_kkt();
}

void SocpSolver::update_values(const Vec& c, const Vec& h, const Vec& b,
                               const Sparse* G, const Sparse* A) {
  c_ = c.cwiseQuotient(x_equil_);
  h_ = h.cwiseQuotient(G_equil_);
  b_ = b.cwiseQuotient(A_equil_);
  if (G) {
    if (G->nonZeros() != G_.nonZeros())
      throw std::invalid_argument("socp: G pattern changed");
    for (int j = 0; j < G->outerSize(); ++j)
      for (Sparse::InnerIterator it(*G, j), dst(G_, j); it; ++it, ++dst)
        dst.valueRef() = it.value() / (G_equil_(it.row()) * x_equil_(j));
    Gt_ = G_.transpose();
  }
  if (A && p_ > 0) {
    if (A->nonZeros() != A_.nonZeros())
      throw std::invalid_argument("socp: A pattern changed");
    for (int j = 0; j < A->outerSize(); ++j)
      for (Sparse::InnerIterator it(*A, j), dst(A_, j); it; ++it, ++dst)
        dst.valueRef() = it.value() / (A_equil_(it.row()) * x_equil_(j));
    At_ = A_.transpose();
  }
  // refresh the A'/G' values inside K
  size_t ptr = 0;
  for (int col = 0; col < At_.cols(); ++col)
    for (Sparse::InnerIterator it(At_, col); it; ++it)
      *kkt_ag_ptr_[ptr++] = it.value();
  for (int col = 0; col < Gt_.cols(); ++col)
    for (Sparse::InnerIterator it(Gt_, col); it; ++it)
      *kkt_ag_ptr_[ptr++] = it.value();
}

void SocpSolver::setup_kkt() {
  K_.resize(dim_kkt_, dim_kkt_);
  size_t nnz = At_.nonZeros() + Gt_.nonZeros() + n_ + p_ + l_;
  for (const SoCone& sc : cones_) nnz += 3 * sc.dim + 1;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(nnz);
  for (int k = 0; k < n_; ++k) trips.emplace_back(k, k, settings_.deltastat);
  for (int k = 0; k < p_; ++k)
    trips.emplace_back(n_ + k, n_ + k, -settings_.deltastat);

  for (int col = 0; col < At_.cols(); ++col)
    for (Sparse::InnerIterator it(At_, col); it; ++it)
      trips.emplace_back(it.row(), n_ + col, it.value());

  {
    int col_k = n_ + p_;
    int col_g = 0;
    for (int col = 0; col < l_; ++col, ++col_g, ++col_k)
      for (Sparse::InnerIterator it(Gt_, col_g); it; ++it)
        trips.emplace_back(it.row(), col_k, it.value());
    for (const SoCone& sc : cones_) {
      for (int col = 0; col < sc.dim; ++col, ++col_g, ++col_k)
        for (Sparse::InnerIterator it(Gt_, col_g); it; ++it)
          trips.emplace_back(it.row(), col_k, it.value());
      col_k += 2;
    }
  }

  {
    int d = n_ + p_;
    for (int k = 0; k < l_; ++k, ++d) trips.emplace_back(d, d, -1.0);
    for (const SoCone& sc : cones_) {
      for (int k = 0; k < sc.dim; ++k, ++d) trips.emplace_back(d, d, -1.0);
      // v row: diagonal + column above it
      trips.emplace_back(d, d, -1.0);
      for (int k = 1; k < sc.dim; ++k)
        trips.emplace_back(d - sc.dim + k, d, 0.0);
      ++d;
      // u row
      trips.emplace_back(d, d, 1.0);
      for (int k = 0; k < sc.dim; ++k)
        trips.emplace_back(d - sc.dim - 1 + k, d, 0.0);
      ++d;
    }
  }

  K_.setFromTriplets(trips.begin(), trips.end());
  K_.makeCompressed();
  cache_kkt_pointers();
}

void SocpSolver::cache_kkt_pointers() {
  kkt_ag_ptr_.clear();
  kkt_v_ptr_.clear();
  for (int col = 0; col < At_.cols(); ++col)
    for (Sparse::InnerIterator it(At_, col); it; ++it)
      kkt_ag_ptr_.push_back(&K_.coeffRef(it.row(), n_ + col));
  {
    int col_k = n_ + p_;
    int col_g = 0;
    for (int col = 0; col < l_; ++col, ++col_g, ++col_k)
      for (Sparse::InnerIterator it(Gt_, col_g); it; ++it)
        kkt_ag_ptr_.push_back(&K_.coeffRef(it.row(), col_k));
    for (const SoCone& sc : cones_) {
      for (int col = 0; col < sc.dim; ++col, ++col_g, ++col_k)
        for (Sparse::InnerIterator it(Gt_, col_g); it; ++it)
          kkt_ag_ptr_.push_back(&K_.coeffRef(it.row(), col_k));
      col_k += 2;
    }
  }
  {
    int d = n_ + p_;
    for (int k = 0; k < l_; ++k, ++d)
      kkt_v_ptr_.push_back(&K_.coeffRef(d, d));
    for (const SoCone& sc : cones_) {
      for (int k = 0; k < sc.dim; ++k, ++d)
        kkt_v_ptr_.push_back(&K_.coeffRef(d, d));
      kkt_v_ptr_.push_back(&K_.coeffRef(d, d));
      for (int k = 1; k < sc.dim; ++k)
        kkt_v_ptr_.push_back(&K_.coeffRef(d - sc.dim + k, d));
      ++d;
      kkt_v_ptr_.push_back(&K_.coeffRef(d, d));
      for (int k = 0; k < sc.dim; ++k)
        kkt_v_ptr_.push_back(&K_.coeffRef(d - sc.dim - 1 + k, d));
      ++d;
    }
  }
}

void SocpSolver::reset_kkt_scalings() {
  size_t p = 0;
  for (int k = 0; k < l_; ++k) *kkt_v_ptr_[p++] = -1.0;
  for (const SoCone& sc : cones_) {
    for (int k = 0; k < sc.dim; ++k) *kkt_v_ptr_[p++] = -1.0;
    *kkt_v_ptr_[p++] = -1.0;
    for (int k = 1; k < sc.dim; ++k) *kkt_v_ptr_[p++] = 0.0;
    *kkt_v_ptr_[p++] = 1.0;
    for (int k = 0; k < sc.dim; ++k) *kkt_v_ptr_[p++] = 0.0;
  }
}

void SocpSolver::update_kkt_scalings() {
  size_t p = 0;
  for (int k = 0; k < l_; ++k)
    *kkt_v_ptr_[p++] = -lp_w2_(k) - settings_.deltastat;
  for (const SoCone& sc : cones_) {
    *kkt_v_ptr_[p++] = -sc.eta2 * sc.d1 - settings_.deltastat;
    for (int k = 1; k < sc.dim; ++k)
      *kkt_v_ptr_[p++] = -sc.eta2 - settings_.deltastat;
    *kkt_v_ptr_[p++] = -sc.eta2;
    for (int k = 1; k < sc.dim; ++k)
      *kkt_v_ptr_[p++] = -sc.eta2 * sc.v1 * sc.q(k - 1);
    *kkt_v_ptr_[p++] = sc.eta2 + settings_.deltastat;
    *kkt_v_ptr_[p++] = -sc.eta2 * sc.u0;
    for (int k = 1; k < sc.dim; ++k)
      *kkt_v_ptr_[p++] = -sc.eta2 * sc.u1 * sc.q(k - 1);
  }
}

bool SocpSolver::update_scalings(const Vec& s, const Vec& z) {
  lp_w2_ = s.head(l_).cwiseQuotient(z.head(l_));

  int k0 = l_;
  for (SoCone& sc : cones_) {
    const double sres =
        s(k0) * s(k0) - s.segment(k0 + 1, sc.dim - 1).squaredNorm();
    const double zres =
        z(k0) * z(k0) - z.segment(k0 + 1, sc.dim - 1).squaredNorm();
    if (sres <= 0.0 || zres <= 0.0) return false;
    const double snorm = std::sqrt(sres);
    const double znorm = std::sqrt(zres);
    const Vec skbar = s.segment(k0, sc.dim) / snorm;
    const Vec zkbar = z.segment(k0, sc.dim) / znorm;
    sc.eta2 = snorm / znorm;
    sc.eta = std::sqrt(sc.eta2);

    double gamma = std::sqrt(0.5 * (1.0 + skbar.dot(zkbar)));
    const double a = (0.5 / gamma) * (skbar(0) + zkbar(0));
    sc.q = (0.5 / gamma) *
           (skbar.tail(sc.dim - 1) - zkbar.tail(sc.dim - 1));
    const double w = sc.q.squaredNorm();

    const double cc = (1.0 + a) + w / (1.0 + a);
    const double dd = 1.0 + 2.0 / (1.0 + a) + w / ((1.0 + a) * (1.0 + a));
    const double d1 =
        std::max(0.0, 0.5 * (a * a + w * (1.0 - cc * cc / (1.0 + w * dd))));
    const double u0sq = a * a + w - d1;
    const double c2u2 = cc * cc / u0sq;
    if (c2u2 - dd <= 0.0) return false;
    sc.d1 = d1;
    sc.u0 = std::sqrt(u0sq);
    sc.u1 = std::sqrt(c2u2);
    sc.v1 = std::sqrt(c2u2 - dd);
    sc.a = a;
    k0 += sc.dim;
  }
  scale(z, lambda_);
  return true;
}

void SocpSolver::scale(const Vec& z, Vec& lambda) const {
  lambda.resize(m_);
  lambda.head(l_) =
      lp_w2_.cwiseSqrt().cwiseProduct(z.head(l_));
  int k0 = l_;
  for (const SoCone& sc : cones_) {
    const double zeta = sc.q.dot(z.segment(k0 + 1, sc.dim - 1));
    const double factor = z(k0) + zeta / (1.0 + sc.a);
    lambda(k0) = sc.eta * (sc.a * z(k0) + zeta);
    lambda.segment(k0 + 1, sc.dim - 1) =
        sc.eta * (z.segment(k0 + 1, sc.dim - 1) + factor * sc.q);
    k0 += sc.dim;
  }
}

void SocpSolver::scale2(const Vec& x, Vec& out) const {
  Vec tmp;
  scale(x, tmp);
  scale(tmp, out);
}

void SocpSolver::conic_product(const Vec& u, const Vec& v, Vec& w) const {
  w.resize(m_);
  w.head(l_) = u.head(l_).cwiseProduct(v.head(l_));
  int k0 = l_;
  for (const SoCone& sc : cones_) {
    w(k0) = u.segment(k0, sc.dim).dot(v.segment(k0, sc.dim));
    w.segment(k0 + 1, sc.dim - 1) =
        u(k0) * v.segment(k0 + 1, sc.dim - 1) +
        v(k0) * u.segment(k0 + 1, sc.dim - 1);
    k0 += sc.dim;
  }
}

void SocpSolver::conic_division(const Vec& u, const Vec& w, Vec& v) const {
  v.resize(m_);
  v.head(l_) = w.head(l_).cwiseQuotient(u.head(l_));
  int k0 = l_;
  for (const SoCone& sc : cones_) {
    const double u0 = u(k0);
    const double w0 = w(k0);
    const double rho =
        u0 * u0 - u.segment(k0 + 1, sc.dim - 1).squaredNorm();
    const double zeta =
        u.segment(k0 + 1, sc.dim - 1).dot(w.segment(k0 + 1, sc.dim - 1));
    const double factor = (zeta / u0 - w0) / rho;
    v(k0) = (u0 * w0 - zeta) / rho;
    v.segment(k0 + 1, sc.dim - 1) =
        factor * u.segment(k0 + 1, sc.dim - 1) +
        w.segment(k0 + 1, sc.dim - 1) / u0;
    k0 += sc.dim;
  }
}

void SocpSolver::bring_to_cone(const Vec& r, Vec& s) const {
  double alpha = -0.99;
  for (int i = 0; i < l_; ++i)
    if (r(i) <= 0 && -r(i) > alpha) alpha = -r(i);
  int k0 = l_;
  for (const SoCone& sc : cones_) {
    const double cres = r(k0) - r.segment(k0 + 1, sc.dim - 1).norm();
    if (cres <= 0 && -cres > alpha) alpha = -cres;
    k0 += sc.dim;
  }
  alpha += 1.0;
  s = r;
  s.head(l_).array() += alpha;
  k0 = l_;
  for (const SoCone& sc : cones_) {
    s(k0) += alpha;
    k0 += sc.dim;
  }
}

double SocpSolver::line_search(const Vec& lambda, const Vec& ds, const Vec& dz,
                               double tau, double dtau, double kap,
                               double dkap) const {
  double alpha = 10.0;
  if (l_ > 0) {
    const double rhomin =
        (ds.head(l_).cwiseQuotient(lambda.head(l_))).minCoeff();
    const double sigmin =
        (dz.head(l_).cwiseQuotient(lambda.head(l_))).minCoeff();
    const double eps = 1e-13;
    if (-sigmin > -rhomin)
      alpha = sigmin < 0.0 ? 1.0 / (-sigmin) : 1.0 / eps;
    else
      alpha = rhomin < 0.0 ? 1.0 / (-rhomin) : 1.0 / eps;
  }
  const double t1 = -tau / dtau;
  const double t2 = -kap / dkap;
  if (t1 > 0 && t1 < alpha) alpha = t1;
  if (t2 > 0 && t2 < alpha) alpha = t2;

  int k0 = l_;
  for (const SoCone& sc : cones_) {
    const double ln2 = lambda(k0) * lambda(k0) -
                       lambda.segment(k0 + 1, sc.dim - 1).squaredNorm();
    if (ln2 <= 0.0) {
      k0 += sc.dim;
      continue;
    }
    const double ln = std::sqrt(ln2);
    const Vec lkbar = lambda.segment(k0, sc.dim) / ln;
    const double lninv = 1.0 / ln;

    const double lds = lkbar(0) * ds(k0) -
                       lkbar.tail(sc.dim - 1)
                           .dot(ds.segment(k0 + 1, sc.dim - 1));
    const double ldz = lkbar(0) * dz(k0) -
                       lkbar.tail(sc.dim - 1)
                           .dot(dz.segment(k0 + 1, sc.dim - 1));

    double f = (lds + ds(k0)) / (lkbar(0) + 1.0);
    Vec rho = lninv * (ds.segment(k0 + 1, sc.dim - 1) -
                       f * lkbar.tail(sc.dim - 1));
    const double rhonorm = rho.norm() - lninv * lds;

    f = (ldz + dz(k0)) / (lkbar(0) + 1.0);
    Vec sig = lninv * (dz.segment(k0 + 1, sc.dim - 1) -
                       f * lkbar.tail(sc.dim - 1));
    const double signorm = sig.norm() - lninv * ldz;

    const double step = std::max(0.0, std::max(rhonorm, signorm));
    if (step != 0.0) alpha = std::min(alpha, 1.0 / step);
    k0 += sc.dim;
  }
  return std::clamp(alpha, settings_.stepmin, settings_.stepmax);
}

void SocpSolver::expand_rhs(const Vec& x_part, const Vec& y_part,
                            const Vec& z_part, Vec& rhs) const {
  rhs.resize(dim_kkt_);
  rhs.head(n_) = x_part;
  rhs.segment(n_, p_) = y_part;
  rhs.segment(n_ + p_, l_) = z_part.head(l_);
  int src = l_;
  int dst = n_ + p_ + l_;
  for (const SoCone& sc : cones_) {
    rhs.segment(dst, sc.dim) = z_part.segment(src, sc.dim);
    rhs.segment(dst + sc.dim, 2).setZero();
    src += sc.dim;
    dst += sc.dim + 2;
  }
}

void SocpSolver::solve_kkt(const Vec& rhs, Vec& dx, Vec& dy, Vec& dz,
                           bool init) {
  Vec sol = ldlt_.solve(rhs);
  const double err_thresh =
      (1.0 + rhs.lpNorm<Eigen::Infinity>()) * settings_.linsysacc;

  const Vec bx = rhs.head(n_);
  const Vec by = rhs.segment(n_, p_);
  // collapse the expanded z part of the rhs
  Vec bz(m_);
  {
    bz.head(l_) = rhs.segment(n_ + p_, l_);
    int src = n_ + p_ + l_;
    int dst = l_;
    for (const SoCone& sc : cones_) {
      bz.segment(dst, sc.dim) = rhs.segment(src, sc.dim);
      src += sc.dim + 2;
      dst += sc.dim;
    }
  }

  dz.resize(m_);
  double nerr_prev = kInf;
  Vec refine;
  for (int it = 0; it <= settings_.nitref; ++it) {
    dx = sol.head(n_);
    dy = sol.segment(n_, p_);
    {
      dz.head(l_) = sol.segment(n_ + p_, l_);
      int src = n_ + p_ + l_;
      int dst = l_;
      for (const SoCone& sc : cones_) {
        dz.segment(dst, sc.dim) = sol.segment(src, sc.dim);
        src += sc.dim + 2;
        dst += sc.dim;
      }
    }

    // residuals against the unexpanded (and unregularized) system
    Vec ex = bx - Gt_ * dz;
    if (p_ > 0) ex -= At_ * dy;
    Vec ey = by;
    if (p_ > 0) ey -= A_ * dx;
    Vec ez = bz - G_ * dx;
    if (init) {
      ez += dz;
    } else {
      Vec w2dz;
      scale2(dz, w2dz);
      ez += w2dz;
    }

    double nerr = std::max(ex.lpNorm<Eigen::Infinity>(),
                           ez.lpNorm<Eigen::Infinity>());
    if (p_ > 0) nerr = std::max(nerr, ey.lpNorm<Eigen::Infinity>());

    if (it > 0 && nerr > nerr_prev) {
      sol -= refine;
      break;
    }
    if (it == settings_.nitref || nerr < err_thresh ||
        (it > 0 && nerr_prev < settings_.irerrfact * nerr)) {
      break;
    }
    nerr_prev = nerr;

    Vec e;
    expand_rhs(ex, ey, ez, e);
    refine = ldlt_.solve(e);
    sol += refine;
  }

  dx = sol.head(n_);
  dy = sol.segment(n_, p_);
  dz.head(l_) = sol.segment(n_ + p_, l_);
  int src = n_ + p_ + l_;
  int dst = l_;
  for (const SoCone& sc : cones_) {
    dz.segment(dst, sc.dim) = sol.segment(src, sc.dim);
    src += sc.dim + 2;
    dst += sc.dim;
  }
}

SocpResult SocpSolver::solve() {
  const auto t_start = std::chrono::steady_clock::now();
  auto out_of_time = [&]() {
    if (settings_.time_limit_s <= 0) return false;
    const std::chrono::duration<double> el =
        std::chrono::steady_clock::now() - t_start;
    return el.count() > settings_.time_limit_s;
  };

  SocpResult res;
  reset_kkt_scalings();

  Vec rhs1, rhs2;
  expand_rhs(Vec::Zero(n_), b_, h_, rhs1);
  expand_rhs(-c_, Vec::Zero(p_), Vec::Zero(m_), rhs2);

  const double resx0 = std::max(1.0, c_.norm());
  const double resy0 = std::max(1.0, b_.norm());
  const double resz0 = std::max(1.0, h_.norm());

  if (!analyzed_) {
    ldlt_.analyzePattern(K_);
    analyzed_ = true;
  }
  ldlt_.factorize(K_);
  if (ldlt_.info() != Eigen::Success) {
    res.status = SocpStatus::Fatal;
    return res;
  }

  Vec dx1(n_), dy1(p_), dz1(m_), dx2(n_), dy2(p_), dz2(m_);
  solve_kkt(rhs1, dx1, dy1, dz1, true);
  x_ = dx1;
  bring_to_cone(-dz1, s_);
  solve_kkt(rhs2, dx2, dy2, dz2, true);
  y_ = dy2;
  bring_to_cone(dz2, z_);
  tau_ = 1.0;
  kap_ = 1.0;
  lambda_.resize(m_);

  rhs1.head(n_) = -c_;

  // saved best iterate
  Vec bx = x_, by_v = y_, bz = z_, bs = s_;
  double btau = tau_, bkap_v = kap_;
  IterInfo binfo;
  bool have_best = false;

  IterInfo info;
  Vec rx(n_), ry(p_), rz(m_);
  double hresx = 0, hresy = 0, hresz = 0, rt = 0;
  double cx = 0, by_d = 0, hz = 0;
  double nx = 0, ny = 0, nz = 0, ns = 0;
  double pres_prev = kInf;

  Vec Wdz(m_), dsbyW(m_), dsvec(m_), ds1(m_), ds2(m_);
  double step = 0.0, step_aff = 0.0;

  auto compute_residuals = [&]() {
    rx = -(Gt_ * z_);
    if (p_ > 0) rx -= At_ * y_;
    hresx = rx.norm();
    rx -= tau_ * c_;
    if (p_ > 0) {
      ry = A_ * x_;
      hresy = ry.norm();
      ry -= tau_ * b_;
    } else {
      hresy = 0.0;
    }
    rz = s_ + G_ * x_;
    hresz = rz.norm();
    rz -= tau_ * h_;
    cx = c_.dot(x_);
    by_d = p_ > 0 ? b_.dot(y_) : 0.0;
    hz = h_.dot(z_);
    rt = kap_ + cx + by_d + hz;
    nx = x_.norm();
    ny = y_.norm();
    nz = z_.norm();
    ns = s_.norm();
  };

  auto update_stats = [&]() {
    info.gap = s_.dot(z_);
    info.mu = (info.gap + kap_ * tau_) / (l_ + cones_.size() + 1);
    info.kapovert = kap_ / tau_;
    info.pcost = cx / tau_;
    info.dcost = -(hz + by_d) / tau_;
    if (info.pcost < 0)
      info.relgap = info.gap / (-info.pcost);
    else if (info.dcost > 0)
      info.relgap = info.gap / info.dcost;
    else
      info.relgap.reset();
    const double nry = p_ > 0 ? ry.norm() / std::max(resy0 + nx, 1.0) : 0.0;
    const double nrz = rz.norm() / std::max(resz0 + nx + ns, 1.0);
    info.pres = std::max(nry, nrz) / tau_;
    info.dres = rx.norm() / std::max(resx0 + ny + nz, 1.0) / tau_;
    info.pinfres.reset();
    info.dinfres.reset();
    if ((hz + by_d) / std::max(ny + nz, 1.0) < -settings_.reltol)
      info.pinfres = hresx / std::max(ny + nz, 1.0);
    if (cx / std::max(nx, 1.0) < -settings_.reltol)
      info.dinfres = std::max(hresy / std::max(nx, 1.0),
                              hresz / std::max(nx + ns, 1.0));
  };

  enum class Verdict { NotYet, Opt, Pinf, Dinf };
  auto check_exit = [&](bool reduced) {
    const double ft = reduced ? settings_.feastol_inacc : settings_.feastol;
    const double at = reduced ? settings_.abstol_inacc : settings_.abstol;
    const double rtol = reduced ? settings_.reltol_inacc : settings_.reltol;
    if ((-cx > 0 || -by_d - hz >= -at) && info.pres < ft && info.dres < ft &&
        (info.gap < at || (info.relgap && info.relgap.value() < rtol)))
      return Verdict::Opt;
    if (info.dinfres && info.dinfres.value() < ft && tau_ < kap_)
      return Verdict::Dinf;
    if (info.pinfres &&
        ((info.pinfres.value() < ft && tau_ < kap_) ||
         (tau_ < ft && kap_ < ft && info.pinfres.value() < ft)))
      return Verdict::Pinf;
    return Verdict::NotYet;
  };

  auto fill_result = [&](SocpStatus st) {
    res.status = st;
    res.x = x_.cwiseQuotient(x_equil_ * tau_);
    res.y = p_ > 0 ? Vec(y_.cwiseQuotient(A_equil_ * tau_)) : Vec(0);
    res.z = z_.cwiseQuotient(G_equil_ * tau_);
    res.s = s_.cwiseProduct(G_equil_) / tau_;
    res.pobj = info.pcost;
    res.dobj = info.dcost;
    res.gap = info.gap;
    res.relgap = info.relgap.value_or(kInf);
    res.pres = info.pres;
    res.dres = info.dres;
    res.iters = info.iter;
  };
  auto restore_best = [&]() {
    if (!have_best) return;
    x_ = bx;
    y_ = by_v;
    z_ = bz;
    s_ = bs;
    tau_ = btau;
    kap_ = bkap_v;
    info = binfo;
    compute_residuals();
    update_stats();
  };
  auto verdict_status = [&](Verdict v, bool reduced) {
    switch (v) {
      case Verdict::Opt:
        return reduced ? SocpStatus::CloseToOptimal : SocpStatus::Optimal;
      case Verdict::Pinf:
        return reduced ? SocpStatus::CloseToPrimalInfeasible
                       : SocpStatus::PrimalInfeasible;
      case Verdict::Dinf:
        return reduced ? SocpStatus::CloseToDualInfeasible
                       : SocpStatus::DualInfeasible;
      default:
        return SocpStatus::Numerics;
    }
  };

  for (info.iter = 0; info.iter <= settings_.max_iters; ++info.iter) {
    compute_residuals();
    update_stats();

    // diverging or negative-gap iterate: back up and report
    if (info.iter > 0 &&
        (info.pres > settings_.safeguard * pres_prev || info.gap < 0)) {
      restore_best();
      const Verdict v = check_exit(true);
      fill_result(v == Verdict::NotYet ? SocpStatus::Numerics
                                       : verdict_status(v, true));
      return res;
    }
    pres_prev = info.pres;

    Verdict v = check_exit(false);
    if (v != Verdict::NotYet) {
      fill_result(verdict_status(v, false));
      return res;
    }

    if (info.iter > 0 && step == settings_.stepmin * settings_.step_scale) {
      restore_best();
      v = check_exit(true);
      fill_result(v == Verdict::NotYet ? SocpStatus::Numerics
                                       : verdict_status(v, true));
      return res;
    }
    if (info.iter == settings_.max_iters) {
      if (have_best && !info.better_than(binfo)) restore_best();
      v = check_exit(true);
      fill_result(v == Verdict::NotYet ? SocpStatus::MaxIters
                                       : verdict_status(v, true));
      return res;
    }
    if (std::isnan(info.pcost)) {
      if (have_best && !info.better_than(binfo)) restore_best();
      v = check_exit(true);
      fill_result(v == Verdict::NotYet ? SocpStatus::Numerics
                                       : verdict_status(v, true));
      return res;
    }
    if (out_of_time()) {
      if (have_best && !info.better_than(binfo)) restore_best();
      fill_result(SocpStatus::TimeLimit);
      return res;
    }

    if (!have_best || info.better_than(binfo)) {
      bx = x_;
      by_v = y_;
      bz = z_;
      bs = s_;
      btau = tau_;
      bkap_v = kap_;
      binfo = info;
      have_best = true;
    }

    if (!update_scalings(s_, z_)) {
      restore_best();
      v = check_exit(true);
      fill_result(v == Verdict::NotYet ? SocpStatus::Numerics
                                       : verdict_status(v, true));
      return res;
    }
    update_kkt_scalings();
    ldlt_.factorize(K_);
    if (ldlt_.info() != Eigen::Success) {
      restore_best();
      fill_result(SocpStatus::Numerics);
      return res;
    }

    solve_kkt(rhs1, dx1, dy1, dz1, false);

    // affine rhs: [rx; -ry; s - rz]
    {
      Vec zpart = s_ - rz;
      expand_rhs(rx, -ry, zpart, rhs2);
    }
    solve_kkt(rhs2, dx2, dy2, dz2, false);

    const double dtau_denom =
        kap_ / tau_ - c_.dot(dx1) - (p_ > 0 ? b_.dot(dy1) : 0.0) -
        h_.dot(dz1);
    const double dtauaff =
        (rt - kap_ + c_.dot(dx2) + (p_ > 0 ? b_.dot(dy2) : 0.0) +
         h_.dot(dz2)) /
        dtau_denom;

    dz2 += dtauaff * dz1;
    scale(dz2, Wdz);
    dsbyW = -Wdz - lambda_;
    const double dkapaff = -kap_ - kap_ / tau_ * dtauaff;

    step_aff = line_search(lambda_, dsbyW, Wdz, tau_, dtauaff, kap_, dkapaff);
    const double sigma =
        std::clamp(std::pow(1.0 - step_aff, 3.0), settings_.sigmamin,
                   settings_.sigmamax);

    // combined rhs
    conic_product(lambda_, lambda_, ds1);
    conic_product(dsbyW, Wdz, ds2);
    const double sigmamu = sigma * info.mu;
    ds1 += ds2;
    ds1.head(l_).array() -= sigmamu;
    {
      int k0 = l_;
      for (const SoCone& sc : cones_) {
        ds1(k0) -= sigmamu;
        k0 += sc.dim;
      }
    }
    conic_division(lambda_, ds1, dsbyW);
    scale(dsbyW, ds1);  // ds1 = W (lambda \ ds)

    const double one_minus_sigma = 1.0 - sigma;
    {
      Vec zpart = -one_minus_sigma * rz + ds1;
      Vec xpart = one_minus_sigma * rx;
      Vec ypart = -one_minus_sigma * ry;
      expand_rhs(xpart, ypart, zpart, rhs2);
    }
    solve_kkt(rhs2, dx2, dy2, dz2, false);

    const double bkap = kap_ * tau_ + dkapaff * dtauaff - sigmamu;
    const double dtau =
        (one_minus_sigma * rt - bkap / tau_ + c_.dot(dx2) +
         (p_ > 0 ? b_.dot(dy2) : 0.0) + h_.dot(dz2)) /
        dtau_denom;

    dx2 += dtau * dx1;
    dy2 += dtau * dy1;
    dz2 += dtau * dz1;

    scale(dz2, Wdz);
    dsbyW = -(dsbyW + Wdz);
    const double dkap = -(bkap + kap_ * dtau) / tau_;

    step = settings_.step_scale *
           line_search(lambda_, dsbyW, Wdz, tau_, dtau, kap_, dkap);
    scale(dsbyW, dsvec);

    x_ += step * dx2;
    y_ += step * dy2;
    z_ += step * dz2;
    s_ += step * dsvec;
    kap_ += step * dkap;
    tau_ += step * dtau;
  }

  fill_result(SocpStatus::MaxIters);
  return res;
}

}  // namespace h2plan

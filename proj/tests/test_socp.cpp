#include "doctest.h"

#include <Eigen/Sparse>

#include "socp.hpp"

using h2plan::SocpSettings;
using h2plan::SocpSolver;
using h2plan::SocpStatus;

namespace {

Eigen::SparseMatrix<double> sparse(int rows, int cols,
                                   const std::vector<Eigen::Triplet<double>>& t) {
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

TEST_CASE("lp basic") {
  // min -x1 - 2 x2  s.t.  x1 + x2 <= 1, x >= 0
  std::vector<Eigen::Triplet<double>> gt = {
      {0, 0, 1.0}, {0, 1, 1.0}, {1, 0, -1.0}, {2, 1, -1.0}};
  Eigen::VectorXd c(2), h(3), b(0);
  c << -1.0, -2.0;
  h << 1.0, 0.0, 0.0;
  SocpSolver s(sparse(3, 2, gt), Eigen::SparseMatrix<double>(0, 2), c, h, b,
               {});
  auto r = s.solve();
  REQUIRE(r.optimal());
  CHECK(r.pobj == doctest::Approx(-2.0).epsilon(1e-7));
  CHECK(r.x(0) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("lp with equality") {
  // min x1 + x2  s.t.  x1 - x2 = 1, x >= 0  ->  (1, 0)
  std::vector<Eigen::Triplet<double>> at = {{0, 0, 1.0}, {0, 1, -1.0}};
  std::vector<Eigen::Triplet<double>> gt = {{0, 0, -1.0}, {1, 1, -1.0}};
  Eigen::VectorXd c(2), h(2), b(1);
  c << 1.0, 1.0;
  h << 0.0, 0.0;
  b << 1.0;
  SocpSolver s(sparse(2, 2, gt), sparse(1, 2, at), c, h, b, {});
  auto r = s.solve();
  REQUIRE(r.optimal());
  CHECK(r.pobj == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("soc extreme point") {
  // min -x1  s.t.  ||(x1, x2)|| <= 1
  std::vector<Eigen::Triplet<double>> gt = {{1, 0, 1.0}, {2, 1, 1.0}};
  Eigen::VectorXd c(2), h(3), b(0);
  c << -1.0, 0.0;
  h << 1.0, 0.0, 0.0;
  SocpSolver s(sparse(3, 2, gt), Eigen::SparseMatrix<double>(0, 2), c, h, b,
               {3});
  auto r = s.solve();
  REQUIRE(r.optimal());
  CHECK(r.pobj == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x(1) == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("min norm on a line") {
  // min t  s.t.  x1 + x2 = 1, ||(x1, x2)|| <= t   ->  t = sqrt(1/2)
  std::vector<Eigen::Triplet<double>> at = {{0, 0, 1.0}, {0, 1, 1.0}};
  std::vector<Eigen::Triplet<double>> gt = {
      {0, 2, -1.0}, {1, 0, -1.0}, {2, 1, -1.0}};
  Eigen::VectorXd c(3), h(3), b(1);
  c << 0.0, 0.0, 1.0;
  h.setZero();
  b << 1.0;
  SocpSolver s(sparse(3, 3, gt), sparse(1, 3, at), c, h, b, {3});
  auto r = s.solve();
  REQUIRE(r.optimal());
  CHECK(r.pobj == doctest::Approx(std::sqrt(0.5)).epsilon(1e-7));
  CHECK(r.x(0) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(r.x(1) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("primal infeasible") {
  // x <= -1 and x >= 0
  std::vector<Eigen::Triplet<double>> gt = {{0, 0, 1.0}, {1, 0, -1.0}};
  Eigen::VectorXd c(1), h(2), b(0);
  c << 1.0;
  h << -1.0, 0.0;
  SocpSolver s(sparse(2, 1, gt), Eigen::SparseMatrix<double>(0, 1), c, h, b,
               {});
  auto r = s.solve();
  CHECK(r.primal_infeasible());
}

TEST_CASE("dual infeasible / unbounded") {
  // min -x  s.t.  x >= 0
  std::vector<Eigen::Triplet<double>> gt = {{0, 0, -1.0}};
  Eigen::VectorXd c(1), h(1), b(0);
  c << -1.0;
  h << 0.0;
  SocpSolver s(sparse(1, 1, gt), Eigen::SparseMatrix<double>(0, 1), c, h, b,
               {});
  auto r = s.solve();
  CHECK(r.dual_infeasible());
}

TEST_CASE("projection onto a shifted disk with a box") {
  // min t s.t. ||(x - 3, y - 4)|| <= t, x <= 1, y <= 1
  // nearest reachable point is the corner (1,1): t = sqrt(4 + 9)
  std::vector<Eigen::Triplet<double>> gt = {
      {0, 0, 1.0}, {1, 1, 1.0},
      {2, 2, -1.0}, {3, 0, -1.0}, {4, 1, -1.0}};
  Eigen::VectorXd c(3), h(5), b(0);
  c << 0.0, 0.0, 1.0;
  h << 1.0, 1.0, 0.0, -3.0, -4.0;
  SocpSolver s(sparse(5, 3, gt), Eigen::SparseMatrix<double>(0, 3), c, h, b,
               {3});
  auto r = s.solve();
  REQUIRE(r.optimal());
  CHECK(r.pobj == doctest::Approx(std::sqrt(13.0)).epsilon(1e-7));
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("badly scaled lp equilibrates") {
  // min x2 s.t. 1e7 x1 >= 1e7, x2 >= 1e-4 x1
  std::vector<Eigen::Triplet<double>> gt = {
      {0, 0, -1e7}, {1, 0, 1e-4}, {1, 1, -1.0}};
  Eigen::VectorXd c(2), h(2), b(0);
  c << 0.0, 1.0;
  h << -1e7, 0.0;
  SocpSolver s(sparse(2, 2, gt), Eigen::SparseMatrix<double>(0, 2), c, h, b,
               {});
  auto r = s.solve();
  REQUIRE(r.optimal());
  CHECK(r.pobj == doctest::Approx(1e-4).epsilon(1e-6));
}

TEST_CASE("value update reuses the solver") {
  // min c'x s.t. x1 + x2 <= ub, x >= 0 with two different ub values
  std::vector<Eigen::Triplet<double>> gt = {
      {0, 0, 1.0}, {0, 1, 1.0}, {1, 0, -1.0}, {2, 1, -1.0}};
  Eigen::VectorXd c(2), h(3), b(0);
  c << -1.0, -2.0;
  h << 1.0, 0.0, 0.0;
  auto G = sparse(3, 2, gt);
  SocpSolver s(G, Eigen::SparseMatrix<double>(0, 2), c, h, b, {});
  auto r1 = s.solve();
  REQUIRE(r1.optimal());
  CHECK(r1.pobj == doctest::Approx(-2.0).epsilon(1e-7));
  h(0) = 3.0;
  s.update_values(c, h, b);
  auto r2 = s.solve();
  REQUIRE(r2.optimal());
  CHECK(r2.pobj == doctest::Approx(-6.0).epsilon(1e-7));
}

TEST_CASE("determinism") {
  std::vector<Eigen::Triplet<double>> gt = {
      {0, 2, -1.0}, {1, 0, -1.0}, {2, 1, -1.0}, {3, 0, 1.0}, {3, 1, 2.0}};
  Eigen::VectorXd c(3), h(4), b(0);
  c << 0.1, -0.3, 1.0;
  h << 0.0, 0.0, 0.0, 2.5;
  auto run = [&]() {
    SocpSolver s(sparse(4, 3, gt), Eigen::SparseMatrix<double>(0, 3), c, h, b,
                 {3});
    return s.solve();
  };
  auto r1 = run();
  auto r2 = run();
  REQUIRE(r1.optimal());
  CHECK(r1.pobj == r2.pobj);
  CHECK(r1.iters == r2.iters);
  CHECK((r1.x - r2.x).norm() == 0.0);
}

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "kerrdg/analysis.hpp"
#include "kerrdg/basis.hpp"
#include "kerrdg/dg_field.hpp"
#include "kerrdg/error.hpp"

using namespace kerrdg;

namespace {

double integrate(const QuadratureRule& r, const auto& f) {
  double s = 0.0;
  for (std::size_t q = 0; q < r.nodes.size(); ++q) s += r.weights[q] * f(r.nodes[q]);
  return s;
}

}  // namespace

TEST(Gauss, OnePoint) {
  auto r = gauss_quadrature(1);
  ASSERT_EQ(r.nodes.size(), 1u);
  EXPECT_NEAR(r.nodes[0], 0.0, 1e-15);
  EXPECT_NEAR(r.weights[0], 2.0, 1e-15);
}

TEST(Gauss, TwoPoint) {
  auto r = gauss_quadrature(2);
  EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
}

TEST(Gauss, FivePointEighthPower) {
  auto r = gauss_quadrature(5);
  EXPECT_NEAR(integrate(r, [](double x) { return std::pow(x, 8); }), 2.0 / 9.0, 1e-14);
}

TEST(Gauss, ExactForDegreeTwoNMinusOne) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 10; ++n) {
    auto r = gauss_quadrature(n);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> c(2 * n);
      for (auto& v : c) v = u(rng);
      double exact = 0.0;
      for (int p = 0; p < 2 * n; ++p)
        if (p % 2 == 0) exact += 2.0 * c[p] / (p + 1);
      double q = integrate(r, [&](double x) {
        double s = 0.0;
        for (int p = 2 * n - 1; p >= 0; --p) s = s * x + c[p];
        return s;
      });
      EXPECT_NEAR(q, exact, 1e-12) << "n=" << n;
    }
  }
}

TEST(Gauss, WeightsPositiveNodesSorted) {
  for (int n = 1; n <= 16; ++n) {
    auto r = gauss_quadrature(n);
    double sum = 0.0;
    for (std::size_t q = 0; q < r.nodes.size(); ++q) {
      EXPECT_GT(r.weights[q], 0.0);
      if (q > 0) {
        EXPECT_LT(r.nodes[q - 1], r.nodes[q]);
      }
      sum += r.weights[q];
    }
    EXPECT_NEAR(sum, 2.0, 1e-14);
  }
}

TEST(Basis, RejectsDegreeZero) {
  EXPECT_THROW(Basis(0), InvalidArgument);
  EXPECT_THROW(Basis(-1), InvalidArgument);
}

TEST(Basis, QuadratureCount) {
  for (int k = 1; k <= 3; ++k) {
    Basis b(k);
    EXPECT_EQ(b.n_modes(), k + 1);
    EXPECT_EQ(b.n_quad(), 2 * (k + 1));
  }
}

TEST(Basis, Orthonormal) {
  for (int k = 1; k <= 6; ++k) {
    Basis b(k);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) {
        double s = 0.0;
        for (int q = 0; q < b.n_quad(); ++q) s += b.weights()[q] * b.phi(q, i) * b.phi(q, j);
        EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-13);
      }
    auto ops = element_operators(b);
    EXPECT_NEAR((ops.mass - LocalMatrix::Identity(k + 1, k + 1)).norm(), 0.0, 1e-13);
  }
}

TEST(Basis, StiffnessEntry) {
  for (int k = 1; k <= 3; ++k) {
    auto ops = element_operators(Basis(k));
    EXPECT_NEAR(ops.stiffness(1, 0), std::sqrt(3.0), 1e-13);
    EXPECT_NEAR(ops.stiffness(0, 1), 0.0, 1e-13);
  }
}

TEST(Basis, StiffnessPlusTransposeIsTraceProduct) {
  // int (phi_i phi_j)' = phi_i(1) phi_j(1) - phi_i(-1) phi_j(-1)
  Basis b(3);
  auto ops = element_operators(b);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(ops.stiffness(i, j) + ops.stiffness(j, i),
                  ops.lift_right(i) * ops.lift_right(j) - ops.lift_left(i) * ops.lift_left(j), 1e-13);
}

TEST(Basis, LiftVectors) {
  for (int k = 1; k <= 3; ++k) {
    auto ops = element_operators(Basis(k));
    for (int i = 0; i <= k; ++i) {
      EXPECT_NEAR(ops.lift_right(i), std::sqrt((2.0 * i + 1.0) / 2.0), 1e-14);
      EXPECT_NEAR(ops.lift_left(i), (i % 2 ? -1.0 : 1.0) * std::sqrt((2.0 * i + 1.0) / 2.0), 1e-14);
    }
  }
}

TEST(Basis, DerivativeMatchesFiniteDifference) {
  const double h = 1e-6;
  for (int m = 0; m <= 5; ++m)
    for (double x : {-0.9, -0.3, 0.2, 0.7})
      EXPECT_NEAR(legendre_orthonormal_deriv(m, x),
                  (legendre_orthonormal(m, x + h) - legendre_orthonormal(m, x - h)) / (2 * h), 1e-7);
}

TEST(Projection, ReproducesPolynomials) {
  Mesh mesh(-1.0, 3.0, 5);
  for (int k = 1; k <= 3; ++k) {
    Basis b(k);
    auto f = [k](double x) {
      double s = 0.0;
      for (int p = 0; p <= k; ++p) s += (p + 1) * std::pow(x, p) * (p % 2 ? -0.5 : 1.0);
      return s;
    };
    DgField u = project_l2(f, mesh, b);
    for (double x : {-0.95, -0.1, 0.5, 1.3, 2.2, 2.99}) EXPECT_NEAR(u.eval(mesh, b, x), f(x), 1e-12);
    auto err = error_norms(u, f, mesh, b);
    EXPECT_LT(err.l2, 1e-12);
    EXPECT_LT(err.linf, 1e-12);
  }
}

TEST(Projection, ZeroFunction) {
  Mesh mesh(0.0, 1.0, 4);
  Basis b(2);
  DgField u = project_l2([](double) { return 0.0; }, mesh, b);
  for (double c : u.coeffs()) EXPECT_EQ(c, 0.0);
}

TEST(Projection, SineOrders) {
  auto f = [](double x) { return std::sin(std::numbers::pi * x); };
  for (int k = 1; k <= 2; ++k) {
    Basis b(k);
    std::vector<ErrorNorms> e;
    std::vector<std::size_t> ns{8, 16, 32};
    for (auto n : ns) {
      Mesh mesh(0.0, 2.0, n);
      e.push_back(error_norms(project_l2(f, mesh, b), f, mesh, b));
    }
    auto table = convergence_table(ns, e);
    EXPECT_NEAR(table.back().l2_order, k + 1.0, 0.2) << "k=" << k;
  }
}

TEST(Projection, GaussRadauQuadraticLinearOracle) {
  Mesh mesh(0.0, 1.0, 1);
  Basis b(1);
  auto f = [](double x) { return x * x; };
  // mean 1/3 and right trace 1: p = 1/3 + 4/3 (x - 1/2)
  DgField minus = project_gauss_radau(f, mesh, b, RadauSide::Minus);
  EXPECT_NEAR(minus.eval(mesh, b, 0.25), 0.0, 1e-14);
  EXPECT_NEAR(b.right_trace(minus.element(0)), 1.0, 1e-14);
  EXPECT_NEAR(b.left_trace(minus.element(0)), -1.0 / 3.0, 1e-14);
  // mean 1/3 and left trace 0: p = 2x/3
  DgField plus = project_gauss_radau(f, mesh, b, RadauSide::Plus);
  EXPECT_NEAR(b.left_trace(plus.element(0)), 0.0, 1e-14);
  EXPECT_NEAR(b.right_trace(plus.element(0)), 2.0 / 3.0, 1e-14);
}

TEST(Projection, GaussRadauTraceAndMoments) {
  Mesh mesh(0.0, 2.0, 7);
  auto f = [](double x) { return std::exp(std::sin(3 * x)); };
  for (int k = 1; k <= 3; ++k) {
    Basis b(k);
    DgField l2 = project_l2(f, mesh, b);
    DgField rm = project_gauss_radau(f, mesh, b, RadauSide::Minus);
    DgField rp = project_gauss_radau(f, mesh, b, RadauSide::Plus);
    for (std::size_t j = 0; j < mesh.size(); ++j) {
      EXPECT_NEAR(b.right_trace(rm.element(j)), f(mesh.edge(j + 1)), 1e-13);
      EXPECT_NEAR(b.left_trace(rp.element(j)), f(mesh.edge(j)), 1e-13);
      for (int m = 0; m < k; ++m) {
        EXPECT_NEAR(rm(j, m), l2(j, m), 1e-14);
        EXPECT_NEAR(rp(j, m), l2(j, m), 1e-14);
      }
    }
  }
}

TEST(Projection, PointwiseCube) {
  Mesh mesh(0.0, 1.0, 3);
  Basis b(1);
  DgField u = project_l2([](double x) { return x; }, mesh, b);
  DgField c = project_pointwise(u, b, [](double v) { return v * v * v; });
  DgField ref = project_l2([](double x) { return x * x * x; }, mesh, b);
  EXPECT_LT(max_abs_diff(c, ref), 1e-14);
}

TEST(Mesh, LocateAndEdges) {
  Mesh mesh(0.0, 6.0, 12);
  EXPECT_DOUBLE_EQ(mesh.h(), 0.5);
  EXPECT_DOUBLE_EQ(mesh.edge(12), 6.0);
  auto [j, xi] = mesh.locate(6.0);
  EXPECT_EQ(j, 11u);
  EXPECT_NEAR(xi, 1.0, 1e-14);
  auto [j2, xi2] = mesh.locate(1.25);
  EXPECT_EQ(j2, 2u);
  EXPECT_NEAR(xi2, 0.0, 1e-14);
}

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "soalm/program.hpp"
#include "test_support.hpp"

using namespace soalm;
using namespace soalm::test;

TEST_SUITE_BEGIN("program");

TEST_CASE("builtin dimensions and references") {
  Program nlp = builtin("nlp_toy");
  CHECK(nlp.n == 2);
  CHECK(nlp.m == 1);
  CHECK(nlp.cone.dim() == 1);
  REQUIRE(nlp.reference.has_value());
  CHECK(nlp.reference_multipliers() == Vector{-1.0, 0.0});

  Program soc = builtin("soc_toy");
  CHECK(soc.n == 3);
  CHECK(soc.m == 0);
  CHECK(soc.cone.dim() == 3);
  CHECK(soc.reference_multipliers() == Vector{-1.5, -2.0, 2.5});

  Program sdp = builtin("sdp_toy");
  CHECK(sdp.n == 3);
  CHECK(sdp.m == 0);
  CHECK(sdp.cone.dim() == 3);  // packed order-2 block
  CHECK(sdp.cone.blocks()[0].kind == BlockKind::Psd);
  CHECK(sdp.reference_multipliers() == Vector{0.0, 0.0, 3.0});

  CHECK_THROWS_AS(builtin("nope"), std::invalid_argument);
}

TEST_CASE("nlp_toy oracle values") {
  Program p = builtin("nlp_toy");
  Vector x{0.0, 2.0};
  CHECK(p.f(x) == doctest::Approx(-2.0));
  CHECK(p.grad_f(x) == Vector{-1.0, 0.0});
  CHECK(p.h(x) == Vector{0.0});
  CHECK(p.g(x) == Vector{2.0});
  Matrix Jh = p.jac_h(x);
  CHECK(Jh(0, 0) == 1.0);
  CHECK(Jh(0, 1) == 0.0);
  Matrix Jg = p.jac_g(x);
  CHECK(Jg(0, 0) == 0.0);
  CHECK(Jg(0, 1) == 1.0);
  SymMatrix H = p.hess_lagrangian(x, {0.0}, {0.0});
  CHECK(max_abs_diff(H, SymMatrix::identity(2)) == 0.0);
}

TEST_CASE("references satisfy the first-order conditions") {
  for (const char* name : {"nlp_toy", "soc_toy", "sdp_toy"}) {
    Program p = builtin(name);
    REQUIRE(p.reference.has_value());
    auto res = kkt_residual(p, p.reference->x, p.reference->lambda, p.reference->mu);
    CAPTURE(name);
    CHECK(res.total() <= 1e-13);
  }
}

TEST_CASE("residual components isolate each violation") {
  Program p = builtin("nlp_toy");
  // stationary but infeasible in the equality
  auto r1 = kkt_residual(p, {1.0, 2.0}, {0.0}, {0.0});
  CHECK(r1.stationarity == doctest::Approx(0.0));
  CHECK(r1.eq_feas == doctest::Approx(1.0));
  CHECK(r1.cone_feas == doctest::Approx(0.0));
  CHECK(r1.dual_feas == doctest::Approx(0.0));
  CHECK(r1.complementarity == doctest::Approx(0.0));
  CHECK(r1.total() == doctest::Approx(1.0));

  // cone and dual violations with a sign-crossed pairing
  auto r2 = kkt_residual(p, {0.0, -1.0}, {0.0}, {-2.0});
  CHECK(r2.cone_feas == doctest::Approx(1.0));
  CHECK(r2.dual_feas == doctest::Approx(2.0));
  CHECK(r2.complementarity == doctest::Approx(2.0));
  CHECK(r2.eq_feas == doctest::Approx(0.0));
  CHECK(r2.stationarity == doctest::Approx(std::sqrt(2.0)));
  CHECK(r2.total() == doctest::Approx(2.0));
}

TEST_CASE("total is the max of the components") {
  auto rng = make_rng(111);
  Program p = builtin("nlp_toy");
  for (int t = 0; t < 100; ++t) {
    Vector x = random_vector(rng, 2, 3.0);
    Vector lam = random_vector(rng, 1, 3.0);
    Vector mu = random_vector(rng, 1, 3.0);
    auto r = kkt_residual(p, x, lam, mu);
    double m = std::max({r.stationarity, r.eq_feas, r.cone_feas, r.dual_feas,
                         r.complementarity});
    CHECK(r.total() == doctest::Approx(m).epsilon(1e-14));
  }
}

TEST_CASE("quadratic constructor reproduces its coefficient tables") {
  auto rng = make_rng(222);
  for (int t = 0; t < 50; ++t) {
    int n = 2 + int(rng() % 4);
    int m = int(rng() % 3);
    Cone K({Cone::orthant(1 + int(rng() % 3))});
    QuadraticData data;
    data.Q = random_sym(rng, n);
    data.q = random_vector(rng, n);
    data.r = gauss(rng);
    data.A = Matrix(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) data.A(i, j) = gauss(rng);
    data.b = random_vector(rng, m);
    data.G = Matrix(K.dim(), n);
    for (int i = 0; i < K.dim(); ++i)
      for (int j = 0; j < n; ++j) data.G(i, j) = gauss(rng);
    data.d = random_vector(rng, K.dim());
    QuadraticData copy = data;
    Program p = make_quadratic_program("rand", std::move(copy), K);

    Vector x = random_vector(rng, n, 2.0);
    double fx = 0.5 * data.Q.quad(x) + dot(data.q, x) + data.r;
    CHECK(p.f(x) == doctest::Approx(fx).epsilon(1e-12));
    CHECK(max_abs_diff(p.grad_f(x), add(data.Q.mul(x), data.q)) <= 1e-12);
    CHECK(max_abs_diff(p.h(x), sub(data.A.mul(x), data.b)) <= 1e-12);
    CHECK(max_abs_diff(p.g(x), sub(data.G.mul(x), data.d)) <= 1e-12);
    CHECK(max_abs_diff(p.jac_h(x), data.A) == 0.0);
    CHECK(max_abs_diff(p.jac_g(x), data.G) == 0.0);
    Vector lam = random_vector(rng, m), mu = random_vector(rng, K.dim());
    CHECK(max_abs_diff(p.hess_lagrangian(x, lam, mu), data.Q) == 0.0);
  }
}

TEST_CASE("derivative checker accepts the builtins") {
  auto rng = make_rng(333);
  for (const char* name : {"nlp_toy", "soc_toy", "sdp_toy"}) {
    Program p = builtin(name);
    for (int t = 0; t < 5; ++t) {
      Vector x = random_vector(rng, p.n, 2.0);
      Vector lam = random_vector(rng, p.m);
      Vector mu = random_vector(rng, p.cone.dim());
      auto rep = check_derivatives(p, x, lam, mu);
      CAPTURE(name);
      CAPTURE(rep.worst);
      CHECK(rep.pass);
      CHECK(rep.max_rel_dev <= 1e-5);
    }
  }
}

TEST_CASE("derivative checker flags a wrong gradient") {
  Program p = builtin("nlp_toy");
  p.grad_f = [](const Vector& x) { return Vector{x[0] + 1.0, x[1]}; };  // sign slip on q
  auto rep = check_derivatives(p, {0.3, 0.7}, {0.0}, {0.0});
  CHECK(!rep.pass);
  CHECK(rep.max_rel_dev > 1e-2);
  CHECK(rep.worst.find("grad_f") != std::string::npos);
}

TEST_SUITE_END();

// Problem statement: minimize f(x) subject to h(x) = 0 and g(x) in K, with
// oracles for values, first derivatives, and the contracted Lagrangian
// Hessian. Conic rows of g and mu live in packed coordinates.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "soalm/cones.hpp"
#include "soalm/linalg.hpp"

namespace soalm {

struct Reference {
  Vector x;
  Vector lambda;
  Vector mu;
};

struct Program {
  std::string name;
  int n = 0;  // primal dimension
  int m = 0;  // equality count
  Cone cone;

  std::function<double(const Vector&)> f;
  std::function<Vector(const Vector&)> grad_f;
  std::function<Vector(const Vector&)> h;       // length m
  std::function<Matrix(const Vector&)> jac_h;   // m x n
  std::function<Vector(const Vector&)> g;       // length cone.dim()
  std::function<Matrix(const Vector&)> jac_g;   // cone.dim() x n
  // ∇²f(x) − Σ λ_i ∇²h_i(x) − ⟨μ, ∇²g(x)⟩
  std::function<SymMatrix(const Vector&, const Vector&, const Vector&)> hess_lagrangian;

  std::optional<Reference> reference;

  Vector reference_multipliers() const;  // (λ*, μ*) stacked
};

// Quadratic objective with affine constraints:
//   f(x) = ½ xᵀQx + qᵀx + r,  h(x) = Ax − b,  g(x) = Gx − d.
struct QuadraticData {
  SymMatrix Q;
  Vector q;
  double r = 0.0;
  Matrix A;
  Vector b;
  Matrix G;
  Vector d;
};

Program make_quadratic_program(std::string name, QuadraticData data, Cone cone,
                               std::optional<Reference> reference = std::nullopt);

// Built-in instances: "nlp_toy", "soc_toy", "sdp_toy".
// Throws std::invalid_argument on unknown names.
Program builtin(const std::string& name);

struct KKTResidual {
  double stationarity = 0.0;    // ‖∇f − Jhᵀλ − Jgᵀμ‖
  double eq_feas = 0.0;         // ‖h(x)‖
  double cone_feas = 0.0;       // dist(g(x), K)
  double dual_feas = 0.0;       // dist(μ, K)
  double complementarity = 0.0; // |⟨μ, g(x)⟩|
  double total() const;
};

KKTResidual kkt_residual(const Program& p, const Vector& x, const Vector& lambda,
                         const Vector& mu);

struct DerivativeReport {
  bool pass = true;
  double max_rel_dev = 0.0;
  std::string worst;  // which oracle and entry deviated most
};

// Compares the analytic oracles against fd_jacobian at x (multipliers fixed
// for the Hessian check).
DerivativeReport check_derivatives(const Program& p, const Vector& x,
                                   const Vector& lambda, const Vector& mu,
                                   double tol = 1e-5);

}  // namespace soalm

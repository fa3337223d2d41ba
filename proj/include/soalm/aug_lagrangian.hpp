// Augmented Lagrangian for conic programs,
//   L_c(x,λ,μ) = f − ⟨λ,h⟩ + (c/2)‖h‖² + (1/2c)(‖Π_K(μ−cg)‖² − ‖μ‖²),
// its x-gradient, a generalized Hessian element, and the inner semismooth
// Newton minimization x_c(λ,μ) = argmin_x L_c.
#pragma once

#include "soalm/cones.hpp"
#include "soalm/program.hpp"

namespace soalm {

double eval_Lc(const Program& p, double c, const Vector& x, const Vector& lambda,
               const Vector& mu);

// ∇f − Jhᵀ(λ − c h) − Jgᵀ Π_K(μ − c g)
Vector grad_Lc(const Program& p, double c, const Vector& x, const Vector& lambda,
               const Vector& mu);

struct HessElement {
  SymMatrix A;        // hess_lagrangian(x, λ−ch, Π_K(μ−cg)) + c JhᵀJh + c JgᵀWJg
  SubdiffElement W;   // element used for the JgᵀWJg term
};

HessElement hess_element_Lc(const Program& p, double c, const Vector& x,
                            const Vector& lambda, const Vector& mu);

struct InnerOptions {
  double tol = 1e-12;  // absolute, on ‖grad_Lc‖
  int max_iter = 100;
};

struct InnerResult {
  Vector x;
  bool success = false;
  int inner_iterations = 0;
  double final_gradient_norm = 0.0;
  bool hessian_regularization_used = false;
  SubdiffElement W_at_x;        // at μ − c g(x) for the final x
  std::vector<double> L_trace;  // L_c value after each accepted step
};

// Semismooth Newton with Armijo backtracking (sufficient decrease 1e-4,
// halving, max 50 backtracks) and Levenberg shifts A + τI, τ doubling from
// 1e-8(1+‖A‖_F), whenever the Cholesky solve reports a non-SPD matrix.
// success=false (never a throw) when max_iter runs out above tol.
InnerResult minimize_inner(const Program& p, double c, const Vector& lambda,
                           const Vector& mu, const Vector& x_start,
                           const InnerOptions& opt = {});

}  // namespace soalm

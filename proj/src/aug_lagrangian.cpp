#include "soalm/aug_lagrangian.hpp"

#include <cmath>
#include <limits>

namespace soalm {

double eval_Lc(const Program& p, double c, const Vector& x, const Vector& lambda,
               const Vector& mu) {
  double v = p.f(x);
  if (p.m > 0) {
    Vector hx = p.h(x);
    v += -dot(lambda, hx) + 0.5 * c * dot(hx, hx);
  }
  if (p.cone.dim() > 0) {
    Vector z = sub(mu, scaled(p.g(x), c));
    Vector pi = project(p.cone, z);
    v += (dot(pi, pi) - dot(mu, mu)) / (2.0 * c);
  }
  return v;
}

Vector grad_Lc(const Program& p, double c, const Vector& x, const Vector& lambda,
               const Vector& mu) {
  Vector grad = p.grad_f(x);
  if (p.m > 0) {
    Vector lam_img = sub(lambda, scaled(p.h(x), c));
    axpy(grad, -1.0, p.jac_h(x).tmul(lam_img));
  }
  if (p.cone.dim() > 0) {
    Vector mu_img = project(p.cone, sub(mu, scaled(p.g(x), c)));
    axpy(grad, -1.0, p.jac_g(x).tmul(mu_img));
  }
  return grad;
}

HessElement hess_element_Lc(const Program& p, double c, const Vector& x,
                            const Vector& lambda, const Vector& mu) {
  Vector lam_img = lambda, mu_img;
  Vector z(p.cone.dim(), 0.0);
  if (p.m > 0) lam_img = sub(lambda, scaled(p.h(x), c));
  if (p.cone.dim() > 0) z = sub(mu, scaled(p.g(x), c));
  mu_img = project(p.cone, z);

  HessElement he;
  he.W = bsubdiff_element(p.cone, z);
  he.A = p.hess_lagrangian(x, lam_img, mu_img);
  if (p.m > 0) he.A = sym_add(he.A, sym_scaled(gram(p.jac_h(x)), c));
  if (p.cone.dim() > 0)
    he.A = sym_add(he.A, sym_scaled(congruence(p.jac_g(x), he.W.materialize(p.cone)), c));
  return he;
}

InnerResult minimize_inner(const Program& p, double c, const Vector& lambda,
                           const Vector& mu, const Vector& x_start,
                           const InnerOptions& opt) {
  InnerResult res;
  res.x = x_start;
  double L = eval_Lc(p, c, res.x, lambda, mu);
  res.L_trace.push_back(L);

  const double eps = std::numeric_limits<double>::epsilon();
  Vector grad = grad_Lc(p, c, res.x, lambda, mu);
  double gn = norm(grad);

  while (true) {
    if (gn <= opt.tol) {
      res.success = true;
      break;
    }
    if (res.inner_iterations >= opt.max_iter) break;

    HessElement he = hess_element_Lc(p, c, res.x, lambda, mu);
    auto fac = SpdFactor::compute(he.A);
    if (!fac) {
      res.hessian_regularization_used = true;
      double tau = 1e-8 * (1.0 + he.A.frobenius());
      while (!fac) {
        fac = SpdFactor::compute(sym_add(he.A, sym_scaled(SymMatrix::identity(p.n), tau)));
        tau *= 2.0;
        if (tau > 1e64) break;  // defensive, unreachable for finite A
      }
      if (!fac) break;
    }
    Vector dx = fac->solve(scaled(grad, -1.0));
    double dd = dot(grad, dx);  // directional derivative, negative for descent

    // near the fp floor the model decrease is below resolution; take the
    // Newton step as-is instead of fighting rounding noise in the line search
    if (-dd <= 64.0 * eps * (1.0 + std::abs(L))) {
      res.x = add(res.x, dx);
      L = eval_Lc(p, c, res.x, lambda, mu);
    } else {
      double step = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 50; ++bt) {
        Vector xn = add(res.x, scaled(dx, step));
        double Ln = eval_Lc(p, c, xn, lambda, mu);
        if (Ln <= L + 1e-4 * step * dd) {
          res.x = xn;
          L = Ln;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }

    res.L_trace.push_back(L);
    ++res.inner_iterations;
    grad = grad_Lc(p, c, res.x, lambda, mu);
    gn = norm(grad);
  }

  res.final_gradient_norm = gn;
  res.W_at_x = bsubdiff_element(
      p.cone, p.cone.dim() > 0 ? sub(mu, scaled(p.g(res.x), c)) : Vector{});
  return res;
}

}  // namespace soalm

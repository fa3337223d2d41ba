#include "soalm/program.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace soalm {

Vector Program::reference_multipliers() const {
  if (!reference) throw std::invalid_argument("program has no reference point");
  Vector y = reference->lambda;
  y.insert(y.end(), reference->mu.begin(), reference->mu.end());
  return y;
}

Program make_quadratic_program(std::string name, QuadraticData data, Cone cone,
                               std::optional<Reference> reference) {
  auto d = std::make_shared<const QuadraticData>(std::move(data));
  Program p;
  p.name = std::move(name);
  p.n = int(d->q.size());
  p.m = d->A.rows();
  p.cone = cone;
  p.f = [d](const Vector& x) { return 0.5 * d->Q.quad(x) + dot(d->q, x) + d->r; };
  p.grad_f = [d](const Vector& x) { return add(d->Q.mul(x), d->q); };
  p.h = [d](const Vector& x) { return sub(d->A.mul(x), d->b); };
  p.jac_h = [d](const Vector&) { return d->A; };
  p.g = [d](const Vector& x) { return sub(d->G.mul(x), d->d); };
  p.jac_g = [d](const Vector&) { return d->G; };
  p.hess_lagrangian = [d](const Vector&, const Vector&, const Vector&) { return d->Q; };
  p.reference = std::move(reference);
  return p;
}

Program builtin(const std::string& name) {
  if (name == "nlp_toy") {
    QuadraticData d;
    d.Q = SymMatrix::identity(2);
    d.q = {-1.0, -2.0};
    d.A = Matrix(1, 2);
    d.A(0, 0) = 1.0;
    d.b = {0.0};
    d.G = Matrix(1, 2);
    d.G(0, 1) = 1.0;
    d.d = {0.0};
    Reference ref{{0.0, 2.0}, {-1.0}, {0.0}};
    return make_quadratic_program("nlp_toy", std::move(d), Cone({Cone::orthant(1)}), ref);
  }
  if (name == "soc_toy") {
    QuadraticData d;
    d.Q = SymMatrix::identity(3);
    d.q = {-3.0, -4.0, 0.0};
    d.A = Matrix(0, 3);
    d.G = Matrix::identity(3);
    d.d = {0.0, 0.0, 0.0};
    Reference ref{{1.5, 2.0, 2.5}, {}, {-1.5, -2.0, 2.5}};
    return make_quadratic_program("soc_toy", std::move(d), Cone({Cone::soc(3)}), ref);
  }
  if (name == "sdp_toy") {
    QuadraticData d;
    d.Q = SymMatrix::identity(3);
    d.q = {-2.0, 0.0, 3.0};
    d.A = Matrix(0, 3);
    d.G = Matrix(3, 3);
    d.G(0, 0) = 1.0;
    d.G(1, 1) = std::sqrt(2.0);
    d.G(2, 2) = 1.0;
    d.d = {0.0, 0.0, 0.0};
    Reference ref{{2.0, 0.0, 0.0}, {}, {0.0, 0.0, 3.0}};
    return make_quadratic_program("sdp_toy", std::move(d), Cone({Cone::psd(2)}), ref);
  }
  throw std::invalid_argument("unknown builtin program: " + name);
}

double KKTResidual::total() const {
  return std::max({stationarity, eq_feas, cone_feas, dual_feas, complementarity});
}

KKTResidual kkt_residual(const Program& p, const Vector& x, const Vector& lambda,
                         const Vector& mu) {
  KKTResidual r;
  Vector grad = p.grad_f(x);
  if (p.m > 0) {
    Vector hx = p.h(x);
    r.eq_feas = norm(hx);
    axpy(grad, -1.0, p.jac_h(x).tmul(lambda));
  }
  Vector gx = p.g(x);
  if (p.cone.dim() > 0) {
    r.cone_feas = dist(p.cone, gx);
    r.dual_feas = dist(p.cone, mu);
    r.complementarity = std::abs(dot(mu, gx));
    axpy(grad, -1.0, p.jac_g(x).tmul(mu));
  }
  r.stationarity = norm(grad);
  return r;
}

namespace {

void track_worst(DerivativeReport& rep, double analytic, double fd,
                 const char* oracle, int i, int j) {
  double dev = std::abs(analytic - fd) / (1.0 + std::abs(analytic));
  if (dev > rep.max_rel_dev) {
    rep.max_rel_dev = dev;
    char buf[64];
    if (j >= 0)
      std::snprintf(buf, sizeof buf, "%s[%d,%d]", oracle, i, j);
    else
      std::snprintf(buf, sizeof buf, "%s[%d]", oracle, i);
    rep.worst = buf;
  }
}

}  // namespace

DerivativeReport check_derivatives(const Program& p, const Vector& x,
                                   const Vector& lambda, const Vector& mu,
                                   double tol) {
  DerivativeReport rep;

  Matrix Jf = fd_jacobian([&](const Vector& u) { return Vector{p.f(u)}; }, x);
  Vector grad = p.grad_f(x);
  for (int j = 0; j < p.n; ++j) track_worst(rep, grad[j], Jf(0, j), "grad_f", j, -1);

  if (p.m > 0) {
    Matrix Jh_fd = fd_jacobian(p.h, x);
    Matrix Jh = p.jac_h(x);
    for (int i = 0; i < p.m; ++i)
      for (int j = 0; j < p.n; ++j) track_worst(rep, Jh(i, j), Jh_fd(i, j), "jac_h", i, j);
  }
  if (p.cone.dim() > 0) {
    Matrix Jg_fd = fd_jacobian(p.g, x);
    Matrix Jg = p.jac_g(x);
    for (int i = 0; i < p.cone.dim(); ++i)
      for (int j = 0; j < p.n; ++j) track_worst(rep, Jg(i, j), Jg_fd(i, j), "jac_g", i, j);
  }

  // the contracted Hessian against the FD of the Lagrangian gradient
  auto lag_grad = [&](const Vector& u) {
    Vector gr = p.grad_f(u);
    if (p.m > 0) axpy(gr, -1.0, p.jac_h(u).tmul(lambda));
    if (p.cone.dim() > 0) axpy(gr, -1.0, p.jac_g(u).tmul(mu));
    return gr;
  };
  Matrix Hfd = fd_jacobian(lag_grad, x);
  SymMatrix H = p.hess_lagrangian(x, lambda, mu);
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      track_worst(rep, H(i, j), Hfd(i, j), "hess_lagrangian", i, j);

  rep.pass = rep.max_rel_dev <= tol;
  return rep;
}

}  // namespace soalm

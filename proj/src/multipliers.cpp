// Outer dual iterations. Both updates share the same structure: minimize the
// augmented Lagrangian in x, then move (λ,μ). The classic update moves to the
// multiplier images; the generalized-Newton update solves ∇ϑ_c + V Δy = 0
// with V assembled from one subdifferential element of the projection.

#include "soalm/multipliers.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "soalm/diagnostics.hpp"

namespace soalm {

Vector DualState::stacked() const {
  Vector y = lambda;
  y.insert(y.end(), mu.begin(), mu.end());
  return y;
}

Vector grad_theta(const Program& p, double c, const Vector& x_plus,
                  const Vector& /*lambda*/, const Vector& mu) {
  Vector gt;
  gt.reserve(size_t(p.m + p.cone.dim()));
  if (p.m > 0) {
    Vector hx = p.h(x_plus);
    for (double v : hx) gt.push_back(-v);
  }
  if (p.cone.dim() > 0) {
    Vector pi = project(p.cone, sub(mu, scaled(p.g(x_plus), c)));
    for (int i = 0; i < p.cone.dim(); ++i) gt.push_back((pi[i] - mu[i]) / c);
  }
  return gt;
}

MultiplierImages multiplier_images(const Program& p, double c, const Vector& x_plus,
                                   const Vector& lambda, const Vector& mu) {
  MultiplierImages im;
  if (p.m > 0) im.lambda_c = sub(lambda, scaled(p.h(x_plus), c));
  if (p.cone.dim() > 0) im.mu_c = project(p.cone, sub(mu, scaled(p.g(x_plus), c)));
  return im;
}

SymMatrix build_Ac(const Program& p, double c, const Vector& x_plus,
                   const Vector& lambda, const Vector& mu, const SubdiffElement& W) {
  MultiplierImages im = multiplier_images(p, c, x_plus, lambda, mu);
  SymMatrix A = p.hess_lagrangian(x_plus, im.lambda_c, im.mu_c);
  if (p.m > 0) A = sym_add(A, sym_scaled(gram(p.jac_h(x_plus)), c));
  if (p.cone.dim() > 0)
    A = sym_add(A, sym_scaled(congruence(p.jac_g(x_plus), W.materialize(p.cone)), c));
  return A;
}

VOperator build_V(const Program& p, double c, const Vector& x_plus,
                  const Vector& lambda, const Vector& mu, const SubdiffElement& W) {
  SymMatrix Ac = build_Ac(p, c, x_plus, lambda, mu, W);
  auto fac = SpdFactor::compute(Ac);
  if (!fac) throw std::runtime_error("A_c not positive definite");

  const int m = p.m;
  const int dz = p.cone.dim();
  const int q = m + dz;
  Matrix B(p.n, q);
  if (m > 0) {
    Matrix Jh = p.jac_h(x_plus);
    for (int i = 0; i < m; ++i) B.set_col(i, Jh.row(i));
  }
  SymMatrix Wm;
  if (dz > 0) {
    Wm = W.materialize(p.cone);
    Matrix JgtW = matmul(transpose(p.jac_g(x_plus)), Wm.as_matrix());
    for (int j = 0; j < dz; ++j) B.set_col(m + j, JgtW.col(j));
  }

  VOperator out;
  out.V = SymMatrix(q);
  std::vector<Vector> sol(q);
  for (int j = 0; j < q; ++j) sol[j] = fac->solve(B.col(j));
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j)
      out.V.set(i, j, -0.5 * (dot(B.col(i), sol[j]) + dot(B.col(j), sol[i])));
  // the −(1/c)(I − W) tail acts on the conic rows only
  for (int a = 0; a < dz; ++a)
    for (int b = a; b < dz; ++b) {
      double iw = (a == b ? 1.0 : 0.0) - Wm(a, b);
      if (iw != 0.0) out.V.add(m + a, m + b, -iw / c);
    }
  return out;
}

DualState first_order_step(const Program& p, const DualState& state,
                           const InnerOptions& opt) {
  InnerResult inner =
      state.inner ? *state.inner
                  : minimize_inner(p, state.c, state.lambda, state.mu,
                                   Vector(size_t(p.n), 0.0), opt);
  MultiplierImages im =
      multiplier_images(p, state.c, inner.x, state.lambda, state.mu);
  return DualState{im.lambda_c, im.mu_c, state.c, std::nullopt};
}

DualState second_order_step(const Program& p, const DualState& state,
                            const InnerOptions& opt, bool& fallback_used) {
  fallback_used = false;
  InnerResult base =
      state.inner ? *state.inner
                  : minimize_inner(p, state.c, state.lambda, state.mu,
                                   Vector(size_t(p.n), 0.0), opt);
  auto fall_back = [&]() {
    MultiplierImages im =
        multiplier_images(p, state.c, base.x, state.lambda, state.mu);
    fallback_used = true;
    return DualState{im.lambda_c, im.mu_c, state.c, std::nullopt};
  };
  if (!base.success) return fall_back();

  std::optional<VOperator> V;
  try {
    V = build_V(p, state.c, base.x, state.lambda, state.mu, base.W_at_x);
  } catch (const std::runtime_error&) {
    return fall_back();
  }
  auto fac = SpdFactor::compute(sym_scaled(V->V, -1.0));
  if (!fac) return fall_back();

  Vector gt = grad_theta(p, state.c, base.x, state.lambda, state.mu);
  Vector dy = fac->solve(gt);  // Δy = (−V)⁻¹ ∇ϑ_c solves ∇ϑ_c + V Δy = 0
  Vector lam_t = state.lambda;
  Vector mu_t = state.mu;
  for (int i = 0; i < p.m; ++i) lam_t[i] += dy[i];
  for (int j = 0; j < p.cone.dim(); ++j) mu_t[j] += dy[p.m + j];

  InnerResult trial = minimize_inner(p, state.c, lam_t, mu_t, base.x, opt);
  if (!trial.success) return fall_back();
  double current = kkt_residual(p, base.x, state.lambda, state.mu).total();
  double tried = kkt_residual(p, trial.x, lam_t, mu_t).total();
  if (tried > 10.0 * current) return fall_back();

  return DualState{std::move(lam_t), std::move(mu_t), state.c, std::move(trial)};
}

int SolveReport::fallback_count() const {
  int count = 0;
  for (const auto& e : history)
    if (e.fallback) ++count;
  return count;
}

double SolveReport::kkt_total() const {
  return history.empty() ? 0.0 : history.back().kkt.total();
}

SolveReport solve(const Program& p, const Vector& y0, const SolveOptions& opt) {
  const int m = p.m;
  assert(int(y0.size()) == m + p.cone.dim());
  if (!opt.x_start.empty() && int(opt.x_start.size()) != p.n)
    throw std::invalid_argument("x_start must have length n");

  SolveReport rep;
  rep.problem = p.name;
  rep.method = opt.method == Method::Second ? "second" : "first";
  rep.c = opt.c;

  DualState state;
  state.c = opt.c;
  state.lambda.assign(y0.begin(), y0.begin() + m);
  state.mu.assign(y0.begin() + m, y0.end());

  const bool track = opt.track_reference && p.reference.has_value();
  Vector ystar;
  if (track) ystar = p.reference_multipliers();

  Vector y_prev;
  Vector x_warm =
      opt.x_start.empty() ? Vector(size_t(p.n), 0.0) : opt.x_start;
  bool fell_back = false;
  for (int k = 0;; ++k) {
    if (!state.inner)
      state.inner =
          minimize_inner(p, opt.c, state.lambda, state.mu, x_warm, opt.inner);
    x_warm = state.inner->x;

    HistoryEntry e;
    e.k = k;
    e.lambda = state.lambda;
    e.mu = state.mu;
    e.x = state.inner->x;
    e.kkt = kkt_residual(p, e.x, e.lambda, e.mu);
    Vector y = state.stacked();
    if (track) e.eta = norm(sub(y, ystar));
    if (k > 0) e.step_norm = norm(sub(y, y_prev));
    e.fallback = fell_back;
    rep.history.push_back(e);

    if (!state.inner->success) {
      rep.inner_failed = true;
      break;
    }
    if (e.kkt.total() <= opt.outer_tol) {
      rep.converged = true;
      break;
    }
    if (track && e.eta <= opt.eta_stop) {
      rep.converged = true;
      break;
    }
    if (k >= opt.max_outer) break;

    y_prev = y;
    fell_back = false;
    if (opt.method == Method::Second) {
      state = second_order_step(p, state, opt.inner, fell_back);
    } else {
      state = first_order_step(p, state, opt.inner);
    }
  }

  if (track) {
    std::vector<double> etas;
    etas.reserve(rep.history.size());
    for (const auto& e : rep.history) etas.push_back(e.eta);
    try {
      rep.rate = estimate_rate(etas);
    } catch (const std::runtime_error&) {
      rep.rate = std::nullopt;
    }
  }
  return rep;
}

AssumptionReport check_assumptions(const Program& p, double c, const Vector& x,
                                   const Vector& lambda, const Vector& mu) {
  Vector z;
  if (p.cone.dim() > 0) z = sub(mu, scaled(p.g(x), c));
  std::vector<SubdiffElement> elements = bsubdiff_alternatives(p.cone, z);

  AssumptionReport rep;
  rep.sampled = int(elements.size());
  rep.pass = true;
  bool a_seen = false;
  bool v_seen = false;

  for (size_t i = 0; i < elements.size(); ++i) {
    SymMatrix A = build_Ac(p, c, x, lambda, mu, elements[i]);
    double amin = eig_sym(A).eigenvalues.back();
    if (!a_seen || amin < rep.min_eig_A) rep.min_eig_A = amin;
    a_seen = true;
    if (amin <= 0.0) {
      rep.pass = false;
      rep.detail += "element " + std::to_string(i) + ": A_c min eigenvalue " +
                    std::to_string(amin) + "; ";
      continue;  // V needs A_c ≻ 0
    }
    try {
      VOperator V = build_V(p, c, x, lambda, mu, elements[i]);
      if (V.V.dim() == 0) continue;
      double vmax = eig_sym(V.V).eigenvalues.front();
      if (!v_seen || vmax > rep.max_eig_V) rep.max_eig_V = vmax;
      v_seen = true;
      if (vmax >= 0.0) {
        rep.pass = false;
        rep.detail += "element " + std::to_string(i) + ": V max eigenvalue " +
                      std::to_string(vmax) + "; ";
      }
    } catch (const std::runtime_error& err) {
      rep.pass = false;
      rep.detail += "element " + std::to_string(i) + ": " + err.what() + "; ";
    }
  }
  return rep;
}

}  // namespace soalm

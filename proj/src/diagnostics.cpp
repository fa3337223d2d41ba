// Checkers for candidate solutions. The rank-style checks reduce to singular
// values of a stacked row matrix; the second-order check builds the affine
// hull of the critical cone per block family, adds the cone curvature terms,
// and looks at the reduced Hessian eigenvalues.

#include "soalm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace soalm {

namespace {

RankReport rank_report(const Matrix& M) {
  RankReport r;
  r.rows = M.rows();
  if (M.rows() == 0) {
    r.pass = true;
    return r;
  }
  // singular values via the eigenvalues of M Mᵀ
  SymMatrix MMt = gram(transpose(M));
  auto sd = eig_sym(MMt);
  r.largest_sv = std::sqrt(std::max(sd.eigenvalues.front(), 0.0));
  r.smallest_sv = std::sqrt(std::max(sd.eigenvalues.back(), 0.0));
  r.pass = r.smallest_sv > 1e-8 * std::max(1.0, r.largest_sv);
  return r;
}

Matrix stack_rows(const std::vector<Vector>& rows, int n) {
  Matrix M(int(rows.size()), n);
  for (int i = 0; i < int(rows.size()); ++i)
    for (int j = 0; j < n; ++j) M(i, j) = rows[i][j];
  return M;
}

}  // namespace

RankReport check_licq(const Program& p, const Vector& x) {
  for (const auto& b : p.cone.blocks())
    if (b.kind != BlockKind::Orthant)
      throw std::invalid_argument("check_licq handles orthant cones only");

  std::vector<Vector> rows;
  if (p.m > 0) {
    Matrix Jh = p.jac_h(x);
    for (int i = 0; i < p.m; ++i) rows.push_back(Jh.row(i));
  }
  if (p.cone.dim() > 0) {
    Vector gx = p.g(x);
    Matrix Jg = p.jac_g(x);
    for (int j = 0; j < p.cone.dim(); ++j)
      if (gx[j] <= 1e-8) rows.push_back(Jg.row(j));
  }
  return rank_report(stack_rows(rows, p.n));
}

RankReport check_nondegeneracy(const Program& p, const Vector& x) {
  const int dz = p.cone.dim();
  Matrix L(0, 0);
  if (dz > 0) L = lineality_basis(p.cone, p.g(x));

  Matrix M(p.m + dz, p.n + L.cols());
  if (p.m > 0) {
    Matrix Jh = p.jac_h(x);
    for (int i = 0; i < p.m; ++i)
      for (int j = 0; j < p.n; ++j) M(i, j) = Jh(i, j);
  }
  if (dz > 0) {
    Matrix Jg = p.jac_g(x);
    for (int i = 0; i < dz; ++i) {
      for (int j = 0; j < p.n; ++j) M(p.m + i, j) = Jg(i, j);
      for (int j = 0; j < L.cols(); ++j) M(p.m + i, p.n + j) = L(i, j);
    }
  }
  return rank_report(M);
}

SsoscReport check_ssosc(const Program& p, const Vector& x, const Vector& lambda,
                        const Vector& mu) {
  if (kkt_residual(p, x, lambda, mu).total() > 1e-8)
    throw std::invalid_argument("check_ssosc needs a first-order critical point");

  const double act_tol = 1e-8;
  std::vector<Vector> rows;
  if (p.m > 0) {
    Matrix Jh = p.jac_h(x);
    for (int i = 0; i < p.m; ++i) rows.push_back(Jh.row(i));
  }

  SymMatrix H = p.hess_lagrangian(x, lambda, mu);

  if (p.cone.dim() > 0) {
    Vector gx = p.g(x);
    Matrix Jg = p.jac_g(x);
    for (int b = 0; b < p.cone.block_count(); ++b) {
      const ConeBlock& blk = p.cone.blocks()[b];
      const int off = p.cone.offset(b);
      const int len = blk.packed_dim();

      if (blk.kind == BlockKind::Orthant) {
        // strongly active bounds pin their rows, weakly active ones do not
        for (int j = 0; j < len; ++j)
          if (mu[off + j] > act_tol) rows.push_back(Jg.row(off + j));
        continue;
      }

      if (blk.kind == BlockKind::Soc) {
        Vector mb(mu.begin() + off, mu.begin() + off + len);
        Vector gb(gx.begin() + off, gx.begin() + off + len);
        if (norm(mb) <= act_tol) continue;  // inactive block
        double mu_dot = mb[len - 1];
        double mu_bar = 0.0;
        for (int j = 0; j + 1 < len; ++j) mu_bar += mb[j] * mb[j];
        mu_bar = std::sqrt(mu_bar);

        if (mu_dot > mu_bar + act_tol) {
          // interior multiplier pins the whole block
          for (int j = 0; j < len; ++j) rows.push_back(Jg.row(off + j));
        } else if (norm(gb) <= act_tol) {
          // vertex solution: directions confined to the complementary
          // boundary ray w = (−μ̄, μ̇); rows of (I − wwᵀ/‖w‖²) Jg_b
          Vector w(len);
          for (int j = 0; j + 1 < len; ++j) w[j] = -mb[j];
          w[len - 1] = mu_dot;
          double wn2 = dot(w, w);
          Vector acc(p.n, 0.0);
          for (int s = 0; s < len; ++s) axpy(acc, w[s], Jg.row(off + s));
          for (int i = 0; i < len; ++i) {
            Vector row = Jg.row(off + i);
            axpy(row, -w[i] / wn2, acc);
            rows.push_back(row);
          }
        } else {
          // both on the boundary: μ^⊥ constraint plus the cone curvature
          Vector row(p.n, 0.0);
          for (int s = 0; s < len; ++s) axpy(row, mb[s], Jg.row(off + s));
          rows.push_back(row);
          double g_dot = gb[len - 1];
          SymMatrix D(len);
          for (int j = 0; j + 1 < len; ++j) D.set(j, j, -1.0);
          D.set(len - 1, len - 1, 1.0);
          Matrix Jgb(len, p.n);
          for (int i = 0; i < len; ++i)
            for (int j = 0; j < p.n; ++j) Jgb(i, j) = Jg(off + i, j);
          H = sym_add(H, sym_scaled(congruence(Jgb, D), -(mu_dot / g_dot)));
        }
        continue;
      }

      // Psd block, packed coordinates
      Vector mb(mu.begin() + off, mu.begin() + off + len);
      Vector gb(gx.begin() + off, gx.begin() + off + len);
      SymMatrix Gm = svec_unpack(gb, blk.p);
      SymMatrix Mu = svec_unpack(mb, blk.p);
      auto sd = eig_sym(sym_add(Gm, sym_scaled(Mu, -1.0)));

      std::vector<SymMatrix> Ak(size_t(p.n));
      for (int k = 0; k < p.n; ++k) {
        Vector colk(len);
        for (int i = 0; i < len; ++i) colk[i] = Jg(off + i, k);
        Ak[k] = svec_unpack(colk, blk.p);
      }
      auto form = [&](int i, const SymMatrix& A, int j) {
        return dot(sd.P.col(i), A.mul(sd.P.col(j)));
      };
      for (int i : sd.beta)
        for (int j : sd.gamma) {
          Vector row(p.n);
          for (int k = 0; k < p.n; ++k) row[k] = form(i, Ak[k], j);
          rows.push_back(row);
        }
      for (size_t a = 0; a < sd.gamma.size(); ++a)
        for (size_t c = a; c < sd.gamma.size(); ++c) {
          Vector row(p.n);
          for (int k = 0; k < p.n; ++k)
            row[k] = form(sd.gamma[a], Ak[k], sd.gamma[c]);
          rows.push_back(row);
        }

      // curvature form Σ_kl = ⟨μ, A_k g† A_l⟩ + ⟨μ, A_l g† A_k⟩
      Matrix Gd = pinv_sym(Gm).as_matrix();
      SymMatrix Sig(p.n);
      for (int k = 0; k < p.n; ++k)
        for (int l = k; l < p.n; ++l) {
          Matrix X = matmul(matmul(Ak[k].as_matrix(), Gd), Ak[l].as_matrix());
          Matrix Y = matmul(matmul(Ak[l].as_matrix(), Gd), Ak[k].as_matrix());
          double s = 0.0;
          for (int i = 0; i < blk.p; ++i)
            for (int j = 0; j < blk.p; ++j) s += Mu(i, j) * (X(i, j) + Y(i, j));
          Sig.set(k, l, s);
        }
      H = sym_add(H, Sig);
    }
  }

  SsoscReport rep;
  Matrix N;
  if (rows.empty()) {
    N = Matrix::identity(p.n);
  } else {
    SymMatrix G = gram(stack_rows(rows, p.n));
    auto sd = eig_sym(G);
    double tau = 1e-12 * std::max(1.0, sd.eigenvalues.front());
    std::vector<int> keep;
    for (int k = 0; k < p.n; ++k)
      if (sd.eigenvalues[k] <= tau) keep.push_back(k);
    N = Matrix(p.n, int(keep.size()));
    for (int c = 0; c < int(keep.size()); ++c) N.set_col(c, sd.P.col(keep[c]));
  }
  rep.subspace_dim = N.cols();
  if (N.cols() == 0) {
    rep.pass = true;
    return rep;
  }
  rep.min_eig = eig_sym(congruence(N, H)).eigenvalues.back();
  rep.pass = rep.min_eig > 1e-8;
  return rep;
}

RateEstimate estimate_rate(const std::vector<double>& eta, double lo, double hi) {
  auto in_window = [&](double v) { return v >= lo && v <= hi; };
  int in_count = 0;
  for (double v : eta)
    if (in_window(v)) ++in_count;

  std::vector<std::pair<double, double>> pairs;
  for (size_t k = 0; k + 1 < eta.size(); ++k)
    if (in_window(eta[k]) && in_window(eta[k + 1]) && eta[k + 1] / eta[k] < 0.999)
      pairs.emplace_back(eta[k], eta[k + 1]);

  if (in_count < 3 || pairs.size() < 2)
    throw std::runtime_error("insufficient usable points");

  RateEstimate r;
  r.tail_length = in_count;

  double logsum = 0.0;
  for (const auto& [a, b] : pairs) logsum += std::log(b / a);
  r.linear_rate = std::exp(logsum / double(pairs.size()));

  double mx = 0.0, my = 0.0;
  for (const auto& [a, b] : pairs) {
    mx += std::log(a);
    my += std::log(b);
  }
  mx /= double(pairs.size());
  my /= double(pairs.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [a, b] : pairs) {
    double dx = std::log(a) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(b) - my);
  }
  r.order_q = sxx > 0.0 ? sxy / sxx : 0.0;
  return r;
}

}  // namespace soalm

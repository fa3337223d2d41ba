#include "soalm/cones.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace soalm {

namespace {

// kinks and membership are decided relative to the block's own scale
double block_tol(const Vector& zb) {
  double s = 0.0;
  for (double v : zb) s += v * v;
  return 1e-9 * (1.0 + std::sqrt(s));
}

Vector slice(const Vector& z, int off, int len) {
  return Vector(z.begin() + off, z.begin() + off + len);
}

// P F Pᵀ for a symmetric F in the eigenbasis
SymMatrix frame_conjugate(const Matrix& P, const SymMatrix& F) {
  int p = P.rows();
  Matrix M = matmul(P, F.as_matrix());
  SymMatrix R(p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      double s = 0.0;
      for (int k = 0; k < p; ++k) s += M(i, k) * P(j, k);
      double t = 0.0;
      for (int k = 0; k < p; ++k) t += M(j, k) * P(i, k);
      R.set(i, j, 0.5 * (s + t));
    }
  return R;
}

Vector soc_project(const Vector& zb) {
  int dim = int(zb.size());
  double zdot = zb[dim - 1];
  double u = 0.0;
  for (int i = 0; i + 1 < dim; ++i) u += zb[i] * zb[i];
  u = std::sqrt(u);
  if (zdot >= u) return zb;                 // inside, copy exactly
  if (zdot <= -u) return Vector(dim, 0.0);  // inside the polar
  double t = 0.5 * (u + zdot);
  Vector out(dim);
  for (int i = 0; i + 1 < dim; ++i) out[i] = (t / u) * zb[i];
  out[dim - 1] = t;
  return out;
}

Vector psd_project(const Vector& zb, int p) {
  auto sd = eig_sym(svec_unpack(zb, p));
  for (double& w : sd.eigenvalues) w = std::max(w, 0.0);
  return svec_pack(sd.reconstruct());
}

// W = (1/2) [[(1+t)I - t vvᵀ, v], [vᵀ, 1]] with t = zdot/u, v = zbar/u;
// the generic differentiable branch and, at t = ±1, the kink-side limits.
SymMatrix soc_generic_w(const Vector& zbar_over_u, double t) {
  int r = int(zbar_over_u.size());
  SymMatrix W(r + 1);
  for (int i = 0; i < r; ++i) {
    for (int j = i; j < r; ++j) {
      double v = -0.5 * t * zbar_over_u[i] * zbar_over_u[j];
      if (i == j) v += 0.5 * (1.0 + t);
      W.set(i, j, v);
    }
    W.set(i, r, 0.5 * zbar_over_u[i]);
  }
  W.set(r, r, 0.5);
  return W;
}

SubdiffBlock orthant_element(const Vector& zb, bool flip_ties) {
  double tol = block_tol(zb);
  OrthantFlags f;
  f.flags.resize(zb.size());
  for (size_t i = 0; i < zb.size(); ++i) {
    if (flip_ties)
      f.flags[i] = zb[i] > tol ? 1.0 : 0.0;
    else
      f.flags[i] = zb[i] >= -tol ? 1.0 : 0.0;  // ties keep the flag
  }
  return SubdiffBlock{f};
}

SubdiffBlock soc_element(const Vector& zb) {
  int dim = int(zb.size());
  double tol = block_tol(zb);
  double zdot = zb[dim - 1];
  double u = 0.0;
  for (int i = 0; i + 1 < dim; ++i) u += zb[i] * zb[i];
  u = std::sqrt(u);
  SocW w;
  if (u <= tol) {
    // on the axis: identity beyond the vertex, zero at and below it
    w.w = zdot > tol ? SymMatrix::identity(dim) : SymMatrix(dim);
  } else if (zdot >= u - tol) {
    w.w = SymMatrix::identity(dim);
  } else if (zdot <= -u + tol) {
    w.w = SymMatrix(dim);
  } else {
    Vector v(dim - 1);
    for (int i = 0; i + 1 < dim; ++i) v[i] = zb[i] / u;
    w.w = soc_generic_w(v, zdot / u);
  }
  return SubdiffBlock{w};
}

SubdiffBlock psd_element(const Vector& zb, int p, bool zero_beta) {
  auto sd = eig_sym(svec_unpack(zb, p));
  PsdW w;
  w.P = sd.P;
  w.eigenvalues = sd.eigenvalues;
  w.alpha = sd.alpha;
  w.beta = sd.beta;
  w.gamma = sd.gamma;
  if (zero_beta)
    w.beta_zero = sd.beta;
  else
    w.beta_keep = sd.beta;
  w.u_alpha_gamma.resize(sd.alpha.size() * sd.gamma.size());
  for (size_t a = 0; a < sd.alpha.size(); ++a)
    for (size_t g = 0; g < sd.gamma.size(); ++g) {
      double wa = sd.eigenvalues[sd.alpha[a]];
      double wg = sd.eigenvalues[sd.gamma[g]];
      w.u_alpha_gamma[a * sd.gamma.size() + g] = wa / (wa - wg);
    }
  return SubdiffBlock{w};
}

// filter coefficient of the congruence form, row i column j of the eigenbasis
double psd_filter(const PsdW& w, int i, int j) {
  auto in = [](const std::vector<int>& s, int k) {
    return std::find(s.begin(), s.end(), k) != s.end();
  };
  bool bi = in(w.beta, i), bj = in(w.beta, j);
  if (bi && bj) return (in(w.beta_keep, i) && in(w.beta_keep, j)) ? 1.0 : 0.0;
  double wi = bi ? 0.0 : w.eigenvalues[i];
  double wj = bj ? 0.0 : w.eigenvalues[j];
  double den = std::abs(wi) + std::abs(wj);
  if (den <= 0.0) return 0.0;
  return (std::max(wi, 0.0) + std::max(wj, 0.0)) / den;
}

Vector psd_apply(const PsdW& w, int p, const Vector& d) {
  SymMatrix Ht = congruence(w.P, svec_unpack(d, p));  // Pᵀ H P
  SymMatrix F(p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) F.set(i, j, psd_filter(w, i, j) * Ht(i, j));
  return svec_pack(frame_conjugate(w.P, F));
}

}  // namespace

Cone::Cone(std::vector<ConeBlock> blocks) : blocks_(std::move(blocks)) {
  offsets_.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    offsets_.push_back(dim_);
    dim_ += b.packed_dim();
  }
}

Vector svec_pack(const SymMatrix& M) {
  int p = M.dim();
  const double s = std::sqrt(2.0);
  Vector v(size_t(p) * (p + 1) / 2);
  size_t k = 0;
  for (int j = 0; j < p; ++j)
    for (int i = 0; i <= j; ++i) v[k++] = i == j ? M(i, j) : s * M(i, j);
  return v;
}

SymMatrix svec_unpack(const Vector& v, int p) {
  assert(int(v.size()) == p * (p + 1) / 2);
  const double s = 1.0 / std::sqrt(2.0);
  SymMatrix M(p);
  size_t k = 0;
  for (int j = 0; j < p; ++j)
    for (int i = 0; i <= j; ++i) {
      M.set(i, j, i == j ? v[k] : s * v[k]);
      ++k;
    }
  return M;
}

Vector project(const Cone& K, const Vector& z) {
  assert(int(z.size()) == K.dim());
  Vector out(z.size());
  for (int b = 0; b < K.block_count(); ++b) {
    const ConeBlock& blk = K.blocks()[b];
    int off = K.offset(b), len = blk.packed_dim();
    Vector zb = slice(z, off, len), pb;
    switch (blk.kind) {
      case BlockKind::Orthant:
        pb.resize(len);
        for (int i = 0; i < len; ++i) pb[i] = std::max(zb[i], 0.0);
        break;
      case BlockKind::Soc:
        pb = soc_project(zb);
        break;
      case BlockKind::Psd:
        pb = psd_project(zb, blk.p);
        break;
    }
    std::copy(pb.begin(), pb.end(), out.begin() + off);
  }
  return out;
}

double dist(const Cone& K, const Vector& z) { return norm(sub(z, project(K, z))); }

Vector SubdiffElement::apply(const Cone& K, const Vector& d) const {
  assert(int(d.size()) == K.dim());
  Vector out(d.size());
  for (int b = 0; b < K.block_count(); ++b) {
    const ConeBlock& blk = K.blocks()[b];
    int off = K.offset(b), len = blk.packed_dim();
    Vector db = slice(d, off, len), rb;
    const SubdiffBlock& sb = blocks[b];
    if (const auto* f = std::get_if<OrthantFlags>(&sb.w)) {
      rb.resize(len);
      for (int i = 0; i < len; ++i) rb[i] = f->flags[i] * db[i];
    } else if (const auto* s = std::get_if<SocW>(&sb.w)) {
      rb = s->w.mul(db);
    } else {
      rb = psd_apply(std::get<PsdW>(sb.w), blk.p, db);
    }
    std::copy(rb.begin(), rb.end(), out.begin() + off);
  }
  return out;
}

SymMatrix SubdiffElement::materialize(const Cone& K) const {
  SymMatrix W(K.dim());
  for (int b = 0; b < K.block_count(); ++b) {
    const ConeBlock& blk = K.blocks()[b];
    int off = K.offset(b), len = blk.packed_dim();
    const SubdiffBlock& sb = blocks[b];
    if (const auto* f = std::get_if<OrthantFlags>(&sb.w)) {
      for (int i = 0; i < len; ++i) W.set(off + i, off + i, f->flags[i]);
    } else if (const auto* s = std::get_if<SocW>(&sb.w)) {
      for (int i = 0; i < len; ++i)
        for (int j = i; j < len; ++j) W.set(off + i, off + j, s->w(i, j));
    } else {
      const PsdW& pw = std::get<PsdW>(sb.w);
      Matrix C(len, len);
      Vector e(len, 0.0);
      for (int j = 0; j < len; ++j) {
        e[j] = 1.0;
        C.set_col(j, psd_apply(pw, blk.p, e));
        e[j] = 0.0;
      }
      for (int i = 0; i < len; ++i)
        for (int j = i; j < len; ++j)
          W.set(off + i, off + j, 0.5 * (C(i, j) + C(j, i)));
    }
  }
  return W;
}

SubdiffElement bsubdiff_element(const Cone& K, const Vector& z) {
  assert(int(z.size()) == K.dim());
  SubdiffElement E;
  E.blocks.reserve(K.block_count());
  for (int b = 0; b < K.block_count(); ++b) {
    const ConeBlock& blk = K.blocks()[b];
    Vector zb = slice(z, K.offset(b), blk.packed_dim());
    switch (blk.kind) {
      case BlockKind::Orthant:
        E.blocks.push_back(orthant_element(zb, false));
        break;
      case BlockKind::Soc:
        E.blocks.push_back(soc_element(zb));
        break;
      case BlockKind::Psd:
        E.blocks.push_back(psd_element(zb, blk.p, false));
        break;
    }
  }
  return E;
}

std::vector<SubdiffElement> bsubdiff_alternatives(const Cone& K, const Vector& z) {
  SubdiffElement det = bsubdiff_element(K, z);
  std::vector<SubdiffElement> out{det};

  for (int b = 0; b < K.block_count(); ++b) {
    const ConeBlock& blk = K.blocks()[b];
    Vector zb = slice(z, K.offset(b), blk.packed_dim());
    double tol = block_tol(zb);
    std::vector<SubdiffBlock> variants;

    if (blk.kind == BlockKind::Orthant) {
      bool tie = false;
      for (double v : zb) tie = tie || std::abs(v) <= tol;
      if (tie) variants.push_back(orthant_element(zb, true));
    } else if (blk.kind == BlockKind::Soc) {
      int dim = int(zb.size());
      double zdot = zb[dim - 1];
      double u = 0.0;
      for (int i = 0; i + 1 < dim; ++i) u += zb[i] * zb[i];
      u = std::sqrt(u);
      if (u <= tol && std::abs(zdot) <= tol) {
        // vertex: the full subdifferential is a parametrized family; sample
        // the identity and one interior member along a fixed direction
        variants.push_back(SubdiffBlock{SocW{SymMatrix::identity(dim)}});
        if (dim >= 2) {
          Vector e1(dim - 1, 0.0);
          e1[0] = 1.0;
          variants.push_back(SubdiffBlock{SocW{soc_generic_w(e1, 0.0)}});
        }
      } else if (u > tol && std::abs(zdot - u) <= tol) {
        Vector v(dim - 1);
        for (int i = 0; i + 1 < dim; ++i) v[i] = zb[i] / u;
        variants.push_back(SubdiffBlock{SocW{soc_generic_w(v, 1.0)}});
      } else if (u > tol && std::abs(zdot + u) <= tol) {
        Vector v(dim - 1);
        for (int i = 0; i + 1 < dim; ++i) v[i] = zb[i] / u;
        variants.push_back(SubdiffBlock{SocW{soc_generic_w(v, -1.0)}});
      }
    } else {
      const PsdW& pw = std::get<PsdW>(det.blocks[b].w);
      if (!pw.beta.empty()) variants.push_back(psd_element(zb, blk.p, true));
    }

    for (auto& v : variants) {
      SubdiffElement alt = det;
      alt.blocks[b] = std::move(v);
      out.push_back(std::move(alt));
    }
  }
  return out;
}

Matrix lineality_basis(const Cone& K, const Vector& s) {
  assert(int(s.size()) == K.dim());
  // per-block basis columns, embedded block-diagonally
  std::vector<std::pair<int, Vector>> cols;  // (offset, block column)

  for (int b = 0; b < K.block_count(); ++b) {
    const ConeBlock& blk = K.blocks()[b];
    int off = K.offset(b), len = blk.packed_dim();
    Vector sb = slice(s, off, len);
    double tol = block_tol(sb);

    if (blk.kind == BlockKind::Orthant) {
      for (int i = 0; i < len; ++i) {
        if (sb[i] < -tol) throw std::invalid_argument("point is not in the cone");
        if (sb[i] > tol) {
          Vector e(len, 0.0);
          e[i] = 1.0;
          cols.emplace_back(off, e);
        }
      }
    } else if (blk.kind == BlockKind::Soc) {
      int dim = len;
      double sdot = sb[dim - 1];
      double u = 0.0;
      for (int i = 0; i + 1 < dim; ++i) u += sb[i] * sb[i];
      u = std::sqrt(u);
      if (sdot < u - tol) throw std::invalid_argument("point is not in the cone");
      if (sdot <= tol) {
        // vertex: the tangent cone is the cone itself, no lines
      } else if (sdot >= u + tol) {
        for (int i = 0; i < dim; ++i) {
          Vector e(dim, 0.0);
          e[i] = 1.0;
          cols.emplace_back(off, e);
        }
      } else {
        // boundary ray: lines tangent to the cone surface, the hyperplane
        // orthogonal to (sbar, -sdot); Householder completion of q = v/|v|
        Vector q(dim);
        for (int i = 0; i + 1 < dim; ++i) q[i] = sb[i];
        q[dim - 1] = -sdot;
        q = scaled(q, 1.0 / norm(q));
        Vector w(q);
        w[0] += q[0] >= 0.0 ? 1.0 : -1.0;
        double wn2 = dot(w, w);
        for (int j = 1; j < dim; ++j) {
          Vector h(dim, 0.0);
          h[j] = 1.0;
          axpy(h, -2.0 * w[j] / wn2, w);
          cols.emplace_back(off, h);
        }
      }
    } else {
      int p = blk.p;
      auto sd = eig_sym(svec_unpack(sb, p));
      if (sd.eigenvalues.back() < -tol)
        throw std::invalid_argument("point is not in the cone");
      std::vector<int> pos;
      for (int k = 0; k < p; ++k)
        if (sd.eigenvalues[k] > tol) pos.push_back(k);
      // directions P E_ij Pᵀ with (i,j) not both in the kernel eigenspace
      for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) {
          bool i_pos = std::find(pos.begin(), pos.end(), i) != pos.end();
          bool j_pos = std::find(pos.begin(), pos.end(), j) != pos.end();
          if (!i_pos && !j_pos) continue;
          SymMatrix E(p);
          E.set(i, j, i == j ? 1.0 : 1.0 / std::sqrt(2.0));
          cols.emplace_back(off, svec_pack(frame_conjugate(sd.P, E)));
        }
    }
  }

  Matrix L(K.dim(), int(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    const auto& [off, v] = cols[j];
    for (size_t i = 0; i < v.size(); ++i) L(off + int(i), int(j)) = v[i];
  }
  return L;
}

}  // namespace soalm

#include "soalm/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace soalm {

double dot(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

Vector add(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector sub(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector scaled(const Vector& a, double s) {
  Vector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

void axpy(Vector& a, double s, const Vector& b) {
  assert(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

Vector Matrix::mul(const Vector& v) const {
  assert(int(v.size()) == cols_);
  Vector r(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    const double* ai = a_.data() + size_t(i) * cols_;
    for (int j = 0; j < cols_; ++j) s += ai[j] * v[j];
    r[i] = s;
  }
  return r;
}

Vector Matrix::tmul(const Vector& v) const {
  assert(int(v.size()) == rows_);
  Vector r(cols_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double* ai = a_.data() + size_t(i) * cols_;
    for (int j = 0; j < cols_; ++j) r[j] += ai[j] * v[i];
  }
  return r;
}

Vector Matrix::row(int i) const {
  Vector r(cols_);
  for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

Vector Matrix::col(int j) const {
  Vector c(rows_);
  for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Matrix::set_col(int j, const Vector& v) {
  assert(int(v.size()) == rows_);
  for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

Matrix Matrix::identity(int n) {
  Matrix I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Matrix matmul(const Matrix& A, const Matrix& B) {
  assert(A.cols() == B.rows());
  Matrix C(A.rows(), B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int k = 0; k < A.cols(); ++k) {
      double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols(); ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

Matrix transpose(const Matrix& A) {
  Matrix T(A.cols(), A.rows());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
  return T;
}

Vector SymMatrix::mul(const Vector& v) const {
  assert(int(v.size()) == n_);
  Vector r(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    const double* ai = a_.data() + size_t(i) * n_;
    for (int j = 0; j < n_; ++j) s += ai[j] * v[j];
    r[i] = s;
  }
  return r;
}

double SymMatrix::quad(const Vector& v) const { return dot(v, mul(v)); }

double SymMatrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

double SymMatrix::frobenius() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

Matrix SymMatrix::as_matrix() const {
  Matrix M(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) M(i, j) = (*this)(i, j);
  return M;
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix I(n);
  for (int i = 0; i < n; ++i) I.set(i, i, 1.0);
  return I;
}

SymMatrix SymMatrix::symmetrized(const Matrix& M) {
  assert(M.rows() == M.cols());
  SymMatrix S(M.rows());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = i; j < M.cols(); ++j) S.set(i, j, 0.5 * (M(i, j) + M(j, i)));
  return S;
}

SymMatrix sym_add(const SymMatrix& A, const SymMatrix& B) {
  assert(A.dim() == B.dim());
  SymMatrix C(A.dim());
  for (int i = 0; i < A.dim(); ++i)
    for (int j = i; j < A.dim(); ++j) C.set(i, j, A(i, j) + B(i, j));
  return C;
}

SymMatrix sym_scaled(const SymMatrix& A, double s) {
  SymMatrix C(A.dim());
  for (int i = 0; i < A.dim(); ++i)
    for (int j = i; j < A.dim(); ++j) C.set(i, j, s * A(i, j));
  return C;
}

SymMatrix gram(const Matrix& A) {
  SymMatrix G(A.cols());
  for (int i = 0; i < A.cols(); ++i)
    for (int j = i; j < A.cols(); ++j) {
      double s = 0.0;
      for (int k = 0; k < A.rows(); ++k) s += A(k, i) * A(k, j);
      G.set(i, j, s);
    }
  return G;
}

SymMatrix congruence(const Matrix& A, const SymMatrix& W) {
  assert(W.dim() == A.rows());
  // WA first, then AᵀWA; symmetrize the result to kill rounding skew
  Matrix WA(A.rows(), A.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int k = 0; k < A.rows(); ++k) {
      double wik = W(i, k);
      if (wik == 0.0) continue;
      for (int j = 0; j < A.cols(); ++j) WA(i, j) += wik * A(k, j);
    }
  SymMatrix C(A.cols());
  for (int i = 0; i < A.cols(); ++i)
    for (int j = i; j < A.cols(); ++j) {
      double s = 0.0;
      for (int k = 0; k < A.rows(); ++k) s += A(k, i) * WA(k, j);
      double t = 0.0;
      for (int k = 0; k < A.rows(); ++k) t += A(k, j) * WA(k, i);
      C.set(i, j, 0.5 * (s + t));
    }
  return C;
}

SymMatrix SpectralDecomposition::reconstruct() const {
  int n = P.rows();
  SymMatrix Z(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += P(i, k) * eigenvalues[k] * P(j, k);
      Z.set(i, j, s);
    }
  return Z;
}

namespace {

double offdiag_frobenius(const Matrix& A) {
  double s = 0.0;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (i != j) s += A(i, j) * A(i, j);
  return std::sqrt(s);
}

}  // namespace

SpectralDecomposition eig_sym(const SymMatrix& Z) {
  int n = Z.dim();
  SpectralDecomposition sd;
  sd.tau_rank = 1e-9 * std::max(1.0, Z.frobenius());
  if (n == 0) {
    sd.P = Matrix(0, 0);
    return sd;
  }

  Matrix A = Z.as_matrix();
  Matrix V = Matrix::identity(n);
  const double stop = 1e-14 * std::max(Z.frobenius(), 1e-300);

  bool converged = offdiag_frobenius(A) <= stop;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (std::abs(apq) <= 0.0) continue;
        // Jacobi rotation zeroing A(p,q)
        double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    converged = offdiag_frobenius(A) <= stop;
  }
  if (!converged) throw std::runtime_error("eig_sym: Jacobi sweeps did not converge");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return A(i, i) > A(j, j); });

  sd.eigenvalues.resize(n);
  sd.P = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    int src = order[k];
    sd.eigenvalues[k] = A(src, src);
    for (int i = 0; i < n; ++i) sd.P(i, k) = V(i, src);
  }
  for (int k = 0; k < n; ++k) {
    double w = sd.eigenvalues[k];
    if (w > sd.tau_rank)
      sd.alpha.push_back(k);
    else if (w < -sd.tau_rank)
      sd.gamma.push_back(k);
    else
      sd.beta.push_back(k);
  }
  return sd;
}

// LDLᵀ rather than LLᵀ: one division per pivot keeps the solve exact on
// diagonal systems, which the hand-solved fixtures rely on.
std::optional<SpdFactor> SpdFactor::compute(const SymMatrix& A) {
  int n = A.dim();
  SpdFactor f;
  f.n_ = n;
  f.l_.assign(size_t(n) * n, 0.0);
  double pivot_floor = 1e-12 * A.trace() / std::max(n, 1);
  if (pivot_floor <= 0.0) pivot_floor = 1e-300;
  auto L = [&](int i, int j) -> double& { return f.l_[size_t(i) * n + j]; };
  for (int j = 0; j < n; ++j) {
    double d = A(j, j);
    for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k) * L(k, k);
    if (!(d > pivot_floor)) return std::nullopt;
    L(j, j) = d;  // diagonal holds D
    for (int i = j + 1; i < n; ++i) {
      double s = A(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k) * L(k, k);
      L(i, j) = s / d;
    }
  }
  return f;
}

Vector SpdFactor::solve(const Vector& b) const {
  assert(int(b.size()) == n_);
  Vector y(b);
  auto L = [&](int i, int j) { return l_[size_t(i) * n_ + j]; };
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < i; ++k) y[i] -= L(i, k) * y[k];
  for (int i = 0; i < n_; ++i) y[i] /= L(i, i);
  for (int i = n_ - 1; i >= 0; --i)
    for (int k = i + 1; k < n_; ++k) y[i] -= L(k, i) * y[k];
  return y;
}

Vector solve_spd(const SymMatrix& A, const Vector& b) {
  auto f = SpdFactor::compute(A);
  if (!f) throw std::runtime_error("not positive definite");
  return f->solve(b);
}

SymMatrix pinv_sym(const SymMatrix& Z) {
  auto sd = eig_sym(Z);
  int n = Z.dim();
  SymMatrix P(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        double w = sd.eigenvalues[k];
        if (std::abs(w) <= sd.tau_rank) continue;
        s += sd.P(i, k) * sd.P(j, k) / w;
      }
      P.set(i, j, s);
    }
  return P;
}

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& F, const Vector& u,
                   double step) {
  Vector up(u), um(u);
  Matrix J;
  for (size_t j = 0; j < u.size(); ++j) {
    up[j] = u[j] + step;
    um[j] = u[j] - step;
    Vector fp = F(up), fm = F(um);
    up[j] = u[j];
    um[j] = u[j];
    if (J.rows() == 0 && J.cols() == 0) J = Matrix(int(fp.size()), int(u.size()));
    for (size_t i = 0; i < fp.size(); ++i) J(int(i), int(j)) = (fp[i] - fm[i]) / (2.0 * step);
  }
  if (J.cols() != int(u.size())) J = Matrix(0, int(u.size()));
  return J;
}

}  // namespace soalm

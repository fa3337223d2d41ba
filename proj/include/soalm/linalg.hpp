// Dense symmetric linear algebra kernel: cyclic-Jacobi eigensolver, Cholesky
// solves, spectral pseudoinverse, and finite-difference Jacobians. Sized for
// the small systems this solver produces (n and the cone dimension are tens,
// not thousands), so everything is plain row-major storage.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace soalm {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm(const Vector& v);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scaled(const Vector& a, double s);
// a += s*b
void axpy(Vector& a, double s, const Vector& b);

// Dense row-major matrix. rows*cols may be zero.
class Matrix {
public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  Vector mul(const Vector& v) const;   // A v
  Vector tmul(const Vector& v) const;  // Aᵀ v
  Vector row(int i) const;
  Vector col(int j) const;
  void set_col(int j, const Vector& v);
  double frobenius() const;

  static Matrix identity(int n);

private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

Matrix matmul(const Matrix& A, const Matrix& B);
Matrix transpose(const Matrix& A);

// Symmetric matrix; the mirrored entry is written on every set() so storage
// can never go asymmetric.
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), a_(size_t(n) * n, 0.0) {}

  int dim() const { return n_; }
  double operator()(int i, int j) const { return a_[size_t(i) * n_ + j]; }
  void set(int i, int j, double v) {
    a_[size_t(i) * n_ + j] = v;
    a_[size_t(j) * n_ + i] = v;
  }
  void add(int i, int j, double v) { set(i, j, (*this)(i, j) + v); }

  Vector mul(const Vector& v) const;
  double quad(const Vector& v) const;  // vᵀ A v
  double trace() const;
  double frobenius() const;
  Matrix as_matrix() const;

  static SymMatrix identity(int n);
  // (M + Mᵀ)/2
  static SymMatrix symmetrized(const Matrix& M);

private:
  int n_ = 0;
  std::vector<double> a_;
};

SymMatrix sym_add(const SymMatrix& A, const SymMatrix& B);
SymMatrix sym_scaled(const SymMatrix& A, double s);
// Aᵀ A for rectangular A
SymMatrix gram(const Matrix& A);
// Aᵀ W A, W symmetric with dim = A.rows()
SymMatrix congruence(const Matrix& A, const SymMatrix& W);

// Eigenvalues sorted descending; columns of P are the matching eigenvectors.
// alpha/beta/gamma partition the indices by sign against tau_rank.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix P;
  std::vector<int> alpha;  // eigenvalue >  tau_rank
  std::vector<int> beta;   // |eigenvalue| <= tau_rank
  std::vector<int> gamma;  // eigenvalue < -tau_rank
  double tau_rank = 0.0;

  SymMatrix reconstruct() const;
};

// Cyclic Jacobi sweeps; converges when the off-diagonal Frobenius mass falls
// below 1e-14*||Z||_F, capped at 100 sweeps (throws std::runtime_error past
// the cap).
SpectralDecomposition eig_sym(const SymMatrix& Z);

// Cholesky factor of an SPD matrix. compute() returns nullopt when a pivot
// falls below 1e-12*trace(A)/dim, so callers can fall back (Levenberg shift,
// first-order step) instead of catching.
class SpdFactor {
public:
  static std::optional<SpdFactor> compute(const SymMatrix& A);
  Vector solve(const Vector& b) const;
  int dim() const { return n_; }

private:
  int n_ = 0;
  std::vector<double> l_;  // lower triangle, row-major
};

// Convenience wrapper; throws std::runtime_error("not positive definite").
Vector solve_spd(const SymMatrix& A, const Vector& b);

// Moore-Penrose pseudoinverse through eig_sym with eigenvalue cutoff
// tau_rank = 1e-9*max(1, ||Z||_F).
SymMatrix pinv_sym(const SymMatrix& Z);

// Central-difference Jacobian of F at u, one column per coordinate.
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& F, const Vector& u,
                   double step = 1e-6);

}  // namespace soalm

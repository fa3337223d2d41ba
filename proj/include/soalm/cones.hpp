// Product cone K = orthant x second-order x PSD blocks: projection, distance,
// Bouligand-subdifferential elements of the projection, and orthonormal bases
// of the lineality space of tangent cones. PSD blocks live in packed
// coordinates (upper triangle, off-diagonals scaled by sqrt(2)) so the packed
// Euclidean inner product equals the trace inner product.
#pragma once

#include <initializer_list>
#include <variant>
#include <vector>

#include "soalm/linalg.hpp"

namespace soalm {

enum class BlockKind { Orthant, Soc, Psd };

struct ConeBlock {
  BlockKind kind;
  int p;  // orthant size, SOC ambient dim r+1, or PSD matrix order
  int packed_dim() const { return kind == BlockKind::Psd ? p * (p + 1) / 2 : p; }
};

class Cone {
public:
  Cone() = default;
  explicit Cone(std::vector<ConeBlock> blocks);
  Cone(std::initializer_list<ConeBlock> blocks)
      : Cone(std::vector<ConeBlock>(blocks)) {}

  static ConeBlock orthant(int p) { return {BlockKind::Orthant, p}; }
  static ConeBlock soc(int dim) { return {BlockKind::Soc, dim}; }
  static ConeBlock psd(int p) { return {BlockKind::Psd, p}; }

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  int block_count() const { return int(blocks_.size()); }
  int offset(int b) const { return offsets_[b]; }
  int dim() const { return dim_; }  // total packed dimension

private:
  std::vector<ConeBlock> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

// Packed symmetric coordinates: column-major upper triangle,
// (M00, s*M01, M11, s*M02, s*M12, M22, ...) with s = sqrt(2).
Vector svec_pack(const SymMatrix& M);
SymMatrix svec_unpack(const Vector& v, int p);

Vector project(const Cone& K, const Vector& z);
double dist(const Cone& K, const Vector& z);

// One element of the Bouligand subdifferential of the projection at z,
// stored per block:
//  - orthant: 0/1 flags per coordinate,
//  - SOC: the explicit (r+1)x(r+1) matrix,
//  - PSD: the spectral frame plus the damping data of the congruence form.
// Tie-breaks at kinks are the deterministic choices documented per kind.
struct OrthantFlags {
  std::vector<double> flags;
};

struct SocW {
  SymMatrix w;
};

struct PsdW {
  Matrix P;                      // eigenvector frame of the unpacked z block
  Vector eigenvalues;            // descending
  std::vector<int> alpha, beta, gamma;
  std::vector<double> u_alpha_gamma;  // row-major |alpha| x |gamma|
  // the beta block splits into a kept part and a zeroed part; the
  // deterministic element keeps all of beta
  std::vector<int> beta_keep, beta_zero;
};

struct SubdiffBlock {
  std::variant<OrthantFlags, SocW, PsdW> w;
};

class SubdiffElement {
public:
  std::vector<SubdiffBlock> blocks;

  Vector apply(const Cone& K, const Vector& d) const;  // W d
  SymMatrix materialize(const Cone& K) const;          // dense dimZ x dimZ
};

SubdiffElement bsubdiff_element(const Cone& K, const Vector& z);

// All subdifferential elements sampled by the assumption checker: the
// deterministic element first, then one variant per kink block (other
// admissible element at that block, deterministic elsewhere).
std::vector<SubdiffElement> bsubdiff_alternatives(const Cone& K, const Vector& z);

// Orthonormal basis (columns) of the lineality space of the tangent cone
// T_K(s). Throws std::invalid_argument when s is not in K within tolerance.
Matrix lineality_basis(const Cone& K, const Vector& s);

}  // namespace soalm

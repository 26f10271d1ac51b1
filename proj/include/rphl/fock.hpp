#pragma once

#include "rphl/lattice.hpp"
#include "rphl/types.hpp"

#include <bit>
#include <cstdint>
#include <string_view>
#include <vector>

namespace rphl {

enum class SpaceKind { Spinless, Spinful, Boson, SpinfulBoson };

std::string_view to_string(SpaceKind kind);

/// Hilbert-space tag carried by every OperatorMatrix.
struct Space {
  SpaceKind kind;
  Index dim;

  friend bool operator==(const Space&, const Space&) = default;
};

/// Dense complex operator tagged with its factorization. Arithmetic between
/// operators is only defined for equal tags.
class OperatorMatrix {
 public:
  OperatorMatrix(MatrixXc entries, Space space);

  static OperatorMatrix identity(Space space);
  static OperatorMatrix zero(Space space);

  const MatrixXc& matrix() const { return entries_; }
  const Space& space() const { return space_; }
  Index dim() const { return space_.dim; }

  OperatorMatrix adjoint() const;

  OperatorMatrix& operator+=(const OperatorMatrix& other);
  OperatorMatrix& operator-=(const OperatorMatrix& other);
  OperatorMatrix& operator*=(Complex s);

  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
  friend OperatorMatrix operator*(Complex s, OperatorMatrix a) { return a *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  void require_same_space(const OperatorMatrix& other) const;

  MatrixXc entries_;
  Space space_;
};

/// electron ⊗ boson, for a spinful electron operator and a boson operator.
OperatorMatrix tensor(const OperatorMatrix& electron, const OperatorMatrix& boson);

/// Occupation-number basis of one spin species: bit i of a state set ⇔ site i occupied.
struct FermionBasis {
  explicit FermionBasis(Index sites);

  Index n_sites;
  Index dim;

  Space spinless() const { return {SpaceKind::Spinless, dim}; }
  Space spinful() const { return {SpaceKind::Spinful, dim * dim}; }
};

/// Sign of moving c_x past the occupied sites that precede x.
inline int fermion_sign(std::uint64_t state, Index x) {
  const std::uint64_t below = (std::uint64_t{1} << x) - 1;
  return (std::popcount(state & below) & 1) ? -1 : 1;
}

/// Matrix of c_x in the bitmask basis.
template <typename Scalar = double>
Matrix<Scalar> annihilator_matrix(const FermionBasis& basis, Index x) {
  if (x < 0 || x >= basis.n_sites) throw PreconditionError("site index out of range");
  Matrix<Scalar> c = Matrix<Scalar>::Zero(basis.dim, basis.dim);
  const std::uint64_t bit = std::uint64_t{1} << x;
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(basis.dim); ++s) {
    if (s & bit) c(static_cast<Index>(s ^ bit), static_cast<Index>(s)) = Scalar(fermion_sign(s, x));
  }
  return c;
}

/// (-1)^N on one spin species.
template <typename Scalar = double>
Matrix<Scalar> parity_matrix(const FermionBasis& basis) {
  Vector<Scalar> d(basis.dim);
  for (Index s = 0; s < basis.dim; ++s) {
    d(s) = Scalar((std::popcount(static_cast<std::uint64_t>(s)) & 1) ? -1 : 1);
  }
  return d.asDiagonal();
}

/// Spinless c_x.
OperatorMatrix annihilator(const FermionBasis& basis, Index x);

/// Spinful operators under 𝔈 = 𝔉_a ⊗ 𝔉_a with spin up in the first factor:
/// c_up(x) = c_x ⊗ 1, c_dn(x) = (-1)^{N_a} ⊗ c_x.
class SpinfulOps {
 public:
  explicit SpinfulOps(const FermionBasis& basis);

  const FermionBasis& basis() const { return basis_; }
  Space space() const { return basis_.spinful(); }

  const OperatorMatrix& c_up(Index x) const { return up_.at(static_cast<std::size_t>(x)); }
  const OperatorMatrix& c_dn(Index x) const { return dn_.at(static_cast<std::size_t>(x)); }
  OperatorMatrix n_up(Index x) const;
  OperatorMatrix n_dn(Index x) const;
  /// n_x = n_up(x) + n_dn(x).
  OperatorMatrix n(Index x) const;

  /// op ⊗ 1 and 1 ⊗ op for a spinless operator.
  OperatorMatrix up_slot(const MatrixXc& op) const;
  OperatorMatrix dn_slot(const MatrixXc& op) const;

 private:
  FermionBasis basis_;
  std::vector<OperatorMatrix> up_;
  std::vector<OperatorMatrix> dn_;
};

SpinfulOps spinful_ops(const FermionBasis& basis);

/// Largest deviation of all spinful anticommutators {c_a, c_b†} - δ_ab and {c_a, c_b} from zero.
double car_residual(const SpinfulOps& ops);

/// Largest deviation of the spinless anticommutation relations.
double car_residual(const FermionBasis& basis);

/// Deviation of 𝒰 from the hole-particle relations
///   𝒰 (c_x⊗1) 𝒰* = γ(x) c_x†⊗1,  𝒰 (c_x†⊗1) 𝒰* = γ(x) c_x⊗1,  𝒰 (1⊗c_x) 𝒰* = 1⊗c_x.
double hole_particle_residual(const OperatorMatrix& unitary, const FermionBasis& basis,
                              const TorusLattice& lat);

/// Hole-particle unitary on the spinful space, built as an ordered product of per-site
/// factors c_x + γ(x) c_x† on the spin-up slot (with a parity fix for even site counts) and
/// validated against the defining relations.
OperatorMatrix hole_particle_unitary(const FermionBasis& basis, const TorusLattice& lat);

}  // namespace rphl

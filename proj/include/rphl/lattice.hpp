#pragma once

#include "rphl/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace rphl {

/// Integer coordinate vector of length d (1 ≤ d ≤ 3).
using Coord = std::vector<int>;

/// Unordered nearest-neighbor bond, stored once, oriented `from -> to = from + e_axis`
/// (with periodic wrap).
struct Bond {
  Index from;
  Index to;
  int axis;
};

/// Finite simple-cubic torus [-ell/2, ell/2)^d with lexicographic site order.
class TorusLattice {
 public:
  TorusLattice(int d, int ell);

  int dimension() const { return d_; }
  int side() const { return ell_; }
  Index num_sites() const { return static_cast<Index>(sites_.size()); }

  const std::vector<Coord>& sites() const { return sites_; }
  const Coord& site(Index i) const { return sites_.at(static_cast<std::size_t>(i)); }
  Index index_of(const Coord& x) const;

  /// Reduce every component into [-ell/2, ell/2).
  Coord wrap(Coord x) const;

  /// Bipartition sign (-1)^{x_1 + ... + x_d}.
  int parity(Index i) const;

  const std::vector<Bond>& bonds() const { return bonds_; }
  bool are_neighbors(Index a, Index b) const;
  /// Nearest-neighbor set of site i (distinct sites).
  std::vector<Index> neighbors(Index i) const;

 private:
  int d_;
  int ell_;
  std::vector<Coord> sites_;
  std::map<Coord, Index> index_;
  std::vector<Bond> bonds_;
};

TorusLattice build_torus(int d, int ell);

/// Momentum p = (2π/ell)·m reduced to [-π, π)^d, with its integer label m ∈ [-ell/2, ell/2)^d.
struct Momentum {
  Coord label;
  VectorXr p;
};

/// Discrete dual grid of the torus, one point per site, same lexicographic order as the sites.
class MomentumGrid {
 public:
  explicit MomentumGrid(const TorusLattice& lat);

  const std::vector<Momentum>& points() const { return points_; }
  Index size() const { return static_cast<Index>(points_.size()); }
  /// Grid point with label -m (mod ell).
  const Momentum& negate(const Momentum& q) const;
  /// Grid point for an integer label (wrapped); throws PreconditionError if d mismatches.
  const Momentum& at(const Coord& label) const;

 private:
  TorusLattice lat_;
  std::vector<Momentum> points_;
};

/// Coulomb coupling U(x) on displacement vectors of Z^d; absent entries are zero.
struct CouplingEntry {
  Coord dx;
  double u;
};

class CouplingProfile {
 public:
  CouplingProfile() = default;
  CouplingProfile(std::vector<CouplingEntry> entries, std::string label);

  /// U(x) = onsite·δ_{x,0} + (nn / 2d)·[|x| = 1].
  static CouplingProfile onsite_nn(int d, double onsite, double nn);

  const std::vector<CouplingEntry>& entries() const { return entries_; }
  const std::string& label() const { return label_; }

  /// Torus-periodized profile U_Λ(z) = Σ_{x ≡ z mod ell} U(x), indexed by the site whose
  /// coordinate is z.
  VectorXr on_torus(const TorusLattice& lat) const;

  /// max_z |U_Λ(z) - U_Λ(-z)|.
  double asymmetry(const TorusLattice& lat) const;

  /// Circulant coupling matrix M_{xy} = U_Λ(x - y). Requires a symmetric profile.
  MatrixXr matrix(const TorusLattice& lat) const;

  double max_abs_value() const;

 private:
  std::vector<CouplingEntry> entries_;
  std::string label_;
};

/// Û_Λ(p) = Σ_{x∈Λ} e^{-i x·p} U_Λ(x). Throws NumericalCheckError if the imaginary part
/// exceeds tol::kFourierImag.
double coupling_fourier(const CouplingProfile& coupling, const TorusLattice& lat,
                        const Momentum& p);

struct ConditionReport {
  bool a2_holds;
  double min_fourier;
  Momentum argmin;
};

ConditionReport check_conditions(const CouplingProfile& coupling, const TorusLattice& lat);

}  // namespace rphl

#pragma once

#include "rphl/fock.hpp"
#include "rphl/lattice.hpp"
#include "rphl/types.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace rphl {

using Vector3r = Eigen::Vector3d;

/// Mode label: k = (2π/L)·(n1, n2, n3) and polarization λ ∈ {1, 2}.
struct ModeLabel {
  std::array<int, 3> n;
  int lambda;

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

struct PhotonMode {
  ModeLabel label;
  Vector3r k;
  double omega;
  Vector3r polarization;
};

/// Transverse polarization vectors: ε(k,1) = (k2, -k1, 0)/|k_⊥|, ε(k,2) = k̂ ∧ ε(k,1),
/// and ε = 0 when (k1, k2) = (0, 0).
Vector3r polarization(const Vector3r& k, int lambda);

/// ω(k) = |k| for k ≠ 0 and ω(0) = m0.
double dispersion(const Vector3r& k, double m0);

struct PhotonConfig {
  int L = 2;
  double kappa = 4.0;
  double m0 = 1.0;
  int n_max = 4;
  /// Explicit mode list; empty selects every mode of the cutoff ball.
  std::vector<ModeLabel> modes;
  /// Only used with the full ball.
  bool include_zero_mode = false;
};

class PhotonSector {
 public:
  PhotonSector(int L, double kappa, double m0, int n_max, std::vector<PhotonMode> modes);

  int box_side() const { return L_; }
  double kappa() const { return kappa_; }
  double m0() const { return m0_; }
  int n_max() const { return n_max_; }
  double volume() const { return static_cast<double>(L_) * L_ * L_; }
  const std::vector<PhotonMode>& modes() const { return modes_; }
  Index num_modes() const { return static_cast<Index>(modes_.size()); }
  Index boson_dim() const { return boson_dim_; }
  Space space() const { return {SpaceKind::Boson, boson_dim_}; }

 private:
  int L_;
  double kappa_;
  double m0_;
  int n_max_;
  std::vector<PhotonMode> modes_;
  Index boson_dim_;
};

PhotonMode make_mode(const ModeLabel& label, int L, double m0);

/// Every mode of (2π/L)Z³ inside the ball |k| ≤ kappa, both polarizations.
std::vector<PhotonMode> enumerate_modes(int L, double kappa, double m0, bool include_zero);

/// Validates the configuration and refuses sectors whose dimension times
/// `electron_dim` exceeds the guard.
PhotonSector build_sector(const PhotonConfig& config, Index electron_dim = 1);

/// Truncated single-mode annihilator: a|n⟩ = √n |n-1⟩ for n ≤ n_max.
template <typename Scalar = double>
Matrix<Scalar> ladder_annihilator(int n_max) {
  Matrix<Scalar> a = Matrix<Scalar>::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = Scalar(std::sqrt(static_cast<double>(n)));
  return a;
}

/// Ladder operators of every mode on the product boson space (mode 0 is the slowest index).
class BosonOps {
 public:
  explicit BosonOps(const PhotonSector& sector);

  const OperatorMatrix& a(Index mode) const { return a_.at(static_cast<std::size_t>(mode)); }
  OperatorMatrix a_dagger(Index mode) const { return a(mode).adjoint(); }
  OperatorMatrix number(Index mode) const { return a_dagger(mode) * a(mode); }

 private:
  std::vector<OperatorMatrix> a_;
};

/// H_f = Σ ω(k) a(k,λ)† a(k,λ).
OperatorMatrix free_field_energy(const PhotonSector& sector);

struct PlanckResult {
  double truncated;
  double closed_form;
  double relative_gap;  // (closed_form - truncated) / closed_form
  double gap_bound;     // Σ e^{-βω(n_max+1)} / (1 - e^{-βω})
};

PlanckResult planck_partition(const PhotonSector& sector, double beta);

struct EuclideanResult {
  double trace_side;
  double covariance_side;
  double gap;
};

/// Thermal two-point function of φ = (a + a†)/√2 at imaginary times t, s for one mode of
/// frequency omega, against the Gaussian covariance formula.
EuclideanResult euclidean_two_point(double omega, int n_max, double beta, double t, double s);
EuclideanResult euclidean_two_point(const PhotonSector& single_mode, double beta, double t,
                                    double s);

/// Position of a site in the photon box: coordinates padded with zeros up to three.
Vector3r embed(const TorusLattice& lat, Index site);

/// Coefficient g of a(k,λ) in the straight-line integral of 𝐀 from site `from` along the
/// unit step of `bond` (forward orientation).
Complex bond_coupling(const PhotonSector& sector, const TorusLattice& lat, const Bond& bond,
                      const PhotonMode& mode);

/// Φ_{xy} = ∫_{C_xy} dr·𝐀(r) for the nearest-neighbor pair (x, y), straight unit path.
/// The reverse orientation is the negated forward generator.
OperatorMatrix bond_phase_generator(const PhotonSector& sector, const TorusLattice& lat,
                                    Index x, Index y);

/// exp{sign · i e Φ} via the spectral decomposition of the Hermitian generator Φ.
OperatorMatrix peierls_phase(const OperatorMatrix& generator, double charge, int sign = +1);

}  // namespace rphl

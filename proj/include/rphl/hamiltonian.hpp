#pragma once

#include "rphl/fock.hpp"
#include "rphl/lattice.hpp"
#include "rphl/photon.hpp"
#include "rphl/types.hpp"

#include <optional>

namespace rphl {

/// Model parameters. Hamiltonian builders never read `beta`; it travels with the model so
/// that reports can echo one object. Builders accept t = 0 (atomic limit); experiment
/// configs require t > 0.
struct ModelConfig {
  double t;
  double e_charge;
  double beta;
  TorusLattice lattice;
  CouplingProfile coupling;
  std::optional<PhotonSector> photon;

  FermionBasis basis() const { return FermionBasis(lattice.num_sites()); }
  Index electron_dim() const;
  Index total_dim() const;
  /// Spinful, or spinful⊗boson when a photon sector is present.
  Space space() const;
  void validate() const;
};

enum class Spin { Up, Down };

/// T_{±e,σ} = Σ_{bonds, both directions} t c_x†c_y (on the σ slot) ⊗ exp{±ie Φ_xy}.
/// Without a photon sector the phases are 1.
OperatorMatrix hopping(const ModelConfig& config, Spin spin, int charge_sign);

/// Electron-only Hubbard Hamiltonian: -t Σ c_{xσ}†c_{yσ} + ½ Σ U(x-y)(n_x-1)(n_y-1).
/// Any photon sector in `config` is ignored.
OperatorMatrix build_hubbard(const ModelConfig& config);

/// ½ Σ_{x,y} U(x-y)(n_x-1)(n_y-1), diagonal on the spinful space.
OperatorMatrix build_coulomb(const TorusLattice& lat, const CouplingProfile& coupling);

/// H_{e-p} = -T_{+e,↑} - T_{+e,↓}. Requires a photon sector.
OperatorMatrix build_electron_photon(const ModelConfig& config);

/// H = H_{e-p} + H_{e-e}⊗1 + 1⊗H_f, or build_hubbard when the photon is absent.
OperatorMatrix build_total(const ModelConfig& config);

/// Ĥ = -T_{-e,↑} - T_{+e,↓} + ½ Σ U(x-y) q_x q_y ⊗ 1 + 1⊗H_f with q_x = n_x⊗1 - 1⊗n_x.
OperatorMatrix build_transformed(const ModelConfig& config);

/// Ĥ(h): Ĥ with the interaction replaced by ½ Σ U(x-y)(q_x - h_x)(q_y - h_y).
OperatorMatrix build_deformed(const ModelConfig& config, const VectorXr& h);
/// Complex sources are rejected unless every imaginary part is exactly zero.
OperatorMatrix build_deformed(const ModelConfig& config, const VectorXc& h);

/// Diagonal of the site observable n_up(x) + dn_sign·n_dn(x) - offset on every basis
/// state of the model space.
VectorXr occupation_diagonal(const ModelConfig& config, Index x, int dn_sign, double offset);

/// Diagonal site observables on the model's space (tensored with the boson identity if present).
OperatorMatrix density_fluctuation(const ModelConfig& config, Index x);  // n_x - 1
OperatorMatrix spin_imbalance(const ModelConfig& config, Index x);       // q_x
OperatorMatrix site_density(const ModelConfig& config, Index x);         // n_x

/// 𝒰 on the model's space (𝒰 ⊗ 1_boson when a photon sector is present).
OperatorMatrix model_hole_particle_unitary(const ModelConfig& config);

}  // namespace rphl

#include "rphl/hamiltonian.hpp"

#include <cstdint>
#include <functional>
#include <utility>

namespace rphl {

Index ModelConfig::electron_dim() const {
  const Index n = lattice.num_sites();
  if (n > 15) return kHardDimensionLimit + 1;
  return Index{1} << (2 * n);
}

Index ModelConfig::total_dim() const {
  const Index e = electron_dim();
  return photon ? e * photon->boson_dim() : e;
}

Space ModelConfig::space() const {
  return photon ? Space{SpaceKind::SpinfulBoson, total_dim()} : Space{SpaceKind::Spinful, total_dim()};
}

void ModelConfig::validate() const {
  if (!(t >= 0.0)) throw PreconditionError("hopping t must be non-negative");
  if (!(beta > 0.0)) throw PreconditionError("beta must be positive");
  check_dimension(electron_dim(), "electron space");
  if (photon) check_dimension(photon->boson_dim(), "photon sector");
  check_dimension(total_dim(), "model Hilbert space");
}

namespace {

bool occupied(std::uint64_t mask, Index x) { return (mask >> x) & 1U; }

/// Diagonal operator on the model space from a function of the (up, down) occupation masks.
OperatorMatrix diagonal_operator(const ModelConfig& config,
                                 const std::function<double(std::uint64_t, std::uint64_t)>& f) {
  const Index single = Index{1} << config.lattice.num_sites();
  const Index boson = config.photon ? config.photon->boson_dim() : 1;
  VectorXc diag(config.total_dim());
  for (Index s = 0; s < config.total_dim(); ++s) {
    const Index electron = s / boson;
    diag(s) = f(static_cast<std::uint64_t>(electron / single),
                static_cast<std::uint64_t>(electron % single));
  }
  return {diag.asDiagonal(), config.space()};
}

double interaction_energy(const MatrixXr& u, const VectorXr& field) {
  return 0.5 * field.dot(u * field);
}

VectorXr site_charges(Index n, std::uint64_t up, std::uint64_t dn, int dn_sign, double offset) {
  VectorXr q(n);
  for (Index x = 0; x < n; ++x) {
    q(x) = (occupied(up, x) ? 1.0 : 0.0) + dn_sign * (occupied(dn, x) ? 1.0 : 0.0) - offset;
  }
  return q;
}

MatrixXc spinful_hop(const FermionBasis& basis, Index x, Index y, Spin spin) {
  const MatrixXr cx = annihilator_matrix<double>(basis, x);
  const MatrixXr cy = annihilator_matrix<double>(basis, y);
  const MatrixXr hop = cx.transpose() * cy;
  const MatrixXr one = MatrixXr::Identity(basis.dim, basis.dim);
  return spin == Spin::Up ? kron(hop, one).cast<Complex>() : kron(one, hop).cast<Complex>();
}

}  // namespace

OperatorMatrix hopping(const ModelConfig& config, Spin spin, int charge_sign) {
  config.validate();
  const FermionBasis basis = config.basis();
  OperatorMatrix total = OperatorMatrix::zero(config.space());
  for (const auto& bond : config.lattice.bonds()) {
    const MatrixXc forward = spinful_hop(basis, bond.from, bond.to, spin);
    const MatrixXc backward = forward.adjoint();
    if (!config.photon) {
      total += OperatorMatrix(config.t * (forward + backward), config.space());
      continue;
    }
    // exp{±ieΦ_yx} = exp{±ieΦ_xy}† because Φ_yx = -Φ_xy.
    const OperatorMatrix phi = bond_phase_generator(*config.photon, config.lattice, bond.from, bond.to);
    const OperatorMatrix phase = peierls_phase(phi, config.e_charge, charge_sign);
    total += OperatorMatrix(config.t * kron(forward, phase.matrix()), config.space());
    total += OperatorMatrix(config.t * kron(backward, phase.matrix().adjoint()), config.space());
  }
  return total;
}

OperatorMatrix build_coulomb(const TorusLattice& lat, const CouplingProfile& coupling) {
  const Index n = lat.num_sites();
  const FermionBasis basis(n);
  check_dimension(basis.dim * basis.dim, "Coulomb term");
  const MatrixXr u = coupling.matrix(lat);
  VectorXc diag(basis.dim * basis.dim);
  for (Index s = 0; s < diag.size(); ++s) {
    const auto up = static_cast<std::uint64_t>(s / basis.dim);
    const auto dn = static_cast<std::uint64_t>(s % basis.dim);
    diag(s) = interaction_energy(u, site_charges(n, up, dn, +1, 1.0));
  }
  return {diag.asDiagonal(), basis.spinful()};
}

OperatorMatrix build_hubbard(const ModelConfig& config) {
  ModelConfig electrons = config;
  electrons.photon.reset();
  OperatorMatrix h = build_coulomb(electrons.lattice, electrons.coupling);
  h -= hopping(electrons, Spin::Up, +1);
  h -= hopping(electrons, Spin::Down, +1);
  return h;
}

OperatorMatrix build_electron_photon(const ModelConfig& config) {
  if (!config.photon) throw PreconditionError("electron-photon term requires a photon sector");
  OperatorMatrix h = OperatorMatrix::zero(config.space());
  h -= hopping(config, Spin::Up, +1);
  h -= hopping(config, Spin::Down, +1);
  return h;
}

namespace {

OperatorMatrix field_energy_term(const ModelConfig& config) {
  const OperatorMatrix hf = free_field_energy(*config.photon);
  return {kron(MatrixXc::Identity(config.electron_dim(), config.electron_dim()), hf.matrix()),
          config.space()};
}

}  // namespace

OperatorMatrix build_total(const ModelConfig& config) {
  config.validate();
  if (!config.photon) return build_hubbard(config);
  const MatrixXr u = config.coupling.matrix(config.lattice);
  const Index n = config.lattice.num_sites();
  OperatorMatrix h = diagonal_operator(config, [&](std::uint64_t up, std::uint64_t dn) {
    return interaction_energy(u, site_charges(n, up, dn, +1, 1.0));
  });
  h += build_electron_photon(config);
  h += field_energy_term(config);
  return h;
}

OperatorMatrix build_deformed(const ModelConfig& config, const VectorXr& h) {
  config.validate();
  const Index n = config.lattice.num_sites();
  if (h.size() != n) throw PreconditionError("source field must have one entry per site");
  const MatrixXr u = config.coupling.matrix(config.lattice);
  OperatorMatrix out = diagonal_operator(config, [&](std::uint64_t up, std::uint64_t dn) {
    return interaction_energy(u, site_charges(n, up, dn, -1, 0.0) - h);
  });
  out -= hopping(config, Spin::Up, -1);
  out -= hopping(config, Spin::Down, +1);
  if (config.photon) out += field_energy_term(config);
  return out;
}

OperatorMatrix build_deformed(const ModelConfig& config, const VectorXc& h) {
  if (h.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw PreconditionError("deformed Hamiltonian requires a real source field");
  }
  return build_deformed(config, VectorXr(h.real()));
}

OperatorMatrix build_transformed(const ModelConfig& config) {
  const VectorXr zero = VectorXr::Zero(config.lattice.num_sites());
  return build_deformed(config, zero);
}

VectorXr occupation_diagonal(const ModelConfig& config, Index x, int dn_sign, double offset) {
  if (x < 0 || x >= config.lattice.num_sites()) throw PreconditionError("site index out of range");
  const Index single = Index{1} << config.lattice.num_sites();
  const Index boson = config.photon ? config.photon->boson_dim() : 1;
  VectorXr diag(config.total_dim());
  for (Index s = 0; s < diag.size(); ++s) {
    const Index electron = s / boson;
    diag(s) = (occupied(static_cast<std::uint64_t>(electron / single), x) ? 1.0 : 0.0) +
              dn_sign * (occupied(static_cast<std::uint64_t>(electron % single), x) ? 1.0 : 0.0) -
              offset;
  }
  return diag;
}

OperatorMatrix density_fluctuation(const ModelConfig& config, Index x) {
  return {occupation_diagonal(config, x, +1, 1.0).cast<Complex>().asDiagonal(), config.space()};
}

OperatorMatrix spin_imbalance(const ModelConfig& config, Index x) {
  return {occupation_diagonal(config, x, -1, 0.0).cast<Complex>().asDiagonal(), config.space()};
}

OperatorMatrix site_density(const ModelConfig& config, Index x) {
  return {occupation_diagonal(config, x, +1, 0.0).cast<Complex>().asDiagonal(), config.space()};
}

OperatorMatrix model_hole_particle_unitary(const ModelConfig& config) {
  config.validate();
  OperatorMatrix u = hole_particle_unitary(config.basis(), config.lattice);
  if (!config.photon) return u;
  return tensor(u, OperatorMatrix::identity(config.photon->space()));
}

}  // namespace rphl

#pragma once

#include "rphl/hamiltonian.hpp"
#include "rphl/lattice.hpp"
#include "rphl/photon.hpp"
#include "rphl/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>
#include <vector>

namespace rphl::testing {

inline ModelConfig hubbard_model(int d, int ell, double t, double u0, double u1 = 0.0,
                                 double beta = 1.0) {
  return {t, 0.0, beta, TorusLattice(d, ell), CouplingProfile::onsite_nn(d, u0, u1), std::nullopt};
}

inline PhotonSector single_mode_sector(ModeLabel label = {{0, 1, 0}, 1}, int n_max = 4,
                                       double kappa = 4.0) {
  PhotonConfig pc;
  pc.L = 2;
  pc.kappa = kappa;
  pc.m0 = 1.0;
  pc.n_max = n_max;
  pc.modes = {label};
  return build_sector(pc);
}

/// d = 1, ell = 2 photon-coupled model with the on-site + NN profile.
inline ModelConfig photon_model(double e, double beta, std::vector<ModeLabel> modes = {{{0, 1, 0}, 1}},
                                int n_max = 4, double kappa = 4.0, double u0 = 2.0,
                                double u1 = 1.0) {
  PhotonConfig pc;
  pc.L = 2;
  pc.kappa = kappa;
  pc.m0 = 1.0;
  pc.n_max = n_max;
  pc.modes = std::move(modes);
  return {1.0, e, beta, TorusLattice(1, 2), CouplingProfile::onsite_nn(1, u0, u1), build_sector(pc)};
}

inline VectorXr eigenvalues(const MatrixXc& h) {
  const Eigen::SelfAdjointEigenSolver<MatrixXc> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline MatrixXc random_hermitian(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  MatrixXc a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

inline MatrixXc random_matrix(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXc a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

/// Many-body spectrum of free fermions: every subset sum of the single-particle levels.
inline std::vector<double> subset_sums(const std::vector<double>& levels) {
  std::vector<double> out;
  const std::size_t n = levels.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) e += levels[i];
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rphl::testing

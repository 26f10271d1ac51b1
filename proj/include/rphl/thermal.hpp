#pragma once

#include "rphl/fock.hpp"
#include "rphl/hamiltonian.hpp"
#include "rphl/lattice.hpp"
#include "rphl/types.hpp"

#include <vector>

namespace rphl {

/// Spectral decomposition of a Hamiltonian at inverse temperature beta. Boltzmann weights
/// are taken relative to `ground_shift` (the smallest eigenvalue), so Z ≥ 1.
struct ThermalState {
  double beta;
  VectorXr eigenvalues;
  MatrixXc eigenvectors;
  double ground_shift;
  VectorXr weights;  // e^{-β(E - ground_shift)}
  double Z;
  Space space;

  Index dim() const { return eigenvalues.size(); }
};

/// Full diagonalization. Rejects non-Hermitian input and checks the reconstruction
/// max|H - QΛQ†| ≤ 1e-10·max|H|.
ThermalState diagonalize(const OperatorMatrix& hamiltonian, double beta);

/// Z⁻¹ Tr[A e^{-βH}].
Complex thermal_average(const ThermalState& state, const OperatorMatrix& a);

struct DuhamelValue {
  Complex value;
  /// Off-diagonal (m ≠ n) pairs evaluated with the equal-energy weight.
  Index degenerate_pairs;
};

/// ∫₀¹ ds e^{-s·a} e^{-(1-s)·b} for a, b ≥ 0, accurate for every gap.
double duhamel_weight(double a, double b);

/// (A, B) = Z⁻¹ ∫₀¹ ds Tr[e^{-sβH} A e^{-(1-s)βH} B] as a spectral double sum. Pairs with
/// |E_m - E_n| ≤ threshold·(E_max - E_min) use the equal-energy weight e^{-β(E_m+E_n)/2}.
DuhamelValue duhamel(const ThermalState& state, const OperatorMatrix& a, const OperatorMatrix& b,
                     double threshold = tol::kDegeneracy);

/// δñ_p = |Λ|^{-1/2} Σ_x e^{-ix·p}(n_x - 1) on the model space.
OperatorMatrix charge_operator(const ModelConfig& config, const Momentum& p);

/// β (δñ_{-p}, δñ_p).
double susceptibility(const ThermalState& state, const ModelConfig& config, const Momentum& p,
                      double threshold = tol::kDegeneracy);

struct BoundRecord {
  Momentum p;
  double chi;
  double u_hat;
  double product;  // chi · u_hat
  bool skipped;    // u_hat ≤ tol::kConditionA2
  bool pass;
};

/// χ(p)·Û_Λ(p) ≤ 1 + tol::kBound at every grid momentum with Û_Λ(p) > 0.
std::vector<BoundRecord> verify_kubo_kishi(const ThermalState& state, const ModelConfig& config);

/// Z_β(h)/Z_β(0) for the deformed Hamiltonian Ĥ(h). Both spectra share one energy shift,
/// so h = 0 returns exactly 1.
class DominationScan {
 public:
  explicit DominationScan(const ModelConfig& config);

  double ratio(const VectorXr& h) const;
  const VectorXr& reference_spectrum() const { return reference_; }

 private:
  ModelConfig config_;
  VectorXr reference_;
};

double gaussian_domination_ratio(const ModelConfig& config, const VectorXr& h);

struct CorollaryResult {
  double lhs;
  double rhs;
  bool pass;
};

/// Duhamel quadratic form (A†, A) with A = Σ_{x,y} U(x-y) O_x h_y, where O_x is q_x in
/// a Gibbs state of Ĥ (`imbalance = true`) or n_x - 1 in a Gibbs state of H.
double coupled_quadratic_form(const ThermalState& state, const ModelConfig& config,
                              const VectorXc& h, bool imbalance);

/// lhs = coupled_quadratic_form in the Ĥ state, rhs = β⁻¹ Σ h_x* U(x-y) h_y;
/// pass iff lhs ≤ rhs + tol::kCorollary·max(1, rhs).
CorollaryResult verify_corollary(const ThermalState& transformed_state, const ModelConfig& config,
                                 const VectorXc& h);

}  // namespace rphl

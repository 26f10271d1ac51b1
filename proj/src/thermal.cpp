#include "rphl/thermal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace rphl {

ThermalState diagonalize(const OperatorMatrix& hamiltonian, double beta) {
  if (!(beta > 0.0)) throw PreconditionError("beta must be positive");
  const MatrixXc& h = hamiltonian.matrix();
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_residual(h) > tol::kHermitian * scale) {
    throw PreconditionError("diagonalize expects a Hermitian matrix");
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXc> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalCheckError("eigensolver did not converge");

  ThermalState state{beta,
                     solver.eigenvalues(),
                     solver.eigenvectors(),
                     solver.eigenvalues().minCoeff(),
                     VectorXr(),
                     0.0,
                     hamiltonian.space()};
  const MatrixXc rebuilt = state.eigenvectors * state.eigenvalues.cast<Complex>().asDiagonal() *
                           state.eigenvectors.adjoint();
  if (max_abs_diff(rebuilt, h) > tol::kReconstruction * scale) {
    throw NumericalCheckError("spectral reconstruction residual above tolerance");
  }
  state.weights = (-beta * (state.eigenvalues.array() - state.ground_shift)).exp().matrix();
  state.Z = state.weights.sum();
  return state;
}

namespace {

void require_matching(const ThermalState& state, const OperatorMatrix& a) {
  if (!(a.space() == state.space)) {
    throw PreconditionError("operator does not act on the thermal state's space");
  }
}

bool is_diagonal(const MatrixXc& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

/// Q† A Q, with one product instead of two for diagonal A.
MatrixXc rotate(const ThermalState& state, const OperatorMatrix& a) {
  const MatrixXc& q = state.eigenvectors;
  if (is_diagonal(a.matrix())) {
    return q.adjoint() * (a.matrix().diagonal().asDiagonal() * q);
  }
  return q.adjoint() * a.matrix() * q;
}

}  // namespace

Complex thermal_average(const ThermalState& state, const OperatorMatrix& a) {
  require_matching(state, a);
  const MatrixXc aq = a.matrix() * state.eigenvectors;
  Complex sum = 0.0;
  for (Index m = 0; m < state.dim(); ++m) {
    sum += state.weights(m) * state.eigenvectors.col(m).dot(aq.col(m));
  }
  return sum / state.Z;
}

double duhamel_weight(double a, double b) {
  const double lo = std::min(a, b);
  const double gap = std::abs(a - b);
  if (gap == 0.0) return std::exp(-lo);
  return std::exp(-lo) * -std::expm1(-gap) / gap;
}

DuhamelValue duhamel(const ThermalState& state, const OperatorMatrix& a, const OperatorMatrix& b,
                     double threshold) {
  require_matching(state, a);
  require_matching(state, b);
  const MatrixXc ar = rotate(state, a);
  const MatrixXc br = rotate(state, b);

  const double spread = state.eigenvalues.maxCoeff() - state.eigenvalues.minCoeff();
  const double cutoff = threshold * (spread > 0.0 ? spread : 1.0);
  const VectorXr scaled = state.beta * (state.eigenvalues.array() - state.ground_shift).matrix();

  Complex sum = 0.0;
  Index degenerate = 0;
  for (Index m = 0; m < state.dim(); ++m) {
    for (Index n = 0; n < state.dim(); ++n) {
      const Complex product = ar(m, n) * br(n, m);
      double w;
      if (std::abs(state.eigenvalues(m) - state.eigenvalues(n)) <= cutoff) {
        w = std::exp(-0.5 * (scaled(m) + scaled(n)));
        if (m != n) ++degenerate;
      } else {
        w = duhamel_weight(scaled(m), scaled(n));
      }
      sum += product * w;
    }
  }
  return {sum / state.Z, degenerate};
}

OperatorMatrix charge_operator(const ModelConfig& config, const Momentum& p) {
  const TorusLattice& lat = config.lattice;
  if (p.p.size() != lat.dimension() || static_cast<int>(p.label.size()) != lat.dimension()) {
    throw PreconditionError("momentum dimension does not match the lattice");
  }
  const MomentumGrid grid(lat);
  if (max_abs_diff(grid.at(p.label).p, p.p) > 1e-12 || lat.wrap(p.label) != p.label) {
    throw PreconditionError("momentum is not on the lattice's dual grid");
  }
  VectorXc diag = VectorXc::Zero(config.total_dim());
  for (Index x = 0; x < lat.num_sites(); ++x) {
    double phase = 0.0;
    for (int k = 0; k < lat.dimension(); ++k) phase += lat.site(x)[static_cast<std::size_t>(k)] * p.p(k);
    diag += std::polar(1.0, -phase) * occupation_diagonal(config, x, +1, 1.0).cast<Complex>();
  }
  diag /= std::sqrt(static_cast<double>(lat.num_sites()));
  return {diag.asDiagonal(), config.space()};
}

double susceptibility(const ThermalState& state, const ModelConfig& config, const Momentum& p,
                      double threshold) {
  const OperatorMatrix rho = charge_operator(config, p);
  const DuhamelValue v = duhamel(state, rho.adjoint(), rho, threshold);
  return state.beta * v.value.real();
}

std::vector<BoundRecord> verify_kubo_kishi(const ThermalState& state, const ModelConfig& config) {
  const MomentumGrid grid(config.lattice);
  std::vector<BoundRecord> records;
  for (const auto& q : grid.points()) {
    const double u_hat = coupling_fourier(config.coupling, config.lattice, q);
    const double chi = susceptibility(state, config, q);
    const bool skipped = u_hat <= tol::kConditionA2;
    const double product = chi * u_hat;
    records.push_back({q, chi, u_hat, product, skipped, skipped || product <= 1.0 + tol::kBound});
  }
  return records;
}

namespace {

VectorXr spectrum(const OperatorMatrix& h) {
  const Eigen::SelfAdjointEigenSolver<MatrixXc> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalCheckError("eigensolver did not converge");
  return solver.eigenvalues();
}

}  // namespace

DominationScan::DominationScan(const ModelConfig& config)
    : config_(config), reference_(spectrum(build_transformed(config))) {}

double DominationScan::ratio(const VectorXr& h) const {
  const VectorXr deformed = spectrum(build_deformed(config_, h));
  const double shift = std::min(deformed.minCoeff(), reference_.minCoeff());
  const double beta = config_.beta;
  const double numerator = (-beta * (deformed.array() - shift)).exp().sum();
  const double denominator = (-beta * (reference_.array() - shift)).exp().sum();
  return numerator / denominator;
}

double gaussian_domination_ratio(const ModelConfig& config, const VectorXr& h) {
  return DominationScan(config).ratio(h);
}

double coupled_quadratic_form(const ThermalState& state, const ModelConfig& config,
                              const VectorXc& h, bool imbalance) {
  const Index n = config.lattice.num_sites();
  if (h.size() != n) throw PreconditionError("source field must have one entry per site");
  const VectorXc weights = config.coupling.matrix(config.lattice).cast<Complex>() * h;
  VectorXc diag = VectorXc::Zero(config.total_dim());
  for (Index x = 0; x < n; ++x) {
    const VectorXr site = imbalance ? occupation_diagonal(config, x, -1, 0.0)
                                    : occupation_diagonal(config, x, +1, 1.0);
    diag += weights(x) * site.cast<Complex>();
  }
  const OperatorMatrix a(diag.asDiagonal(), config.space());
  return duhamel(state, a.adjoint(), a).value.real();
}

CorollaryResult verify_corollary(const ThermalState& transformed_state, const ModelConfig& config,
                                 const VectorXc& h) {
  if (!check_conditions(config.coupling, config.lattice).a2_holds) {
    throw PreconditionError("coupling violates condition (A.2): Fourier transform is negative");
  }
  const MatrixXc u = config.coupling.matrix(config.lattice).cast<Complex>();
  const double lhs = coupled_quadratic_form(transformed_state, config, h, true);
  const double rhs = h.dot(u * h).real() / transformed_state.beta;
  return {lhs, rhs, lhs <= rhs + tol::kCorollary * std::max(1.0, rhs)};
}

}  // namespace rphl

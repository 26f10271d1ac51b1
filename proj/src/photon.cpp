#include "rphl/photon.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace rphl {

Vector3r polarization(const Vector3r& k, int lambda) {
  if (lambda != 1 && lambda != 2) throw PreconditionError("polarization index must be 1 or 2");
  const double perp = std::hypot(k(0), k(1));
  if (perp == 0.0) return Vector3r::Zero();
  const Vector3r e1(k(1) / perp, -k(0) / perp, 0.0);
  if (lambda == 1) return e1;
  return (k / k.norm()).cross(e1);
}

double dispersion(const Vector3r& k, double m0) {
  const double norm = k.norm();
  return norm == 0.0 ? m0 : norm;
}

PhotonMode make_mode(const ModeLabel& label, int L, double m0) {
  const double step = 2.0 * std::numbers::pi / L;
  const Vector3r k(step * label.n[0], step * label.n[1], step * label.n[2]);
  return {label, k, dispersion(k, m0), polarization(k, label.lambda)};
}

PhotonSector::PhotonSector(int L, double kappa, double m0, int n_max,
                           std::vector<PhotonMode> modes)
    : L_(L), kappa_(kappa), m0_(m0), n_max_(n_max), modes_(std::move(modes)), boson_dim_(1) {
  if (L < 2 || L % 2 != 0) throw PreconditionError("photon box side L must be even and >= 2");
  if (!(kappa > 0.0)) throw PreconditionError("photon cutoff kappa must be positive");
  if (!(m0 > 0.0 && m0 < 2.0 * std::numbers::pi / L)) {
    throw PreconditionError("infrared mass m0 must lie in (0, 2π/L)");
  }
  if (n_max < 1) throw PreconditionError("occupation cutoff n_max must be >= 1");
  for (const auto& m : modes_) {
    if (m.k.norm() > kappa * (1.0 + 1e-12)) {
      throw PreconditionError("photon mode lies outside the cutoff ball");
    }
  }
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (boson_dim_ > kHardDimensionLimit) break;
    boson_dim_ *= n_max + 1;
  }
}

std::vector<PhotonMode> enumerate_modes(int L, double kappa, double m0, bool include_zero) {
  const double step = 2.0 * std::numbers::pi / L;
  const int reach = static_cast<int>(std::floor(kappa / step * (1.0 + 1e-12)));
  std::vector<PhotonMode> modes;
  for (int n1 = -reach; n1 <= reach; ++n1) {
    for (int n2 = -reach; n2 <= reach; ++n2) {
      for (int n3 = -reach; n3 <= reach; ++n3) {
        const bool zero = n1 == 0 && n2 == 0 && n3 == 0;
        if (zero && !include_zero) continue;
        const Vector3r k(step * n1, step * n2, step * n3);
        if (k.norm() > kappa * (1.0 + 1e-12)) continue;
        for (int lambda : {1, 2}) modes.push_back(make_mode({{n1, n2, n3}, lambda}, L, m0));
      }
    }
  }
  return modes;
}

PhotonSector build_sector(const PhotonConfig& config, Index electron_dim) {
  std::vector<PhotonMode> modes;
  if (config.modes.empty()) {
    modes = enumerate_modes(config.L, config.kappa, config.m0, config.include_zero_mode);
  } else {
    for (const auto& label : config.modes) modes.push_back(make_mode(label, config.L, config.m0));
  }
  PhotonSector sector(config.L, config.kappa, config.m0, config.n_max, std::move(modes));
  check_dimension(sector.boson_dim(), "photon sector");
  check_dimension(sector.boson_dim() * electron_dim, "electron⊗photon space");
  return sector;
}

BosonOps::BosonOps(const PhotonSector& sector) {
  check_dimension(sector.boson_dim(), "boson operators");
  const Index levels = sector.n_max() + 1;
  const MatrixXc single = ladder_annihilator<Complex>(sector.n_max());
  for (Index j = 0; j < sector.num_modes(); ++j) {
    MatrixXc op = MatrixXc::Identity(1, 1);
    for (Index m = 0; m < sector.num_modes(); ++m) {
      op = m == j ? kron(op, single) : kron(op, MatrixXc::Identity(levels, levels));
    }
    a_.emplace_back(std::move(op), sector.space());
  }
}

OperatorMatrix free_field_energy(const PhotonSector& sector) {
  check_dimension(sector.boson_dim(), "free field energy");
  // Diagonal in the occupation basis: read each mode's occupation off the mixed-radix index.
  const Index levels = sector.n_max() + 1;
  VectorXc diag = VectorXc::Zero(sector.boson_dim());
  for (Index s = 0; s < sector.boson_dim(); ++s) {
    Index rest = s;
    double energy = 0.0;
    for (Index j = sector.num_modes() - 1; j >= 0; --j) {
      energy += sector.modes()[static_cast<std::size_t>(j)].omega * static_cast<double>(rest % levels);
      rest /= levels;
    }
    diag(s) = energy;
  }
  return {diag.asDiagonal(), sector.space()};
}

PlanckResult planck_partition(const PhotonSector& sector, double beta) {
  if (!(beta > 0.0)) throw PreconditionError("beta must be positive");
  const OperatorMatrix hf = free_field_energy(sector);
  double truncated = 0.0;
  for (Index s = 0; s < hf.dim(); ++s) truncated += std::exp(-beta * hf.matrix()(s, s).real());

  double closed = 1.0;
  double bound = 0.0;
  for (const auto& m : sector.modes()) {
    const double q = std::exp(-beta * m.omega);
    closed /= -std::expm1(-beta * m.omega);
    bound += std::pow(q, sector.n_max() + 1) / -std::expm1(-beta * m.omega);
  }
  return {truncated, closed, (closed - truncated) / closed, bound};
}

EuclideanResult euclidean_two_point(double omega, int n_max, double beta, double t, double s) {
  if (!(beta > 0.0)) throw PreconditionError("beta must be positive");
  if (t < 0.0 || s < 0.0 || t > beta || s > beta) {
    throw PreconditionError("imaginary times must lie in [0, beta]");
  }
  const double tau = std::abs(t - s);
  const MatrixXr a = ladder_annihilator<double>(n_max);
  const MatrixXr phi = (a + a.transpose()) / std::numbers::sqrt2;

  VectorXr energy(n_max + 1);
  for (int n = 0; n <= n_max; ++n) energy(n) = omega * n;
  const VectorXr left = (-(beta - tau) * energy).array().exp();
  const VectorXr right = (-tau * energy).array().exp();
  const double z = (-beta * energy).array().exp().sum();
  const double trace = (left.asDiagonal() * phi * right.asDiagonal() * phi).trace();

  const double covariance = 0.5 * (std::exp(-(beta - tau) * omega) + std::exp(-tau * omega)) /
                            -std::expm1(-beta * omega);
  return {trace / z, covariance, std::abs(trace / z - covariance)};
}

EuclideanResult euclidean_two_point(const PhotonSector& single_mode, double beta, double t,
                                    double s) {
  if (single_mode.num_modes() != 1) {
    throw PreconditionError("Euclidean two-point check expects a single-mode sector");
  }
  return euclidean_two_point(single_mode.modes().front().omega, single_mode.n_max(), beta, t, s);
}

Vector3r embed(const TorusLattice& lat, Index site) {
  Vector3r r = Vector3r::Zero();
  const Coord& x = lat.site(site);
  for (std::size_t k = 0; k < x.size(); ++k) r(static_cast<Index>(k)) = x[k];
  return r;
}

namespace {

// (e^{iu} - 1)/(iu) = e^{iu/2} sin(u/2)/(u/2), finite at u = 0.
Complex path_factor(double u) {
  const double half = 0.5 * u;
  const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
  return std::polar(sinc, half);
}

}  // namespace

Complex bond_coupling(const PhotonSector& sector, const TorusLattice& lat, const Bond& bond,
                      const PhotonMode& mode) {
  const Vector3r start = embed(lat, bond.from);
  const Vector3r step = Vector3r::Unit(bond.axis);
  const double projection = mode.polarization.dot(step);
  if (projection == 0.0) return 0.0;
  const double norm = 1.0 / std::sqrt(2.0 * mode.omega * sector.volume());
  return norm * projection * std::polar(1.0, mode.k.dot(start)) * path_factor(mode.k.dot(step));
}

OperatorMatrix bond_phase_generator(const PhotonSector& sector, const TorusLattice& lat,
                                    Index x, Index y) {
  const Bond* found = nullptr;
  double orientation = 1.0;
  for (const auto& b : lat.bonds()) {
    if (b.from == x && b.to == y) {
      found = &b;
      break;
    }
    if (b.from == y && b.to == x) {
      found = &b;
      orientation = -1.0;
      break;
    }
  }
  if (found == nullptr) throw PreconditionError("bond phase requested for non-neighbor sites");

  const BosonOps ops(sector);
  OperatorMatrix phi = OperatorMatrix::zero(sector.space());
  for (Index j = 0; j < sector.num_modes(); ++j) {
    const Complex g = bond_coupling(sector, lat, *found, sector.modes()[static_cast<std::size_t>(j)]);
    if (g == Complex(0.0)) continue;
    phi += g * ops.a(j);
    phi += std::conj(g) * ops.a_dagger(j);
  }
  phi *= orientation;
  return phi;
}

OperatorMatrix peierls_phase(const OperatorMatrix& generator, double charge, int sign) {
  if (sign != 1 && sign != -1) throw PreconditionError("Peierls sign must be +1 or -1");
  if (hermiticity_residual(generator.matrix()) > tol::kHermitian) {
    throw PreconditionError("Peierls generator must be Hermitian");
  }
  if (charge == 0.0) return OperatorMatrix::identity(generator.space());
  const Eigen::SelfAdjointEigenSolver<MatrixXc> solver(generator.matrix());
  if (solver.info() != Eigen::Success) throw NumericalCheckError("eigensolver failed on Φ");
  const VectorXc phases =
      (Complex(0.0, sign * charge) * solver.eigenvalues().cast<Complex>()).array().exp();
  return {solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint(),
          generator.space()};
}

}  // namespace rphl

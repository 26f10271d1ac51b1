#include "rphl/fock.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <utility>

namespace rphl {

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Spinless: return "spinless";
    case SpaceKind::Spinful: return "spinful";
    case SpaceKind::Boson: return "boson";
    case SpaceKind::SpinfulBoson: return "spinful⊗boson";
  }
  return "unknown";
}

OperatorMatrix::OperatorMatrix(MatrixXc entries, Space space)
    : entries_(std::move(entries)), space_(space) {
  if (entries_.rows() != space_.dim || entries_.cols() != space_.dim) {
    throw PreconditionError("operator matrix shape does not match its space tag");
  }
}

OperatorMatrix OperatorMatrix::identity(Space space) {
  return {MatrixXc::Identity(space.dim, space.dim), space};
}

OperatorMatrix OperatorMatrix::zero(Space space) {
  return {MatrixXc::Zero(space.dim, space.dim), space};
}

OperatorMatrix OperatorMatrix::adjoint() const { return {entries_.adjoint(), space_}; }

void OperatorMatrix::require_same_space(const OperatorMatrix& other) const {
  if (!(space_ == other.space_)) {
    throw PreconditionError(std::string("operator space mismatch: ") +
                            std::string(to_string(space_.kind)) + " vs " +
                            std::string(to_string(other.space_.kind)));
  }
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
  require_same_space(other);
  entries_ += other.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
  require_same_space(other);
  entries_ -= other.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex s) {
  entries_ *= s;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  a.require_same_space(b);
  return {a.entries_ * b.entries_, a.space_};
}

OperatorMatrix tensor(const OperatorMatrix& electron, const OperatorMatrix& boson) {
  if (electron.space().kind != SpaceKind::Spinful || boson.space().kind != SpaceKind::Boson) {
    throw PreconditionError("tensor expects a spinful electron operator and a boson operator");
  }
  const Index dim = electron.dim() * boson.dim();
  check_dimension(dim, "spinful⊗boson operator");
  return {kron(electron.matrix(), boson.matrix()), {SpaceKind::SpinfulBoson, dim}};
}

FermionBasis::FermionBasis(Index sites) : n_sites(sites), dim(Index{1} << sites) {
  if (sites < 1 || sites > 30) throw PreconditionError("fermion basis needs 1..30 sites");
}

OperatorMatrix annihilator(const FermionBasis& basis, Index x) {
  check_dimension(basis.dim, "spinless fermion operator");
  return {annihilator_matrix<Complex>(basis, x), basis.spinless()};
}

SpinfulOps::SpinfulOps(const FermionBasis& basis) : basis_(basis) {
  check_dimension(basis.dim * basis.dim, "spinful fermion operators");
  const MatrixXc parity = parity_matrix<Complex>(basis);
  const MatrixXc one = MatrixXc::Identity(basis.dim, basis.dim);
  for (Index x = 0; x < basis.n_sites; ++x) {
    const MatrixXc c = annihilator_matrix<Complex>(basis, x);
    up_.emplace_back(kron(c, one), space());
    dn_.emplace_back(kron(parity, c), space());
  }
}

OperatorMatrix SpinfulOps::n_up(Index x) const { return c_up(x).adjoint() * c_up(x); }
OperatorMatrix SpinfulOps::n_dn(Index x) const { return c_dn(x).adjoint() * c_dn(x); }
OperatorMatrix SpinfulOps::n(Index x) const { return n_up(x) + n_dn(x); }

OperatorMatrix SpinfulOps::up_slot(const MatrixXc& op) const {
  return {kron(op, MatrixXc::Identity(basis_.dim, basis_.dim)), space()};
}

OperatorMatrix SpinfulOps::dn_slot(const MatrixXc& op) const {
  return {kron(MatrixXc::Identity(basis_.dim, basis_.dim), op), space()};
}

SpinfulOps spinful_ops(const FermionBasis& basis) { return SpinfulOps(basis); }

namespace {

using SparseC = Eigen::SparseMatrix<Complex>;

// Fermion operators have one nonzero per column, so sparse products give the same entries
// as dense ones at a fraction of the cost.
template <typename Get>
double car_residual_impl(Index count, Index dim, Get get) {
  std::vector<SparseC> cs;
  std::vector<SparseC> cds;
  for (Index a = 0; a < count; ++a) {
    cs.push_back(get(a).sparseView());
    cds.push_back(cs.back().adjoint());
  }
  const MatrixXc one = MatrixXc::Identity(dim, dim);
  double worst = 0.0;
  for (Index a = 0; a < count; ++a) {
    for (Index b = 0; b < count; ++b) {
      const auto ua = static_cast<std::size_t>(a);
      const auto ub = static_cast<std::size_t>(b);
      const MatrixXc mixed = SparseC(cs[ua] * cds[ub] + cds[ub] * cs[ua]);
      const MatrixXc same = SparseC(cs[ua] * cs[ub] + cs[ub] * cs[ua]);
      const MatrixXc expected = a == b ? one : MatrixXc::Zero(dim, dim);
      worst = std::max(worst, max_abs_diff(mixed, expected));
      worst = std::max(worst, max_abs(same));
    }
  }
  return worst;
}

}  // namespace

double car_residual(const SpinfulOps& ops) {
  const Index n = ops.basis().n_sites;
  return car_residual_impl(2 * n, ops.space().dim, [&](Index a) -> const MatrixXc& {
    return a < n ? ops.c_up(a).matrix() : ops.c_dn(a - n).matrix();
  });
}

double car_residual(const FermionBasis& basis) {
  std::vector<MatrixXc> cs;
  for (Index x = 0; x < basis.n_sites; ++x) cs.push_back(annihilator_matrix<Complex>(basis, x));
  return car_residual_impl(basis.n_sites, basis.dim,
                           [&](Index a) -> const MatrixXc& { return cs[static_cast<std::size_t>(a)]; });
}

double hole_particle_residual(const OperatorMatrix& unitary, const FermionBasis& basis,
                              const TorusLattice& lat) {
  if (lat.num_sites() != basis.n_sites) {
    throw PreconditionError("fermion basis and lattice disagree on the number of sites");
  }
  const MatrixXc& u = unitary.matrix();
  const SparseC us = u.sparseView();
  const SparseC ud = us.adjoint();
  const MatrixXc one = MatrixXc::Identity(basis.dim, basis.dim);
  double worst = unitarity_residual(u);
  for (Index x = 0; x < basis.n_sites; ++x) {
    const MatrixXc c = annihilator_matrix<Complex>(basis, x);
    const SparseC c_up = kron(c, one).sparseView();
    const SparseC c_up_dag = c_up.adjoint();
    const SparseC c_dn_slot = kron(one, c).sparseView();
    const double g = lat.parity(x);
    worst = std::max(worst, max_abs_diff(MatrixXc(SparseC(us * c_up * ud)), g * MatrixXc(c_up_dag)));
    worst = std::max(worst, max_abs_diff(MatrixXc(SparseC(us * c_up_dag * ud)), g * MatrixXc(c_up)));
    worst = std::max(worst, max_abs_diff(MatrixXc(SparseC(us * c_dn_slot * ud)), MatrixXc(c_dn_slot)));
  }
  return worst;
}

OperatorMatrix hole_particle_unitary(const FermionBasis& basis, const TorusLattice& lat) {
  if (lat.num_sites() != basis.n_sites) {
    throw PreconditionError("fermion basis and lattice disagree on the number of sites");
  }
  check_dimension(basis.dim * basis.dim, "hole-particle unitary");

  // Conjugating c_y by the factor of another site flips its sign; n - 1 such flips plus
  // the parity operator for even n leave exactly γ(y) c_y†.
  MatrixXc up = basis.n_sites % 2 == 0 ? parity_matrix<Complex>(basis)
                                       : MatrixXc::Identity(basis.dim, basis.dim);
  for (Index x = 0; x < basis.n_sites; ++x) {
    const MatrixXc c = annihilator_matrix<Complex>(basis, x);
    up = up * (c + static_cast<double>(lat.parity(x)) * c.adjoint());
  }
  OperatorMatrix unitary(kron(up, MatrixXc::Identity(basis.dim, basis.dim)), basis.spinful());

  const double residual = hole_particle_residual(unitary, basis, lat);
  if (residual > tol::kHoleParticle) {
    throw NumericalCheckError("hole-particle relations violated, residual " +
                              std::to_string(residual));
  }
  return unitary;
}

}  // namespace rphl

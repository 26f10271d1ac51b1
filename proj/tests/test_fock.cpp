#include "doctest.h"

#include "rphl/fock.hpp"
#include "support.hpp"

#include <cstdlib>

using namespace rphl;
using rphl::testing::eigenvalues;

TEST_CASE("single-mode annihilator") {
  const FermionBasis basis(1);
  const MatrixXc c = annihilator(basis, 0).matrix();
  MatrixXc expected(2, 2);
  expected << 0, 1, 0, 0;
  CHECK(max_abs_diff(c, expected) == 0.0);
}

TEST_CASE("Jordan-Wigner signs follow site order") {
  const FermionBasis basis(3);
  CHECK(fermion_sign(0b111, 2) == 1);
  CHECK(fermion_sign(0b011, 1) == -1);
  CHECK(fermion_sign(0b101, 2) == -1);
  const MatrixXr c2 = annihilator_matrix<double>(basis, 2);
  const MatrixXr c1 = annihilator_matrix<double>(basis, 1);
  CHECK(c2(0b011, 0b111) == 1.0);
  CHECK(c1(0b001, 0b011) == -1.0);
  CHECK(c1(0b000, 0b010) == 1.0);
  CHECK(c1.col(0b001).cwiseAbs().sum() == 0.0);
}

TEST_CASE("annihilator index out of range") {
  const FermionBasis basis(2);
  CHECK_THROWS_AS(annihilator(basis, 2), PreconditionError);
  CHECK_THROWS_AS(annihilator(basis, -1), PreconditionError);
}

TEST_CASE("canonical anticommutation relations") {
  for (Index n = 1; n <= 4; ++n) {
    CAPTURE(n);
    CHECK(car_residual(FermionBasis(n)) <= tol::kCar);
    CHECK(car_residual(spinful_ops(FermionBasis(n))) <= tol::kCar);
  }
}

TEST_CASE("mixed-spin anticommutators vanish") {
  const FermionBasis basis(2);
  const SpinfulOps ops(basis);
  for (Index x = 0; x < 2; ++x) {
    for (Index y = 0; y < 2; ++y) {
      const MatrixXc& u = ops.c_up(x).matrix();
      const MatrixXc& d = ops.c_dn(y).matrix();
      CHECK(max_abs(anticommutator(u, d)) == 0.0);
      CHECK(max_abs(anticommutator(u, d.adjoint())) == 0.0);
    }
  }
}

TEST_CASE("occupation spectra") {
  const FermionBasis basis(3);
  const SpinfulOps ops(basis);
  for (Index x = 0; x < 3; ++x) {
    const VectorXr ev = eigenvalues(ops.n(x).matrix());
    for (Index i = 0; i < ev.size(); ++i) {
      const double r = std::round(ev(i));
      CHECK(std::abs(ev(i) - r) < 1e-14);
      CHECK(r >= 0.0);
      CHECK(r <= 2.0);
    }
  }
  OperatorMatrix total = OperatorMatrix::zero(basis.spinful());
  for (Index x = 0; x < 3; ++x) total += ops.n(x);
  const VectorXr ev = eigenvalues(total.matrix());
  std::vector<int> seen(7, 0);
  for (Index i = 0; i < ev.size(); ++i) {
    const double r = std::round(ev(i));
    CHECK(std::abs(ev(i) - r) < 1e-13);
    seen[static_cast<std::size_t>(r)]++;
  }
  // Binomial multiplicities C(6, k).
  CHECK(seen == std::vector<int>{1, 6, 15, 20, 15, 6, 1});
}

TEST_CASE("operator space tags are enforced") {
  const FermionBasis basis(1);
  const OperatorMatrix a = OperatorMatrix::identity(basis.spinless());
  const OperatorMatrix b = OperatorMatrix::identity({SpaceKind::Boson, 2});
  CHECK_THROWS_AS(a + b, PreconditionError);
  CHECK_THROWS_AS(a * b, PreconditionError);
  CHECK_THROWS_AS(OperatorMatrix(MatrixXc::Identity(3, 3), basis.spinless()), PreconditionError);
  CHECK_THROWS_AS(tensor(a, b), PreconditionError);
  const OperatorMatrix s = OperatorMatrix::identity(basis.spinful());
  const OperatorMatrix t = tensor(s, b);
  CHECK(t.space().kind == SpaceKind::SpinfulBoson);
  CHECK(t.dim() == 8);
}

TEST_CASE("hole-particle unitary") {
  for (auto [d, ell] : std::vector<std::pair<int, int>>{{1, 2}, {1, 4}, {2, 2}}) {
    CAPTURE(d);
    CAPTURE(ell);
    const TorusLattice lat(d, ell);
    const FermionBasis basis(lat.num_sites());
    const OperatorMatrix u = hole_particle_unitary(basis, lat);
    CHECK(hole_particle_residual(u, basis, lat) <= tol::kHoleParticle);
    CHECK(unitarity_residual(u.matrix()) <= tol::kUnitary);

    const SpinfulOps ops(basis);
    const MatrixXc one = MatrixXc::Identity(u.dim(), u.dim());
    for (Index x = 0; x < basis.n_sites; ++x) {
      const MatrixXc& um = u.matrix();
      CHECK(max_abs_diff(um * ops.n_up(x).matrix() * um.adjoint(), one - ops.n_up(x).matrix()) <=
            tol::kHoleParticle);
      CHECK(max_abs_diff(um * ops.n_dn(x).matrix() * um.adjoint(), ops.n_dn(x).matrix()) <=
            tol::kHoleParticle);
      // Full spin-down operators commute with U as well, not just the 1⊗c slot.
      CHECK(max_abs_diff(um * ops.c_dn(x).matrix() * um.adjoint(), ops.c_dn(x).matrix()) <=
            tol::kHoleParticle);
    }
  }
}

TEST_CASE("hole-particle residual detects a wrong sign") {
  const TorusLattice lat(1, 2);
  const FermionBasis basis(2);
  const OperatorMatrix u = hole_particle_unitary(basis, lat);
  const MatrixXc flip = kron(parity_matrix<Complex>(basis), MatrixXc::Identity(4, 4));
  // An extra up-slot parity flips the sign of every c_up conjugate.
  const OperatorMatrix wrong(flip * u.matrix(), basis.spinful());
  CHECK(hole_particle_residual(wrong, basis, lat) == doctest::Approx(2.0));
  const TorusLattice other(1, 4);
  CHECK_THROWS_AS(hole_particle_residual(u, basis, other), PreconditionError);
}

TEST_CASE("dimension guard can be lowered but not raised") {
  CHECK(max_dimension() == kHardDimensionLimit);
  setenv("RPHL_MAX_DIM", "16", 1);
  CHECK(max_dimension() == 16);
  CHECK_THROWS_AS(spinful_ops(FermionBasis(3)), ResourceGuardError);
  CHECK_NOTHROW(spinful_ops(FermionBasis(2)));
  setenv("RPHL_MAX_DIM", "1000000", 1);
  CHECK(max_dimension() == kHardDimensionLimit);
  CHECK_THROWS_AS(spinful_ops(FermionBasis(7)), ResourceGuardError);
  unsetenv("RPHL_MAX_DIM");
}
